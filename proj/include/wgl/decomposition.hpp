#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <vector>

#include "errors.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"

namespace wgl {

/// Piece of a parent face lying on the boundary of one sub-simplex.
template <int D>
struct SubFace
{
    std::array<Point<D>, D> points;
    int simplex = -1;
    double measure = 0.0;
};

/// Facet shared by two sub-simplices inside the cell. The normal points from
/// simplices[0] into simplices[1].
template <int D>
struct InteriorSubFace
{
    std::array<Point<D>, D> points;
    std::array<int, 2> simplices{-1, -1};
    Point<D> normal = Point<D>::Zero();
    double measure = 0.0;
};

template <int D>
struct SimplicialDecomposition
{
    int cell = -1;
    std::vector<std::array<Point<D>, D + 1>> simplices;
    std::vector<double> measures;
    /// For each local face of the cell, the sub-faces covering it.
    std::vector<std::vector<SubFace<D>>> face_pieces;
    std::vector<InteriorSubFace<D>> interior;

    int size() const { return static_cast<int>(simplices.size()); }
};

namespace detail {

/// Vertex ids of the simplices tiling a face. In 3D non-triangular faces are
/// fanned from the face centroid, encoded as id -(1 + face id).
template <int D>
std::vector<std::array<int, D>> face_piece_ids(const PolytopalMesh<D>& mesh, int f)
{
    const auto& v = mesh.face(f).vertices;
    std::vector<std::array<int, D>> out;
    if constexpr (D == 2) {
        out.push_back({v[0], v[1]});
    }
    else {
        if (v.size() == 3) {
            out.push_back({v[0], v[1], v[2]});
        }
        else {
            const int c = -(1 + f);
            for (std::size_t i = 0; i < v.size(); ++i)
                out.push_back({c, v[i], v[(i + 1) % v.size()]});
        }
    }
    return out;
}

template <int D>
Point<D> piece_point(const PolytopalMesh<D>& mesh, int id)
{
    return id >= 0 ? mesh.vertices()[id] : mesh.face(-id - 1).centroid;
}

template <int D>
Point<D> facet_normal(const std::array<Point<D>, D>& p)
{
    if constexpr (D == 2) {
        const Point<2> t = p[1] - p[0];
        return Point<2>(t(1), -t(0)).normalized();
    }
    else {
        return (p[1] - p[0]).cross(p[2] - p[0]).normalized();
    }
}

} // namespace detail

/// Simplices tiling face f, as point arrays.
template <int D>
std::vector<std::array<Point<D>, D>> face_pieces(const PolytopalMesh<D>& mesh, int f)
{
    std::vector<std::array<Point<D>, D>> out;
    for (const auto& ids : detail::face_piece_ids(mesh, f)) {
        std::array<Point<D>, D> p;
        for (int i = 0; i < D; ++i)
            p[i] = detail::piece_point(mesh, ids[i]);
        out.push_back(p);
    }
    return out;
}

/// Cone from the cell centroid over every face piece: a centroid fan in 2D,
/// tetrahedra over the (face-centroid fanned) face triangles in 3D.
template <int D>
SimplicialDecomposition<D> decompose_cell(const PolytopalMesh<D>& mesh, int cell_id)
{
    const auto& cell = mesh.cell(cell_id);
    const Point<D> cc = cell.centroid;
    SimplicialDecomposition<D> dec;
    dec.cell = cell_id;
    dec.face_pieces.resize(cell.num_faces());

    // facet key (sorted piece ids without one entry) -> (simplex, omitted point)
    std::map<std::vector<int>, std::vector<std::pair<int, Point<D>>>> facets;

    for (int lf = 0; lf < cell.num_faces(); ++lf) {
        const int f = cell.faces[lf];
        const Point<D> n_out = cell.outward_normal(lf, mesh.faces());
        for (const auto& ids : detail::face_piece_ids(mesh, f)) {
            std::array<Point<D>, D + 1> simplex;
            simplex[0] = cc;
            std::array<Point<D>, D> piece;
            for (int i = 0; i < D; ++i)
                piece[i] = simplex[i + 1] = detail::piece_point(mesh, ids[i]);
            const double height = (piece[0] - cc).dot(n_out);
            if (!(height > 1e-12 * cell.diameter))
                throw geometry_error("cell centroid is not strictly inside the cell", cell_id);
            const double meas = simplex_measure<D>({simplex.begin(), simplex.end()});
            const int s = dec.size();
            dec.simplices.push_back(simplex);
            dec.measures.push_back(meas);
            dec.face_pieces[lf].push_back(
                {piece, s, simplex_measure<D>({piece.begin(), piece.end()})});

            for (int omit = 0; omit < D; ++omit) {
                std::vector<int> key;
                for (int i = 0; i < D; ++i)
                    if (i != omit)
                        key.push_back(ids[i]);
                std::sort(key.begin(), key.end());
                facets[key].push_back({s, piece[omit]});
            }
        }
    }

    for (const auto& [key, sides] : facets) {
        if (sides.size() != 2)
            throw geometry_error("sub-simplex facet not shared by exactly two simplices", cell_id);
        InteriorSubFace<D> F;
        F.points[0] = cc;
        for (int i = 0; i < D - 1; ++i)
            F.points[i + 1] = detail::piece_point(mesh, key[i]);
        F.simplices = {sides[0].first, sides[1].first};
        F.normal = detail::facet_normal<D>(F.points);
        if (F.normal.dot(sides[0].second - cc) > 0)
            F.normal = -F.normal;
        F.measure = simplex_measure<D>({F.points.begin(), F.points.end()});
        dec.interior.push_back(F);
    }
    return dec;
}

/// Composite rule over the sub-simplices of a decomposed cell.
template <int D>
QuadratureRule<D> cell_rule(const SimplicialDecomposition<D>& dec, int degree)
{
    const auto& ref = simplex_rule(D, degree);
    QuadratureRule<D> r;
    for (const auto& s : dec.simplices)
        r.append(map_rule<D>(ref, s));
    return r;
}

template <int D>
QuadratureRule<D> cell_rule(const PolytopalMesh<D>& mesh, int cell_id, int degree)
{
    return cell_rule(decompose_cell(mesh, cell_id), degree);
}

/// Rule on one simplex piece (sub-simplex or sub-face).
template <int D, std::size_t N>
QuadratureRule<D> simplex_piece_rule(const std::array<Point<D>, N>& piece, int degree)
{
    return map_rule<D>(simplex_rule(static_cast<int>(N) - 1, degree), piece);
}

/// Gauss rule on an edge (2D) or composite rule over the face triangles (3D).
template <int D>
QuadratureRule<D> face_rule(const PolytopalMesh<D>& mesh, int f, int degree)
{
    QuadratureRule<D> r;
    for (const auto& piece : face_pieces(mesh, f))
        r.append(simplex_piece_rule<D>(piece, degree));
    return r;
}

} // namespace wgl
