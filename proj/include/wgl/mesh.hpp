#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "polynomial.hpp"

namespace wgl {

/// A (D-1)-dimensional face: an edge in 2D, a planar polygon in 3D.
template <int D>
struct Face
{
    std::vector<int> vertices;     ///< ordered loop (2 entries in 2D)
    std::array<int, 2> cells{-1, -1};
    Point<D> normal = Point<D>::Zero();  ///< fixed unit normal
    Point<D> centroid = Point<D>::Zero();
    double measure = 0.0;
    double diameter = 0.0;

    bool is_boundary() const { return cells[1] < 0; }
};

template <int D>
struct Cell
{
    std::vector<int> faces;
    std::vector<int> orientation;  ///< +1 when the face normal points out of this cell
    std::vector<int> vertices;     ///< sorted, unique
    Point<D> centroid = Point<D>::Zero();
    double measure = 0.0;
    double diameter = 0.0;

    int num_faces() const { return static_cast<int>(faces.size()); }
    Point<D> outward_normal(int local_face, const std::vector<Face<D>>& all) const
    {
        return orientation[local_face] * all[faces[local_face]].normal;
    }
};

/// Conforming mesh of polygons (D = 2) or polyhedra with planar faces (D = 3).
/// Immutable once built; see MeshBuilder.
template <int D>
class PolytopalMesh
{
  public:
    static constexpr int dim = D;

    const std::vector<Point<D>>& vertices() const { return vertices_; }
    const std::vector<Face<D>>& faces() const { return faces_; }
    const std::vector<Cell<D>>& cells() const { return cells_; }
    const Face<D>& face(int i) const { return faces_[i]; }
    const Cell<D>& cell(int i) const { return cells_[i]; }
    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    int num_cells() const { return static_cast<int>(cells_.size()); }

    std::vector<int> boundary_faces() const
    {
        std::vector<int> out;
        for (int f = 0; f < num_faces(); ++f)
            if (faces_[f].is_boundary())
                out.push_back(f);
        return out;
    }

    int num_interior_faces() const
    {
        return num_faces() - static_cast<int>(boundary_faces().size());
    }

    /// Largest cell diameter.
    double h() const
    {
        double h = 0.0;
        for (const auto& c : cells_)
            h = std::max(h, c.diameter);
        return h;
    }

    double total_measure() const
    {
        double s = 0.0;
        for (const auto& c : cells_)
            s += c.measure;
        return s;
    }

    /// Vertices of a face, in loop order, as points.
    std::vector<Point<D>> face_points(int f) const
    {
        std::vector<Point<D>> p;
        for (int v : faces_[f].vertices)
            p.push_back(vertices_[v]);
        return p;
    }

  private:
    template <int>
    friend class MeshBuilder;

    std::vector<Point<D>> vertices_;
    std::vector<Face<D>> faces_;
    std::vector<Cell<D>> cells_;
};

/// Collects vertices and cells (as lists of face vertex loops), merges shared
/// faces, and computes all geometry.
template <int D>
class MeshBuilder
{
  public:
    int add_vertex(const Point<D>& p)
    {
        mesh_.vertices_.push_back(p);
        return static_cast<int>(mesh_.vertices_.size()) - 1;
    }

    /// A cell given by its face loops. In 2D each loop has two entries.
    void add_cell(const std::vector<std::vector<int>>& face_loops)
    {
        Cell<D> c;
        const int cell_id = static_cast<int>(mesh_.cells_.size());
        for (const auto& loop : face_loops) {
            if (static_cast<int>(loop.size()) < D)
                throw geometry_error("face with too few vertices", cell_id);
            auto key = loop;
            std::sort(key.begin(), key.end());
            auto [it, inserted] = index_.try_emplace(key, static_cast<int>(mesh_.faces_.size()));
            if (inserted) {
                Face<D> f;
                f.vertices = loop;
                mesh_.faces_.push_back(std::move(f));
            }
            attach(mesh_.faces_[it->second], cell_id);
            c.faces.push_back(it->second);
        }
        mesh_.cells_.push_back(std::move(c));
    }

    /// Registers a face explicitly; returns its id. Later cells referencing
    /// the same vertex set reuse it.
    int add_face(const std::vector<int>& loop)
    {
        auto key = loop;
        std::sort(key.begin(), key.end());
        auto [it, inserted] = index_.try_emplace(key, static_cast<int>(mesh_.faces_.size()));
        if (!inserted)
            throw geometry_error("duplicate face");
        Face<D> f;
        f.vertices = loop;
        mesh_.faces_.push_back(std::move(f));
        return it->second;
    }

    /// A cell given by ids of previously registered faces.
    void add_cell_faces(const std::vector<int>& face_ids)
    {
        Cell<D> c;
        const int cell_id = static_cast<int>(mesh_.cells_.size());
        for (int id : face_ids) {
            if (id < 0 || id >= static_cast<int>(mesh_.faces_.size()))
                throw geometry_error("unknown face id " + std::to_string(id), cell_id);
            attach(mesh_.faces_[id], cell_id);
            c.faces.push_back(id);
        }
        mesh_.cells_.push_back(std::move(c));
    }

    /// A 2D cell from its counter-clockwise vertex loop.
    void add_polygon(const std::vector<int>& loop)
    {
        static_assert(D == 2);
        std::vector<std::vector<int>> edges;
        for (std::size_t i = 0; i < loop.size(); ++i)
            edges.push_back({loop[i], loop[(i + 1) % loop.size()]});
        add_cell(edges);
    }

    PolytopalMesh<D> build() &&
    {
        for (int f = 0; f < static_cast<int>(mesh_.faces_.size()); ++f)
            if (mesh_.faces_[f].cells[0] < 0)
                throw geometry_error("face " + std::to_string(f) + " belongs to no cell");
        for (auto& f : mesh_.faces_)
            face_geometry(f);
        for (int c = 0; c < static_cast<int>(mesh_.cells_.size()); ++c)
            cell_geometry(c);
        return std::move(mesh_);
    }

  private:
    static void attach(Face<D>& f, int cell_id)
    {
        if (f.cells[0] < 0)
            f.cells[0] = cell_id;
        else if (f.cells[1] < 0)
            f.cells[1] = cell_id;
        else
            throw geometry_error("face shared by more than two cells", cell_id);
    }

    void face_geometry(Face<D>& f) const
    {
        const auto& X = mesh_.vertices_;
        if constexpr (D == 2) {
            const Point<D> t = X[f.vertices[1]] - X[f.vertices[0]];
            f.measure = t.norm();
            f.diameter = f.measure;
            f.centroid = 0.5 * (X[f.vertices[0]] + X[f.vertices[1]]);
            f.normal = Point<D>(t(1), -t(0)) / f.measure;
        }
        else {
            Point<D> avg = Point<D>::Zero();
            for (int v : f.vertices)
                avg += X[v];
            avg /= static_cast<double>(f.vertices.size());
            Point<D> area_vec = Point<D>::Zero();
            Point<D> moment = Point<D>::Zero();
            const std::size_t n = f.vertices.size();
            for (std::size_t i = 0; i < n; ++i) {
                const Point<D>& a = X[f.vertices[i]];
                const Point<D>& b = X[f.vertices[(i + 1) % n]];
                const Point<D> cr = (a - avg).cross(b - avg);
                area_vec += cr;
                moment += cr.norm() * (avg + a + b) / 3.0;
            }
            const double twice_area = area_vec.norm();
            f.measure = 0.5 * twice_area;
            f.normal = area_vec / twice_area;
            double wsum = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                wsum += (X[f.vertices[i]] - avg).cross(X[f.vertices[(i + 1) % n]] - avg).norm();
            f.centroid = moment / wsum;
            f.diameter = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    f.diameter = std::max(f.diameter, (X[f.vertices[i]] - X[f.vertices[j]]).norm());
        }
        if (!(f.measure > 0.0))
            throw geometry_error("face of zero measure");
    }

    void cell_geometry(int id)
    {
        auto& c = mesh_.cells_[id];
        const auto& X = mesh_.vertices_;
        for (int f : c.faces)
            for (int v : mesh_.faces_[f].vertices)
                c.vertices.push_back(v);
        std::sort(c.vertices.begin(), c.vertices.end());
        c.vertices.erase(std::unique(c.vertices.begin(), c.vertices.end()), c.vertices.end());

        Point<D> p0 = Point<D>::Zero();
        for (int v : c.vertices)
            p0 += X[v];
        p0 /= static_cast<double>(c.vertices.size());

        c.diameter = 0.0;
        for (std::size_t i = 0; i < c.vertices.size(); ++i)
            for (std::size_t j = i + 1; j < c.vertices.size(); ++j)
                c.diameter = std::max(c.diameter, (X[c.vertices[i]] - X[c.vertices[j]]).norm());

        c.orientation = consistent_orientation(c, id);

        // Signed pyramids from the vertex average to each face; exact for
        // any apex once the faces are consistently oriented.
        double measure = 0.0;
        Point<D> moment = Point<D>::Zero();
        for (int lf = 0; lf < c.num_faces(); ++lf) {
            const auto& face = mesh_.faces_[c.faces[lf]];
            const double vol = c.orientation[lf] * (face.centroid - p0).dot(face.normal) * face.measure / D;
            measure += vol;
            moment += vol * (p0 + (static_cast<double>(D) / (D + 1)) * (face.centroid - p0));
        }
        if (measure < 0) {
            for (int& s : c.orientation)
                s = -s;
            measure = -measure;
            moment = -moment;
        }
        if (!(measure > 1e-14 * std::pow(c.diameter, D)))
            throw geometry_error("cell of non-positive measure", id);
        c.measure = measure;
        c.centroid = moment / measure;
    }

    /// Relative face signs making the cell boundary a consistently oriented
    /// closed surface: every ridge (a vertex in 2D, an edge in 3D) must be
    /// traversed in opposite directions by its two faces. The global sign is
    /// fixed afterwards by the measure.
    std::vector<int> consistent_orientation(const Cell<D>& c, int id) const
    {
        const int nf = c.num_faces();
        std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> ridges;  // key -> (local face, direction)
        for (int lf = 0; lf < nf; ++lf) {
            const auto& loop = mesh_.faces_[c.faces[lf]].vertices;
            if constexpr (D == 2) {
                ridges[{loop[0], -1}].push_back({lf, -1});
                ridges[{loop[1], -1}].push_back({lf, +1});
            }
            else {
                const std::size_t n = loop.size();
                for (std::size_t i = 0; i < n; ++i) {
                    const int a = loop[i], b = loop[(i + 1) % n];
                    ridges[{std::min(a, b), std::max(a, b)}].push_back({lf, a < b ? 1 : -1});
                }
            }
        }
        std::vector<std::vector<std::pair<int, int>>> adj(nf);  // (neighbour, relative sign)
        for (const auto& [key, uses] : ridges) {
            if (uses.size() != 2)
                throw geometry_error("cell boundary is not a closed surface", id);
            const auto [f0, d0] = uses[0];
            const auto [f1, d1] = uses[1];
            adj[f0].push_back({f1, -d0 * d1});
            adj[f1].push_back({f0, -d0 * d1});
        }
        std::vector<int> s(nf, 0);
        s[0] = 1;
        std::vector<int> stack{0};
        while (!stack.empty()) {
            const int f = stack.back();
            stack.pop_back();
            for (const auto [g, rel] : adj[f]) {
                if (s[g] == 0) {
                    s[g] = rel * s[f];
                    stack.push_back(g);
                }
                else if (s[g] != rel * s[f])
                    throw geometry_error("cell faces cannot be oriented consistently", id);
            }
        }
        if (std::count(s.begin(), s.end(), 0) > 0)
            throw geometry_error("cell boundary is not connected", id);
        return s;
    }

    PolytopalMesh<D> mesh_;
    std::map<std::vector<int>, int> index_;
};

} // namespace wgl
