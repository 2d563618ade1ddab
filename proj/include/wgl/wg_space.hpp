#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "decomposition.hpp"
#include "errors.hpp"
#include "mesh.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"

namespace wgl {

template <int D>
using ScalarField = std::function<double(const Point<D>&)>;

template <int D>
using VectorField = std::function<Point<D>(const Point<D>&)>;

/// Scaled monomials centred at the cell centroid. The scale is the largest
/// centroid-to-vertex distance, so the cell maps into the unit ball.
template <int D>
CellPolySpace<D> make_cell_space(const PolytopalMesh<D>& mesh, int c, int degree)
{
    const auto& cell = mesh.cell(c);
    double radius = 0.0;
    for (int v : cell.vertices)
        radius = std::max(radius, (mesh.vertices()[v] - cell.centroid).norm());
    return CellPolySpace<D>(cell.centroid, radius, degree);
}

/// Face frame: origin at the face centroid, first tangent along the first
/// edge of the stored loop, scaled by the face diameter. Both neighbours of a
/// face see the same frame.
template <int D>
FacePolySpace<D> make_face_space(const PolytopalMesh<D>& mesh, int f, int degree)
{
    const auto& face = mesh.face(f);
    const auto& X = mesh.vertices();
    typename FacePolySpace<D>::Frame T;
    const Point<D> t1 = (X[face.vertices[1]] - X[face.vertices[0]]).normalized();
    T.col(0) = t1;
    if constexpr (D == 3)
        T.col(1) = face.normal.cross(t1).normalized();
    return FacePolySpace<D>(face.centroid, T, face.diameter, degree);
}

/// Mass matrix of any space exposing eval(x) on the given rule.
template <typename Space, typename Rule>
Eigen::MatrixXd gram(const Space& P, const Rule& rule)
{
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(P.size(), P.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXd v = P.eval(rule.points[q]);
        G.noalias() += rule.weights[q] * v * v.transpose();
    }
    return G;
}

/// L2 projection of f onto span(P) over the rule's domain.
template <typename Space, typename Rule, typename F>
Eigen::VectorXd l2_project(const Space& P, const Rule& rule, F&& f)
{
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(P.size());
    for (std::size_t q = 0; q < rule.size(); ++q)
        rhs += rule.weights[q] * f(rule.points[q]) * P.eval(rule.points[q]);
    Eigen::LLT<Eigen::MatrixXd> llt(gram(P, rule));
    if (llt.info() != Eigen::Success)
        throw geometry_error("singular Gram matrix in L2 projection");
    return llt.solve(rhs);
}

/// Mesh plus degree k: decompositions, P_k cell spaces, P_{k+1} face spaces
/// and default quadrature degrees. The mesh must outlive this object.
template <int D>
class WgSpace
{
  public:
    WgSpace(const PolytopalMesh<D>& mesh, int k, int quad_degree = -1)
      : mesh_(&mesh), k_(k), quad_degree_(quad_degree > 0 ? quad_degree : 2 * (k + 2) + 2)
    {
        if (k < 1)
            throw std::invalid_argument("WG degree k must be >= 1");
        decomps_.reserve(mesh.num_cells());
        cell_spaces_.reserve(mesh.num_cells());
        for (int c = 0; c < mesh.num_cells(); ++c) {
            decomps_.push_back(decompose_cell(mesh, c));
            cell_spaces_.push_back(make_cell_space(mesh, c, k));
        }
        face_spaces_.reserve(mesh.num_faces());
        for (int f = 0; f < mesh.num_faces(); ++f)
            face_spaces_.push_back(make_face_space(mesh, f, k + 1));
    }

    const PolytopalMesh<D>& mesh() const { return *mesh_; }
    int k() const { return k_; }
    int quad_degree() const { return quad_degree_; }

    int cell_block() const { return poly_dim(D, k_); }
    int face_block() const { return poly_dim(D - 1, k_ + 1); }
    int local_size(int c) const { return cell_block() + mesh_->cell(c).num_faces() * face_block(); }

    const SimplicialDecomposition<D>& decomposition(int c) const { return decomps_[c]; }
    const CellPolySpace<D>& cell_space(int c) const { return cell_spaces_[c]; }
    const FacePolySpace<D>& face_space(int f) const { return face_spaces_[f]; }

    QuadratureRule<D> cell_rule(int c) const { return wgl::cell_rule(decomps_[c], quad_degree_); }
    QuadratureRule<D> face_rule(int f) const { return wgl::face_rule(*mesh_, f, quad_degree_); }

  private:
    const PolytopalMesh<D>* mesh_;
    int k_;
    int quad_degree_;
    std::vector<SimplicialDecomposition<D>> decomps_;
    std::vector<CellPolySpace<D>> cell_spaces_;
    std::vector<FacePolySpace<D>> face_spaces_;
};

/// Weak function {v_0, v_b}: one P_k polynomial per cell, one P_{k+1}
/// polynomial per face, stored as flat coefficient blocks.
template <int D>
struct WgFunction
{
    int k = 0;
    int cell_block = 0;
    int face_block = 0;
    Eigen::VectorXd cell_coeffs;
    Eigen::VectorXd face_coeffs;

    WgFunction() = default;
    explicit WgFunction(const WgSpace<D>& V)
      : k(V.k()), cell_block(V.cell_block()), face_block(V.face_block()),
        cell_coeffs(Eigen::VectorXd::Zero(V.mesh().num_cells() * V.cell_block())),
        face_coeffs(Eigen::VectorXd::Zero(V.mesh().num_faces() * V.face_block()))
    {}

    auto cell(int c) { return cell_coeffs.segment(c * cell_block, cell_block); }
    auto cell(int c) const { return cell_coeffs.segment(c * cell_block, cell_block); }
    auto face(int f) { return face_coeffs.segment(f * face_block, face_block); }
    auto face(int f) const { return face_coeffs.segment(f * face_block, face_block); }

    /// Local dofs of a cell: interior block, then each face in cell order.
    Eigen::VectorXd local(const PolytopalMesh<D>& mesh, int c) const
    {
        const auto& cell_ = mesh.cell(c);
        Eigen::VectorXd v(cell_block + cell_.num_faces() * face_block);
        v.head(cell_block) = cell(c);
        for (int lf = 0; lf < cell_.num_faces(); ++lf)
            v.segment(cell_block + lf * face_block, face_block) = face(cell_.faces[lf]);
        return v;
    }

    /// Zeroes u_b on boundary faces (the homogeneous subspace).
    void clear_boundary(const PolytopalMesh<D>& mesh)
    {
        for (int f : mesh.boundary_faces())
            face(f).setZero();
    }

    WgFunction operator-(const WgFunction& o) const
    {
        WgFunction r = *this;
        r.cell_coeffs -= o.cell_coeffs;
        r.face_coeffs -= o.face_coeffs;
        return r;
    }
};

/// Q_0 on one cell, onto P_m with the cell's scaled monomials.
template <int D, typename F>
Eigen::VectorXd project_cell(const WgSpace<D>& V, int c, int degree, F&& f)
{
    return l2_project(make_cell_space(V.mesh(), c, degree), V.cell_rule(c), f);
}

/// Q_b on one face, onto P_m in the face frame.
template <int D, typename F>
Eigen::VectorXd project_face(const WgSpace<D>& V, int face, int degree, F&& f)
{
    return l2_project(make_face_space(V.mesh(), face, degree), V.face_rule(face), f);
}

/// Q_h u = {Q_0 u, Q_b u}. With `homogeneous` set, boundary faces carry zero.
template <int D, typename F>
WgFunction<D> project_Qh(const WgSpace<D>& V, F&& u, bool homogeneous = false)
{
    WgFunction<D> w(V);
    const auto& mesh = V.mesh();
    for (int c = 0; c < mesh.num_cells(); ++c)
        w.cell(c) = l2_project(V.cell_space(c), V.cell_rule(c), u);
    for (int f = 0; f < mesh.num_faces(); ++f) {
        if (homogeneous && mesh.face(f).is_boundary())
            continue;
        w.face(f) = l2_project(V.face_space(f), V.face_rule(f), u);
    }
    return w;
}

} // namespace wgl
