#pragma once

#include <cmath>
#include <vector>

#include "discretization.hpp"

namespace wgl {

/// Discontinuous field holding one polynomial per cell in the cell's scaled
/// monomials.
template <int D>
class PiecewisePolynomial
{
  public:
    PiecewisePolynomial(const PolytopalMesh<D>& mesh, int degree)
      : degree_(degree), coeffs_(mesh.num_cells())
    {
        spaces_.reserve(mesh.num_cells());
        for (int c = 0; c < mesh.num_cells(); ++c) {
            spaces_.push_back(make_cell_space(mesh, c, degree));
            coeffs_[c] = Eigen::VectorXd::Zero(spaces_.back().size());
        }
    }

    int degree() const { return degree_; }
    Eigen::VectorXd& coeffs(int c) { return coeffs_[c]; }
    const Eigen::VectorXd& coeffs(int c) const { return coeffs_[c]; }
    const CellPolySpace<D>& space(int c) const { return spaces_[c]; }

    double value(int c, const Point<D>& x) const { return spaces_[c].eval(x).dot(coeffs_[c]); }
    Point<D> gradient(int c, const Point<D>& x) const { return spaces_[c].grad(x) * coeffs_[c]; }

  private:
    int degree_;
    std::vector<CellPolySpace<D>> spaces_;
    std::vector<Eigen::VectorXd> coeffs_;
};

/// The interior part u_0 of a weak function as a piecewise P_k field.
template <int D>
PiecewisePolynomial<D> interior_part(const WgSpace<D>& V, const WgFunction<D>& u)
{
    PiecewisePolynomial<D> out(V.mesh(), V.k());
    for (int c = 0; c < V.mesh().num_cells(); ++c)
        out.coeffs(c) = u.cell(c);
    return out;
}

/// L_h u_h: per cell, lift_mat applied to the stacked local dofs (boundary
/// faces included with whatever data they carry).
template <int D>
PiecewisePolynomial<D> lift(const WgDiscretization<D>& disc, const WgFunction<D>& u)
{
    PiecewisePolynomial<D> out(disc.mesh(), disc.k() + 2);
    for (int c = 0; c < disc.mesh().num_cells(); ++c)
        out.coeffs(c) = disc.lift(c).lift_mat * u.local(disc.mesh(), c);
    return out;
}

/// Broken H^1 seminorm of a piecewise polynomial.
template <int D>
double broken_h1_seminorm(const WgSpace<D>& V, const PiecewisePolynomial<D>& p)
{
    double s = 0.0;
    for (int c = 0; c < V.mesh().num_cells(); ++c) {
        const auto rule = V.cell_rule(c);
        for (std::size_t q = 0; q < rule.size(); ++q)
            s += rule.weights[q] * p.gradient(c, rule.points[q]).squaredNorm();
    }
    return std::sqrt(s);
}

/// |L_h u_h|_{1,h}.
template <int D>
double energy_of_lift(const WgDiscretization<D>& disc, const WgFunction<D>& u)
{
    return broken_h1_seminorm(disc.space(), lift(disc, u));
}

/// |||v||| = (grad_w v, grad_w v)^{1/2}.
template <int D>
double triple_bar(const WgDiscretization<D>& disc, const WgFunction<D>& v)
{
    double s = 0.0;
    for (int c = 0; c < disc.mesh().num_cells(); ++c) {
        const Eigen::VectorXd loc = v.local(disc.mesh(), c);
        s += loc.dot(disc.grad(c).stiffness * loc);
    }
    return std::sqrt(std::max(0.0, s));
}

/// Weak gradient of v evaluated at x, a point of sub-simplex s of cell c.
template <int D>
Point<D> eval_weak_gradient(const WgDiscretization<D>& disc, int c, int s, const Point<D>& x,
                            const Eigen::VectorXd& grad_coeffs)
{
    const auto p1 = make_cell_space(disc.mesh(), c, disc.k() + 1);
    return disc.basis(c).eval(p1, s, x) * grad_coeffs;
}

} // namespace wgl
