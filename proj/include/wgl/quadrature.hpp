#pragma once

#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polynomial.hpp"

namespace wgl {

inline constexpr int max_quadrature_degree = 14;

/// Rule on the reference simplex of dimension `dim` (unit interval,
/// triangle (0,0),(1,0),(0,1), or the unit tetrahedron). Unused point
/// coordinates are zero.
struct ReferenceRule
{
    int dim = 0;
    int degree = 0;
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
};

/// Physical rule; weights are scaled by the measure of the mapped domain.
template <int D>
struct QuadratureRule
{
    std::vector<Point<D>> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }

    void append(const QuadratureRule& other)
    {
        points.insert(points.end(), other.points.begin(), other.points.end());
        weights.insert(weights.end(), other.weights.begin(), other.weights.end());
    }

    double measure() const
    {
        double s = 0.0;
        for (double w : weights)
            s += w;
        return s;
    }

    template <typename F>
    double integrate(F&& f) const
    {
        double s = 0.0;
        for (std::size_t q = 0; q < points.size(); ++q)
            s += weights[q] * f(points[q]);
        return s;
    }
};

namespace detail {

/// Gauss-Jacobi nodes/weights on [0,1] for the weight (1-v)^alpha (Golub-Welsch).
inline std::pair<std::vector<double>, std::vector<double>> gauss_jacobi01(int n, int alpha)
{
    const double a = alpha, b = 0.0;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double s = 2.0 * i + a + b;
        J(i, i) = (i == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
        if (i > 0) {
            const double num = 4.0 * i * (i + a) * (i + b) * (i + a + b);
            const double den = s * s * (s + 1.0) * (s - 1.0);
            J(i, i - 1) = J(i - 1, i) = std::sqrt(num / den);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0)
                       / std::tgamma(a + b + 2.0);
    std::vector<double> x(n), w(n);
    const double to01 = std::pow(2.0, -a - 1.0);
    for (int i = 0; i < n; ++i) {
        const double v0 = eig.eigenvectors()(0, i);
        x[i] = 0.5 * (1.0 + eig.eigenvalues()(i));
        w[i] = mu0 * v0 * v0 * to01;
    }
    return {x, w};
}

inline ReferenceRule build_simplex_rule(int dim, int degree)
{
    const int n = (degree + 2) / 2;
    ReferenceRule r;
    r.dim = dim;
    r.degree = degree;
    const auto [gx, gw] = gauss_jacobi01(n, 0);
    if (dim == 1) {
        for (int i = 0; i < n; ++i) {
            r.points.push_back({gx[i], 0.0, 0.0});
            r.weights.push_back(gw[i]);
        }
    }
    else if (dim == 2) {
        const auto [vx, vw] = gauss_jacobi01(n, 1);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                r.points.push_back({gx[i] * (1.0 - vx[j]), vx[j], 0.0});
                r.weights.push_back(gw[i] * vw[j]);
            }
    }
    else {
        const auto [vx, vw] = gauss_jacobi01(n, 1);
        const auto [wx, ww] = gauss_jacobi01(n, 2);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const double z = wx[k];
                    const double y = vx[j] * (1.0 - z);
                    const double x = gx[i] * (1.0 - vx[j]) * (1.0 - z);
                    r.points.push_back({x, y, z});
                    r.weights.push_back(gw[i] * vw[j] * ww[k]);
                }
    }
    return r;
}

} // namespace detail

/// Collapsed (Duffy) tensor Gauss-Jacobi rule exact for total degree <= degree
/// on the reference simplex. Rules are built once and shared.
inline const ReferenceRule& simplex_rule(int dim, int degree)
{
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("simplex_rule: dimension must be 1, 2 or 3, got " + std::to_string(dim));
    if (degree < 1 || degree > max_quadrature_degree)
        throw std::invalid_argument("simplex_rule: unsupported degree " + std::to_string(degree)
                                    + " (supported 1.." + std::to_string(max_quadrature_degree) + ")");
    using Table = std::array<std::array<ReferenceRule, max_quadrature_degree + 1>, 3>;
    static const Table table = [] {
        Table t;
        for (int d = 1; d <= 3; ++d)
            for (int p = 1; p <= max_quadrature_degree; ++p)
                t[d - 1][p] = detail::build_simplex_rule(d, p);
        return t;
    }();
    return table[dim - 1][degree];
}

/// Maps a reference rule onto the simplex spanned by `verts` (dim + 1 points
/// embedded in R^D); weights pick up the ratio of measures.
template <int D>
QuadratureRule<D> map_rule(const ReferenceRule& ref, const std::vector<Point<D>>& verts)
{
    const int m = ref.dim;
    assert(static_cast<int>(verts.size()) == m + 1);
    Eigen::Matrix<double, D, Eigen::Dynamic> E(D, m);
    for (int i = 0; i < m; ++i)
        E.col(i) = verts[i + 1] - verts[0];
    const double jac = std::sqrt(std::abs((E.transpose() * E).determinant()));
    QuadratureRule<D> out;
    out.points.reserve(ref.points.size());
    out.weights.reserve(ref.points.size());
    for (std::size_t q = 0; q < ref.points.size(); ++q) {
        Point<D> x = verts[0];
        for (int i = 0; i < m; ++i)
            x += ref.points[q][i] * E.col(i);
        out.points.push_back(x);
        out.weights.push_back(ref.weights[q] * jac);
    }
    return out;
}

template <int D, std::size_t N>
QuadratureRule<D> map_rule(const ReferenceRule& ref, const std::array<Point<D>, N>& verts)
{
    return map_rule<D>(ref, std::vector<Point<D>>(verts.begin(), verts.end()));
}

/// Measure of the simplex spanned by m + 1 points in R^D.
template <int D>
double simplex_measure(const std::vector<Point<D>>& verts)
{
    const int m = static_cast<int>(verts.size()) - 1;
    Eigen::Matrix<double, D, Eigen::Dynamic> E(D, m);
    for (int i = 0; i < m; ++i)
        E.col(i) = verts[i + 1] - verts[0];
    double fact = 1.0;
    for (int i = 2; i <= m; ++i)
        fact *= i;
    return std::sqrt(std::abs((E.transpose() * E).determinant())) / fact;
}

} // namespace wgl
