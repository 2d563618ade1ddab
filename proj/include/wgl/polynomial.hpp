#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace wgl {

template <int D>
using Point = Eigen::Matrix<double, D, 1>;

using Exponent = std::array<int, 3>;

/// Dimension of the space of polynomials of total degree <= degree in nvars variables.
constexpr int poly_dim(int nvars, int degree)
{
    if (degree < 0)
        return 0;
    long num = 1, den = 1;
    for (int i = 1; i <= nvars; ++i) {
        num *= degree + i;
        den *= i;
    }
    return static_cast<int>(num / den);
}

/// Multi-indices of total degree <= degree, graded, then descending in the
/// first variable. Unused trailing slots are zero.
inline std::vector<Exponent> monomial_exponents(int nvars, int degree)
{
    assert(nvars >= 1 && nvars <= 3);
    std::vector<Exponent> out;
    out.reserve(poly_dim(nvars, degree));
    for (int t = 0; t <= degree; ++t) {
        if (nvars == 1) {
            out.push_back({t, 0, 0});
            continue;
        }
        for (int a = t; a >= 0; --a) {
            if (nvars == 2) {
                out.push_back({a, t - a, 0});
                continue;
            }
            for (int b = t - a; b >= 0; --b)
                out.push_back({a, b, t - a - b});
        }
    }
    return out;
}

/// Monomials xi^alpha in local (already scaled) coordinates.
class MonomialSet
{
  public:
    MonomialSet() = default;
    MonomialSet(int nvars, int degree)
      : nvars_(nvars), degree_(degree), exps_(monomial_exponents(nvars, degree))
    {}

    int nvars() const { return nvars_; }
    int degree() const { return degree_; }
    int size() const { return static_cast<int>(exps_.size()); }
    const std::vector<Exponent>& exponents() const { return exps_; }

    /// Index of a multi-index inside this set, or -1.
    int index_of(const Exponent& e) const
    {
        for (int i = 0; i < size(); ++i)
            if (exps_[i] == e)
                return i;
        return -1;
    }

    template <typename Vec>
    Eigen::VectorXd values(const Vec& xi) const
    {
        const auto pw = powers(xi);
        Eigen::VectorXd v(size());
        for (int i = 0; i < size(); ++i) {
            double m = 1.0;
            for (int d = 0; d < nvars_; ++d)
                m *= pw[d][exps_[i][d]];
            v(i) = m;
        }
        return v;
    }

    /// Derivatives with respect to the local coordinates, one row per variable.
    template <typename Vec>
    Eigen::MatrixXd derivatives(const Vec& xi) const
    {
        const auto pw = powers(xi);
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nvars_, size());
        for (int i = 0; i < size(); ++i) {
            for (int j = 0; j < nvars_; ++j) {
                const int aj = exps_[i][j];
                if (aj == 0)
                    continue;
                double m = aj;
                for (int d = 0; d < nvars_; ++d)
                    m *= pw[d][d == j ? aj - 1 : exps_[i][d]];
                g(j, i) = m;
            }
        }
        return g;
    }

  private:
    template <typename Vec>
    std::array<std::vector<double>, 3> powers(const Vec& xi) const
    {
        std::array<std::vector<double>, 3> pw;
        for (int d = 0; d < nvars_; ++d) {
            pw[d].resize(degree_ + 1);
            pw[d][0] = 1.0;
            for (int p = 1; p <= degree_; ++p)
                pw[d][p] = pw[d][p - 1] * xi(d);
        }
        return pw;
    }

    int nvars_ = 0;
    int degree_ = -1;
    std::vector<Exponent> exps_;
};

/// Scaled monomials ((x - center) / scale)^alpha on a D-dimensional cell.
template <int D>
class CellPolySpace
{
  public:
    CellPolySpace() = default;
    CellPolySpace(const Point<D>& center, double scale, int degree)
      : center_(center), scale_(scale), mono_(D, degree)
    {}

    int degree() const { return mono_.degree(); }
    int size() const { return mono_.size(); }
    const Point<D>& center() const { return center_; }
    double scale() const { return scale_; }
    const MonomialSet& monomials() const { return mono_; }

    Point<D> local(const Point<D>& x) const { return (x - center_) / scale_; }

    Eigen::VectorXd eval(const Point<D>& x) const { return mono_.values(local(x)); }

    /// D x size matrix of physical gradients.
    Eigen::MatrixXd grad(const Point<D>& x) const
    {
        return mono_.derivatives(local(x)) / scale_;
    }

    double eval(const Point<D>& x, const Eigen::VectorXd& coeffs) const
    {
        return eval(x).dot(coeffs);
    }

  private:
    Point<D> center_ = Point<D>::Zero();
    double scale_ = 1.0;
    MonomialSet mono_;
};

/// Scaled monomials in an orthonormal tangent frame of a (D-1)-dimensional face.
template <int D>
class FacePolySpace
{
  public:
    using Frame = Eigen::Matrix<double, D, D - 1>;

    FacePolySpace() = default;
    FacePolySpace(const Point<D>& origin, const Frame& tangents, double scale, int degree)
      : origin_(origin), tangents_(tangents), scale_(scale), mono_(D - 1, degree)
    {}

    int degree() const { return mono_.degree(); }
    int size() const { return mono_.size(); }
    const Point<D>& origin() const { return origin_; }
    const Frame& tangents() const { return tangents_; }
    double scale() const { return scale_; }

    Eigen::Matrix<double, D - 1, 1> local(const Point<D>& x) const
    {
        return tangents_.transpose() * (x - origin_) / scale_;
    }

    Eigen::VectorXd eval(const Point<D>& x) const { return mono_.values(local(x)); }

  private:
    Point<D> origin_ = Point<D>::Zero();
    Frame tangents_ = Frame::Zero();
    double scale_ = 1.0;
    MonomialSet mono_;
};

} // namespace wgl
