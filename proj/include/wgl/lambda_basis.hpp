#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "errors.hpp"
#include "polynomial.hpp"
#include "wg_space.hpp"

namespace wgl {

/// Singular values below zero_tol * sigma_max count as zero; any singular
/// value inside [deadband_lo, deadband_hi] * sigma_max is ambiguous.
struct RankPolicy
{
    double zero_tol = 1e-10;
    double deadband_lo = 1e-12;
    double deadband_hi = 1e-8;
};

/// Basis of the test space Lambda_k(T): H(div) vector fields that are P_{k+1}
/// on every sub-simplex of the cell, with a single P_k divergence on T and a
/// single P_{k+1} normal trace on every face.
///
/// Basis functions are stored as coefficients over the cell's scaled
/// monomials of degree k+1 (the same frame on every sub-simplex). Row
/// (s * D + j) * N + a of `coeffs` holds monomial a of component j on
/// sub-simplex s, N = dim P_{k+1}.
///
/// Everything here is expressed relative to the cell centroid and the face
/// frames, so one instance can be shared between congruent, translated cells.
template <int D>
struct LambdaBasis
{
    int cell = -1;
    int k = 0;
    int n_basis = 0;
    int n_sub = 0;
    int mono_size = 0;  ///< dim P_{k+1}(T)
    Eigen::MatrixXd coeffs;
    Eigen::MatrixXd mass;      ///< int_T q_i . q_j
    Eigen::MatrixXd div_repr;  ///< P_k(T) coefficients of div q_i, one column per basis function
    /// Per local face: P_{k+1}(e) coefficients of q_i . n_out in the face frame.
    std::vector<Eigen::MatrixXd> trace_repr;
    /// Largest singular value treated as zero and smallest kept, relative.
    double max_dropped_sv = 0.0;
    double min_kept_sv = 1.0;

    auto piece(int s) const { return coeffs.middleRows(s * D * mono_size, D * mono_size); }

    /// Values of all basis functions on sub-simplex s at x: D x n_basis.
    /// `p1` is the degree k+1 space of the cell being evaluated.
    Eigen::MatrixXd eval(const CellPolySpace<D>& p1, int s, const Point<D>& x) const
    {
        const Eigen::VectorXd m = p1.eval(x);
        Eigen::MatrixXd out(D, n_basis);
        for (int j = 0; j < D; ++j)
            out.row(j) = m.transpose() * coeffs.middleRows((s * D + j) * mono_size, mono_size);
        return out;
    }

    /// Divergence of all basis functions on sub-simplex s as P_k coefficients.
    Eigen::MatrixXd piece_divergence(double scale, int s) const
    {
        return divergence_matrix(k, scale) * piece(s);
    }

    /// Maps stacked P_{k+1}^D coefficients to P_k coefficients of the divergence.
    static Eigen::MatrixXd divergence_matrix(int k, double scale)
    {
        const MonomialSet hi(D, k + 1), lo(D, k);
        Eigen::MatrixXd Dm = Eigen::MatrixXd::Zero(lo.size(), D * hi.size());
        for (int j = 0; j < D; ++j)
            for (int a = 0; a < hi.size(); ++a) {
                Exponent e = hi.exponents()[a];
                if (e[j] == 0)
                    continue;
                const double c = e[j] / scale;
                e[j] -= 1;
                Dm(lo.index_of(e), j * hi.size() + a) += c;
            }
        return Dm;
    }
};

namespace detail {

/// Frame on a simplex facet (used for test functions on interior sub-faces).
template <int D>
FacePolySpace<D> facet_space(const std::array<Point<D>, D>& p, int degree)
{
    Point<D> origin = Point<D>::Zero();
    for (const auto& x : p)
        origin += x;
    origin /= D;
    double diam = 0.0;
    for (int i = 0; i < D; ++i)
        for (int j = i + 1; j < D; ++j)
            diam = std::max(diam, (p[i] - p[j]).norm());
    typename FacePolySpace<D>::Frame T;
    T.col(0) = (p[1] - p[0]).normalized();
    if constexpr (D == 3) {
        const Point<3> n = (p[1] - p[0]).cross(p[2] - p[0]).normalized();
        T.col(1) = n.cross(T.col(0)).normalized();
    }
    return FacePolySpace<D>(origin, T, diam, degree);
}

} // namespace detail

/// Builds Lambda_k(T) for cell c.
///
/// Unknowns are the raw piecewise coefficients plus auxiliary coefficients of
/// the shared divergence polynomial and of one shared trace polynomial per
/// subdivided face. Constraints: vanishing jumps of normal moments (against
/// P_{k+1}) across interior sub-faces; piecewise divergence equal to the
/// shared divergence; normal moments on every face piece equal to those of
/// the shared trace. The nullspace of the row-normalised system, restricted
/// to the raw coefficients and orthonormalised, is the basis.
template <int D>
LambdaBasis<D> build_lambda_basis(const WgSpace<D>& V, int c, const RankPolicy& policy = {})
{
    const auto& mesh = V.mesh();
    const auto& cell = mesh.cell(c);
    const auto& dec = V.decomposition(c);
    const int k = V.k();
    const auto p1 = make_cell_space(mesh, c, k + 1);
    const auto pk = make_cell_space(mesh, c, k);
    const int N1 = p1.size(), Nk = pk.size(), Nf = poly_dim(D - 1, k + 1);
    const int n_sub = dec.size();
    const int n_raw = n_sub * D * N1;
    const int prod_degree = std::max(1, 2 * k + 2);

    auto raw_col = [&](int s, int j, int a) { return (s * D + j) * N1 + a; };

    // Column layout of auxiliaries.
    int n_cols = n_raw;
    const int div_col = n_cols;
    n_cols += Nk;
    std::vector<int> trace_col(cell.num_faces(), -1);
    for (int lf = 0; lf < cell.num_faces(); ++lf)
        if (dec.face_pieces[lf].size() > 1) {
            trace_col[lf] = n_cols;
            n_cols += Nf;
        }

    std::vector<Eigen::RowVectorXd> rows;

    // (a) normal continuity across interior sub-faces.
    for (const auto& F : dec.interior) {
        const auto test = detail::facet_space<D>(F.points, k + 1);
        const auto rule = simplex_piece_rule<D>(F.points, prod_degree);
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(Nf, n_cols);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Eigen::VectorXd psi = test.eval(rule.points[q]);
            const Eigen::VectorXd m = p1.eval(rule.points[q]);
            for (int j = 0; j < D; ++j) {
                const Eigen::MatrixXd contrib = rule.weights[q] * F.normal(j) * psi * m.transpose();
                block.middleCols(raw_col(F.simplices[0], j, 0), N1) += contrib;
                block.middleCols(raw_col(F.simplices[1], j, 0), N1) -= contrib;
            }
        }
        for (int r = 0; r < Nf; ++r)
            rows.push_back(block.row(r));
    }

    // (b) piecewise divergence equals the shared P_k polynomial.
    const Eigen::MatrixXd Dm = LambdaBasis<D>::divergence_matrix(k, p1.scale());
    for (int s = 0; s < n_sub; ++s) {
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(Nk, n_cols);
        block.middleCols(raw_col(s, 0, 0), D * N1) = Dm;
        block.middleCols(div_col, Nk) = -Eigen::MatrixXd::Identity(Nk, Nk);
        for (int r = 0; r < Nk; ++r)
            rows.push_back(block.row(r));
    }

    // (c) normal trace on each piece equals the shared P_{k+1}(e) polynomial.
    for (int lf = 0; lf < cell.num_faces(); ++lf) {
        if (trace_col[lf] < 0)
            continue;
        const auto& fs = V.face_space(cell.faces[lf]);
        const Point<D> n = cell.outward_normal(lf, mesh.faces());
        for (const auto& piece : dec.face_pieces[lf]) {
            const auto rule = simplex_piece_rule<D>(piece.points, prod_degree);
            Eigen::MatrixXd block = Eigen::MatrixXd::Zero(Nf, n_cols);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const Eigen::VectorXd psi = fs.eval(rule.points[q]);
                const Eigen::VectorXd m = p1.eval(rule.points[q]);
                for (int j = 0; j < D; ++j)
                    block.middleCols(raw_col(piece.simplex, j, 0), N1) +=
                        rule.weights[q] * n(j) * psi * m.transpose();
                block.middleCols(trace_col[lf], Nf) -= rule.weights[q] * psi * psi.transpose();
            }
            for (int r = 0; r < Nf; ++r)
                rows.push_back(block.row(r));
        }
    }

    Eigen::MatrixXd C(static_cast<Eigen::Index>(rows.size()), n_cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double nrm = rows[r].norm();
        C.row(static_cast<Eigen::Index>(r)) = nrm > 0 ? Eigen::RowVectorXd(rows[r] / nrm) : rows[r];
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 1.0;
    LambdaBasis<D> L;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double rel = sv(i) / smax;
        if (rel >= policy.deadband_lo && rel <= policy.deadband_hi)
            throw rank_error("constraint singular value " + std::to_string(rel)
                                 + " (relative) lies in the rank deadband",
                             c);
        if (rel > policy.zero_tol) {
            ++rank;
            L.min_kept_sv = std::min(L.min_kept_sv, rel);
        }
        else {
            L.max_dropped_sv = std::max(L.max_dropped_sv, rel);
        }
    }
    const int nullity = n_cols - rank;
    if (nullity <= 0)
        throw rank_error("empty nullspace for the test space", c);

    const Eigen::MatrixXd X = svd.matrixV().rightCols(nullity).topRows(n_raw);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() != nullity)
        throw rank_error("auxiliary unknowns are not determined by the piecewise field", c);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n_raw, nullity);

    L.cell = c;
    L.k = k;
    L.n_basis = nullity;
    L.n_sub = n_sub;
    L.mono_size = N1;
    L.coeffs = std::move(Q);

    // Mass matrix and divergence moments, sub-simplex by sub-simplex.
    L.mass = Eigen::MatrixXd::Zero(nullity, nullity);
    Eigen::MatrixXd div_rhs = Eigen::MatrixXd::Zero(Nk, nullity);
    for (int s = 0; s < n_sub; ++s) {
        const auto rule = simplex_piece_rule<D>(dec.simplices[s], prod_degree);
        const Eigen::MatrixXd G1 = gram(p1, rule);
        for (int j = 0; j < D; ++j) {
            const auto Xj = L.coeffs.middleRows(raw_col(s, j, 0), N1);
            L.mass.noalias() += Xj.transpose() * G1 * Xj;
        }
        div_rhs.noalias() += gram(pk, rule) * L.piece_divergence(p1.scale(), s);
    }
    L.mass = 0.5 * (L.mass + L.mass.transpose()).eval();
    L.div_repr = gram(pk, V.cell_rule(c)).llt().solve(div_rhs);

    L.trace_repr.resize(cell.num_faces());
    for (int lf = 0; lf < cell.num_faces(); ++lf) {
        const int f = cell.faces[lf];
        const auto& fs = V.face_space(f);
        const Point<D> n = cell.outward_normal(lf, mesh.faces());
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(Nf, nullity);
        for (const auto& piece : dec.face_pieces[lf]) {
            const auto rule = simplex_piece_rule<D>(piece.points, prod_degree);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const Eigen::RowVectorXd qn = n.transpose() * L.eval(p1, piece.simplex, rule.points[q]);
                rhs.noalias() += rule.weights[q] * fs.eval(rule.points[q]) * qn;
            }
        }
        L.trace_repr[lf] = gram(fs, V.face_rule(f)).llt().solve(rhs);
    }
    return L;
}

/// Local weak-gradient operator of one cell. Local dofs are ordered as the
/// interior block followed by each face block in cell order.
template <int D>
struct WeakGradientOperator
{
    Eigen::MatrixXd rhs;        ///< b = rhs * v_local
    Eigen::MatrixXd weak_grad;  ///< mass^{-1} * rhs
    Eigen::MatrixXd stiffness;  ///< rhs^T * mass^{-1} * rhs
};

/// rhs(i, .) realises  int_{dT} v_b q_i.n  -  int_T v_0 div q_i  via div_repr
/// and trace_repr.
template <int D>
WeakGradientOperator<D> build_weak_gradient_operator(const WgSpace<D>& V, int c, const LambdaBasis<D>& L)
{
    const auto& cell = V.mesh().cell(c);
    const int Nk = V.cell_block(), Nf = V.face_block();
    WeakGradientOperator<D> op;
    op.rhs.resize(L.n_basis, V.local_size(c));
    const Eigen::MatrixXd Gk = gram(V.cell_space(c), V.cell_rule(c));
    op.rhs.leftCols(Nk) = -(Gk * L.div_repr).transpose();
    for (int lf = 0; lf < cell.num_faces(); ++lf) {
        const int f = cell.faces[lf];
        const Eigen::MatrixXd Ge = gram(V.face_space(f), V.face_rule(f));
        op.rhs.middleCols(Nk + lf * Nf, Nf) = (Ge * L.trace_repr[lf]).transpose();
    }
    Eigen::LLT<Eigen::MatrixXd> llt(L.mass);
    if (llt.info() != Eigen::Success)
        throw rank_error("test-space mass matrix is not positive definite", c);
    op.weak_grad = llt.solve(op.rhs);
    op.stiffness = op.rhs.transpose() * op.weak_grad;
    op.stiffness = 0.5 * (op.stiffness + op.stiffness.transpose()).eval();
    return op;
}

/// Coefficients of the weak gradient of v restricted to cell c.
template <int D>
Eigen::VectorXd weak_gradient(const WgSpace<D>& V, int c, const WgFunction<D>& v,
                              const WeakGradientOperator<D>& op)
{
    return op.weak_grad * v.local(V.mesh(), c);
}

} // namespace wgl
