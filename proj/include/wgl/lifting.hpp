#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "errors.hpp"
#include "wg_space.hpp"

namespace wgl {

struct CertificatePolicy
{
    double fail_below = 1e-10;  ///< relative sigma_min that aborts
    double warn_below = 1e-6;
};

/// P_{k+2} lifting on one cell.
///
/// qmat maps P_{k+2}(T) coefficients to stacked local WG dofs
/// (Q_0 p; Q_b p on each face). The discrete inner product is
///   <u, v> = int_T u_0 v_0 + sum_e int_e u_b v_b   (unweighted),
/// gram = qmat^T W qmat, and lift_mat = gram^{-1} qmat^T W, so that
/// lift_mat * qmat = I.
template <int D>
struct LiftOperator
{
    int cell = -1;
    int k = 0;
    Eigen::MatrixXd qmat;
    Eigen::MatrixXd gram;
    Eigen::MatrixXd lift_mat;
    double sigma_min = 0.0;  ///< of W^{1/2} qmat
    double sigma_max = 0.0;
    bool warning = false;

    double relative_sigma() const { return sigma_min / sigma_max; }
};

template <int D>
LiftOperator<D> build_lift_operator(const WgSpace<D>& V, int c, const CertificatePolicy& policy = {})
{
    const auto& mesh = V.mesh();
    const auto& cell = mesh.cell(c);
    const int Nk = V.cell_block(), Nf = V.face_block();
    const auto p2 = make_cell_space(mesh, c, V.k() + 2);
    const int N2 = p2.size();
    const int n_local = V.local_size(c);

    // cross(i, a) = int p_a * (test i); qmat = W^{-1} cross, blockwise.
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(n_local, N2);
    Eigen::MatrixXd qmat(n_local, N2);

    {
        const auto rule = V.cell_rule(c);
        const auto& pk = V.cell_space(c);
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(Nk, Nk);
        auto blk = cross.topRows(Nk);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Eigen::VectorXd t = pk.eval(rule.points[q]);
            G.noalias() += rule.weights[q] * t * t.transpose();
            blk.noalias() += rule.weights[q] * t * p2.eval(rule.points[q]).transpose();
        }
        qmat.topRows(Nk) = G.llt().solve(cross.topRows(Nk));
    }
    for (int lf = 0; lf < cell.num_faces(); ++lf) {
        const int f = cell.faces[lf];
        const auto rule = V.face_rule(f);
        const auto& fs = V.face_space(f);
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(Nf, Nf);
        auto blk = cross.middleRows(Nk + lf * Nf, Nf);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Eigen::VectorXd t = fs.eval(rule.points[q]);
            G.noalias() += rule.weights[q] * t * t.transpose();
            blk.noalias() += rule.weights[q] * t * p2.eval(rule.points[q]).transpose();
        }
        qmat.middleRows(Nk + lf * Nf, Nf) = G.llt().solve(blk);
    }

    LiftOperator<D> op;
    op.cell = c;
    op.k = V.k();
    // W qmat == cross, hence gram = qmat^T cross.
    op.gram = qmat.transpose() * cross;
    op.gram = 0.5 * (op.gram + op.gram.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(op.gram, Eigen::EigenvaluesOnly);
    op.sigma_min = std::sqrt(std::max(0.0, eig.eigenvalues().minCoeff()));
    op.sigma_max = std::sqrt(eig.eigenvalues().maxCoeff());
    if (!(op.relative_sigma() >= policy.fail_below))
        throw certificate_error("Q_h restricted to P_{k+2} failed the injectivity certificate", c,
                                op.relative_sigma());
    op.warning = op.relative_sigma() < policy.warn_below;

    Eigen::LLT<Eigen::MatrixXd> llt(op.gram);
    if (llt.info() != Eigen::Success)
        throw certificate_error("lifting Gram matrix is not positive definite", c, op.relative_sigma());
    op.lift_mat = llt.solve(cross.transpose());
    op.qmat = std::move(qmat);
    return op;
}

} // namespace wgl
