#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "discretization.hpp"
#include "errors.hpp"

namespace wgl {

/// Global numbering: every cell block, then the blocks of interior faces.
/// Boundary faces carry no unknowns.
struct DofMap
{
    int cell_block = 0;
    int face_block = 0;
    int num_cell_dofs = 0;
    std::vector<int> face_offset;  ///< -1 on boundary faces
    int size = 0;

    template <int D>
    static DofMap build(const WgSpace<D>& V)
    {
        DofMap m;
        const auto& mesh = V.mesh();
        m.cell_block = V.cell_block();
        m.face_block = V.face_block();
        m.num_cell_dofs = mesh.num_cells() * m.cell_block;
        m.face_offset.assign(mesh.num_faces(), -1);
        int next = m.num_cell_dofs;
        for (int f = 0; f < mesh.num_faces(); ++f)
            if (!mesh.face(f).is_boundary()) {
                m.face_offset[f] = next;
                next += m.face_block;
            }
        m.size = next;
        return m;
    }

    /// Global index of each local dof of cell c, -1 where eliminated.
    template <int D>
    std::vector<int> local_to_global(const PolytopalMesh<D>& mesh, int c) const
    {
        std::vector<int> out;
        for (int i = 0; i < cell_block; ++i)
            out.push_back(c * cell_block + i);
        for (int f : mesh.cell(c).faces)
            for (int i = 0; i < face_block; ++i)
                out.push_back(face_offset[f] < 0 ? -1 : face_offset[f] + i);
        return out;
    }
};

struct GlobalSystem
{
    DofMap dofs;
    Eigen::SparseMatrix<double> stiffness;
    Eigen::VectorXd load;
};

/// Local stiffness (grad_w phi_i, grad_w phi_j)_T over the local dofs of c.
template <int D>
const Eigen::MatrixXd& local_stiffness(const WgDiscretization<D>& disc, int c)
{
    return disc.grad(c).stiffness;
}

/// Assembles (grad_w u, grad_w v) = (f, v_0) on V_h^0.
template <int D, typename F>
GlobalSystem assemble(const WgDiscretization<D>& disc, F&& f)
{
    const auto& V = disc.space();
    const auto& mesh = V.mesh();
    GlobalSystem sys;
    sys.dofs = DofMap::build(V);
    sys.load = Eigen::VectorXd::Zero(sys.dofs.size);

    std::vector<Eigen::Triplet<double>> trip;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto idx = sys.dofs.local_to_global(mesh, c);
        const Eigen::MatrixXd& K = local_stiffness(disc, c);
        for (int i = 0; i < static_cast<int>(idx.size()); ++i) {
            if (idx[i] < 0)
                continue;
            for (int j = 0; j < static_cast<int>(idx.size()); ++j)
                if (idx[j] >= 0 && K(i, j) != 0.0)
                    trip.emplace_back(idx[i], idx[j], K(i, j));
        }
        const auto rule = V.cell_rule(c);
        const auto& pk = V.cell_space(c);
        Eigen::VectorXd lc = Eigen::VectorXd::Zero(pk.size());
        for (std::size_t q = 0; q < rule.size(); ++q)
            lc += rule.weights[q] * f(rule.points[q]) * pk.eval(rule.points[q]);
        sys.load.segment(c * sys.dofs.cell_block, sys.dofs.cell_block) = lc;
    }
    sys.stiffness.resize(sys.dofs.size, sys.dofs.size);
    sys.stiffness.setFromTriplets(trip.begin(), trip.end());
    return sys;
}

struct SolveOptions
{
    double cg_tolerance = 1e-13;
    double residual_tolerance = 1e-11;
    int max_iterations = 0;  ///< 0: 10 * size
    bool allow_direct = true;
};

struct SolveDiagnostics
{
    std::string method;  ///< "pcg" or "direct"
    int cg_iterations = 0;
    double cg_residual = 0.0;    ///< relative, as measured after PCG
    double final_residual = 0.0; ///< relative, of the returned solution
    bool cg_converged = false;
};

/// Unique solution u_h in V_h^0; boundary face coefficients are zero.
template <int D>
WgFunction<D> solve(const WgSpace<D>& V, const GlobalSystem& sys, const SolveOptions& opt = {},
                    SolveDiagnostics* diag = nullptr)
{
    SolveDiagnostics d;
    const double bnorm = sys.load.norm();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.dofs.size);
    auto rel_residual = [&](const Eigen::VectorXd& y) {
        return bnorm > 0 ? (sys.stiffness * y - sys.load).norm() / bnorm : y.norm();
    };

    if (bnorm > 0) {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                 Eigen::DiagonalPreconditioner<double>>
            cg;
        cg.setTolerance(opt.cg_tolerance);
        cg.setMaxIterations(opt.max_iterations > 0 ? opt.max_iterations : 10 * sys.dofs.size);
        cg.compute(sys.stiffness);
        x = cg.solve(sys.load);
        d.method = "pcg";
        d.cg_iterations = static_cast<int>(cg.iterations());
        d.cg_residual = rel_residual(x);
        d.cg_converged = cg.info() == Eigen::Success && d.cg_residual <= opt.residual_tolerance;
        if (!d.cg_converged) {
            if (!opt.allow_direct)
                throw solver_error("PCG did not reach the residual tolerance (relative residual "
                                   + std::to_string(d.cg_residual) + ")");
            Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sys.stiffness);
            if (ldlt.info() != Eigen::Success)
                throw solver_error("direct factorization of the WG system failed");
            x = ldlt.solve(sys.load);
            d.method = "direct";
        }
    }
    else {
        d.method = "pcg";
        d.cg_converged = true;
    }
    d.final_residual = rel_residual(x);
    if (d.final_residual > opt.residual_tolerance)
        throw solver_error("WG solve residual " + std::to_string(d.final_residual)
                           + " exceeds tolerance via " + d.method);
    if (diag)
        *diag = d;

    WgFunction<D> u(V);
    u.cell_coeffs = x.head(sys.dofs.num_cell_dofs);
    for (int f = 0; f < V.mesh().num_faces(); ++f)
        if (sys.dofs.face_offset[f] >= 0)
            u.face(f) = x.segment(sys.dofs.face_offset[f], sys.dofs.face_block);
    return u;
}

} // namespace wgl
