#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

using namespace wgl;

namespace {

template <int D>
void check_local_stiffness(const WgDiscretization<D>& disc, int c)
{
    const Eigen::MatrixXd& K = local_stiffness(disc, c);
    const double kmax = K.cwiseAbs().maxCoeff();
    EXPECT_LT((K - K.transpose()).cwiseAbs().maxCoeff(), 1e-13 * kmax);
    EXPECT_LT((K * wgl::testing::constant_local(disc.space(), c)).norm(), 1e-11 * kmax);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e(K);
    const double emax = e.eigenvalues().maxCoeff();
    int kernel = 0;
    for (int i = 0; i < e.eigenvalues().size(); ++i) {
        EXPECT_GT(e.eigenvalues()(i), -1e-10 * emax);
        kernel += e.eigenvalues()(i) < 1e-10 * emax;
    }
    EXPECT_EQ(kernel, 1) << "cell " << c;
}

} // namespace

TEST(LocalStiffness, SymmetricWithConstantKernel)
{
    for (int k = 1; k <= 2; ++k) {
        const auto quad = generate_quad_mesh(2);
        const WgDiscretization<2> dq(quad, k);
        for (int c : {0, 6})
            check_local_stiffness(dq, c);
        const auto mixed = generate_mixed_polygon_mesh(2);
        const WgDiscretization<2> dm(mixed, k);
        for (int c : wgl::testing::sample_cells(mixed.num_cells(), 6))
            check_local_stiffness(dm, c);
    }
    const auto wedge = generate_wedge_mesh(1);
    const WgDiscretization<3> dw(wedge, 1);
    for (int c : {0, 1})
        check_local_stiffness(dw, c);
}

TEST(Assemble, SystemDimensionCount)
{
    const auto mesh = generate_mixed_polygon_mesh(2);
    for (int k = 1; k <= 2; ++k) {
        const WgDiscretization<2> disc(mesh, k);
        const auto sys = assemble(disc, [](const Point<2>&) { return 1.0; });
        EXPECT_EQ(sys.dofs.size, mesh.num_cells() * poly_dim(2, k) + mesh.num_interior_faces() * poly_dim(1, k + 1));
        EXPECT_EQ(sys.stiffness.rows(), sys.dofs.size);
        const Eigen::MatrixXd A(sys.stiffness);
        EXPECT_LT((A - A.transpose()).cwiseAbs().maxCoeff(), 1e-12 * A.cwiseAbs().maxCoeff());
        EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(A).info(), Eigen::Success);
    }
}

TEST(Assemble, ZeroLoad)
{
    const auto mesh = generate_quad_mesh(2);
    const WgDiscretization<2> disc(mesh, 1);
    const auto sys = assemble(disc, [](const Point<2>&) { return 0.0; });
    EXPECT_EQ(sys.load.norm(), 0.0);
}

TEST(Assemble, SingleCellHasOnlyInteriorUnknowns)
{
    const auto mesh = wgl::testing::unit_square_mesh();
    const WgDiscretization<2> disc(mesh, 1);
    const auto sys = assemble(disc, [](const Point<2>&) { return 1.0; });
    EXPECT_EQ(sys.dofs.size, 3);
    const auto u = solve(disc.space(), sys);
    EXPECT_EQ(u.face_coeffs.norm(), 0.0);
}

TEST(Solve, ZeroDataGivesZero)
{
    const auto mesh = generate_quad_mesh(2);
    const WgDiscretization<2> disc(mesh, 1);
    const auto sys = assemble(disc, [](const Point<2>&) { return 0.0; });
    const auto u = solve(disc.space(), sys);
    EXPECT_EQ(u.cell_coeffs.norm(), 0.0);
    EXPECT_EQ(u.face_coeffs.norm(), 0.0);
}

TEST(Solve, ResidualAndGalerkinOrthogonality)
{
    const auto mesh = generate_mixed_polygon_mesh(3);
    const WgDiscretization<2> disc(mesh, 1);
    const double pi = std::numbers::pi;
    auto f = [pi](const Point<2>& x) { return 2 * pi * pi * std::sin(pi * x(0)) * std::sin(pi * x(1)); };
    const auto sys = assemble(disc, f);
    SolveDiagnostics diag;
    const auto u = solve(disc.space(), sys, {}, &diag);
    EXPECT_LE(diag.final_residual, 1e-11);
    for (int f_ : mesh.boundary_faces())
        EXPECT_EQ(u.face(f_).norm(), 0.0);

    // (grad_w u, grad_w v) - (f, v_0) for random v in the homogeneous space,
    // evaluated element by element rather than through the global matrix.
    const auto& V = disc.space();
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
        const auto v = wgl::testing::random_wg(V, rng, true);
        double a = 0.0, l = 0.0, scale = 0.0;
        for (int c = 0; c < mesh.num_cells(); ++c) {
            const Eigen::VectorXd gu = weak_gradient(V, c, u, disc.grad(c));
            const Eigen::VectorXd gv = weak_gradient(V, c, v, disc.grad(c));
            const double ac = gu.dot(disc.basis(c).mass * gv);
            a += ac;
            scale += std::abs(ac);
            const auto rule = V.cell_rule(c);
            for (std::size_t q = 0; q < rule.size(); ++q)
                l += rule.weights[q] * f(rule.points[q]) * V.cell_space(c).eval(rule.points[q], Eigen::VectorXd(v.cell(c)));
        }
        EXPECT_LT(std::abs(a - l), 1e-10 * scale);
    }
}

TEST(Solve, DirectFallbackAgreesWithPcg)
{
    const auto mesh = generate_quad_mesh(3);
    const WgDiscretization<2> disc(mesh, 1);
    const auto sys = assemble(disc, [](const Point<2>& x) { return 1.0 + x(0); });
    SolveDiagnostics d1, d2;
    const auto u1 = solve(disc.space(), sys, {}, &d1);
    SolveOptions forced;
    forced.max_iterations = 1;
    const auto u2 = solve(disc.space(), sys, forced, &d2);
    EXPECT_EQ(d2.method, "direct");
    EXPECT_LT((u1.cell_coeffs - u2.cell_coeffs).norm(), 1e-9 * u1.cell_coeffs.norm());
    forced.allow_direct = false;
    EXPECT_THROW(solve(disc.space(), sys, forced), solver_error);
}

TEST(ShapeCache, SharedOperatorsMatchPerCellConstruction)
{
    const auto mesh = generate_mixed_polygon_mesh(3);
    DiscretizationOptions off;
    off.share_congruent = false;
    const WgDiscretization<2> shared(mesh, 1), own(mesh, 1, off);
    EXPECT_LT(shared.num_shapes(), own.num_shapes());
    EXPECT_EQ(own.num_shapes(), mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& Ks = shared.grad(c).stiffness;
        const auto& Ko = own.grad(c).stiffness;
        EXPECT_LT((Ks - Ko).cwiseAbs().maxCoeff(), 1e-10 * Ko.cwiseAbs().maxCoeff()) << "cell " << c;
        const auto& Ls = shared.lift(c).lift_mat;
        const auto& Lo = own.lift(c).lift_mat;
        EXPECT_LT((Ls - Lo).cwiseAbs().maxCoeff(), 1e-9 * Lo.cwiseAbs().maxCoeff()) << "cell " << c;
        EXPECT_LE(shared.representative(c), c);
    }
}
