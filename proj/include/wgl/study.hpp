#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "discretization.hpp"
#include "mesh_generators.hpp"
#include "mesh_io.hpp"
#include "postprocess.hpp"
#include "wg_solver.hpp"

namespace wgl {

enum class Family { quad, mixed, wedge };
enum class Solution { sine2d, sine3d };

inline int dimension_of(Family f) { return f == Family::wedge ? 3 : 2; }
inline int dimension_of(Solution s) { return s == Solution::sine3d ? 3 : 2; }

inline const char* to_string(Family f)
{
    switch (f) {
    case Family::quad: return "quad";
    case Family::mixed: return "mixed";
    case Family::wedge: return "wedge";
    }
    return "?";
}

inline const char* to_string(Solution s) { return s == Solution::sine2d ? "sine2d" : "sine3d"; }

struct StudyConfig
{
    Family family = Family::quad;
    int k = 1;
    int level_min = 3;
    int level_max = 5;
    Solution solution = Solution::sine2d;
    std::string dump_mesh;  ///< file prefix; empty disables
    bool dump_lambda_dims = false;
    bool dump_certificates = false;
    std::string csv_out;
    std::optional<double> solver_tolerance;
    CertificatePolicy certificate;
};

/// u, grad u and f = -Laplace u.
template <int D>
struct ExactSolution
{
    ScalarField<D> u;
    VectorField<D> grad;
    ScalarField<D> f;
};

/// u = prod_i sin(pi x_i), f = D pi^2 u.
template <int D>
ExactSolution<D> sine_solution()
{
    constexpr double pi = std::numbers::pi;
    ExactSolution<D> s;
    s.u = [](const Point<D>& x) {
        double v = 1.0;
        for (int i = 0; i < D; ++i)
            v *= std::sin(pi * x(i));
        return v;
    };
    s.grad = [](const Point<D>& x) {
        Point<D> g;
        for (int i = 0; i < D; ++i) {
            double v = pi * std::cos(pi * x(i));
            for (int j = 0; j < D; ++j)
                if (j != i)
                    v *= std::sin(pi * x(j));
            g(i) = v;
        }
        return g;
    };
    s.f = [u = s.u](const Point<D>& x) { return D * pi * pi * u(x); };
    return s;
}

/// sqrt(sum_T int_T (ref - approx)^2); ref is called as ref(cell, x).
template <int D, typename Ref>
double error_l2(const WgSpace<D>& V, Ref&& ref, const PiecewisePolynomial<D>& approx)
{
    double s = 0.0;
    for (int c = 0; c < V.mesh().num_cells(); ++c) {
        const auto rule = V.cell_rule(c);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double e = ref(c, rule.points[q]) - approx.value(c, rule.points[q]);
            s += rule.weights[q] * e * e;
        }
    }
    return std::sqrt(s);
}

/// Broken H^1 seminorm of the difference; ref_grad is called as ref_grad(cell, x).
template <int D, typename RefGrad>
double error_h1_broken(const WgSpace<D>& V, RefGrad&& ref_grad, const PiecewisePolynomial<D>& approx)
{
    double s = 0.0;
    for (int c = 0; c < V.mesh().num_cells(); ++c) {
        const auto rule = V.cell_rule(c);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Point<D> e = ref_grad(c, rule.points[q]) - approx.gradient(c, rule.points[q]);
            s += rule.weights[q] * e.squaredNorm();
        }
    }
    return std::sqrt(s);
}

/// |||a - b|||.
template <int D>
double error_triple_bar(const WgDiscretization<D>& disc, const WgFunction<D>& a, const WgFunction<D>& b)
{
    return triple_bar(disc, a - b);
}

inline constexpr int num_error_columns = 6;

inline const std::array<const char*, num_error_columns>& error_labels()
{
    static const std::array<const char*, num_error_columns> labels{
        "||u-u_h||_0", "||Q_hu-u_h||_0", "||u-L_hu_h||_0",
        "|u-u_h|_1,h", "|||Q_hu-u_h|||", "|u-L_hu_h|_1,h"};
    return labels;
}

struct LevelResult
{
    int level = 0;
    double h = 0.0;
    int num_cells = 0;
    int num_dofs = 0;
    int num_shapes = 0;
    std::array<double, num_error_columns> errors{};
    std::array<double, num_error_columns> rates{};  ///< NaN on the first level
    SolveDiagnostics solve;
    double min_relative_sigma = 0.0;
    int lift_warnings = 0;
    std::vector<int> lambda_dims;            ///< filled with dump_lambda_dims
    std::vector<double> relative_sigmas;     ///< filled with dump_certificates

    std::optional<std::string> error;  ///< set when the level aborted
    int failed_cell = -1;

    bool ok() const { return !error.has_value(); }
};

struct ConvergenceReport
{
    StudyConfig config;
    std::vector<LevelResult> levels;

    bool ok() const
    {
        for (const auto& l : levels)
            if (!l.ok())
                return false;
        return true;
    }
};

/// log2(e_prev / e_next).
inline double observed_rate(double prev, double next) { return std::log2(prev / next); }

namespace detail {

template <int D>
PolytopalMesh<D> make_mesh(Family family, int level)
{
    if constexpr (D == 2)
        return family == Family::quad ? generate_quad_mesh(level) : generate_mixed_polygon_mesh(level);
    else
        return generate_wedge_mesh(level);
}

template <int D>
LevelResult run_level(const StudyConfig& cfg, int level)
{
    LevelResult r;
    r.level = level;
    const auto mesh = make_mesh<D>(cfg.family, level);
    r.h = mesh.h();
    r.num_cells = mesh.num_cells();
    if (!cfg.dump_mesh.empty()) {
        std::ofstream os(cfg.dump_mesh + "-L" + std::to_string(level) + ".mesh");
        if (!os)
            throw error("cannot open mesh dump file for level " + std::to_string(level));
        write_mesh(os, mesh);
    }

    DiscretizationOptions dopt;
    dopt.certificate = cfg.certificate;
    WgDiscretization<D> disc(mesh, cfg.k, dopt);
    const auto& V = disc.space();
    r.num_shapes = disc.num_shapes();
    r.min_relative_sigma = std::numeric_limits<double>::infinity();
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const double s = disc.lift(c).relative_sigma();
        r.min_relative_sigma = std::min(r.min_relative_sigma, s);
        r.lift_warnings += disc.lift(c).warning ? 1 : 0;
        if (cfg.dump_lambda_dims)
            r.lambda_dims.push_back(disc.basis(c).n_basis);
        if (cfg.dump_certificates)
            r.relative_sigmas.push_back(s);
    }

    const auto exact = sine_solution<D>();
    const auto sys = assemble(disc, exact.f);
    r.num_dofs = sys.dofs.size;
    SolveOptions sopt;
    if (cfg.solver_tolerance)
        sopt.cg_tolerance = *cfg.solver_tolerance;
    const auto uh = solve(V, sys, sopt, &r.solve);

    const auto u0 = interior_part(V, uh);
    const auto lifted = lift(disc, uh);
    const auto qhu = project_Qh(V, exact.u, true);
    const auto q0u = interior_part(V, qhu);
    auto u_ref = [&](int, const Point<D>& x) { return exact.u(x); };
    auto g_ref = [&](int, const Point<D>& x) { return exact.grad(x); };
    auto q0_ref = [&](int c, const Point<D>& x) { return q0u.value(c, x); };

    r.errors[0] = error_l2(V, u_ref, u0);
    r.errors[1] = error_l2(V, q0_ref, u0);
    r.errors[2] = error_l2(V, u_ref, lifted);
    r.errors[3] = error_h1_broken(V, g_ref, u0);
    r.errors[4] = error_triple_bar(disc, qhu, uh);
    r.errors[5] = error_h1_broken(V, g_ref, lifted);
    return r;
}

template <int D>
LevelResult run_level_guarded(const StudyConfig& cfg, int level)
{
    try {
        return run_level<D>(cfg, level);
    }
    catch (const certificate_error& e) {
        LevelResult r;
        r.level = level;
        r.error = e.what();
        r.failed_cell = e.cell();
        return r;
    }
    catch (const rank_error& e) {
        LevelResult r;
        r.level = level;
        r.error = e.what();
        r.failed_cell = e.cell();
        return r;
    }
    catch (const geometry_error& e) {
        LevelResult r;
        r.level = level;
        r.error = e.what();
        r.failed_cell = e.cell();
        return r;
    }
    catch (const std::exception& e) {
        LevelResult r;
        r.level = level;
        r.error = e.what();
        return r;
    }
}

} // namespace detail

/// Generate, discretise, solve, lift and measure every level of the config.
inline ConvergenceReport run_study(const StudyConfig& cfg)
{
    ConvergenceReport rep;
    rep.config = cfg;
    for (int level = cfg.level_min; level <= cfg.level_max; ++level)
        rep.levels.push_back(dimension_of(cfg.family) == 2 ? detail::run_level_guarded<2>(cfg, level)
                                                           : detail::run_level_guarded<3>(cfg, level));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < rep.levels.size(); ++i)
        for (int j = 0; j < num_error_columns; ++j) {
            auto& cur = rep.levels[i];
            cur.rates[j] = (i > 0 && cur.ok() && rep.levels[i - 1].ok())
                               ? observed_rate(rep.levels[i - 1].errors[j], cur.errors[j])
                               : nan;
        }
    return rep;
}

/// 0.7356E-03 style: mantissa in [0.1, 1) with four digits.
inline std::string format_sci(double x)
{
    if (!std::isfinite(x))
        return "nan";
    if (x == 0.0)
        return "0.0000E+00";
    const double ax = std::abs(x);
    int e = static_cast<int>(std::floor(std::log10(ax))) + 1;
    double m = ax / std::pow(10.0, e);
    if (std::round(m * 1e4) >= 1e4) {
        m /= 10.0;
        ++e;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.4fE%+03d", x < 0 ? "-" : "", m, e);
    return buf;
}

inline std::string format_rate(double r)
{
    if (!std::isfinite(r))
        return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", r);
    return buf;
}

/// Two three-column blocks (L2-type, then H1-type), one row per level.
inline void print_table(std::ostream& os, const ConvergenceReport& rep)
{
    const auto& labels = error_labels();
    char line[256];
    for (int half = 0; half < 2; ++half) {
        std::snprintf(line, sizeof line, "%5s | %-12s %5s | %-14s %5s | %-14s %5s\n", half ? "" : "level",
                      labels[3 * half], "rate", labels[3 * half + 1], "rate", labels[3 * half + 2], "rate");
        os << line;
        for (const auto& l : rep.levels) {
            if (!l.ok()) {
                os << std::string(5 - std::min<std::size_t>(5, std::to_string(l.level).size()), ' ')
                   << l.level << " | failed: " << *l.error << "\n";
                continue;
            }
            std::snprintf(line, sizeof line, "%5d | %-12s %5s | %-14s %5s | %-14s %5s\n", l.level,
                          format_sci(l.errors[3 * half]).c_str(), format_rate(l.rates[3 * half]).c_str(),
                          format_sci(l.errors[3 * half + 1]).c_str(),
                          format_rate(l.rates[3 * half + 1]).c_str(),
                          format_sci(l.errors[3 * half + 2]).c_str(),
                          format_rate(l.rates[3 * half + 2]).c_str());
            os << line;
        }
    }
}

/// level,h,err1,rate1,...,err6,rate6. Rates of the first level are "nan".
inline void write_csv(std::ostream& os, const ConvergenceReport& rep)
{
    os << "level,h";
    for (int j = 1; j <= num_error_columns; ++j)
        os << ",err" << j << ",rate" << j;
    os << "\n";
    char buf[64];
    for (const auto& l : rep.levels) {
        os << l.level;
        std::snprintf(buf, sizeof buf, ",%.17g", l.h);
        os << buf;
        for (int j = 0; j < num_error_columns; ++j) {
            if (l.ok())
                std::snprintf(buf, sizeof buf, ",%.10e", l.errors[j]);
            else
                std::snprintf(buf, sizeof buf, ",nan");
            os << buf;
            if (std::isfinite(l.rates[j]))
                std::snprintf(buf, sizeof buf, ",%.6f", l.rates[j]);
            else
                std::snprintf(buf, sizeof buf, ",nan");
            os << buf;
        }
        os << "\n";
    }
}

inline std::string csv_string(const ConvergenceReport& rep)
{
    std::ostringstream os;
    write_csv(os, rep);
    return os.str();
}

} // namespace wgl
