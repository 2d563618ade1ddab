#pragma once

#include <algorithm>
#include <charconv>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "errors.hpp"
#include "study.hpp"

namespace wgl {

/// Thrown by parse_config for --help; what() is the usage text.
class help_requested : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct RawConfig
{
    std::string family = "quad";
    std::string k = "1";
    std::string levels;
    std::string solution;
    bool paper_levels = false;
    std::string dump_mesh;
    bool dump_lambda_dims = false;
    bool dump_certificates = false;
    std::string csv_out;
    std::string solver_tol;
};

inline void describe(CLI::App& app, RawConfig& raw)
{
    app.description("Weak Galerkin P_k-P_{k+1} Poisson solver with P_{k+2} lifting: convergence studies");
    app.set_config("--config", "", "Read options from an INI/TOML file (command-line flags win)");
    app.add_option("--family", raw.family, "Mesh family: quad, mixed or wedge");
    app.add_option("--k", raw.k, "Interior polynomial degree (>= 1)");
    app.add_option("--levels", raw.levels, "Inclusive level range, e.g. 3..5 (default 3..5 in 2D, 2..4 in 3D)");
    app.add_flag("--paper-levels", raw.paper_levels, "Use the fine published level ranges");
    app.add_option("--solution", raw.solution, "Exact solution: sine2d or sine3d (default follows family)");
    app.add_option("--dump-mesh", raw.dump_mesh, "Write each level's mesh to PREFIX-L<level>.mesh");
    app.add_flag("--dump-lambda-dims", raw.dump_lambda_dims, "Print the test-space dimension of every cell");
    app.add_flag("--dump-certificates", raw.dump_certificates,
                 "Print the relative injectivity certificate of every cell");
    app.add_option("--csv-out", raw.csv_out, "Write the convergence table as CSV");
    app.add_option("--solver-tol", raw.solver_tol, "PCG relative tolerance (default 1e-13)");
}

inline int parse_int(const std::string& field, const std::string& s)
{
    int v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end)
        throw config_error(field, "'" + s + "' is not an integer");
    return v;
}

inline std::pair<int, int> parse_levels(const std::string& s)
{
    const auto dots = s.find("..");
    int lo = 0, hi = 0;
    try {
        if (dots == std::string::npos)
            lo = hi = parse_int("levels", s);
        else {
            lo = parse_int("levels", s.substr(0, dots));
            hi = parse_int("levels", s.substr(dots + 2));
        }
    }
    catch (const config_error&) {
        throw config_error("levels", "malformed range '" + s + "' (expected N or A..B)");
    }
    if (lo < 1 || hi > 10 || lo > hi)
        throw config_error("levels", "range '" + s + "' must satisfy 1 <= A <= B <= 10");
    return {lo, hi};
}

} // namespace detail

inline std::string config_help()
{
    CLI::App app;
    detail::RawConfig raw;
    detail::describe(app, raw);
    return app.help();
}

/// Parses command-line style arguments (program name excluded) into a
/// validated StudyConfig. Errors name the offending field.
inline StudyConfig parse_config(std::vector<std::string> args)
{
    CLI::App app;
    detail::RawConfig raw;
    detail::describe(app, raw);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    }
    catch (const CLI::CallForHelp&) {
        throw help_requested(app.help());
    }
    catch (const CLI::ParseError& e) {
        throw config_error("arguments", e.what());
    }

    StudyConfig cfg;
    if (raw.family == "quad")
        cfg.family = Family::quad;
    else if (raw.family == "mixed")
        cfg.family = Family::mixed;
    else if (raw.family == "wedge")
        cfg.family = Family::wedge;
    else
        throw config_error("family", "unknown family '" + raw.family + "' (expected quad, mixed or wedge)");

    cfg.k = detail::parse_int("k", raw.k);
    if (cfg.k < 1)
        throw config_error("k", "polynomial degree must be >= 1, got " + raw.k);
    if (2 * (cfg.k + 2) + 2 > max_quadrature_degree)
        throw config_error("k", "degree " + raw.k + " needs quadrature beyond degree "
                                    + std::to_string(max_quadrature_degree));

    const int dim = dimension_of(cfg.family);
    if (raw.solution.empty())
        cfg.solution = dim == 2 ? Solution::sine2d : Solution::sine3d;
    else if (raw.solution == "sine2d")
        cfg.solution = Solution::sine2d;
    else if (raw.solution == "sine3d")
        cfg.solution = Solution::sine3d;
    else
        throw config_error("solution", "unknown solution '" + raw.solution + "' (expected sine2d or sine3d)");
    if (dimension_of(cfg.solution) != dim)
        throw config_error("solution", std::string("dimension mismatch: ") + to_string(cfg.solution) + " is "
                                           + std::to_string(dimension_of(cfg.solution)) + "D but family "
                                           + to_string(cfg.family) + " is " + std::to_string(dim) + "D");

    if (!raw.levels.empty() && raw.paper_levels)
        throw config_error("levels", "--levels and --paper-levels are mutually exclusive");
    if (!raw.levels.empty())
        std::tie(cfg.level_min, cfg.level_max) = detail::parse_levels(raw.levels);
    else if (raw.paper_levels) {
        const bool coarse = dim == 3 || cfg.k >= 2;
        cfg.level_min = coarse ? 4 : 5;
        cfg.level_max = coarse ? 6 : 7;
    }
    else {
        cfg.level_min = dim == 2 ? 3 : 2;
        cfg.level_max = dim == 2 ? 5 : 4;
    }

    if (!raw.solver_tol.empty()) {
        double tol = 0.0;
        try {
            std::size_t pos = 0;
            tol = std::stod(raw.solver_tol, &pos);
            if (pos != raw.solver_tol.size())
                throw std::invalid_argument("trailing");
        }
        catch (const std::exception&) {
            throw config_error("solver-tol", "'" + raw.solver_tol + "' is not a number");
        }
        if (!(tol > 0.0 && tol < 1.0))
            throw config_error("solver-tol", "must lie in (0, 1)");
        cfg.solver_tolerance = tol;
    }

    cfg.dump_mesh = raw.dump_mesh;
    cfg.dump_lambda_dims = raw.dump_lambda_dims;
    cfg.dump_certificates = raw.dump_certificates;
    cfg.csv_out = raw.csv_out;
    return cfg;
}

} // namespace wgl
