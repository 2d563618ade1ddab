#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "study.hpp"

namespace wgl {

/// Runs a validated study, prints the table (and requested diagnostics) to
/// `out`, writes the CSV if asked. Returns 0 when every level succeeded.
inline int run_main(const StudyConfig& cfg, std::ostream& out, std::ostream& err)
{
    out << "family " << to_string(cfg.family) << ", k = " << cfg.k << ", solution " << to_string(cfg.solution)
        << ", levels " << cfg.level_min << ".." << cfg.level_max << "\n";

    const auto rep = run_study(cfg);

    char line[160];
    for (const auto& l : rep.levels) {
        if (!l.ok())
            continue;
        std::snprintf(line, sizeof line, "level %d: h = %.4e, cells = %d, dofs = %d, shapes = %d, solver = %s\n",
                      l.level, l.h, l.num_cells, l.num_dofs, l.num_shapes, l.solve.method.c_str());
        out << line;
    }
    print_table(out, rep);

    for (const auto& l : rep.levels) {
        if (cfg.dump_lambda_dims && l.ok()) {
            out << "lambda dims, level " << l.level << ":";
            for (int d : l.lambda_dims)
                out << " " << d;
            out << "\n";
        }
        if (cfg.dump_certificates && l.ok()) {
            out << "certificates, level " << l.level << ":";
            for (double s : l.relative_sigmas) {
                std::snprintf(line, sizeof line, " %.3e", s);
                out << line;
            }
            out << "\n";
        }
        if (l.ok() && l.lift_warnings > 0)
            err << "warning: level " << l.level << ": " << l.lift_warnings
                << " cell(s) with a weak lifting certificate\n";
    }

    if (!cfg.csv_out.empty()) {
        std::ofstream os(cfg.csv_out, std::ios::binary);
        if (!os) {
            err << "error: cannot open " << cfg.csv_out << " for writing\n";
            return 1;
        }
        write_csv(os, rep);
    }

    int status = 0;
    for (const auto& l : rep.levels)
        if (!l.ok()) {
            err << "error: level " << l.level << ": " << *l.error << "\n";
            if (l.failed_cell >= 0)
                err << "failed cell: " << l.failed_cell << "\n";
            status = 1;
        }
    return status;
}

/// Full command-line entry: parse, run, map errors to exit codes
/// (0 success, 1 study failure, 2 configuration error).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    StudyConfig cfg;
    try {
        cfg = parse_config(args);
    }
    catch (const help_requested& h) {
        out << h.what();
        return 0;
    }
    catch (const config_error& e) {
        err << "configuration error: " << e.what() << "\n";
        return 2;
    }
    try {
        return run_main(cfg, out, err);
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace wgl
