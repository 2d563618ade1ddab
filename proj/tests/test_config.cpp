#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

using namespace wgl;

namespace {

std::string failing_field(const std::vector<std::string>& args)
{
    try {
        parse_config(args);
    }
    catch (const config_error& e) {
        return e.field();
    }
    return "";
}

} // namespace

TEST(ParseConfig, QuadLevelRange)
{
    const auto cfg = parse_config({"--family", "quad", "--k", "1", "--levels", "3..5"});
    EXPECT_EQ(cfg.family, Family::quad);
    EXPECT_EQ(cfg.k, 1);
    EXPECT_EQ(cfg.level_min, 3);
    EXPECT_EQ(cfg.level_max, 5);
    EXPECT_EQ(cfg.solution, Solution::sine2d);
}

TEST(ParseConfig, Defaults)
{
    const auto q = parse_config({});
    EXPECT_EQ(q.family, Family::quad);
    EXPECT_EQ(q.level_min, 3);
    EXPECT_EQ(q.level_max, 5);
    const auto w = parse_config({"--family", "wedge"});
    EXPECT_EQ(w.solution, Solution::sine3d);
    EXPECT_EQ(w.level_min, 2);
    EXPECT_EQ(w.level_max, 4);
}

TEST(ParseConfig, FullLevelsFlag)
{
    const auto a = parse_config({"--paper-levels"});
    EXPECT_EQ(a.level_min, 5);
    EXPECT_EQ(a.level_max, 7);
    const auto b = parse_config({"--paper-levels", "--k", "2"});
    EXPECT_EQ(b.level_min, 4);
    EXPECT_EQ(b.level_max, 6);
    const auto c = parse_config({"--paper-levels", "--family", "wedge"});
    EXPECT_EQ(c.level_min, 4);
    EXPECT_EQ(c.level_max, 6);
    EXPECT_EQ(failing_field({"--paper-levels", "--levels", "3..4"}), "levels");
}

TEST(ParseConfig, SingleLevel)
{
    const auto cfg = parse_config({"--levels", "4"});
    EXPECT_EQ(cfg.level_min, 4);
    EXPECT_EQ(cfg.level_max, 4);
}

TEST(ParseConfig, DimensionMismatch)
{
    EXPECT_EQ(failing_field({"--family", "wedge", "--solution", "sine2d"}), "solution");
    EXPECT_EQ(failing_field({"--family", "quad", "--solution", "sine3d"}), "solution");
}

TEST(ParseConfig, DegreeValidation)
{
    EXPECT_EQ(failing_field({"--k", "0"}), "k");
    EXPECT_EQ(failing_field({"--k", "-2"}), "k");
    EXPECT_EQ(failing_field({"--k", "two"}), "k");
    EXPECT_EQ(failing_field({"--k", "9"}), "k");
}

TEST(ParseConfig, UnknownFamilyAndMalformedRange)
{
    EXPECT_EQ(failing_field({"--family", "hex"}), "family");
    EXPECT_EQ(failing_field({"--levels", "5..3"}), "levels");
    EXPECT_EQ(failing_field({"--levels", "3-5"}), "levels");
    EXPECT_EQ(failing_field({"--levels", "..5"}), "levels");
    EXPECT_EQ(failing_field({"--levels", "0..2"}), "levels");
    EXPECT_EQ(failing_field({"--solver-tol", "-1"}), "solver-tol");
    EXPECT_EQ(failing_field({"--bogus"}), "arguments");
}

TEST(ParseConfig, FlagsAndOutputs)
{
    const auto cfg = parse_config({"--dump-lambda-dims", "--dump-certificates", "--dump-mesh", "m", "--csv-out",
                                   "t1.csv", "--solver-tol", "1e-12"});
    EXPECT_TRUE(cfg.dump_lambda_dims);
    EXPECT_TRUE(cfg.dump_certificates);
    EXPECT_EQ(cfg.dump_mesh, "m");
    EXPECT_EQ(cfg.csv_out, "t1.csv");
    ASSERT_TRUE(cfg.solver_tolerance.has_value());
    EXPECT_DOUBLE_EQ(*cfg.solver_tolerance, 1e-12);
}

TEST(ParseConfig, ConfigFileWithFlagOverride)
{
    const std::string path = ::testing::TempDir() + "wgl_config_test.ini";
    {
        std::ofstream os(path);
        os << "family=mixed\nk=2\nlevels=2..3\n";
    }
    const auto a = parse_config({"--config", path});
    EXPECT_EQ(a.family, Family::mixed);
    EXPECT_EQ(a.k, 2);
    EXPECT_EQ(a.level_max, 3);
    const auto b = parse_config({"--config", path, "--k", "1"});
    EXPECT_EQ(b.k, 1);
    EXPECT_EQ(b.family, Family::mixed);
    std::remove(path.c_str());
}

TEST(ParseConfig, HelpIsNotAnError)
{
    EXPECT_THROW(parse_config({"--help"}), help_requested);
    EXPECT_NE(config_help().find("--family"), std::string::npos);
}

TEST(RunCli, ExitCodes)
{
    std::ostringstream out, err;
    EXPECT_EQ(run_cli({"--family", "wedge", "--solution", "sine2d"}, out, err), 2);
    EXPECT_NE(err.str().find("solution"), std::string::npos);
    std::ostringstream out2, err2;
    EXPECT_EQ(run_cli({"--help"}, out2, err2), 0);
}

TEST(RunCli, DefaultStyleRunPrintsSixColumnsAndCsv)
{
    const std::string csv = ::testing::TempDir() + "wgl_cli_t1.csv";
    std::ostringstream out, err;
    EXPECT_EQ(run_cli({"--levels", "2..3", "--csv-out", csv}, out, err), 0);
    for (const char* label : error_labels())
        EXPECT_NE(out.str().find(label), std::string::npos) << label;
    std::ifstream is(csv);
    std::string line;
    int lines = 0;
    while (std::getline(is, line))
        ++lines;
    EXPECT_EQ(lines, 3);
    std::remove(csv.c_str());
}

TEST(RunCli, CertificateFailureReportsCell)
{
    StudyConfig cfg;
    cfg.level_min = cfg.level_max = 1;
    cfg.certificate.fail_below = 2.0;
    std::ostringstream out, err;
    EXPECT_NE(run_main(cfg, out, err), 0);
    EXPECT_NE(err.str().find("failed cell: 0"), std::string::npos) << err.str();
}

TEST(RunCli, MeshDumpReadsBack)
{
    const std::string prefix = ::testing::TempDir() + "wgl_dump";
    StudyConfig cfg;
    cfg.family = Family::mixed;
    cfg.level_min = cfg.level_max = 2;
    cfg.dump_mesh = prefix;
    std::ostringstream out, err;
    ASSERT_EQ(run_main(cfg, out, err), 0);
    std::ifstream is(prefix + "-L2.mesh");
    const auto m = read_mesh<2>(is);
    EXPECT_EQ(m.num_cells(), generate_mixed_polygon_mesh(2).num_cells());
    std::remove((prefix + "-L2.mesh").c_str());
}
