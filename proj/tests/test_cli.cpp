#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "dephasing/io.hpp"

namespace {

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(DEPHASING_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, {}};
    std::string out;
    std::array<char, 4096> buf{};
    while (const auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

dephasing::io::Table csv(const std::string& text) {
    std::istringstream in(text);
    return dephasing::io::read_csv(in);
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("dephasing_cli_test_" + name);
}

}  // namespace

TEST(Cli, FreeOhmicTrajectory) {
    const auto r = cli("trajectory --s 1 --horizon 10");
    ASSERT_EQ(r.code, 0);
    const auto t = csv(r.out);
    const auto ti = t.column("t");
    const auto ci = t.column("coherence");
    ASSERT_EQ(t.rows.size(), 2001u);
    for (const auto& row : t.rows) EXPECT_NEAR(row[ci], 1.0 / std::sqrt(1.0 + row[ti] * row[ti]), 1e-14);
}

TEST(Cli, SpacingLongerThanHorizonIsFree) {
    const auto pulsed = cli("trajectory --s 1 --dt 0.3 --horizon 0.2");
    const auto free = cli("trajectory --s 1 --horizon 0.2");
    ASSERT_EQ(pulsed.code, 0);
    EXPECT_EQ(pulsed.out, free.out);
}

TEST(Cli, LongSpacingTrajectoryDropsAfterFirstPulse) {
    const auto r = cli("trajectory --s 4 --dt 3 --horizon 10 --format json");
    ASSERT_EQ(r.code, 0);
    const auto doc = nlohmann::json::parse(r.out);
    double at_pulse = 0.0;
    double later = 1.0;
    for (const auto& rec : doc["records"]) {
        const double t = rec["t"];
        if (t == 3.0) at_pulse = rec["coherence"];
        if (std::abs(t - 5.0) < 1e-12) later = rec["coherence"];
    }
    EXPECT_GT(at_pulse, 0.1);
    EXPECT_LT(later, 0.1 * at_pulse);
}

TEST(Cli, MeasureExamples) {
    auto r = cli("measure --s 1 --free --blp");
    ASSERT_EQ(r.code, 0);
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["records"][0]["blp"].get<double>(), 0.0);
    EXPECT_TRUE(doc["records"][0]["efficiency"].is_null());

    r = cli("measure --s 3 --free --stationary");
    ASSERT_EQ(r.code, 0);
    doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["records"][0]["stationary"].get<double>(), std::exp(-1.0), 1e-12);

    r = cli("measure --s 4 --dt 0.3 --t-final 9.9 --efficiency");
    ASSERT_EQ(r.code, 0);
    doc = nlohmann::json::parse(r.out);
    const double d = doc["records"][0]["efficiency"];
    EXPECT_GT(d, 0.0);
    EXPECT_LT(d, 1.0);
    EXPECT_EQ(doc["records"][0]["n_pulses"].get<double>(), 33.0);
}

TEST(Cli, SinglePointSweepEqualsMeasure) {
    const auto sweep = cli("sweep --s 3.3 --dt 0.5 --n max --t-final 7 --format json");
    const auto measure = cli("measure --s 3.3 --dt 0.5 --t-final 7 --blp --efficiency --stationary");
    ASSERT_EQ(sweep.code, 0);
    ASSERT_EQ(measure.code, 0);
    const auto a = nlohmann::json::parse(sweep.out)["records"][0];
    const auto b = nlohmann::json::parse(measure.out)["records"][0];
    for (const char* key : {"s", "dt", "n_pulses", "t_final", "blp", "efficiency", "stationary"})
        EXPECT_EQ(a[key], b[key]) << key;
}

TEST(Cli, SweepCsvSchema) {
    const auto r = cli("sweep --s 1:4:0.5 --dt 0.3 --t-final 9.9 --efficiency");
    ASSERT_EQ(r.code, 0);
    const auto t = csv(r.out);
    EXPECT_EQ(t.columns, dephasing::io::sweep_columns());
    EXPECT_EQ(t.rows.size(), 7u);
}

TEST(Cli, OptimalSFree) {
    const auto r = cli("optimal-s --free");
    ASSERT_EQ(r.code, 0);
    const auto t = csv(r.out);
    EXPECT_NEAR(t.rows.at(0)[t.column("s_star")], 2.46, 0.01);
}

TEST(Cli, FigureTwoColumns) {
    const auto r = cli("figure fig2 --workers 1");
    ASSERT_EQ(r.code, 0);
    const auto t = csv(r.out);
    EXPECT_EQ(t.columns.size(), 5u);
    EXPECT_EQ(t.columns[1], "blp_free");
    EXPECT_EQ(t.rows.size(), 46u);
}

TEST(Cli, ValidateAndNegativeControl) {
    auto r = cli("validate");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    r = cli("validate --corrupt-gamma0 0.001");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
    EXPECT_NE(r.out.find("recursion"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli("trajectory --s -1 --horizon 10").code, 2);
    EXPECT_EQ(cli("trajectory --s 1 --dt 0.3 --pulse-times 1,2 --horizon 10").code, 2);
    EXPECT_EQ(cli("figure fig9").code, 2);
    EXPECT_EQ(cli("nonsense").code, 2);
    EXPECT_EQ(cli("trajectory --s 1 --horizon 10 --out /nonexistent/dir/out.csv").code, 3);
    EXPECT_EQ(cli("trajectory --config /nonexistent/recipe.cfg").code, 3);
}

TEST(Cli, ConfigFileWithOverrides) {
    const auto cfg = temp_file("recipe.cfg");
    const auto out = temp_file("out.csv");
    {
        std::ofstream f(cfg);
        f << "# long-spacing recipe\ns = 4\ndt = 3\nhorizon = 10\ngrid = 100\n";
    }
    auto r = cli("trajectory --config " + cfg.string() + " --s 1 --out " + out.string());
    ASSERT_EQ(r.code, 0);
    std::ifstream in(out);
    const auto t = dephasing::io::read_csv(in);
    const auto direct = csv(cli("trajectory --s 1 --dt 3 --horizon 10 --grid 100").out);
    EXPECT_EQ(t.rows, direct.rows);
    std::filesystem::remove(cfg);
    std::filesystem::remove(out);
}
