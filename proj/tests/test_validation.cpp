#include <gtest/gtest.h>

#include "dephasing/validation.hpp"

using namespace dephasing;

TEST(Validation, DefaultSuitePasses) {
    const auto report = run_validation();
    ASSERT_EQ(report.checks.size(), 6u);
    for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << " max error " << c.max_error;
    EXPECT_TRUE(report.passed());
}

TEST(Validation, CorruptedExponentIsDetected) {
    ValidationOptions o;
    o.gamma0_defect = 1e-3;
    const auto report = run_validation(o);
    EXPECT_FALSE(report.passed());
    bool equivalence_failed = false;
    for (const auto& c : report.checks)
        if (c.name.find("recursion") != std::string::npos) equivalence_failed = !c.passed;
    EXPECT_TRUE(equivalence_failed);
}

TEST(Validation, OracleErrorsOnRequestedGrid) {
    ValidationOptions o;
    o.oracle_s = {0.5, 1.0, 2.0, 3.0, 4.0};
    o.random_configs = 5;
    const auto report = run_validation(o);
    EXPECT_TRUE(report.checks.front().passed);
    EXPECT_LE(report.checks.front().max_error, 1e-6);
}

TEST(Validation, LogGrid) {
    const auto g = log_grid(0.1, 20.0, 21);
    ASSERT_EQ(g.size(), 21u);
    EXPECT_DOUBLE_EQ(g.front(), 0.1);
    EXPECT_NEAR(g.back(), 20.0, 1e-12);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
}
