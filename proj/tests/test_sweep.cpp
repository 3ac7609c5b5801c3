#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include <gtest/gtest.h>

#include "dephasing/figures.hpp"
#include "dephasing/sweep.hpp"

using namespace dephasing;

namespace {

bool same_report(const MeasureReport& a, const MeasureReport& b) {
    return a.blp == b.blp && a.blp_truncation == b.blp_truncation && a.efficiency == b.efficiency &&
           a.t_final == b.t_final && a.stationary_coherence == b.stationary_coherence &&
           a.backflow_intervals == b.backflow_intervals;
}

SweepSpec small_spec() {
    SweepSpec sw;
    sw.s_grid = {1.0, 2.5, 4.0};
    sw.dt_grid = {0.3, 1.0};
    sw.n_values = {PulseCount{}, PulseCount{3}};
    sw.t_final = {5.0, 9.9};
    return sw;
}

}  // namespace

TEST(SweepSpec, Validation) {
    auto sw = small_spec();
    EXPECT_NO_THROW(sw.validate());
    sw.s_grid = {};
    EXPECT_THROW(sw.validate(), std::invalid_argument);
    sw = small_spec();
    sw.s_grid = {1.0, -2.0};
    EXPECT_THROW(sw.validate(), std::invalid_argument);
    sw = small_spec();
    sw.dt_grid = {};
    EXPECT_THROW(sw.validate(), std::invalid_argument);
    sw.n_values = {PulseCount{0}};
    EXPECT_NO_THROW(sw.validate());
    sw = small_spec();
    sw.t_final = {0.0};
    EXPECT_THROW(sw.validate(), std::invalid_argument);
}

TEST(RunSweep, RecordCountAndOrdering) {
    const auto sw = small_spec();
    const auto r = run_sweep(sw);
    ASSERT_EQ(r.records.size(), 3u * 2u * 2u * 2u);
    std::size_t i = 0;
    for (double dt : sw.dt_grid)
        for (const auto& n : sw.n_values)
            for (double tf : sw.t_final)
                for (double s : sw.s_grid) {
                    const auto& rec = r.records[i++];
                    EXPECT_EQ(rec.s, s);
                    EXPECT_EQ(rec.dt, dt);
                    EXPECT_EQ(rec.t_final, tf);
                    EXPECT_FALSE(rec.error);
                    EXPECT_EQ(rec.n_pulses, n ? *n : periodic_sequence(dt, tf).size());
                }
}

TEST(RunSweep, DecreasingEfficiencyBeyondOhmicityTwo) {
    SweepSpec sw;
    sw.s_grid = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
    sw.dt_grid = {0.3};
    sw.t_final = {9.9};
    sw.select = {false, true, false};
    const auto r = run_sweep(sw);
    ASSERT_EQ(r.records.size(), 7u);
    for (std::size_t i = 3; i < r.records.size(); ++i)
        EXPECT_LT(*r.records[i].report.efficiency, *r.records[i - 1].report.efficiency);
}

TEST(RunSweep, SinglePointEqualsDirectEvaluation) {
    SweepSpec sw;
    sw.s_grid = {3.3};
    sw.dt_grid = {0.5};
    sw.t_final = {7.0};
    const auto r = run_sweep(sw);
    ASSERT_EQ(r.records.size(), 1u);
    const auto seq = periodic_sequence(0.5, 7.0);
    MeasureOptions opts;
    opts.t_final = 7.0;
    const auto direct = evaluate_measures(BathSpec(3.3), seq, opts);
    EXPECT_TRUE(same_report(r.records[0].report, direct));
}

TEST(RunSweep, SerialAndParallelAreIdentical) {
    auto sw = small_spec();
    sw.workers = 1;
    const auto serial = run_sweep(sw);
    sw.workers = 4;
    const auto parallel = run_sweep(sw);
    const auto again = run_sweep(sw);
    ASSERT_EQ(serial.records.size(), parallel.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i) {
        EXPECT_TRUE(same_report(serial.records[i].report, parallel.records[i].report)) << i;
        EXPECT_TRUE(same_report(again.records[i].report, parallel.records[i].report)) << i;
    }
}

TEST(RunSweep, PerPointFailuresAreRecorded) {
    SweepSpec sw;
    sw.s_grid = {2.0, 3.0};
    sw.dt_grid = {3.0};
    sw.n_values = {PulseCount{2}, PulseCount{5}};  // 5 pulses do not fit in 9.9
    sw.t_final = {9.9};
    const auto r = run_sweep(sw);
    ASSERT_EQ(r.records.size(), 4u);
    EXPECT_FALSE(r.records[0].error);
    EXPECT_FALSE(r.records[1].error);
    EXPECT_TRUE(r.records[2].error);
    EXPECT_TRUE(r.records[3].error);
    EXPECT_EQ(r.optima.size(), 1u);
}

TEST(RunSweep, FreeOnlyNeedsNoSpacing) {
    SweepSpec sw;
    sw.s_grid = {2.5, 3.0};
    sw.n_values = {PulseCount{0}};
    sw.t_final = {10.0};
    const auto r = run_sweep(sw);
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_EQ(r.records[1].dt, 0.0);
    EXPECT_EQ(r.records[1].n_pulses, 0u);
    EXPECT_NEAR(*r.records[1].report.stationary_coherence, std::exp(-1.0), 1e-12);
}

TEST(RunSweep, OptimaAgreeWithRecords) {
    auto sw = small_spec();
    sw.s_grid = linear_grid(1.5, 4.0, 0.25);
    const auto r = run_sweep(sw);
    const std::size_t slice = sw.s_grid.size();
    ASSERT_EQ(r.optima.size(), r.records.size() / slice);
    for (std::size_t k = 0; k < r.optima.size(); ++k) {
        double best = -1.0;
        for (std::size_t i = k * slice; i < (k + 1) * slice; ++i)
            best = std::max(best, *r.records[i].report.stationary_coherence);
        EXPECT_EQ(r.optima[k].value, best);
        EXPECT_EQ(r.optima[k].dt, r.records[k * slice].dt);
    }
}

TEST(OptimalS, FreeOptimum) {
    const auto opt = optimal_s(0.0, 0);
    ASSERT_TRUE(opt);
    EXPECT_NEAR(opt->s, 2.46, 0.01);
    EXPECT_NEAR(opt->coherence, std::exp(-std::tgamma(opt->s - 1.0)), 1e-12);
    EXPECT_FALSE(opt->tie);
}

TEST(OptimalS, ShortSpacingPrefersNonMarkovianBath) {
    for (std::size_t n : {1u, 2u, 5u, 10u, 20u, 30u}) {
        const auto opt = optimal_s(0.3, n);
        ASSERT_TRUE(opt) << n;
        EXPECT_GT(opt->s, 2.0) << n;
    }
}

TEST(OptimalS, LongSpacingPrefersMarkovianBath) {
    const auto opt = optimal_s(3.0, 10, {}, 0.0);
    ASSERT_TRUE(opt);
    EXPECT_LT(opt->s, 2.0);
}

TEST(OptimalS, DominatesEveryGridSample) {
    for (auto [dt, n] : std::vector<std::pair<double, std::size_t>>{{0.0, 0}, {0.3, 5}, {1.0, 2}, {3.0, 5}}) {
        const auto opt = optimal_s(dt, n, {}, 0.0);
        ASSERT_TRUE(opt);
        if (opt->tie) continue;
        const auto seq = n == 0 ? PulseSequence() : periodic_sequence_n(dt, n);
        for (double s = 1.01; s <= 8.0; s += 0.01)
            EXPECT_GE(opt->coherence, stationary_coherence(BathSpec(s), seq)) << dt << " " << n << " " << s;
    }
}

TEST(OptimalS, ThresholdSuppressesTinyOptima) {
    // At long spacing many pulses leave only a tiny stationary coherence.
    const auto below = optimal_s(3.0, 10);
    const auto any = optimal_s(3.0, 10, {}, 0.0);
    ASSERT_TRUE(any);
    EXPECT_LT(any->coherence, kStationaryThreshold);
    EXPECT_FALSE(below);
    EXPECT_FALSE(optimal_s(0.0, 0, {}, 0.5));
}

TEST(OptimalS, RangeIsRespected) {
    const auto opt = optimal_s(0.0, 0, {3.0, 5.0});
    ASSERT_TRUE(opt);
    EXPECT_GE(opt->s, 3.0);
    EXPECT_LE(opt->s, 3.0 + 1e-3);
    EXPECT_THROW(optimal_s(0.0, 0, {0.5, 3.0}), std::invalid_argument);
    EXPECT_THROW(optimal_s(0.0, 0, {2.0, 9.0}), std::invalid_argument);
    EXPECT_THROW(optimal_s(0.0, 0, {}, -1.0), std::invalid_argument);
    EXPECT_THROW(optimal_s(0.0, 3), std::invalid_argument);
}

TEST(Figures, ParseIds) {
    EXPECT_EQ(parse_figure_id("fig1"), FigureId::Fig1);
    EXPECT_EQ(parse_figure_id("fig5"), FigureId::Fig5);
    EXPECT_THROW(parse_figure_id("fig9"), std::invalid_argument);
}

TEST(Figures, LinearGridIsIndexBased) {
    const auto g = linear_grid(0.5, 5.0, 0.1);
    ASSERT_EQ(g.size(), 46u);
    EXPECT_DOUBLE_EQ(g.back(), 5.0);
    EXPECT_DOUBLE_EQ(g[25], 3.0);
}

TEST(Figures, Fig1HasSixTrajectories) {
    const auto t = figure_dataset(FigureId::Fig1);
    std::vector<std::pair<double, double>> configs;
    for (const auto& row : t.rows) {
        const std::pair<double, double> c{row[0], row[1]};
        if (std::find(configs.begin(), configs.end(), c) == configs.end()) configs.push_back(c);
    }
    EXPECT_EQ(configs.size(), 6u);
    EXPECT_EQ(t.columns, (std::vector<std::string>{"s", "dt", "t", "gamma", "coherence"}));
}

TEST(Figures, Fig2Columns) {
    const auto t = figure_dataset(FigureId::Fig2, 1);
    EXPECT_EQ(t.columns, (std::vector<std::string>{"s", "blp_free", "efficiency_tf_9.9", "efficiency_tf_19.8",
                                                   "efficiency_tf_30"}));
    EXPECT_EQ(t.rows.size(), figures::s_axis().size());
    for (const auto& row : t.rows) {
        EXPECT_EQ(row[1] > 0.0, row[0] > 2.0 + 1e-9) << row[0];
        for (std::size_t k = 2; k < row.size(); ++k) {
            EXPECT_GT(row[k], 0.0);
            EXPECT_LE(row[k], 1.0);
        }
    }
}

TEST(Figures, Fig3AndFig4Shapes) {
    const auto f3 = figure_dataset(FigureId::Fig3, 1);
    EXPECT_EQ(f3.columns.size(), 1u + figures::fig3_spacings().size());
    EXPECT_EQ(f3.columns[1], "efficiency_dt_0.3");
    const auto f4 = figure_dataset(FigureId::Fig4, 1);
    EXPECT_EQ(f4.columns, (std::vector<std::string>{"s", "blp_free", "blp_dt_0.3", "blp_dt_3"}));
    for (const auto& row : f4.rows) EXPECT_GT(row[2], 0.0);
}

TEST(Figures, Fig5Classification) {
    const auto t = figure_dataset(FigureId::Fig5, 1);
    ASSERT_EQ(t.rows.size(), 1u + figures::fig5_spacings().size() * figures::fig5_pulse_counts().size());
    EXPECT_NEAR(t.rows[0][2], 2.46, 0.01);
    for (const auto& row : t.rows)
        if (row[0] == 0.3) {
            EXPECT_GT(row[2], 2.0) << row[1];
        }
}
