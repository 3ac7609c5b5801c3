#pragma once

// Canned configurations that regenerate the datasets behind each figure:
// trajectories, efficiency and non-Markovianity versus s, and optimal s.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dephasing/io.hpp"
#include "dephasing/profile.hpp"
#include "dephasing/sweep.hpp"

namespace dephasing {

enum class FigureId { Fig1, Fig2, Fig3, Fig4, Fig5 };

inline FigureId parse_figure_id(std::string_view id) {
    if (id == "fig1") return FigureId::Fig1;
    if (id == "fig2") return FigureId::Fig2;
    if (id == "fig3") return FigureId::Fig3;
    if (id == "fig4") return FigureId::Fig4;
    if (id == "fig5") return FigureId::Fig5;
    throw std::invalid_argument("unknown figure id '" + std::string(id) + "'");
}

/// lo, lo + step, ..., hi with each value computed from its index.
inline std::vector<double> linear_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("linear_grid: invalid range");
    std::vector<double> g;
    for (std::size_t i = 0;; ++i) {
        const double v = lo + static_cast<double>(i) * step;
        if (v > hi + 1e-9 * step) break;
        g.push_back(v);
    }
    return g;
}

namespace figures {

inline constexpr double kTrajectoryHorizon = 10.0;
inline constexpr double kShortSpacing = 0.3;
inline constexpr double kLongSpacing = 3.0;
inline constexpr double kFig3Window = 10.0;
inline constexpr double kFig4LastPulse = 9.0;

inline std::vector<double> s_axis() { return linear_grid(0.5, 5.0, 0.1); }
inline std::vector<double> fig2_final_times() { return {9.9, 19.8, 30.0}; }
inline std::vector<double> fig3_spacings() { return {0.3, 0.4, 0.5, 0.8, 1.0}; }
inline std::vector<double> fig5_spacings() { return {0.3, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}; }
inline std::vector<std::size_t> fig5_pulse_counts() { return {1, 2, 5, 10, 20, 30}; }

/// Column label with the shortest decimal that round-trips, e.g. "blp_dt_0.3".
inline std::string label(std::string_view prefix, double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(prefix) + std::string(buf, r.ptr);
}

/// One column per sweep slice: record values of `pick` in s order.
template <class Pick>
std::vector<double> column(const SweepResult& r, Pick pick) {
    std::vector<double> out;
    for (const auto& rec : r.records) out.push_back(rec.error ? io::kMissing : pick(rec.report).value_or(io::kMissing));
    return out;
}

inline SweepResult free_blp(const std::vector<double>& s, std::size_t workers) {
    SweepSpec sw;
    sw.s_grid = s;
    sw.n_values = {PulseCount{0}};
    sw.t_final = {1.0};
    sw.select = {true, false, false};
    sw.workers = workers;
    return run_sweep(sw);
}

inline io::Table fig1() {
    io::Table t;
    t.columns = {"s", "dt", "t", "gamma", "coherence"};
    t.comments.push_back("dt = 0 rows are free evolution");
    struct Config {
        double s;
        double dt;
    };
    const Config configs[] = {{1.0, kShortSpacing}, {4.0, kShortSpacing}, {1.0, kLongSpacing},
                              {4.0, kLongSpacing},  {1.0, 0.0},           {4.0, 0.0}};
    for (const auto& c : configs) {
        const auto seq = c.dt > 0.0 ? periodic_sequence(c.dt, kTrajectoryHorizon) : PulseSequence({}, kTrajectoryHorizon);
        const auto p = profile(BathSpec(c.s), seq);
        for (std::size_t i = 0; i < p.size(); ++i) t.rows.push_back({c.s, c.dt, p.t[i], p.gamma[i], p.coherence[i]});
    }
    return t;
}

inline io::Table fig2(std::size_t workers) {
    const auto s = s_axis();
    io::Table t;
    t.columns = {"s", "blp_free"};
    std::vector<std::vector<double>> cols{s, column(free_blp(s, workers), [](const MeasureReport& m) { return m.blp; })};
    t.comments.push_back("efficiency at dt = 0.3");
    SweepSpec sw;
    sw.s_grid = s;
    sw.dt_grid = {kShortSpacing};
    sw.t_final = fig2_final_times();
    sw.select = {false, true, false};
    sw.workers = workers;
    const auto r = run_sweep(sw);
    const auto all = column(r, [](const MeasureReport& m) { return m.efficiency; });
    for (std::size_t k = 0; k < sw.t_final.size(); ++k) {
        t.columns.push_back(label("efficiency_tf_", sw.t_final[k]));
        cols.emplace_back(all.begin() + static_cast<std::ptrdiff_t>(k * s.size()),
                          all.begin() + static_cast<std::ptrdiff_t>((k + 1) * s.size()));
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<double> row;
        for (const auto& c : cols) row.push_back(c[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline io::Table fig3(std::size_t workers) {
    const auto s = s_axis();
    io::Table t;
    t.columns = {"s"};
    std::vector<std::vector<double>> cols{s};
    for (double dt : fig3_spacings()) {
        const auto seq = periodic_sequence(dt, kFig3Window);
        SweepSpec sw;
        sw.s_grid = s;
        sw.dt_grid = {dt};
        sw.t_final = {seq.last()};
        sw.select = {false, true, false};
        sw.workers = workers;
        t.columns.push_back(label("efficiency_dt_", dt));
        cols.push_back(column(run_sweep(sw), [](const MeasureReport& m) { return m.efficiency; }));
        t.comments.push_back(label(label("dt = ", dt) + ": t_final = ", seq.last()));
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<double> row;
        for (const auto& c : cols) row.push_back(c[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline io::Table fig4(std::size_t workers) {
    const auto s = s_axis();
    io::Table t;
    t.columns = {"s", "blp_free"};
    std::vector<std::vector<double>> cols{s, column(free_blp(s, workers), [](const MeasureReport& m) { return m.blp; })};
    for (double dt : {kShortSpacing, kLongSpacing}) {
        SweepSpec sw;
        sw.s_grid = s;
        sw.dt_grid = {dt};
        sw.t_final = {kFig4LastPulse};
        sw.select = {true, false, false};
        sw.workers = workers;
        t.columns.push_back(label("blp_dt_", dt));
        cols.push_back(column(run_sweep(sw), [](const MeasureReport& m) { return m.blp; }));
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<double> row;
        for (const auto& c : cols) row.push_back(c[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline io::Table fig5(std::size_t workers) {
    io::Table t;
    t.columns = {"dt", "n_pulses", "s_star", "coherence", "tie"};
    t.comments.push_back("optima with stationary coherence below 1e-4 are left empty; n_pulses = 0 is free evolution");
    struct Job {
        double dt;
        std::size_t n;
    };
    std::vector<Job> jobs{{0.0, 0}};
    for (double dt : fig5_spacings())
        for (std::size_t n : fig5_pulse_counts()) jobs.push_back({dt, n});
    t.rows.resize(jobs.size());
    parallel_for(jobs.size(), resolve_workers(workers), [&](std::size_t i) {
        const auto& j = jobs[i];
        const auto opt = optimal_s(j.dt, j.n);
        t.rows[i] = {j.dt, static_cast<double>(j.n), opt ? opt->s : io::kMissing, opt ? opt->coherence : io::kMissing,
                     opt ? (opt->tie ? 1.0 : 0.0) : io::kMissing};
    });
    return t;
}

}  // namespace figures

inline io::Table figure_dataset(FigureId id, std::size_t workers = 0) {
    switch (id) {
        case FigureId::Fig1: return figures::fig1();
        case FigureId::Fig2: return figures::fig2(workers);
        case FigureId::Fig3: return figures::fig3(workers);
        case FigureId::Fig4: return figures::fig4(workers);
        case FigureId::Fig5: return figures::fig5(workers);
    }
    throw std::invalid_argument("unknown figure id");
}

}  // namespace dephasing
