#pragma once

// Batch evaluation of measures over (s, dt, n, t_final) grids and the search
// for the Ohmicity that maximises the stationary coherence.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dephasing/measures.hpp"
#include "dephasing/numerics/golden_section.hpp"
#include "dephasing/parallel.hpp"

namespace dephasing {

/// Requested pulse count at a grid point; empty means as many as fit in t_final.
using PulseCount = std::optional<std::size_t>;

struct SweepSpec {
    std::vector<double> s_grid;
    std::vector<double> dt_grid;
    std::vector<PulseCount> n_values{PulseCount{}};
    std::vector<double> t_final;
    MeasureSelection select{};
    double alpha{1.0};
    double blp_tail{kDefaultBlpTail};
    std::size_t workers{0};

    bool free_only() const {
        return !n_values.empty() && std::all_of(n_values.begin(), n_values.end(), [](const PulseCount& n) {
            return n.has_value() && *n == 0;
        });
    }

    void validate() const {
        auto positive = [](const std::vector<double>& v) {
            return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
        };
        if (s_grid.empty() || !positive(s_grid)) throw std::invalid_argument("SweepSpec: s grid must be non-empty and positive");
        if (t_final.empty() || !positive(t_final))
            throw std::invalid_argument("SweepSpec: t_final grid must be non-empty and positive");
        if (n_values.empty()) throw std::invalid_argument("SweepSpec: pulse-count grid must be non-empty");
        if (!positive(dt_grid)) throw std::invalid_argument("SweepSpec: pulse spacings must be positive");
        if (dt_grid.empty() && !free_only())
            throw std::invalid_argument("SweepSpec: pulse spacing grid must be non-empty unless all points are free");
        if (!(alpha > 0.0)) throw std::invalid_argument("SweepSpec: alpha must be positive");
    }
};

struct SweepRecord {
    double s{0.0};
    double dt{0.0};  // zero for free evolution
    std::size_t n_pulses{0};
    double t_final{0.0};
    MeasureReport report;
    std::optional<std::string> error;
};

/// Maximum stationary coherence over s within one (dt, n, t_final) slice.
struct SliceOptimum {
    double dt{0.0};
    std::size_t n_pulses{0};
    double t_final{0.0};
    double s{0.0};
    double value{0.0};
};

struct SweepResult {
    std::vector<SweepRecord> records;
    std::vector<SliceOptimum> optima;
};

/// Argmax of the stationary coherence within consecutive runs of `slice` records.
inline std::vector<SliceOptimum> slice_optima(const std::vector<SweepRecord>& records, std::size_t slice) {
    std::vector<SliceOptimum> optima;
    if (slice == 0) return optima;
    for (std::size_t first = 0; first < records.size(); first += slice) {
        std::optional<SliceOptimum> best;
        for (std::size_t i = first; i < std::min(first + slice, records.size()); ++i) {
            const auto& rec = records[i];
            if (rec.error || !rec.report.stationary_coherence) continue;
            const double v = *rec.report.stationary_coherence;
            if (!best || v > best->value) best = SliceOptimum{rec.dt, rec.n_pulses, rec.t_final, rec.s, v};
        }
        if (best) optima.push_back(*best);
    }
    return optima;
}

inline PulseSequence sweep_sequence(double dt, const PulseCount& n, double t_final) {
    if (n.has_value() && *n == 0) return PulseSequence({}, t_final);
    if (!n.has_value()) return periodic_sequence(dt, t_final);
    if (static_cast<double>(*n) * dt > t_final * (1.0 + kFinalTimeSlack))
        throw std::invalid_argument("requested pulses do not fit before t_final");
    auto seq = periodic_sequence_n(dt, *n);
    return PulseSequence({seq.times().begin(), seq.times().end()}, std::max(t_final, seq.horizon()));
}

/// Evaluates every grid point. Records are ordered with dt outermost, then n,
/// then t_final, then s, regardless of how many workers run.
inline SweepResult run_sweep(const SweepSpec& sweep) {
    sweep.validate();
    const bool free = sweep.free_only();
    const std::vector<double> dts = free && sweep.dt_grid.empty() ? std::vector<double>{0.0} : sweep.dt_grid;
    struct Point {
        double dt;
        PulseCount n;
        double t_final;
        double s;
    };
    std::vector<Point> points;
    for (double dt : dts)
        for (const auto& n : sweep.n_values)
            for (double tf : sweep.t_final)
                for (double s : sweep.s_grid) points.push_back({dt, n, tf, s});

    SweepResult result;
    result.records.resize(points.size());
    parallel_for(points.size(), resolve_workers(sweep.workers), [&](std::size_t i) {
        const auto& p = points[i];
        auto& rec = result.records[i];
        const bool is_free = p.n.has_value() && *p.n == 0;
        rec.s = p.s;
        rec.dt = is_free ? 0.0 : p.dt;
        rec.t_final = p.t_final;
        try {
            const auto seq = sweep_sequence(p.dt, p.n, p.t_final);
            rec.n_pulses = seq.size();
            MeasureOptions opts;
            opts.select = sweep.select;
            opts.t_final = p.t_final;
            opts.blp_horizon = seq.last() + sweep.blp_tail;
            rec.report = evaluate_measures(BathSpec(p.s, sweep.alpha), seq, opts);
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    });

    if (sweep.select.stationary) result.optima = slice_optima(result.records, sweep.s_grid.size());
    return result;
}

struct OhmicityRange {
    double lo{1.0};
    double hi{8.0};
};

struct OptimalOhmicity {
    double s{0.0};
    double coherence{0.0};
    /// Several local maxima reached the same height; the smallest s is reported.
    bool tie{false};
};

struct OptimalSOptions {
    double alpha{1.0};
    double scan_step{0.01};
    double s_tol{1e-4};
    double tie_rel_tol{1e-4};
};

/// Default cut on the maximum stationary coherence below which no optimum is reported.
inline constexpr double kStationaryThreshold = 1e-4;

/// Ohmicity in `range` maximising the stationary coherence after n pulses at
/// spacing dt (n = 0 is free evolution). A coarse scan locates the local
/// maxima, each is polished by golden-section search, and the result is
/// empty when the best coherence falls below `threshold`.
inline std::optional<OptimalOhmicity> optimal_s(double dt, std::size_t n, OhmicityRange range = {},
                                                double threshold = kStationaryThreshold,
                                                const OptimalSOptions& opts = {}) {
    if (!(range.lo >= 1.0) || !(range.hi <= 8.0) || !(range.lo < range.hi))
        throw std::invalid_argument("optimal_s: range must lie within (1, 8]");
    if (!(threshold >= 0.0)) throw std::invalid_argument("optimal_s: threshold must be non-negative");
    if (n > 0 && !(dt > 0.0)) throw std::invalid_argument("optimal_s: pulse spacing must be positive");

    const auto seq = n == 0 ? PulseSequence() : periodic_sequence_n(dt, n);
    auto coherence = [&](double s) { return stationary_coherence(BathSpec(s, opts.alpha), seq); };

    std::vector<double> grid;
    const std::size_t first = range.lo > 1.0 ? 0 : 1;
    for (std::size_t i = first;; ++i) {
        const double s = range.lo + static_cast<double>(i) * opts.scan_step;
        if (s > range.hi + 1e-12) break;
        grid.push_back(std::min(s, range.hi));
    }
    if (grid.empty()) grid.push_back(range.hi);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = coherence(grid[i]);

    const double grid_max = *std::max_element(values.begin(), values.end());
    if (grid_max < threshold) return std::nullopt;

    std::vector<OptimalOhmicity> peaks;
    const std::size_t last = grid.size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
        const bool rises = i == 0 || values[i] >= values[i - 1];
        const bool falls = i == last || values[i] > values[i + 1];
        if (!rises || !falls || values[i] < grid_max * (1.0 - opts.tie_rel_tol)) continue;
        const double a = grid[i == 0 ? 0 : i - 1];
        const double b = grid[i == last ? last : i + 1];
        OptimalOhmicity peak{grid[i], values[i], false};
        if (b > a) {
            const auto g = numerics::maximize_golden_section(coherence, a, b, opts.s_tol);
            if (g.value > peak.coherence) peak = {g.x, g.value, false};
        }
        peaks.push_back(peak);
    }

    double best = 0.0;
    for (const auto& p : peaks) best = std::max(best, p.coherence);
    std::optional<OptimalOhmicity> chosen;
    std::size_t tied = 0;
    for (const auto& p : peaks) {
        if (p.coherence < best * (1.0 - opts.tie_rel_tol)) continue;
        ++tied;
        if (!chosen || p.s < chosen->s) chosen = p;
    }
    if (!chosen || chosen->coherence < threshold) return std::nullopt;
    chosen->tie = tied > 1;
    return chosen;
}

}  // namespace dephasing
