#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dephasing/controlled_decoherence.hpp"

namespace dephasing {

struct GridSpec {
    std::size_t points{2000};        // uniform samples over [0, horizon]
    std::size_t refine_points{10};   // extra samples around each pulse, split evenly per side
    double refine_halfwidth{0.01};
};

/// Sampled trajectory. Every pulse instant is on the grid; rate_left and
/// rate_right hold the one-sided rates there and coincide elsewhere.
struct DecoherenceProfile {
    std::vector<double> t;
    std::vector<double> gamma;
    std::vector<double> rate_left;
    std::vector<double> rate_right;
    std::vector<double> coherence;
    std::vector<double> breakpoints;

    std::size_t size() const noexcept { return t.size(); }
};

inline std::vector<double> profile_grid(const PulseSequence& seq, const GridSpec& grid) {
    if (grid.points < 1) throw std::invalid_argument("profile: grid resolution must be positive");
    const double horizon = seq.horizon();
    std::vector<double> ts;
    ts.reserve(grid.points + 1 + seq.size() * (grid.refine_points + 1));
    for (std::size_t i = 0; i <= grid.points; ++i)
        ts.push_back(horizon * static_cast<double>(i) / static_cast<double>(grid.points));
    const std::size_t per_side = grid.refine_points / 2;
    for (double tp : seq.times()) {
        ts.push_back(tp);
        for (std::size_t j = 1; j <= per_side; ++j) {
            const double dt = grid.refine_halfwidth * static_cast<double>(j) / static_cast<double>(per_side);
            if (tp - dt > 0.0) ts.push_back(tp - dt);
            if (tp + dt <= horizon) ts.push_back(tp + dt);
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

template <FreeDecoherence Model>
DecoherenceProfile profile(const ControlledDecoherence<Model>& cd, const GridSpec& grid = {}) {
    DecoherenceProfile p;
    p.t = profile_grid(cd.sequence(), grid);
    const auto times = cd.sequence().times();
    p.breakpoints.assign(times.begin(), times.end());
    const std::size_t n = p.t.size();
    p.gamma.resize(n);
    p.rate_left.resize(n);
    p.rate_right.resize(n);
    p.coherence.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = p.t[i];
        p.gamma[i] = cd.gamma(t);
        p.rate_left[i] = cd.rate(t, Side::Left);
        p.rate_right[i] = cd.rate(t, Side::Right);
        p.coherence[i] = std::exp(-p.gamma[i]);
    }
    return p;
}

inline DecoherenceProfile profile(const BathSpec& spec, const PulseSequence& seq, const GridSpec& grid = {}) {
    return profile(ControlledDecoherence<OhmicBath>(OhmicBath(spec), seq), grid);
}

}  // namespace dephasing
