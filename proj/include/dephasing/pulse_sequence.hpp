#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace dephasing {

/// Instants of ideal, instantaneous pi pulses 0 < t_1 < ... < t_N <= horizon.
/// An empty sequence describes free evolution.
class PulseSequence {
public:
    PulseSequence() = default;

    PulseSequence(std::vector<double> times, double horizon) : times_(std::move(times)), horizon_(horizon) {
        if (!(horizon >= 0.0) || !std::isfinite(horizon))
            throw std::invalid_argument("PulseSequence: horizon must be finite and non-negative");
        for (std::size_t i = 0; i < times_.size(); ++i) {
            if (!(times_[i] > 0.0) || !std::isfinite(times_[i]))
                throw std::invalid_argument("PulseSequence: pulse times must be positive");
            if (i > 0 && !(times_[i] > times_[i - 1]))
                throw std::invalid_argument("PulseSequence: pulse times must be strictly increasing");
        }
        if (!times_.empty() && times_.back() > horizon_)
            throw std::invalid_argument("PulseSequence: last pulse lies beyond the horizon");
    }

    std::span<const double> times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }
    double horizon() const noexcept { return horizon_; }
    double operator[](std::size_t i) const { return times_[i]; }

    /// Instant of the final pulse (t_f), or zero for free evolution.
    double last() const noexcept { return times_.empty() ? 0.0 : times_.back(); }

    /// Number of pulses applied strictly before t, i.e. the index n of the
    /// segment t_n < t <= t_{n+1} containing t.
    std::size_t pulses_before(double t) const noexcept {
        return static_cast<std::size_t>(std::lower_bound(times_.begin(), times_.end(), t) - times_.begin());
    }

    /// Index of the pulse located exactly at t, if any.
    std::ptrdiff_t pulse_index_at(double t) const noexcept {
        const auto it = std::lower_bound(times_.begin(), times_.end(), t);
        return (it != times_.end() && *it == t) ? it - times_.begin() : -1;
    }

    friend bool operator==(const PulseSequence&, const PulseSequence&) = default;

private:
    std::vector<double> times_;
    double horizon_{0.0};
};

/// Relative slack used when counting how many spacings fit in a horizon,
/// so that e.g. 9.9 / 0.3 counts 33 pulses despite binary rounding.
inline constexpr double kPulseCountSlack = 1e-9;

/// Pulses at n * delta_t for n = 1..N_max with N_max * delta_t <= horizon.
inline PulseSequence periodic_sequence(double delta_t, double horizon) {
    if (!(delta_t > 0.0) || !std::isfinite(delta_t))
        throw std::invalid_argument("periodic_sequence: spacing must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("periodic_sequence: horizon must be positive");
    const auto n_max = static_cast<std::size_t>(std::floor(horizon / delta_t * (1.0 + kPulseCountSlack)));
    std::vector<double> times;
    times.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) times.push_back(static_cast<double>(n) * delta_t);
    const double h = times.empty() ? horizon : std::max(horizon, times.back());
    return PulseSequence(std::move(times), h);
}

/// Exactly `count` pulses at n * delta_t; the horizon ends at the last pulse.
inline PulseSequence periodic_sequence_n(double delta_t, std::size_t count) {
    if (!(delta_t > 0.0) || !std::isfinite(delta_t))
        throw std::invalid_argument("periodic_sequence_n: spacing must be positive");
    std::vector<double> times;
    times.reserve(count);
    for (std::size_t n = 1; n <= count; ++n) times.push_back(static_cast<double>(n) * delta_t);
    const double h = static_cast<double>(count) * delta_t;
    return PulseSequence(std::move(times), h);
}

}  // namespace dephasing
