#pragma once

// Exact decoherence exponent of a pure-dephasing qubit under an arbitrary
// train of instantaneous pi pulses, built from the free exponent Gamma0.
//
// Between pulses t_n < t <= t_{n+1} the exponent is Gamma_n(t), obeying
//   Gamma_n(t) = -Gamma_{n-1}(t) + 2 Gamma_{n-1}(t_n) + 2 Gamma0(t - t_n),
// and its rate obeys gamma_n(t) = -gamma_{n-1}(t) + 2 gamma0(t - t_n).
// Gamma is continuous at every pulse; the rate flips sign there.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dephasing/bath.hpp"
#include "dephasing/pulse_sequence.hpp"

namespace dephasing {

/// Source of a free decoherence exponent: Gamma0(t), its derivative, and its
/// t -> infinity limit (possibly +infinity).
template <class M>
concept FreeDecoherence = requires(const M& m, double t) {
    { m.gamma(t) } -> std::convertible_to<double>;
    { m.rate(t) } -> std::convertible_to<double>;
    { m.asymptote() } -> std::convertible_to<double>;
};

static_assert(FreeDecoherence<OhmicBath>);

/// Which one-sided limit to take when the rate is evaluated at a pulse.
enum class Side { Left, Right };

template <FreeDecoherence Model = OhmicBath>
class ControlledDecoherence {
public:
    ControlledDecoherence(Model model, PulseSequence seq) : model_(std::move(model)), seq_(std::move(seq)) {
        // prefix_[k] = Gamma_k(t_{k+1}), the exponent at pulse k+1.
        prefix_.reserve(seq_.size());
        for (std::size_t k = 0; k < seq_.size(); ++k) prefix_.push_back(gamma_segment(seq_[k], k));
    }

    const Model& model() const noexcept { return model_; }
    const PulseSequence& sequence() const noexcept { return seq_; }

    /// Gamma(t_k) for k = 1..N, in pulse order.
    const std::vector<double>& pulse_values() const noexcept { return prefix_; }

    double gamma(double t) const {
        if (!(t >= 0.0)) throw std::domain_error("controlled_gamma: time must be non-negative");
        return gamma_segment(t, seq_.pulses_before(t));
    }

    /// Gamma_n(t), the analytic continuation of segment n to any t >= t_n.
    double gamma_segment(double t, std::size_t n) const {
        double g = model_.gamma(t);
        for (std::size_t k = 0; k < n; ++k) g = -g + 2.0 * prefix_[k] + 2.0 * model_.gamma(t - seq_[k]);
        return g;
    }

    /// Rate away from pulses; throws at a pulse instant, where it is two-valued.
    double rate(double t) const {
        if (!(t >= 0.0)) throw std::domain_error("controlled_rate: time must be non-negative");
        if (seq_.pulse_index_at(t) >= 0)
            throw std::domain_error("controlled_rate: rate is discontinuous at a pulse; specify a side");
        return rate_segment(t, seq_.pulses_before(t));
    }

    double rate(double t, Side side) const {
        if (!(t >= 0.0)) throw std::domain_error("controlled_rate: time must be non-negative");
        std::size_t n = seq_.pulses_before(t);
        if (side == Side::Right && seq_.pulse_index_at(t) >= 0) ++n;
        return rate_segment(t, n);
    }

    double rate_segment(double t, std::size_t n) const {
        double r = model_.rate(t);
        for (std::size_t k = 0; k < n; ++k) r = -r + 2.0 * model_.rate(t - seq_[k]);
        return r;
    }

    /// Gamma_N(infinity): free evolution after the last pulse, taken to the limit.
    double asymptote() const {
        const double g_inf = model_.asymptote();
        if (!std::isfinite(g_inf)) return std::numeric_limits<double>::infinity();
        double g = g_inf;
        for (std::size_t k = 0; k < seq_.size(); ++k) g = -g + 2.0 * prefix_[k] + 2.0 * g_inf;
        return g;
    }

    double coherence(double t) const { return std::exp(-gamma(t)); }

    double stationary_coherence() const {
        const double g = asymptote();
        return std::isfinite(g) ? std::exp(-g) : 0.0;
    }

private:
    Model model_;
    PulseSequence seq_;
    std::vector<double> prefix_;
};

/// Direct double-sum evaluation of Gamma_n(t), O(n^2) per call. Independent of
/// the recursion and used to cross-check it.
template <FreeDecoherence Model>
double controlled_gamma_direct(const Model& model, const PulseSequence& seq, double t) {
    if (!(t >= 0.0)) throw std::domain_error("controlled_gamma_direct: time must be non-negative");
    const std::size_t n = seq.pulses_before(t);
    const auto sign = [](std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; };
    double single = 0.0;
    double cross = 0.0;
    double moving = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
        const double tm = seq[m - 1];
        single += sign(m + 1) * model.gamma(tm);
        for (std::size_t j = 1; j < m; ++j) cross += sign(m - 1 + j) * model.gamma(tm - seq[j - 1]);
        moving += sign(m + n) * model.gamma(t - tm);
    }
    return 2.0 * single + 4.0 * cross + 2.0 * moving + sign(n) * model.gamma(t);
}

inline double controlled_gamma(const BathSpec& spec, const PulseSequence& seq, double t) {
    return ControlledDecoherence<OhmicBath>(OhmicBath(spec), seq).gamma(t);
}

inline double controlled_gamma_direct(const BathSpec& spec, const PulseSequence& seq, double t) {
    return controlled_gamma_direct(OhmicBath(spec), seq, t);
}

inline double controlled_rate(const BathSpec& spec, const PulseSequence& seq, double t) {
    return ControlledDecoherence<OhmicBath>(OhmicBath(spec), seq).rate(t);
}

inline double controlled_rate(const BathSpec& spec, const PulseSequence& seq, double t, Side side) {
    return ControlledDecoherence<OhmicBath>(OhmicBath(spec), seq).rate(t, side);
}

}  // namespace dephasing
