#pragma once

// Functionals of a (free or pulsed) decoherence trajectory: the trace-distance
// non-Markovianity, the time-averaged coherence retained by decoupling,
// fidelity to the initial state and the stationary coherence.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dephasing/controlled_decoherence.hpp"
#include "dephasing/numerics/quadrature.hpp"
#include "dephasing/numerics/root_finding.hpp"

namespace dephasing {

struct Interval {
    double start{0.0};
    double end{0.0};
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Back-flow extends past the last pulse; by default the measure integrates
/// this far beyond t_f.
inline constexpr double kDefaultBlpTail = 50.0;

struct BlpOptions {
    double scan_step{0.01};
    double root_tol{1e-10};
};

struct BlpResult {
    double value{0.0};
    /// Coherence change still available after the horizon when back-flow is
    /// ongoing there, |exp(-Gamma(inf)) - exp(-Gamma(horizon))|; zero otherwise.
    double truncation_estimate{0.0};
    std::vector<Interval> backflow_intervals;
};

/// N = -int_{gamma<0} gamma(t) exp(-Gamma(t)) dt over [0, horizon].
///
/// Since d/dt exp(-Gamma) = -gamma exp(-Gamma), each maximal interval with
/// gamma < 0 contributes exactly the rise of the coherence across it. Pulses
/// split [0, horizon] into segments on which the rate is smooth; sign changes
/// inside a segment are found on a uniform scan and refined with Brent.
template <FreeDecoherence Model>
BlpResult blp_measure(const ControlledDecoherence<Model>& cd, double horizon, const BlpOptions& opts = {}) {
    if (!(horizon > 0.0)) throw std::invalid_argument("blp_measure: horizon must be positive");
    const auto& seq = cd.sequence();
    std::vector<double> bp{0.0};
    for (double tp : seq.times())
        if (tp < horizon) bp.push_back(tp);
    bp.push_back(horizon);

    BlpResult res;
    bool open_at_horizon = false;
    for (std::size_t n = 0; n + 1 < bp.size(); ++n) {
        const double a = bp[n];
        const double b = bp[n + 1];
        auto rate = [&cd, n](double t) { return cd.rate_segment(t, n); };
        auto coherence = [&cd, n](double t) { return std::exp(-cd.gamma_segment(t, n)); };
        const auto steps = std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil((b - a) / opts.scan_step)));

        double x_prev = a;
        bool inside = rate(a) < 0.0;
        double start = a;
        auto close = [&](double end) {
            res.value += std::max(0.0, coherence(end) - coherence(start));
            res.backflow_intervals.push_back({start, end});
        };
        for (std::size_t j = 1; j <= steps; ++j) {
            const double x = (j == steps) ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(steps);
            const double f = rate(x);
            if ((f < 0.0) != inside) {
                const double root = numerics::find_root_brent(rate, x_prev, x, opts.root_tol).root;
                if (inside)
                    close(root);
                else
                    start = root;
                inside = !inside;
            }
            x_prev = x;
        }
        if (inside) {
            close(b);
            open_at_horizon = (n + 2 == bp.size());
        }
    }
    if (open_at_horizon) {
        const double c_inf = cd.stationary_coherence();
        res.truncation_estimate = std::abs(c_inf - cd.coherence(horizon));
    }
    return res;
}

inline BlpResult blp_measure(const BathSpec& spec, const PulseSequence& seq, double horizon,
                             const BlpOptions& opts = {}) {
    return blp_measure(ControlledDecoherence<OhmicBath>(OhmicBath(spec), seq), horizon, opts);
}

/// Slack allowed between the last pulse and t_final (binary rounding of n * dt).
inline constexpr double kFinalTimeSlack = 1e-9;

/// D(t_f) = (1/t_f) int_0^{t_f} exp(-Gamma(t)) dt, integrated per pulse
/// segment so the rate kinks sit on panel boundaries.
template <FreeDecoherence Model>
double dd_efficiency(const ControlledDecoherence<Model>& cd, double t_final, double abs_tol = 1e-8) {
    if (!(t_final > 0.0)) throw std::invalid_argument("dd_efficiency: t_final must be positive");
    const auto& seq = cd.sequence();
    if (seq.last() > t_final * (1.0 + kFinalTimeSlack))
        throw std::invalid_argument("dd_efficiency: pulses extend beyond t_final");
    std::vector<double> bp{0.0};
    for (double tp : seq.times())
        if (tp < t_final) bp.push_back(tp);
    bp.push_back(t_final);

    double total = 0.0;
    for (std::size_t n = 0; n + 1 < bp.size(); ++n) {
        const double a = bp[n];
        const double b = bp[n + 1];
        auto f = [&cd, n](double t) { return std::exp(-cd.gamma_segment(t, n)); };
        total += numerics::integrate_simpson(f, a, b, abs_tol * (b - a)).value;
    }
    return std::clamp(total / t_final, 0.0, 1.0);
}

inline double dd_efficiency(const BathSpec& spec, const PulseSequence& seq, double t_final, double abs_tol = 1e-8) {
    return dd_efficiency(ControlledDecoherence<OhmicBath>(OhmicBath(spec), seq), t_final, abs_tol);
}

/// Qubit initial state in the pointer basis; only |rho12| enters the fidelity.
class InitialState {
public:
    InitialState(double rho11, double rho22, double rho12_magnitude)
        : rho11_(rho11), rho22_(rho22), rho12_(rho12_magnitude) {
        constexpr double tol = 1e-12;
        if (!(rho11 >= 0.0) || !(rho22 >= 0.0)) throw std::domain_error("InitialState: negative population");
        if (std::abs(rho11 + rho22 - 1.0) > tol) throw std::domain_error("InitialState: populations must sum to one");
        if (!(rho12_magnitude >= 0.0) || rho12_magnitude * rho12_magnitude > rho11 * rho22 + tol)
            throw std::domain_error("InitialState: coherence violates positivity");
    }

    /// (|0> + |1>)/sqrt(2).
    static InitialState equal_superposition() { return {0.5, 0.5, 0.5}; }

    double rho11() const noexcept { return rho11_; }
    double rho22() const noexcept { return rho22_; }
    double rho12_magnitude() const noexcept { return rho12_; }

private:
    double rho11_;
    double rho22_;
    double rho12_;
};

/// F = rho11^2 + rho22^2 + 2 |rho12|^2 exp(-Gamma).
inline double fidelity_for_exponent(const InitialState& state, double gamma) {
    const double decay = std::isinf(gamma) ? 0.0 : std::exp(-gamma);
    return state.rho11() * state.rho11() + state.rho22() * state.rho22() +
           2.0 * state.rho12_magnitude() * state.rho12_magnitude() * decay;
}

inline double fidelity(const InitialState& state, const BathSpec& spec, const PulseSequence& seq, double t) {
    return fidelity_for_exponent(state, controlled_gamma(spec, seq, t));
}

/// exp(-Gamma_N(inf)) after the pulse train ends; zero for s <= 1.
inline double stationary_coherence(const BathSpec& spec, const PulseSequence& seq) {
    if (!spec.coherence_trapping()) return 0.0;
    return ControlledDecoherence<OhmicBath>(OhmicBath(spec), seq).stationary_coherence();
}

struct MeasureSelection {
    bool blp{true};
    bool efficiency{true};
    bool stationary{true};
};

struct MeasureOptions {
    MeasureSelection select{};
    /// Averaging window of the efficiency; defaults to the sequence horizon.
    std::optional<double> t_final{};
    /// Integration horizon of the non-Markovianity; defaults to t_f + kDefaultBlpTail.
    std::optional<double> blp_horizon{};
    BlpOptions blp_options{};
};

struct MeasureReport {
    std::optional<double> blp;
    std::optional<double> blp_truncation;
    std::optional<double> efficiency;
    double t_final{0.0};
    std::optional<double> stationary_coherence;
    std::vector<Interval> backflow_intervals;
};

inline MeasureReport evaluate_measures(const BathSpec& spec, const PulseSequence& seq, const MeasureOptions& opts = {}) {
    const ControlledDecoherence<OhmicBath> cd(OhmicBath(spec), seq);
    MeasureReport report;
    report.t_final = opts.t_final.value_or(seq.horizon());
    if (opts.select.blp) {
        const double horizon = opts.blp_horizon.value_or(seq.last() + kDefaultBlpTail);
        auto blp = blp_measure(cd, horizon, opts.blp_options);
        report.blp = blp.value;
        report.blp_truncation = blp.truncation_estimate;
        report.backflow_intervals = std::move(blp.backflow_intervals);
    }
    if (opts.select.efficiency) report.efficiency = dd_efficiency(cd, report.t_final);
    if (opts.select.stationary)
        report.stationary_coherence = spec.coherence_trapping() ? cd.stationary_coherence() : 0.0;
    return report;
}

}  // namespace dephasing
