#pragma once

// Self-check suite: closed form against quadrature, analytic rate against
// finite differences, pulse recursion against the direct double sum, the
// rate sign flip and exponent continuity at every pulse.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dephasing/bath.hpp"
#include "dephasing/controlled_decoherence.hpp"

namespace dephasing {

/// Free exponent with a deliberate multiplicative defect, for negative controls.
class PerturbedBath {
public:
    PerturbedBath(const BathSpec& spec, double defect) : base_(spec), defect_(defect) {}
    double gamma(double t) const { return base_.gamma(t) * (1.0 + defect_ * t / (1.0 + t)); }
    double rate(double t) const { return base_.rate(t); }
    double asymptote() const { return base_.asymptote() * (1.0 + defect_); }

private:
    OhmicBath base_;
    double defect_;
};

struct ValidationOptions {
    std::vector<double> oracle_s{0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
    std::size_t time_points{21};
    double t_min{0.1};
    double t_max{20.0};
    double oracle_tol{1e-6};
    double fd_step{1e-5};
    double rate_tol{1e-5};
    std::size_t random_configs{100};
    std::size_t max_pulses{40};
    double pulse_window{20.0};
    double equivalence_tol{1e-9};
    double flip_tol{1e-9};
    double continuity_tol{1e-9};
    std::uint64_t seed{0x5eed0ddULL};
    /// Test hook: non-zero corrupts the closed-form exponent on the checked path.
    double gamma0_defect{0.0};
};

struct CheckResult {
    std::string name;
    double max_error{0.0};
    double tolerance{0.0};
    bool passed{false};
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = (n == 1) ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    return g;
}

namespace detail {

struct RandomConfig {
    double s;
    PulseSequence seq;
    std::vector<double> probe_times;
};

inline std::vector<RandomConfig> random_configs(const ValidationOptions& o) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> s_dist(0.2, 5.0);
    std::uniform_int_distribution<std::size_t> n_dist(1, o.max_pulses);
    std::uniform_real_distribution<double> t_dist(0.0, o.pulse_window);
    std::vector<RandomConfig> out;
    for (std::size_t c = 0; c < o.random_configs; ++c) {
        const double s = 5.0 - s_dist(rng) + 0.2;  // maps [0.2, 5) onto (0.2, 5]
        std::vector<double> times(n_dist(rng));
        for (auto& t : times) t = t_dist(rng);
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        times.erase(std::remove_if(times.begin(), times.end(), [](double t) { return !(t > 0.0); }), times.end());
        std::vector<double> probes(12);
        for (auto& t : probes) t = 1.25 * t_dist(rng);
        out.push_back({s, PulseSequence(std::move(times), o.pulse_window), std::move(probes)});
    }
    return out;
}

template <FreeDecoherence Model, class MakeModel>
ValidationReport run_checks(const ValidationOptions& o, MakeModel make) {
    ValidationReport report;
    const auto times = log_grid(o.t_min, o.t_max, o.time_points);

    CheckResult oracle{"closed-form Gamma0 vs quadrature (relative)", 0.0, o.oracle_tol, true};
    CheckResult rate{"rate0 vs finite difference of Gamma0", 0.0, o.rate_tol, true};
    for (double s : o.oracle_s) {
        const BathSpec spec(s);
        const Model model = make(spec);
        for (double t : times) {
            const auto q = gamma0_oracle(spec, t, 1e-10);
            if (!q.converged) oracle.passed = false;
            const double g = model.gamma(t);
            oracle.max_error = std::max(oracle.max_error, std::abs(g - q.value) / std::max(q.value, 1e-12));
            const double fd = (model.gamma(t + o.fd_step) - model.gamma(t - o.fd_step)) / (2.0 * o.fd_step);
            const double r = model.rate(t);
            rate.max_error = std::max(rate.max_error, std::abs(r - fd) / std::max(1.0, std::abs(r)));
        }
    }
    oracle.passed = oracle.passed && oracle.max_error <= oracle.tolerance;
    rate.passed = rate.max_error <= rate.tolerance;

    CheckResult equiv{"pulse recursion vs direct double sum (relative)", 0.0, o.equivalence_tol, true};
    CheckResult flip{"rate sign flip at pulses (relative)", 0.0, o.flip_tol, true};
    CheckResult cont{"exponent continuity at pulses (relative)", 0.0, o.continuity_tol, true};
    CheckResult phys{"controlled exponent non-negative (most negative value)", 0.0, 1e-12, true};
    for (const auto& cfg : random_configs(o)) {
        const BathSpec spec(cfg.s);
        const ControlledDecoherence<Model> cd(make(spec), cfg.seq);
        const OhmicBath reference(spec);
        for (double t : cfg.probe_times) {
            const double a = cd.gamma(t);
            const double b = controlled_gamma_direct(reference, cfg.seq, t);
            equiv.max_error = std::max(equiv.max_error, std::abs(a - b) / std::max(std::abs(b), 1e-6));
            phys.max_error = std::max(phys.max_error, -a);
        }
        for (std::size_t k = 0; k < cfg.seq.size(); ++k) {
            const double tk = cfg.seq[k];
            const double left = cd.rate(tk, Side::Left);
            const double right = cd.rate(tk, Side::Right);
            flip.max_error = std::max(flip.max_error, std::abs(right + left) / std::max(std::abs(left), 1e-300));
            const double gl = cd.gamma_segment(tk, k);
            const double gr = cd.gamma_segment(tk, k + 1);
            cont.max_error = std::max(cont.max_error, std::abs(gr - gl) / std::max(std::abs(gl), 1e-12));
        }
    }
    equiv.passed = equiv.max_error <= equiv.tolerance;
    flip.passed = flip.max_error <= flip.tolerance;
    cont.passed = cont.max_error <= cont.tolerance;
    phys.passed = phys.max_error <= phys.tolerance;

    report.checks = {oracle, rate, equiv, flip, cont, phys};
    return report;
}

}  // namespace detail

inline ValidationReport run_validation(const ValidationOptions& o = {}) {
    if (o.gamma0_defect != 0.0) {
        return detail::run_checks<PerturbedBath>(
            o, [d = o.gamma0_defect](const BathSpec& spec) { return PerturbedBath(spec, d); });
    }
    return detail::run_checks<OhmicBath>(o, [](const BathSpec& spec) { return OhmicBath(spec); });
}

}  // namespace dephasing
