#pragma once

// Ohmic-class bosonic bath at zero temperature and the free pure-dephasing
// decoherence function it induces. Times are in units of 1/omega_c and
// frequencies in units of omega_c throughout.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dephasing/numerics/quadrature.hpp"
#include "dephasing/numerics/root_finding.hpp"

namespace dephasing {

/// Spectral density I(w) = alpha * w^s * exp(-w) with the cutoff set to one.
class BathSpec {
public:
    explicit BathSpec(double s, double alpha = 1.0) : s_(s), alpha_(alpha) {
        if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("BathSpec: Ohmicity s must be positive");
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("BathSpec: coupling alpha must be positive");
    }

    double s() const noexcept { return s_; }
    double alpha() const noexcept { return alpha_; }

    /// Free dynamics shows information back-flow only above s = 2.
    bool non_markovian() const noexcept { return s_ > 2.0; }
    /// A finite asymptotic decoherence exponent exists only above s = 1.
    bool coherence_trapping() const noexcept { return s_ > 1.0; }

    friend bool operator==(const BathSpec&, const BathSpec&) = default;

private:
    double s_;
    double alpha_;
};

/// Window around s = 1 that is evaluated with the logarithmic Ohmic form.
inline constexpr double kOhmicWindow = 1e-9;

inline double spectral_density(const BathSpec& spec, double omega) {
    if (!(omega >= 0.0)) throw std::domain_error("spectral_density: frequency must be non-negative");
    if (omega == 0.0) return 0.0;
    if (std::isinf(omega)) return 0.0;
    return spec.alpha() * std::exp(spec.s() * std::log(omega) - omega);
}

/// Closed-form free decoherence exponent and its derivative. Caches the
/// Gamma-function prefactors so repeated evaluation is cheap.
///
/// Gamma0(t) = alpha * G(s-1) * [1 - (1+t^2)^(-(s-1)/2) cos((s-1) atan t)]
///   rate(t) = alpha * G(s) * sin(s atan t) / (1+t^2)^(s/2)
/// with G the Euler Gamma function; s = 1 reduces to (alpha/2) ln(1+t^2).
class OhmicBath {
public:
    explicit OhmicBath(const BathSpec& spec)
        : spec_(spec),
          ohmic_(std::abs(spec.s() - 1.0) < kOhmicWindow),
          gamma_s_(std::tgamma(spec.s())),
          gamma_sm1_(ohmic_ ? std::numeric_limits<double>::infinity() : std::tgamma(spec.s() - 1.0)) {}

    const BathSpec& spec() const noexcept { return spec_; }

    double gamma(double t) const {
        if (!(t >= 0.0)) throw std::domain_error("gamma0: time must be non-negative");
        if (t == 0.0) return 0.0;
        const double log_norm = std::log1p(t * t);
        if (ohmic_) return 0.5 * spec_.alpha() * log_norm;
        // 1 - e^a cos(b) = -expm1(a) + 2 e^a sin^2(b/2), free of cancellation as s -> 1.
        const double eps = spec_.s() - 1.0;
        const double a = -0.5 * eps * log_norm;
        const double half_angle = std::sin(0.5 * eps * std::atan(t));
        const double bracket = -std::expm1(a) + 2.0 * std::exp(a) * half_angle * half_angle;
        return spec_.alpha() * gamma_sm1_ * bracket;
    }

    double rate(double t) const {
        if (!(t >= 0.0)) throw std::domain_error("rate0: time must be non-negative");
        if (t == 0.0) return 0.0;
        const double s = spec_.s();
        return spec_.alpha() * gamma_s_ * std::sin(s * std::atan(t)) * std::exp(-0.5 * s * std::log1p(t * t));
    }

    /// Gamma0(infinity): alpha * G(s-1) for s > 1, +infinity otherwise.
    double asymptote() const noexcept {
        if (spec_.s() <= 1.0 || ohmic_) return std::numeric_limits<double>::infinity();
        return spec_.alpha() * gamma_sm1_;
    }

private:
    BathSpec spec_;
    bool ohmic_;
    double gamma_s_;
    double gamma_sm1_;
};

inline double gamma0(const BathSpec& spec, double t) { return OhmicBath(spec).gamma(t); }

inline double rate0(const BathSpec& spec, double t) { return OhmicBath(spec).rate(t); }

inline double gamma0_asymptote(const BathSpec& spec) { return OhmicBath(spec).asymptote(); }

struct OracleResult {
    double value{0.0};
    double error{0.0};
    bool converged{false};
};

/// Upper frequency beyond which w^(s-2) e^(-w) is negligible. 40 suffices for
/// moderate s; larger Ohmicities push the bulk of the weight further out.
inline double oracle_frequency_cutoff(double s) {
    const double p = s - 2.0;
    double w = 40.0;
    auto log_weight = [p](double x) { return p * std::log(x) - x; };
    const double log_peak = p > 0.0 ? log_weight(p) : log_weight(1.0);
    while (log_weight(w) - std::max(0.0, log_peak) > std::log(1e-17)) w *= 1.25;
    return w;
}

/// Direct quadrature of Gamma0(t) = int_0^inf I(w)/w^2 [1 - cos(w t)] dw.
/// Panels are half an oscillation period wide (at most one unit) and the
/// first panel is geometrically graded toward w = 0 for sub-Ohmic baths.
inline OracleResult gamma0_oracle(const BathSpec& spec, double t, double rel_tol,
                                  std::size_t max_subdivisions = 200000) {
    if (!(t >= 0.0)) throw std::domain_error("gamma0_oracle: time must be non-negative");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("gamma0_oracle: tolerance must be positive");
    if (t == 0.0) return {0.0, 0.0, true};

    const double s = spec.s();
    const double alpha = spec.alpha();
    auto integrand = [s, alpha, t](double w) {
        if (w <= 0.0) return 0.0;
        const double h = std::sin(0.5 * w * t);
        return alpha * std::exp((s - 2.0) * std::log(w) - w) * 2.0 * h * h;
    };

    const double w_max = oracle_frequency_cutoff(s);
    const double width = std::min(1.0, std::numbers::pi / t);
    std::vector<double> bp{0.0};
    for (int k = 12; k >= 1; --k) bp.push_back(width * std::pow(0.25, k));
    for (double w = width; w < w_max; w += width) bp.push_back(w);
    bp.push_back(w_max);

    numerics::QuadratureOptions opts;
    opts.abs_tol = 1e-300;
    opts.rel_tol = 0.1 * rel_tol;
    opts.max_subdivisions = max_subdivisions;
    const auto q = numerics::integrate_gauss_kronrod(integrand, bp, opts);
    return {q.value, q.error, q.converged && q.error <= rel_tol * std::abs(q.value)};
}

/// Scan window and step for locating the first zero of the free rate.
inline constexpr double kTbarScanEnd = 50.0;
inline constexpr double kTbarScanStep = 0.01;

/// First t > 0 with rate0(t) = 0: the onset of information back-flow in the
/// free dynamics. Exists only for s > 2.
inline std::optional<double> tbar(const BathSpec& spec, double abs_tol = 1e-10) {
    if (!spec.non_markovian()) return std::nullopt;
    const OhmicBath bath(spec);
    auto f = [&bath](double t) { return bath.rate(t); };

    auto refine = [&](double lo, double hi) -> std::optional<double> {
        return numerics::find_root_brent(f, lo, hi, abs_tol).root;
    };
    double prev_t = kTbarScanStep;
    double prev = f(prev_t);
    for (int i = 2; i * kTbarScanStep <= kTbarScanEnd + 1e-12; ++i) {
        const double t = i * kTbarScanStep;
        const double v = f(t);
        if ((prev < 0.0) != (v < 0.0) || v == 0.0) return refine(prev_t, t);
        prev_t = t;
        prev = v;
    }
    // Just above s = 2 the zero moves far out; continue geometrically.
    for (double t = kTbarScanEnd * 1.05; t < 1e12; t *= 1.05) {
        const double v = f(t);
        if ((prev < 0.0) != (v < 0.0) || v == 0.0) return refine(prev_t, t);
        prev_t = t;
        prev = v;
    }
    return std::nullopt;
}

}  // namespace dephasing
