#pragma once

// Test-only reference computations that share no code path with the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracles {

/// Gamma(t) for pi pulses at `pulses` (all < t) from the filter-function
/// integral (1/2) int_0^inf alpha w^(s-2) e^(-w) |F(w)|^2 dw with
/// F(w) = sum_k (-1)^k (e^{i w tau_{k+1}} - e^{i w tau_k}), tau_0 = 0, tau_{n+1} = t.
inline double filter_function_gamma(double s, double alpha, std::span<const double> pulses, double t) {
    std::vector<double> tau{0.0};
    tau.insert(tau.end(), pulses.begin(), pulses.end());
    tau.push_back(t);
    auto integrand = [&](double w) {
        if (w <= 0.0) return 0.0;
        std::complex<double> f{0.0, 0.0};
        double sign = 1.0;
        for (std::size_t k = 0; k + 1 < tau.size(); ++k) {
            f += sign * (std::polar(1.0, w * tau[k + 1]) - std::polar(1.0, w * tau[k]));
            sign = -sign;
        }
        return 0.5 * alpha * std::pow(w, s - 2.0) * std::exp(-w) * std::norm(f);
    };
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double width = std::min(0.5, std::numbers::pi / (2.0 * std::max(t, 1.0)));
    double total = 0.0;
    // Graded panels toward w = 0, then uniform panels out to where e^-w is negligible.
    double lo = 0.0;
    for (int k = 20; k >= 1; --k) {
        const double hi = width * std::pow(0.5, k);
        total += Rule::integrate(integrand, lo, hi, 8, 1e-14);
        lo = hi;
    }
    const double w_max = 60.0 + 4.0 * std::max(0.0, s);
    for (; lo < w_max; lo += width) total += Rule::integrate(integrand, lo, lo + width, 8, 1e-14);
    return total;
}

/// Centered finite difference.
template <class F>
double central_difference(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracles
