#pragma once

#include <cmath>
#include <cstddef>

namespace dephasing::numerics {

struct MaximumResult {
    double x{0.0};
    double value{0.0};
    std::size_t iterations{0};
};

/// Golden-section search for the maximum of a unimodal f on [a, b], stopping
/// once the bracket width drops below x_tol.
template <class F>
MaximumResult maximize_golden_section(F&& f, double a, double b, double x_tol, std::size_t max_iter = 200) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    MaximumResult res;
    while (std::abs(b - a) > x_tol && res.iterations < max_iter) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++res.iterations;
    }
    if (fc >= fd) {
        res.x = c;
        res.value = fc;
    } else {
        res.x = d;
        res.value = fd;
    }
    return res;
}

}  // namespace dephasing::numerics
