#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace dephasing::numerics {

struct RootResult {
    double root{0.0};
    std::size_t iterations{0};
    bool converged{false};
};

/// Brent's method on a bracket [a, b] with f(a), f(b) of opposite sign (or
/// one of them zero). Terminates when the bracket is narrower than abs_tol.
template <class F>
RootResult find_root_brent(F&& f, double a, double b, double abs_tol = 1e-12, std::size_t max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, 0, true};
    if (fb == 0.0) return {b, 0, true};
    if ((fa < 0.0) == (fb < 0.0)) throw std::invalid_argument("find_root_brent: root is not bracketed");

    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    RootResult res;
    for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations) {
        if ((fb < 0.0) == (fc < 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * 1e-16 * std::abs(b) + 0.5 * abs_tol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) {
            res.root = b;
            res.converged = true;
            return res;
        }
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            // Inverse quadratic interpolation, or secant when only two points differ.
            double p;
            double q;
            const double sr = fb / fa;
            if (a == c) {
                p = 2.0 * m * sr;
                q = 1.0 - sr;
            } else {
                const double qa = fa / fc;
                const double rr = fb / fc;
                p = sr * (2.0 * m * qa * (qa - rr) - (b - a) * (rr - 1.0));
                q = (qa - 1.0) * (rr - 1.0) * (sr - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
    }
    res.root = b;
    res.converged = false;
    return res;
}

}  // namespace dephasing::numerics
