#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace dephasing::numerics {

struct QuadratureResult {
    double value{0.0};
    double error{0.0};
    std::size_t evaluations{0};
    bool converged{false};
};

struct QuadratureOptions {
    double abs_tol{1e-12};
    double rel_tol{1e-10};
    std::size_t max_subdivisions{20000};
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule, abscissae on [0, 1).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const noexcept { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * sum;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over the panels defined
/// by consecutive entries of `breakpoints`. The panel with the largest error
/// estimate is bisected until the summed error meets
/// max(abs_tol, rel_tol * |I|) or the subdivision budget is exhausted.
template <class F>
QuadratureResult integrate_gauss_kronrod(F&& f, std::span<const double> breakpoints,
                                         const QuadratureOptions& opts = {}) {
    if (breakpoints.size() < 2) throw std::invalid_argument("integrate: need at least two breakpoints");
    std::priority_queue<detail::Panel> panels;
    QuadratureResult result;
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] <= breakpoints[i + 1]))
            throw std::invalid_argument("integrate: breakpoints must be non-decreasing");
        if (breakpoints[i] == breakpoints[i + 1]) continue;
        auto p = detail::gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]);
        result.evaluations += 15;
        total += p.value;
        total_error += p.error;
        panels.push(p);
    }
    std::size_t subdivisions = 0;
    auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
    while (!panels.empty() && total_error > target() && subdivisions < opts.max_subdivisions) {
        const auto worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
        panels.pop();
        auto left = detail::gauss_kronrod_15(f, worst.a, mid);
        auto right = detail::gauss_kronrod_15(f, mid, worst.b);
        result.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        ++subdivisions;
    }
    // Re-sum to shed the drift accumulated by incremental updates.
    total = 0.0;
    total_error = 0.0;
    while (!panels.empty()) {
        total += panels.top().value;
        total_error += panels.top().error;
        panels.pop();
    }
    result.value = total;
    result.error = total_error;
    result.converged = total_error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    return result;
}

template <class F>
QuadratureResult integrate_gauss_kronrod(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
    const double bp[2] = {a, b};
    return integrate_gauss_kronrod(std::forward<F>(f), std::span<const double>(bp, 2), opts);
}

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm, double whole,
                    double tol, int depth, int level, QuadratureResult& acc) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    acc.evaluations += 2;
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // A few forced levels keep symmetric cancellations from passing the first test.
    if (depth <= 0 || (level >= 3 && std::abs(delta) <= 15.0 * tol)) {
        if (std::abs(delta) > 15.0 * tol) acc.converged = false;
        acc.error += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, level + 1, acc) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, level + 1, acc);
}

}  // namespace detail

/// Recursive adaptive Simpson with Richardson correction on [a, b].
template <class F>
QuadratureResult integrate_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 40) {
    QuadratureResult acc;
    acc.converged = true;
    if (a == b) return acc;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    acc.evaluations = 3;
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    acc.value = detail::simpson_step(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth, 0, acc);
    return acc;
}

}  // namespace dephasing::numerics
