#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

namespace abatement::numerics {

namespace detail {

template <typename F>
double adaptive_simpson_step(const F& f, double a, double b, double fa, double fm, double fb,
                             double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to relative tolerance rel_tol.
///
/// The absolute target is rel_tol times a coarse magnitude estimate of the
/// integral, so smooth integrands of any scale are handled uniformly. The
/// interval is pre-split into `pieces` panels to avoid false convergence on
/// integrands that look flat at the initial three nodes.
template <typename F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-10, int pieces = 16) {
    if (b == a) return 0.0;
    const double width = (b - a) / pieces;
    double scale = 0.0;
    for (int k = 0; k <= pieces; ++k) scale += std::abs(f(a + k * width));
    scale = scale / (pieces + 1) * std::abs(b - a);
    const double abs_tol = std::max(rel_tol * scale, 1e-300);

    double total = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double lo = a + k * width;
        const double hi = (k + 1 == pieces) ? b : lo + width;
        const double flo = f(lo);
        const double fhi = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
        total += detail::adaptive_simpson_step(f, lo, hi, flo, fm, fhi, whole, abs_tol / pieces, 40);
    }
    return total;
}

/// Composite trapezoid rule over a (not necessarily uniform) grid.
inline double trapezoid(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) {
        sum += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
    }
    return sum;
}

/// Trapezoid rule with the Euler-Maclaurin endpoint correction, using the
/// derivative dy of the integrand at each node. Fourth order in the step.
inline double corrected_trapezoid(std::span<const double> x, std::span<const double> y,
                                  std::span<const double> dy) {
    double sum = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) {
        const double h = x[k] - x[k - 1];
        sum += 0.5 * h * (y[k] + y[k - 1]) - h * h / 12.0 * (dy[k] - dy[k - 1]);
    }
    return sum;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

/// Ordinary least squares fit of y against x.
inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double e = y[k] - (fit.intercept + fit.slope * x[k]);
        ssr += e * e;
    }
    fit.slope_stderr = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
    return fit;
}

}  // namespace abatement::numerics
