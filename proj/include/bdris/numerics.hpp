#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "bdris/errors.hpp"

namespace bdris::numerics {

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Regularized lower incomplete gamma P(a, x) for integer shape a >= 1.
// P(a, x) = Pr[Poisson(x) >= a]; summed from the small side so that tiny
// probabilities keep full relative precision (never formed as 1 - (1 - eps)).
template <typename Real = double>
Real regularized_gamma_p(int a, Real x) {
    if (a < 1) throw InvalidParameter("regularized_gamma_p: shape must be >= 1");
    if (x <= Real(0)) return Real(0);
    if (x < Real(a) + Real(1)) {
        // lower series: e^-x x^a/a! * (1 + x/(a+1) + x^2/((a+1)(a+2)) + ...)
        Real log_t0 = Real(a) * std::log(x) - x - std::lgamma(Real(a) + Real(1));
        Real term = Real(1), sum = Real(1);
        for (int j = 1; j < 10000; ++j) {
            term *= x / Real(a + j);
            sum += term;
            if (term < sum * std::numeric_limits<Real>::epsilon()) break;
        }
        return std::exp(log_t0) * sum;
    }
    // complement: Q = e^-x sum_{i<a} x^i/i!, safe since P is not small here
    Real log_t = -x; // i = 0 term in log space
    Real q = std::exp(log_t);
    Real term = std::exp(log_t);
    for (int i = 1; i < a; ++i) {
        term *= x / Real(i);
        q += term;
    }
    Real p = Real(1) - q;
    if (p < Real(0)) p = Real(0);
    if (p > Real(1)) p = Real(1);
    return p;
}

// Erlang(shape, scale) CDF.
inline double erlang_cdf(int shape, double scale, double x) {
    if (scale <= 0.0) throw InvalidParameter("erlang_cdf: scale must be positive");
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(shape, x / scale);
}

// Adaptive Simpson quadrature.
namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}
inline double adapt(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
} // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int max_depth = 40) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = detail::simpson(f, a, b, fa, fm, fb);
    return detail::adapt(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Ordinary least squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidParameter("ls_slope: need >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace bdris::numerics
