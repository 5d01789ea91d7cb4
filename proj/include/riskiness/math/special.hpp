#pragma once

#include <cmath>
#include <limits>

#include "riskiness/errors.hpp"

namespace riskiness::math {

inline double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244008444);
}

// Inverse standard normal CDF: Acklam's rational approximation refined by
// two Halley steps against erfc.  The upper half is reflected onto the
// lower: 1-p is exact there (Sterbenz) and erfc of a positive argument
// keeps full relative precision, which a direct upper-tail refinement
// would not (cdf - p is quantized at ulp(1) near 1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw OutOfDomain("normal quantile requires p in (0,1)");
    if (p > 0.5) return -normal_quantile(1.0 - p);

    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double e = normal_cdf(x) - p;
        const double u = e / normal_pdf(x);
        x -= u / (1.0 + 0.5 * x * u);  // Halley step
    }
    return x;
}

inline double lbeta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

// Continued fraction for the incomplete beta (modified Lentz).
inline double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = std::numeric_limits<double>::epsilon();
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double dd = 1.0 - qab * x / qap;
    if (std::abs(dd) < tiny) dd = tiny;
    dd = 1.0 / dd;
    double h = dd;
    for (int m = 1; m <= 300; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        dd = 1.0 + aa * dd;
        if (std::abs(dd) < tiny) dd = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        dd = 1.0 / dd;
        h *= dd * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        dd = 1.0 + aa * dd;
        if (std::abs(dd) < tiny) dd = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        dd = 1.0 / dd;
        const double del = dd * c;
        h *= del;
        if (std::abs(del - 1.0) < 10.0 * eps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double betainc_reg(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw OutOfDomain("betainc requires positive shape parameters");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lfront = a * std::log(x) + b * std::log1p(-x) - lbeta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(lfront) * detail::betacf(a, b, x) / a;
    }
    return 1.0 - std::exp(lfront) * detail::betacf(b, a, 1.0 - x) / b;
}

// Inverse of the regularized incomplete beta in x, by bisection-guarded
// Newton to ~1e-14.
inline double betainc_inv(double a, double b, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw OutOfDomain("betainc_inv requires p in [0,1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    double x = a / (a + b);
    const double lb = lbeta(a, b);
    for (int i = 0; i < 200; ++i) {
        const double f = betainc_reg(a, b, x) - p;
        if (f > 0.0) hi = x; else lo = x;
        const double ldens = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lb;
        double step = f * std::exp(-ldens);
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) < 1e-16 * (x + 1e-300)) { x = xn; break; }
        x = xn;
        if (hi - lo < 1e-17) break;
    }
    return x;
}

}  // namespace riskiness::math
