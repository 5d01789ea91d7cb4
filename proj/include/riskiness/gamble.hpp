#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <variant>
#include <vector>

#include "riskiness/errors.hpp"
#include "riskiness/math/quadrature.hpp"
#include "riskiness/math/special.hpp"

namespace riskiness {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// A finite-support gamble: outcomes (value, probability).
struct DiscreteGamble {
    std::vector<std::pair<double, double>> outcomes;
};

struct UniformDensity {
    double a = 0.0, b = 1.0;
};

// Beta(alpha, beta) rescaled from [0,1] to [a, b].
struct BetaDensity {
    double alpha = 1.0, beta = 1.0;
    double a = 0.0, b = 1.0;
};

// X = theta + exp(mu + sigma Z), Z standard normal; support (theta, inf).
struct ShiftedLognormalDensity {
    double mu = 0.0, sigma = 1.0, theta = 0.0;
};

// Piecewise-linear density between sample points, renormalized so the
// trapezoid integral is exactly 1.  Build through make().
struct TabulatedDensity {
    std::vector<double> x;
    std::vector<double> f;
    std::vector<double> cum;  // cumulative mass at the knots, cum.front() == 0

    static TabulatedDensity make(std::vector<double> xs, std::vector<double> fs) {
        if (xs.size() != fs.size() || xs.size() < 2)
            throw NotAGamble("tabulated density needs matching x/f arrays with at least 2 points");
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!std::isfinite(xs[i]) || !std::isfinite(fs[i]) || fs[i] < 0.0)
                throw NotAGamble("tabulated density values must be finite and nonnegative");
            if (i > 0 && !(xs[i] > xs[i - 1]))
                throw NotAGamble("tabulated x values must be strictly increasing");
        }
        for (std::size_t i = 1; i + 1 < fs.size(); ++i)
            if (!(fs[i] > 0.0))
                throw NotAGamble("tabulated density must be strictly positive between the endpoints");
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            total += 0.5 * (fs[i] + fs[i + 1]) * (xs[i + 1] - xs[i]);
        if (!(total > 0.0)) throw NotAGamble("tabulated density integrates to zero");
        TabulatedDensity d;
        d.x = std::move(xs);
        d.f = std::move(fs);
        for (double& v : d.f) v /= total;
        d.cum.resize(d.x.size());
        d.cum[0] = 0.0;
        for (std::size_t i = 0; i + 1 < d.x.size(); ++i)
            d.cum[i + 1] = d.cum[i] + 0.5 * (d.f[i] + d.f[i + 1]) * (d.x[i + 1] - d.x[i]);
        d.cum.back() = 1.0;
        return d;
    }
};

using DensityFamily =
    std::variant<UniformDensity, BetaDensity, ShiftedLognormalDensity, TabulatedDensity>;

struct DensityGamble {
    DensityFamily family;
};

using Gamble = std::variant<DiscreteGamble, DensityGamble>;

enum class SupportKind { Compact, HalfLine };

struct GambleStats {
    double mean = 0.0;
    double second_moment = 0.0;
    double max_loss = 0.0;      // L = -essinf X > 0
    double prob_negative = 0.0;  // P(X < 0)
};

inline SupportKind support_kind(const DensityGamble& g) {
    return std::holds_alternative<ShiftedLognormalDensity>(g.family) ? SupportKind::HalfLine
                                                                     : SupportKind::Compact;
}

inline double support_min(const DensityGamble& g) {
    return std::visit(overloaded{[](const UniformDensity& d) { return d.a; },
                                 [](const BetaDensity& d) { return d.a; },
                                 [](const ShiftedLognormalDensity& d) { return d.theta; },
                                 [](const TabulatedDensity& d) { return d.x.front(); }},
                      g.family);
}

inline double support_max(const DensityGamble& g) {
    return std::visit(
        overloaded{[](const UniformDensity& d) { return d.b; },
                   [](const BetaDensity& d) { return d.b; },
                   [](const ShiftedLognormalDensity&) {
                       return std::numeric_limits<double>::infinity();
                   },
                   [](const TabulatedDensity& d) { return d.x.back(); }},
        g.family);
}

inline double density(const DensityGamble& g, double x) {
    return std::visit(
        overloaded{
            [x](const UniformDensity& d) {
                return (x >= d.a && x <= d.b) ? 1.0 / (d.b - d.a) : 0.0;
            },
            [x](const BetaDensity& d) {
                if (x <= d.a || x >= d.b) return 0.0;
                const double t = (x - d.a) / (d.b - d.a);
                const double lw = (d.alpha - 1.0) * std::log(t) +
                                  (d.beta - 1.0) * std::log1p(-t) -
                                  math::lbeta(d.alpha, d.beta);
                return std::exp(lw) / (d.b - d.a);
            },
            [x](const ShiftedLognormalDensity& d) {
                if (x <= d.theta) return 0.0;
                const double u = x - d.theta;
                const double z = (std::log(u) - d.mu) / d.sigma;
                return math::normal_pdf(z) / (d.sigma * u);
            },
            [x](const TabulatedDensity& d) {
                if (x < d.x.front() || x > d.x.back()) return 0.0;
                auto it = std::upper_bound(d.x.begin(), d.x.end(), x);
                std::size_t i = (it == d.x.begin()) ? 0 : (it - d.x.begin() - 1);
                if (i + 1 >= d.x.size()) i = d.x.size() - 2;
                const double w = (x - d.x[i]) / (d.x[i + 1] - d.x[i]);
                return d.f[i] + w * (d.f[i + 1] - d.f[i]);
            }},
        g.family);
}

inline double cdf(const DensityGamble& g, double x) {
    return std::visit(
        overloaded{
            [x](const UniformDensity& d) {
                if (x <= d.a) return 0.0;
                if (x >= d.b) return 1.0;
                return (x - d.a) / (d.b - d.a);
            },
            [x](const BetaDensity& d) {
                if (x <= d.a) return 0.0;
                if (x >= d.b) return 1.0;
                return math::betainc_reg(d.alpha, d.beta, (x - d.a) / (d.b - d.a));
            },
            [x](const ShiftedLognormalDensity& d) {
                if (x <= d.theta) return 0.0;
                return math::normal_cdf((std::log(x - d.theta) - d.mu) / d.sigma);
            },
            [x](const TabulatedDensity& d) {
                if (x <= d.x.front()) return 0.0;
                if (x >= d.x.back()) return 1.0;
                auto it = std::upper_bound(d.x.begin(), d.x.end(), x);
                const std::size_t i = it - d.x.begin() - 1;
                const double u = x - d.x[i];
                const double slope = (d.f[i + 1] - d.f[i]) / (d.x[i + 1] - d.x[i]);
                const double c = d.cum[i] + d.f[i] * u + 0.5 * slope * u * u;
                return std::clamp(c, 0.0, 1.0);
            }},
        g.family);
}

inline double quantile(const DensityGamble& g, double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw OutOfDomain("quantile requires p in [0, 1)");
    return std::visit(
        overloaded{
            [p](const UniformDensity& d) { return d.a + p * (d.b - d.a); },
            [p](const BetaDensity& d) {
                return d.a + (d.b - d.a) * math::betainc_inv(d.alpha, d.beta, p);
            },
            [p](const ShiftedLognormalDensity& d) {
                if (p == 0.0) return d.theta;
                return d.theta + std::exp(d.mu + d.sigma * math::normal_quantile(p));
            },
            [p](const TabulatedDensity& d) {
                if (p == 0.0) return d.x.front();
                auto it = std::upper_bound(d.cum.begin(), d.cum.end(), p);
                std::size_t i = it - d.cum.begin();
                i = (i == 0) ? 0 : i - 1;
                if (i + 1 >= d.x.size()) i = d.x.size() - 2;
                const double q = p - d.cum[i];
                const double h = d.x[i + 1] - d.x[i];
                const double slope = (d.f[i + 1] - d.f[i]) / h;
                // Solve 0.5 s u^2 + f0 u = q for u in [0, h], stable form.
                const double f0 = d.f[i];
                const double disc = std::sqrt(std::max(0.0, f0 * f0 + 2.0 * slope * q));
                double u;
                if (std::abs(slope) * h < 1e-14 * (f0 + disc)) {
                    u = (f0 > 0.0) ? q / f0 : 0.0;
                } else {
                    u = (f0 + disc > 0.0) ? 2.0 * q / (f0 + disc) : 0.0;
                }
                return d.x[i] + std::clamp(u, 0.0, h);
            }},
        g.family);
}

// The point beyond which at most 1e-12 of mass remains; equal to the
// support maximum for compact families.
inline double truncation_point(const DensityGamble& g) {
    if (support_kind(g) == SupportKind::Compact) return support_max(g);
    const auto& d = std::get<ShiftedLognormalDensity>(g.family);
    return d.theta + std::exp(d.mu + d.sigma * math::normal_quantile(1.0 - 1e-12));
}

namespace detail {

// z range for lognormal expectations: wide enough that subquadratic
// integrands leave < ~1e-15 of their value beyond it.
inline double lognormal_zmax(double sigma) { return std::max(12.0, 2.0 * sigma + 10.5); }

}  // namespace detail

// E[h(X)] for a density gamble, by adaptive quadrature in a coordinate
// system free of endpoint singularities:
//   uniform    - directly on [a, b]
//   beta       - s = t^alpha on the left half, r = (1-t)^beta on the right,
//                which absorbs both power-law endpoint factors
//   lognormal  - z-space (x = theta + e^{mu + sigma z}) against the normal pdf
//   tabulated  - per linear segment
// h must be bounded on compact supports and grow at most quadratically on
// half-line supports.  The result carries an honest error bound including
// truncation residuals.
template <class H>
math::QuadratureResult expect(const DensityGamble& g, H&& h, double abs_tol) {
    return std::visit(
        overloaded{
            [&](const UniformDensity& d) {
                const double c = 1.0 / (d.b - d.a);
                return math::integrate([&](double x) { return h(x) * c; }, d.a, d.b, abs_tol);
            },
            [&](const BetaDensity& d) {
                const double lB = math::lbeta(d.alpha, d.beta);
                auto x_of_t = [&](double t) { return d.a + (d.b - d.a) * t; };
                auto left = [&](double s) {
                    const double t = std::pow(s, 1.0 / d.alpha);
                    const double w =
                        std::exp((d.beta - 1.0) * std::log1p(-t) - lB) / d.alpha;
                    return h(x_of_t(t)) * w;
                };
                auto right = [&](double r) {
                    const double u = std::pow(r, 1.0 / d.beta);
                    const double t = 1.0 - u;
                    const double w = std::exp((d.alpha - 1.0) * std::log(t) - lB) / d.beta;
                    return h(x_of_t(t)) * w;
                };
                auto res = math::integrate(left, 0.0, std::pow(0.5, d.alpha), 0.5 * abs_tol);
                res += math::integrate(right, 0.0, std::pow(0.5, d.beta), 0.5 * abs_tol);
                return res;
            },
            [&](const ShiftedLognormalDensity& d) {
                const double zmax = detail::lognormal_zmax(d.sigma);
                auto integrand = [&](double z) {
                    return h(d.theta + std::exp(d.mu + d.sigma * z)) * math::normal_pdf(z);
                };
                auto res = math::integrate(integrand, -zmax, zmax, abs_tol);
                // Truncation residual: left tail is bounded by |h| near theta;
                // right tail by quadratic growth matched at the cut point.
                const double xl = d.theta + std::exp(d.mu - d.sigma * zmax);
                const double xr = d.theta + std::exp(d.mu + d.sigma * zmax);
                const double hl = std::abs(h(xl)), hr = std::abs(h(xr));
                double tail = math::normal_cdf(-zmax) * (hl + hr + 2.0);
                tail += 4.0 * (hr / std::max(1.0, xr * xr)) *
                        std::exp(2.0 * d.mu + 2.0 * d.sigma * d.sigma) *
                        math::normal_cdf(2.0 * d.sigma - zmax);
                res.error_bound += tail;
                return res;
            },
            [&](const TabulatedDensity& d) {
                math::QuadratureResult res;
                const double seg_tol = abs_tol / static_cast<double>(d.x.size() - 1);
                for (std::size_t i = 0; i + 1 < d.x.size(); ++i) {
                    const double x0 = d.x[i], x1 = d.x[i + 1];
                    const double f0 = d.f[i];
                    const double slope = (d.f[i + 1] - f0) / (x1 - x0);
                    res += math::integrate(
                        [&](double x) { return h(x) * (f0 + slope * (x - x0)); }, x0, x1,
                        seg_tol);
                }
                return res;
            }},
        g.family);
}

inline GambleStats validate(const DiscreteGamble& g) {
    if (g.outcomes.size() < 2)
        throw NotAGamble("a discrete gamble needs at least two outcomes");
    double total = 0.0, mean = 0.0, m2 = 0.0, pneg = 0.0;
    double vmin = std::numeric_limits<double>::infinity();
    for (const auto& [v, p] : g.outcomes) {
        if (!std::isfinite(v)) throw NotAGamble("outcome values must be finite");
        if (!std::isfinite(p) || !(p > 0.0))
            throw NotAGamble("outcome probabilities must be positive");
        total += p;
        mean += p * v;
        m2 += p * v * v;
        if (v < 0.0) pneg += p;
        vmin = std::min(vmin, v);
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw NotAGamble("probabilities sum to " + std::to_string(total) + ", expected 1");
    if (!(vmin < 0.0)) throw NotAGamble("no loss outcomes (P(X < 0) must be positive)");
    if (!(mean > 0.0)) throw NotAGamble("nonpositive mean " + std::to_string(mean));
    return {mean, m2, -vmin, pneg};
}

inline GambleStats validate(const DensityGamble& g) {
    std::visit(overloaded{[](const UniformDensity& d) {
                              if (!std::isfinite(d.a) || !std::isfinite(d.b) || !(d.a < d.b))
                                  throw NotAGamble("uniform density requires a < b");
                          },
                          [](const BetaDensity& d) {
                              if (!(d.alpha > 0.0) || !(d.beta > 0.0) || !std::isfinite(d.alpha) ||
                                  !std::isfinite(d.beta))
                                  throw NotAGamble("beta density requires positive shape parameters");
                              if (!std::isfinite(d.a) || !std::isfinite(d.b) || !(d.a < d.b))
                                  throw NotAGamble("beta density requires a < b");
                          },
                          [](const ShiftedLognormalDensity& d) {
                              if (!std::isfinite(d.mu) || !std::isfinite(d.sigma) ||
                                  !std::isfinite(d.theta) || !(d.sigma > 0.0))
                                  throw NotAGamble("lognormal density requires finite mu/theta and sigma > 0");
                          },
                          [](const TabulatedDensity& d) {
                              if (d.x.size() != d.f.size() || d.x.size() < 2 ||
                                  d.cum.size() != d.x.size())
                                  throw NotAGamble("tabulated density not built through make()");
                          }},
               g.family);
    if (!(support_min(g) < 0.0))
        throw NotAGamble("no loss mass (support does not extend below zero)");

    auto norm = expect(g, [](double) { return 1.0; }, 1e-10);
    if (std::abs(norm.value - 1.0) > 1e-9)
        throw NotAGamble("density integrates to " + std::to_string(norm.value) +
                         ", expected 1");
    auto mean = expect(g, [](double x) { return x; }, 1e-10);
    auto m2 = expect(g, [](double x) { return x * x; }, 1e-10);
    if (!mean.converged || !m2.converged || mean.error_bound > 1e-9 || m2.error_bound > 1e-9)
        throw Error("moment quadrature did not reach the 1e-9 error target");
    if (!(mean.value > 0.0))
        throw NotAGamble("nonpositive mean " + std::to_string(mean.value));
    const double pneg = cdf(g, 0.0);
    if (!(pneg > 0.0)) throw NotAGamble("no loss mass (P(X < 0) must be positive)");
    return {mean.value, m2.value, -support_min(g), pneg};
}

inline GambleStats validate(const Gamble& g) {
    return std::visit([](const auto& x) { return validate(x); }, g);
}

inline double max_loss(const DiscreteGamble& g) {
    double vmin = std::numeric_limits<double>::infinity();
    for (const auto& [v, p] : g.outcomes) vmin = std::min(vmin, v);
    return -vmin;
}

inline double max_loss(const DensityGamble& g) { return -support_min(g); }

inline double max_loss(const Gamble& g) {
    return std::visit([](const auto& x) { return max_loss(x); }, g);
}

}  // namespace riskiness
