#pragma once

#include <cmath>
#include <limits>

#include "riskiness/gamble.hpp"

namespace riskiness {

// One evaluation of phi(lambda) = E log(1 + lambda X).
struct PhiEvaluation {
    double lambda = 0.0;
    double value = 0.0;
    double abs_error_bound = 0.0;
};

namespace detail {

// log(1 + lambda v) for a single outcome.  For losses deep in the boundary
// layer (lambda v near -1) the direct form loses all precision, so the exact
// factorization 1 + lambda v = (-v) (1/(-v) - lambda) is used: the subtraction
// is exact by Sterbenz once lambda >= (1/(-v))/2.  err_scale receives a bound
// on the absolute error of the returned term.
inline double log_term(double v, double lambda, double* err_scale = nullptr) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (v >= 0.0 || lambda == 0.0) {
        const double t = std::log1p(lambda * v);
        if (err_scale) *err_scale = eps * (std::abs(t) + 1.0);
        return t;
    }
    const double inv = 1.0 / (-v);
    if (lambda < 0.5 * inv) {
        const double t = std::log1p(lambda * v);
        if (err_scale) *err_scale = eps * (std::abs(t) + 1.0);
        return t;
    }
    const double gap = inv - lambda;  // exact subtraction; inv carries eps roundoff
    if (err_scale)
        *err_scale = (gap > 0.0) ? eps * inv / gap + 2.0 * eps
                                 : std::numeric_limits<double>::infinity();
    return std::log(-v) + std::log(gap);
}

// v / (1 + lambda v), the integrand of phi', with the same guarded form.
inline double ratio_term(double v, double lambda) {
    if (v >= 0.0 || lambda == 0.0) return v / (1.0 + lambda * v);
    const double inv = 1.0 / (-v);
    if (lambda < 0.5 * inv) return v / (1.0 + lambda * v);
    return -1.0 / (inv - lambda);
}

// phi at the boundary lambda* = 1/L for a density gamble, where the
// integrand log(1 + lambda* x) = log(lambda* (x + L)) has a logarithmic
// singularity at the left endpoint.  Evaluated entirely in coordinates
// where the distance to the endpoint is carried exactly, so no
// cancellation occurs:
//   uniform/tabulated - u = x + L on (0, M + L], inner (0, delta] via the
//                       log-endpoint rule
//   beta              - t-space with the weight substitutions of expect()
//   lognormal         - z-space, where the integrand is exactly
//                       (mu - log L + sigma z) and perfectly smooth
inline math::QuadratureResult phi_boundary(const DensityGamble& g, double abs_tol) {
    const double L = max_loss(g);
    const double lambda_star = 1.0 / L;
    return std::visit(
        overloaded{
            [&](const UniformDensity& d) {
                const double width = d.b - d.a;
                const double c = 1.0 / width;
                const double delta = 1e-6 * width;
                const double log_ls = std::log(lambda_star);
                // g(v) = w(e^v) e^v for w(u) = c log(lambda* u)
                auto inner = [&](double v) { return c * (log_ls + v) * std::exp(v); };
                auto res = math::log_endpoint_integral(inner, std::log(delta), 0.5 * abs_tol);
                auto w = [&](double u) { return c * std::log(lambda_star * u); };
                res += math::integrate(w, delta, width, 0.5 * abs_tol);
                return res;
            },
            [&](const BetaDensity& d) {
                const double width = d.b - d.a;
                const double lB = math::lbeta(d.alpha, d.beta);
                const double c0 = std::log(lambda_star * width);
                const double delta_t = 1e-6;
                // inner (0, delta_t] in t under t = e^v: the t^(alpha-1)
                // prefactor and the substitution Jacobian combine into one
                // exp(alpha v - ...) that underflows gracefully
                auto inner = [&](double v) {
                    const double t = std::exp(v);
                    return (c0 + v) *
                           std::exp(d.alpha * v + (d.beta - 1.0) * std::log1p(-t) - lB);
                };
                auto res =
                    math::log_endpoint_integral(inner, std::log(delta_t), abs_tol / 3.0);
                // [delta_t, 1/2] in s = t^alpha
                auto left = [&](double s) {
                    const double t = std::pow(s, 1.0 / d.alpha);
                    const double w =
                        std::exp((d.beta - 1.0) * std::log1p(-t) - lB) / d.alpha;
                    return (c0 + std::log(s) / d.alpha) * w;
                };
                res += math::integrate(left, std::pow(delta_t, d.alpha),
                                       std::pow(0.5, d.alpha), abs_tol / 3.0);
                // [1/2, 1) in r = (1-t)^beta
                auto right = [&](double r) {
                    const double u = std::pow(r, 1.0 / d.beta);
                    const double t = 1.0 - u;
                    const double w = std::exp((d.alpha - 1.0) * std::log(t) - lB) / d.beta;
                    return (c0 + std::log1p(-u)) * w;
                };
                res += math::integrate(right, 0.0, std::pow(0.5, d.beta), abs_tol / 3.0);
                return res;
            },
            [&](const ShiftedLognormalDensity& d) {
                const double c0 = d.mu - std::log(L);
                const double zmax = 12.0;
                auto integrand = [&](double z) {
                    return (c0 + d.sigma * z) * math::normal_pdf(z);
                };
                auto res = math::integrate(integrand, -zmax, zmax, abs_tol);
                res.error_bound +=
                    2.0 * math::normal_cdf(-zmax) * (std::abs(c0) + d.sigma * (zmax + 1.0));
                return res;
            },
            [&](const TabulatedDensity& d) {
                const double a = d.x.front();
                const double delta = 1e-6 * (d.x.back() - a);
                auto f_at = [&](double u) {  // density at distance u from the left end
                    const double xx = a + u;
                    auto it = std::upper_bound(d.x.begin(), d.x.end(), xx);
                    std::size_t i = (it == d.x.begin()) ? 0 : (it - d.x.begin() - 1);
                    if (i + 1 >= d.x.size()) i = d.x.size() - 2;
                    const double w = (xx - d.x[i]) / (d.x[i + 1] - d.x[i]);
                    return d.f[i] + w * (d.f[i + 1] - d.f[i]);
                };
                auto w = [&](double u) { return std::log(lambda_star * u) * f_at(u); };
                const double log_ls = std::log(lambda_star);
                auto inner = [&](double v) {
                    const double u = std::exp(v);
                    return (log_ls + v) * f_at(u) * u;
                };
                const double n_seg = static_cast<double>(d.x.size() - 1);
                auto res = math::log_endpoint_integral(inner, std::log(delta), 0.5 * abs_tol);
                for (std::size_t i = 0; i + 1 < d.x.size(); ++i) {
                    const double u0 = std::max(delta, d.x[i] - a);
                    const double u1 = d.x[i + 1] - a;
                    if (u1 <= u0) continue;
                    res += math::integrate(w, u0, u1, 0.5 * abs_tol / n_seg);
                }
                return res;
            }},
        g.family);
}

}  // namespace detail

// phi(lambda) = E log(1 + lambda X) as an exact weighted sum.
// Domain: 0 <= lambda < 1/L (phi diverges to -infinity at 1/L when the
// minimum outcome carries positive mass).
inline PhiEvaluation phi(const DiscreteGamble& g, double lambda) {
    const double L = max_loss(g);
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw OutOfDomain("phi requires lambda in [0, 1/L)");
    if (lambda * L >= 1.0)
        throw OutOfDomain("phi(lambda) = -infinity for lambda >= 1/L on a discrete gamble");
    double value = 0.0, err = 0.0;
    for (const auto& [v, p] : g.outcomes) {
        double term_err = 0.0;
        value += p * detail::log_term(v, lambda, &term_err);
        err += p * term_err;
    }
    return {lambda, value, err + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(value)};
}

// phi(lambda) by adaptive quadrature.  Domain: 0 <= lambda <= 1/L; the
// boundary lambda = 1/L is evaluated by the singularity-aware scheme.
inline PhiEvaluation phi(const DensityGamble& g, double lambda, double abs_tol = 1e-12) {
    const double L = max_loss(g);
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw OutOfDomain("phi requires lambda in [0, 1/L]");
    if (lambda == 0.0) return {0.0, 0.0, 0.0};
    const double margin = 1.0 - lambda * L;
    if (margin < -5e-16)
        throw OutOfDomain("phi requires lambda <= 1/L");
    if (margin <= 5e-16) {
        // Within one rounding step of the boundary: evaluate at lambda* and
        // account for the remap (phi has unbounded slope here, but the
        // affected mass is O(margin), keeping the value shift below ~1e-11).
        auto r = detail::phi_boundary(g, abs_tol);
        return {lambda, r.value, r.error_bound + 1e-11};
    }
    auto r = expect(g, [lambda](double x) { return std::log1p(lambda * x); }, abs_tol);
    return {lambda, r.value, r.error_bound};
}

inline PhiEvaluation phi(const Gamble& g, double lambda, double abs_tol = 1e-12) {
    return std::visit(overloaded{[&](const DiscreteGamble& d) { return phi(d, lambda); },
                                 [&](const DensityGamble& d) { return phi(d, lambda, abs_tol); }},
                      g);
}

// phi'(lambda) = E[X / (1 + lambda X)].  Domain: 0 <= lambda < 1/L
// (divergent at the boundary whenever the density is positive at -L).
inline double phi_derivative(const DiscreteGamble& g, double lambda) {
    const double L = max_loss(g);
    if (!std::isfinite(lambda) || lambda < 0.0 || lambda * L >= 1.0)
        throw OutOfDomain("phi_derivative requires lambda in [0, 1/L)");
    double value = 0.0;
    for (const auto& [v, p] : g.outcomes) value += p * detail::ratio_term(v, lambda);
    return value;
}

inline double phi_derivative(const DensityGamble& g, double lambda, double abs_tol = 1e-9) {
    const double L = max_loss(g);
    if (!std::isfinite(lambda) || lambda < 0.0)
        throw OutOfDomain("phi_derivative requires lambda in [0, 1/L)");
    const double margin = 1.0 - lambda * L;
    if (margin <= 5e-16)
        throw OutOfDomain("phi_derivative diverges at lambda = 1/L");
    return expect(g, [lambda](double x) { return detail::ratio_term(x, lambda); }, abs_tol)
        .value;
}

inline double phi_derivative(const Gamble& g, double lambda) {
    return std::visit(
        overloaded{[&](const DiscreteGamble& d) { return phi_derivative(d, lambda); },
                   [&](const DensityGamble& d) { return phi_derivative(d, lambda); }},
        g);
}

}  // namespace riskiness
