#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "riskiness/phi.hpp"

namespace riskiness {

enum class Regime { EquationSolved, MaximalLoss };

inline const char* regime_name(Regime r) {
    return r == Regime::EquationSolved ? "equation_solved" : "maximal_loss";
}

struct RiskinessResult {
    double rho = 0.0;       // the riskiness number, in (0, inf); rho >= L always
    double lambda = 0.0;    // 1/rho
    Regime regime = Regime::EquationSolved;
    double residual = 0.0;  // |phi(lambda)| at the reported root (EquationSolved)
};

namespace detail {

// Safeguarded Newton on a bracket [lo, hi] with f(lo-side) >= 0 >= f(hi-side):
// every iterate stays inside the bracket, falling back to bisection whenever
// the Newton step leaves it.  Stops at |f| <= tol or bracket exhaustion.
template <class F, class DF>
inline std::pair<double, double> newton_bisect(F&& f, DF&& df, double lo, double hi,
                                               double x0, double tol, int max_iter = 120) {
    double x = std::clamp(x0, lo, hi);
    double fx = 0.0;
    for (int i = 0; i < max_iter; ++i) {
        fx = f(x);
        if (std::abs(fx) <= tol) return {x, std::abs(fx)};
        if (fx > 0.0) lo = x; else hi = x;
        double xn;
        const double d = df(x);
        if (d != 0.0 && std::isfinite(d)) {
            xn = x - fx / d;
            if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        } else {
            xn = 0.5 * (lo + hi);
        }
        if (xn == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                                        std::max(std::abs(lo), std::abs(hi)))
            return {x, std::abs(fx)};
        x = xn;
    }
    return {x, std::abs(fx)};
}

// Root of phi for a validated discrete gamble.  Three branches by where the
// root sits relative to lambda* = 1/L:
//   1. below lambda*/2: plain bracketed Newton in lambda.
//   2. in [lambda*(1 - 2^-k+1), lambda*(1 - 2^-k)], k <= 40: solved in
//      u = -log(1 - lambda/lambda*), where the minimum-outcome term of phi
//      is exactly -p0 u (writing lambda* L = 1 analytically) and the other
//      terms vary smoothly.
//   3. deeper than 2^-40: the boundary layer.  Here 1 - lambda L is far
//      below what doubles can represent, so phi has no computable sign
//      change; the fixed point u = C(lambda(u))/p0 of the u-space equation
//      converges in a couple of iterations and the reported lambda
//      saturates at lambda* (rho = L) once e^-u underflows past 1 ulp.
inline std::pair<double, double> solve_discrete(
    const std::vector<std::pair<double, double>>& outcomes, double tol,
    double mean_hint, double m2_hint) {
    double vmin = std::numeric_limits<double>::infinity();
    for (const auto& [v, p] : outcomes) vmin = std::min(vmin, v);
    const double L = -vmin;
    const double lambda_star = 1.0 / L;

    double p0 = 0.0;
    std::vector<std::pair<double, double>> rest;
    rest.reserve(outcomes.size());
    for (const auto& [v, p] : outcomes) {
        if (v == vmin) p0 += p; else rest.emplace_back(v, p);
    }

    auto C = [&](double lam) {
        double s = 0.0;
        for (const auto& [v, p] : rest) s += p * log_term(v, lam);
        return s;
    };
    auto Cp = [&](double lam) {
        double s = 0.0;
        for (const auto& [v, p] : rest) s += p * ratio_term(v, lam);
        return s;
    };
    auto phi_at = [&](double lam) { return p0 * log_term(vmin, lam) + C(lam); };
    auto dphi_at = [&](double lam) { return p0 * ratio_term(vmin, lam) + Cp(lam); };
    // phi as a function of q = 1 - lambda/lambda*: the minimum-atom term is
    // exactly p0 log q, immune to the cancellation in 1 - lambda L.
    auto phi_q = [&](double q) { return p0 * std::log(q) + C(lambda_star * (1.0 - q)); };

    if (phi_q(0.5) < 0.0) {
        // Root below lambda*/2; the small-risk asymptotic 2 E[X]/E[X^2]
        // seeds Newton.
        const double hi = 0.5 * lambda_star;
        const double seed = std::min(0.9 * hi, 2.0 * mean_hint / m2_hint);
        return newton_bisect(phi_at, dphi_at, 0.0, hi, seed, tol);
    }

    const double ln2 = 0.6931471805599453094172321;
    for (int k = 2; k <= 40; ++k) {
        if (phi_q(std::ldexp(1.0, -k)) < 0.0) {
            auto f = [&](double u) {
                return -p0 * u + C(lambda_star * (1.0 - std::exp(-u)));
            };
            auto df = [&](double u) {
                const double e = std::exp(-u);
                return -p0 + e * lambda_star * Cp(lambda_star * (1.0 - e));
            };
            auto [u, res] =
                newton_bisect(f, df, (k - 1) * ln2, k * ln2, (k - 0.5) * ln2, tol);
            const double lambda = lambda_star * (1.0 - std::exp(-u));
            return {lambda, res};
        }
    }

    // Boundary layer: u* = C/p0 with C evaluated at lambda(u), refined.
    double u = C(lambda_star * (1.0 - std::ldexp(1.0, -40))) / p0;
    for (int i = 0; i < 4; ++i) {
        const double e = std::exp(-u);
        u = C(lambda_star * (1.0 - e)) / p0;
    }
    const double e = std::exp(-u);
    const double lambda = lambda_star * (1.0 - e);
    const double res = std::abs(-p0 * u + C(lambda));
    return {lambda, res};
}

}  // namespace detail

// Riskiness of a discrete gamble: the unique root of E log(1 + X/R) = 0 in
// R > L.  Validates first; always EquationSolved.
inline RiskinessResult static_riskiness(const DiscreteGamble& g, double tol = 1e-10) {
    const auto stats = validate(g);
    auto [lambda, residual] =
        detail::solve_discrete(g.outcomes, tol, stats.mean, stats.second_moment);
    return {1.0 / lambda, lambda, Regime::EquationSolved, residual};
}

// Extended riskiness of a density gamble: if phi(1/L) < 0 the equation
// E log(1 + X/R) = 0 has a root R > L (EquationSolved); if phi(1/L) >= 0
// the measure equals the maximal loss itself (MaximalLoss, rho = L).
// Throws BoundarySignAmbiguous when the sign of phi(1/L) cannot be
// resolved at the achieved quadrature precision.
inline RiskinessResult extended_riskiness(const DensityGamble& g, double tol = 1e-10) {
    const auto stats = validate(g);
    const double L = stats.max_loss;
    const double lambda_star = 1.0 / L;

    auto b = detail::phi_boundary(g, 1e-11);
    if (std::abs(b.value) <= b.error_bound) {
        if (b.error_bound <= 1e-9)
            return {L, lambda_star, Regime::MaximalLoss, 0.0};
        throw BoundarySignAmbiguous(b.value, b.error_bound);
    }
    if (b.value > 0.0) return {L, lambda_star, Regime::MaximalLoss, 0.0};

    const double quad_tol = std::clamp(0.01 * tol, 1e-14, 1e-12);
    auto f = [&](double lam) { return phi(g, lam, quad_tol).value; };
    auto df = [&](double lam) { return phi_derivative(g, lam, 1e-9); };

    double lo = 0.0, hi = 0.5 * lambda_star;
    double fhi = f(hi);
    int k = 1;
    while (fhi >= 0.0 && k < 46) {
        lo = hi;
        ++k;
        hi = lambda_star * (1.0 - std::ldexp(1.0, -k));
        fhi = f(hi);
    }
    if (fhi >= 0.0) {
        // phi(lambda*) < 0 yet no representable sign change: the root is
        // indistinguishable from lambda* in doubles.
        return {1.0 / hi, hi, Regime::EquationSolved, std::abs(fhi)};
    }
    double seed = (k == 1) ? std::min(0.45 * lambda_star, 2.0 * stats.mean / stats.second_moment)
                           : 0.5 * (lo + hi);
    auto [lambda, residual] = detail::newton_bisect(f, df, lo, hi, seed, tol);
    return {1.0 / lambda, lambda, Regime::EquationSolved, residual};
}

inline RiskinessResult riskiness(const Gamble& g, double tol = 1e-10) {
    return std::visit(
        overloaded{[&](const DiscreteGamble& d) { return static_riskiness(d, tol); },
                   [&](const DensityGamble& d) { return extended_riskiness(d, tol); }},
        g);
}

// Operational acceptance: take the gamble at wealth w iff E log(1 + X/w) >= 0,
// i.e. iff w >= rho(X).  Evaluated through phi directly; quadrature noise at
// the exact threshold resolves toward acceptance (the criterion is a weak
// inequality).
inline bool accept(const Gamble& g, double wealth) {
    if (!(wealth > 0.0) || !std::isfinite(wealth))
        throw OutOfDomain("accept requires positive finite wealth");
    const double L = max_loss(g);
    if (wealth < L) return false;
    return std::visit(
        overloaded{[&](const DiscreteGamble& d) {
                       if (wealth == L) return false;  // phi -> -infinity
                       const double lam = 1.0 / wealth;
                       if (lam * L >= 1.0) return false;
                       return phi(d, lam).value >= 0.0;
                   },
                   [&](const DensityGamble& d) {
                       auto e = (wealth == L) ? [&] {
                           auto r = detail::phi_boundary(d, 1e-11);
                           return PhiEvaluation{1.0 / L, r.value, r.error_bound};
                       }()
                                              : phi(d, 1.0 / wealth, 1e-12);
                       return e.value >= -e.abs_error_bound;
                   }},
        g);
}

struct WealthBound {
    double wealth = 0.0;
    // True when the two-sided |X|/W <= 1/2 proviso holds on the whole
    // support; half-line supports only satisfy it up to the 1e-12
    // truncation point, so the flag is cleared there.
    bool certified = true;
};

// A sufficient no-bankruptcy starting wealth:
// W0 = max(2 E[X^2]/E[X], 2 ess-sup|X|), which guarantees phi(1/W0) >= 0
// via log(1+x) >= x - 2x^2.  For half-line supports ess-sup|X| is taken
// over the truncated support and the bound is flagged uncertified.
inline WealthBound acceptance_wealth_bound(const Gamble& g) {
    const auto stats = validate(g);
    const double moment = 2.0 * stats.second_moment / stats.mean;
    return std::visit(
        overloaded{[&](const DiscreteGamble& d) {
                       double vmax = -std::numeric_limits<double>::infinity();
                       for (const auto& [v, p] : d.outcomes) vmax = std::max(vmax, v);
                       const double ess = std::max(stats.max_loss, std::abs(vmax));
                       return WealthBound{std::max(moment, 2.0 * ess), true};
                   },
                   [&](const DensityGamble& d) {
                       const bool compact = support_kind(d) == SupportKind::Compact;
                       const double top = truncation_point(d);
                       const double ess = std::max(stats.max_loss, std::abs(top));
                       return WealthBound{std::max(moment, 2.0 * ess), compact};
                   }},
        g);
}

}  // namespace riskiness
