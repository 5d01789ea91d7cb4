#pragma once

#include <cmath>
#include <vector>

#include "riskiness/riskiness.hpp"

namespace riskiness {

// Level-n dyadic lower approximation: X_n maps each point of the support
// to the largest grid point below it, so X_n <= X pointwise and
// X_n increases in n.
//   compact supports:  2^n cells of width (M + L) 2^-n over [-L, M]
//   half-line:         n 2^n cells of width 2^-n over [-L, -L + n], plus
//                      one overflow atom at -L + n carrying the tail mass
struct DyadicApproximation {
    int level = 0;
    std::vector<double> values;  // grid points (cell infima)
    std::vector<double> masses;  // cell masses, summing to 1 within 1e-12
    double mean = 0.0;
    DiscreteGamble gamble;       // atoms with zero mass pruned
};

inline DyadicApproximation discretize(const DensityGamble& g, int level) {
    if (level < 1) throw OutOfDomain("dyadic level must be >= 1");
    const double lo = support_min(g);
    DyadicApproximation out;
    out.level = level;

    std::size_t cells;
    double width;
    if (support_kind(g) == SupportKind::Compact) {
        cells = std::size_t{1} << level;
        width = (support_max(g) - lo) / static_cast<double>(cells);
    } else {
        cells = static_cast<std::size_t>(level) << level;
        width = std::ldexp(1.0, -level);
    }

    out.values.resize(cells + (support_kind(g) == SupportKind::HalfLine ? 1 : 0));
    out.masses.resize(out.values.size());
    double prev_cdf = 0.0;
    for (std::size_t k = 0; k < cells; ++k) {
        out.values[k] = lo + static_cast<double>(k) * width;
        const double edge = lo + static_cast<double>(k + 1) * width;
        const double c = (k + 1 == cells && support_kind(g) == SupportKind::Compact)
                             ? 1.0
                             : cdf(g, edge);
        out.masses[k] = std::max(0.0, c - prev_cdf);
        prev_cdf = c;
    }
    if (support_kind(g) == SupportKind::HalfLine) {
        out.values[cells] = lo + static_cast<double>(level);
        out.masses[cells] = std::max(0.0, 1.0 - prev_cdf);
    }

    out.gamble.outcomes.reserve(out.values.size());
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        out.mean += out.masses[k] * out.values[k];
        if (out.masses[k] > 0.0)
            out.gamble.outcomes.emplace_back(out.values[k], out.masses[k]);
    }
    return out;
}

// Riskiness of the level-n approximation.  Throws NotYetAGamble while the
// induced mean is still nonpositive (coarse levels put too much weight on
// the loss cells); finer levels recover the gamble property.
inline RiskinessResult level_riskiness(const DensityGamble& g, int level,
                                       double tol = 1e-10) {
    auto d = discretize(g, level);
    if (!(d.mean > 0.0)) throw NotYetAGamble(level, d.mean);
    return static_riskiness(d.gamble, tol);
}

struct ConvergenceLevel {
    int level = 0;
    double lambda = 0.0;
    double rho = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceLevel> levels;  // levels that admitted a root
    std::vector<int> not_yet;              // levels skipped (mean <= 0)
    double lambda_limit = 0.0;             // lambda at the deepest level
    double lambda_target = 0.0;            // 1/rho of the continuous gamble
    double rho_target = 0.0;
    Regime regime_target = Regime::EquationSolved;
    bool monotone = true;                  // lambda_n nondecreasing (1e-12 slack)
    double gap = 0.0;                      // |lambda_limit - lambda_target|
};

// The approximating sequence lambda_n = 1/rho(X_n) up to n_max, against the
// continuous-gamble target.  lambda_n increases and is bounded by 1/L, so
// the sequence converges from below.
inline ConvergenceReport lambda_sequence(const DensityGamble& g, int n_max,
                                         double tol = 1e-10) {
    if (n_max < 1) throw OutOfDomain("n_max must be >= 1");
    ConvergenceReport rep;
    auto target = extended_riskiness(g, tol);
    rep.lambda_target = target.lambda;
    rep.rho_target = target.rho;
    rep.regime_target = target.regime;
    for (int n = 1; n <= n_max; ++n) {
        try {
            auto r = level_riskiness(g, n, tol);
            if (!rep.levels.empty() && r.lambda < rep.levels.back().lambda - 1e-12)
                rep.monotone = false;
            rep.levels.push_back({n, r.lambda, r.rho});
        } catch (const NotYetAGamble& e) {
            rep.not_yet.push_back(e.level());
        }
    }
    if (!rep.levels.empty()) rep.lambda_limit = rep.levels.back().lambda;
    rep.gap = std::abs(rep.lambda_limit - rep.lambda_target);
    return rep;
}

// Value of the level-n step function at a point of the support (used to
// check the pointwise domination X_n <= X_{n+1} <= X).
inline double level_value(const DyadicApproximation& d, double x) {
    if (d.values.empty() || x < d.values.front()) return -std::numeric_limits<double>::infinity();
    auto it = std::upper_bound(d.values.begin(), d.values.end(), x);
    return *(it - 1);
}

}  // namespace riskiness
