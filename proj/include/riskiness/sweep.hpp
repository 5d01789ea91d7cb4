#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "riskiness/detail/parallel.hpp"
#include "riskiness/riskiness.hpp"

namespace riskiness {

// Parameter sweep over one scalar parameter of a density family, reporting
// rho/lambda/regime per grid point.  Points that fail the gamble
// preconditions are kept in the output with a marker instead of values.
struct SweepSpec {
    std::string family;                    // "uniform" | "beta" | "lognormal"
    std::map<std::string, double> fixed;   // the non-swept parameters
    std::string param;                     // swept parameter name
    double lo = 0.0, hi = 0.0, step = 0.0;
};

struct SweepRow {
    double param = 0.0;
    double rho = 0.0;
    double lambda = 0.0;
    Regime regime = Regime::EquationSolved;
    enum class Status { Ok, NotAGamble, Ambiguous } status = Status::Ok;
};

namespace detail {

inline DensityGamble sweep_gamble(const SweepSpec& spec, double value) {
    auto params = spec.fixed;
    params[spec.param] = value;
    auto take = [&](const char* name) {
        auto it = params.find(name);
        if (it == params.end())
            throw ParseError("sweep is missing parameter '" + std::string(name) + "'");
        const double v = it->second;
        params.erase(it);
        return v;
    };
    DensityGamble g;
    if (spec.family == "uniform") {
        g.family = UniformDensity{take("a"), take("b")};
    } else if (spec.family == "beta") {
        const double alpha = take("alpha"), beta = take("beta");
        g.family = BetaDensity{alpha, beta, take("a"), take("b")};
    } else if (spec.family == "lognormal") {
        const double mu = take("mu"), sigma = take("sigma");
        g.family = ShiftedLognormalDensity{mu, sigma, take("theta")};
    } else {
        throw ParseError("unknown sweep family '" + spec.family + "'");
    }
    if (!params.empty())
        throw ParseError("unused sweep parameter '" + params.begin()->first + "'");
    return g;
}

}  // namespace detail

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, double tol = 1e-10,
                                       int threads = -1) {
    if (!(spec.step > 0.0) || !(spec.hi >= spec.lo))
        throw ParseError("sweep requires lo <= hi and step > 0");
    const std::size_t n =
        static_cast<std::size_t>(std::floor((spec.hi - spec.lo) / spec.step + 1e-9)) + 1;
    std::vector<SweepRow> rows(n);
    detail::parallel_for(
        n,
        [&](std::size_t i) {
            SweepRow& row = rows[i];
            row.param = spec.lo + static_cast<double>(i) * spec.step;
            try {
                auto g = detail::sweep_gamble(spec, row.param);
                auto r = extended_riskiness(g, tol);
                row.rho = r.rho;
                row.lambda = r.lambda;
                row.regime = r.regime;
            } catch (const NotAGamble&) {
                row.status = SweepRow::Status::NotAGamble;
            } catch (const BoundarySignAmbiguous&) {
                row.status = SweepRow::Status::Ambiguous;
            }
        },
        threads);
    return rows;
}

inline const char* sweep_status_name(SweepRow::Status s) {
    switch (s) {
        case SweepRow::Status::Ok: return "ok";
        case SweepRow::Status::NotAGamble: return "not_a_gamble";
        default: return "boundary_ambiguous";
    }
}

// Fixed CSV layout: header, one row per grid point, 17 significant digits,
// LF line endings.  Non-ok rows leave the value columns empty.
inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "param,rho,lambda,regime,status\n";
    for (const auto& r : rows) {
        if (r.status == SweepRow::Status::Ok) {
            os << num(r.param) << ',' << num(r.rho) << ',' << num(r.lambda) << ','
               << regime_name(r.regime) << ",ok\n";
        } else {
            os << num(r.param) << ",,,," << sweep_status_name(r.status) << "\n";
        }
    }
}

}  // namespace riskiness
