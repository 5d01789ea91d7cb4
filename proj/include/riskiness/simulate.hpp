#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "riskiness/detail/parallel.hpp"
#include "riskiness/riskiness.hpp"

namespace riskiness {

// No-bankruptcy wealth process: at each step the current rotation gamble is
// offered, taken iff E log(1 + X/W) >= 0 (equivalently W >= rho), and the
// wealth moves by the drawn outcome on acceptance.  Rejected offers leave
// the wealth (and the RNG stream) untouched.
struct SimulationSpec {
    std::vector<Gamble> rotation;  // cycled through; size 1 = iid offers
    double initial_wealth = 0.0;
    long long horizon = 0;
    int paths = 1;
    std::uint64_t seed = 12345;
    double loss_floor = 1e-6;      // every gamble must risk at least this much
    int csv_paths = 10;            // trajectory-dump cap (CLI use)
};

struct PathStat {
    double final_wealth = 0.0;
    double min_wealth = 0.0;
    long long accepted = 0;
    long long rejected = 0;
    double log_sum = 0.0;    // sum of log(W_next/W) over accepted steps
    double log_sumsq = 0.0;
};

struct WealthPathStats {
    std::vector<PathStat> paths;
    double min_wealth = std::numeric_limits<double>::infinity();
    bool all_positive = true;
    // Fraction of paths whose running minimum dipped below these multiples
    // of the initial wealth.
    double frac_below_1e1 = 0.0;
    double frac_below_1e3 = 0.0;
    double frac_below_1e6 = 0.0;
    long long acceptance_events = 0;
    double log_increment_mean = 0.0;
    double log_increment_stddev = 0.0;
    double ci99_half_width = 0.0;
};

struct SubmartingaleReport {
    long long events = 0;
    double mean = 0.0;
    double ci99_half_width = 0.0;
    bool pass = false;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Per-path substream seed: a function of (seed, path) only, so paths are
// reproducible independently of scheduling.
inline std::uint64_t path_seed(std::uint64_t seed, int path) {
    return splitmix64(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(path + 1));
}

// Uniform draw on [0, 1) with 53 random bits; fixed construction, not the
// library distribution, so streams are identical across implementations.
inline double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct PreparedGamble {
    const Gamble* gamble = nullptr;
    bool discrete = false;
    double max_loss = 0.0;
    double rho = 0.0;                 // density acceptance threshold
    std::vector<double> cum;          // discrete sampling
    std::vector<double> values;
    const DensityGamble* density = nullptr;

    bool accepts(double wealth) const {
        if (discrete) {
            if (wealth <= max_loss) return false;
            double s = 0.0;
            const double lam = 1.0 / wealth;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double p = cum[i] - (i ? cum[i - 1] : 0.0);
                s += p * log_term(values[i], lam);
            }
            return s >= 0.0;
        }
        return wealth >= rho;
    }

    double sample(std::mt19937_64& rng) const {
        const double u = u01(rng);
        if (discrete) {
            const auto it = std::upper_bound(cum.begin(), cum.end(), u);
            const std::size_t i = std::min<std::size_t>(it - cum.begin(), values.size() - 1);
            return values[i];
        }
        return quantile(*density, u);
    }
};

inline PreparedGamble prepare(const Gamble& g, double loss_floor) {
    PreparedGamble p;
    p.gamble = &g;
    const auto stats = [&] {
        try {
            return validate(g);
        } catch (const NotAGamble& e) {
            throw SpecInvalid(std::string("rotation entry is not a gamble: ") + e.what());
        }
    }();
    p.max_loss = stats.max_loss;
    if (!(p.max_loss >= loss_floor))
        throw SpecInvalid("gamble max loss " + std::to_string(p.max_loss) +
                          " is below the loss floor " + std::to_string(loss_floor));
    if (const auto* d = std::get_if<DiscreteGamble>(&g)) {
        p.discrete = true;
        double c = 0.0;
        for (const auto& [v, q] : d->outcomes) {
            p.values.push_back(v);
            c += q;
            p.cum.push_back(c);
        }
        p.cum.back() = 1.0;
    } else {
        p.density = &std::get<DensityGamble>(g);
        if (support_kind(*p.density) != SupportKind::Compact)
            throw SpecInvalid("simulation requires bounded support");
        p.rho = extended_riskiness(*p.density).rho;
    }
    return p;
}

template <class OnStep>
inline PathStat run_path(const std::vector<PreparedGamble>& prepared, const SimulationSpec& spec,
                         int path, OnStep&& on_step) {
    std::mt19937_64 rng(path_seed(spec.seed, path));
    double w = spec.initial_wealth;
    PathStat st;
    st.min_wealth = w;
    for (long long t = 0; t < spec.horizon; ++t) {
        const PreparedGamble& g = prepared[static_cast<std::size_t>(t % prepared.size())];
        if (g.accepts(w)) {
            const double x = g.sample(rng);
            const double wn = w + x;
            const double inc = std::log1p(x / w);
            st.log_sum += inc;
            st.log_sumsq += inc * inc;
            ++st.accepted;
            w = wn;
        } else {
            ++st.rejected;
        }
        st.min_wealth = std::min(st.min_wealth, w);
        on_step(t, w);
    }
    st.final_wealth = w;
    return st;
}

}  // namespace detail

inline void validate_spec(const SimulationSpec& spec) {
    if (spec.rotation.empty()) throw SpecInvalid("rotation must contain at least one gamble");
    if (!(spec.initial_wealth > 0.0) || !std::isfinite(spec.initial_wealth))
        throw SpecInvalid("initial wealth must be positive and finite");
    if (spec.horizon < 0) throw SpecInvalid("horizon must be nonnegative");
    if (spec.paths < 1) throw SpecInvalid("paths must be >= 1");
    if (!(spec.loss_floor > 0.0)) throw SpecInvalid("loss floor must be positive");
}

// Runs all paths.  Deterministic for a fixed spec: per-path substreams
// depend only on (seed, path index) and aggregation runs in path order,
// so the result is bit-identical for any thread count.
inline WealthPathStats simulate(const SimulationSpec& spec, int threads = -1) {
    validate_spec(spec);
    std::vector<detail::PreparedGamble> prepared;
    prepared.reserve(spec.rotation.size());
    for (const auto& g : spec.rotation) prepared.push_back(detail::prepare(g, spec.loss_floor));

    WealthPathStats out;
    out.paths.resize(static_cast<std::size_t>(spec.paths));
    detail::parallel_for(
        out.paths.size(),
        [&](std::size_t i) {
            out.paths[i] = detail::run_path(prepared, spec, static_cast<int>(i),
                                            [](long long, double) {});
        },
        threads);

    long long below1 = 0, below3 = 0, below6 = 0;
    double sum = 0.0, sumsq = 0.0;
    for (const auto& p : out.paths) {
        out.min_wealth = std::min(out.min_wealth, p.min_wealth);
        if (!(p.min_wealth > 0.0)) out.all_positive = false;
        if (p.min_wealth < 1e-1 * spec.initial_wealth) ++below1;
        if (p.min_wealth < 1e-3 * spec.initial_wealth) ++below3;
        if (p.min_wealth < 1e-6 * spec.initial_wealth) ++below6;
        out.acceptance_events += p.accepted;
        sum += p.log_sum;
        sumsq += p.log_sumsq;
    }
    const double np = static_cast<double>(spec.paths);
    out.frac_below_1e1 = static_cast<double>(below1) / np;
    out.frac_below_1e3 = static_cast<double>(below3) / np;
    out.frac_below_1e6 = static_cast<double>(below6) / np;
    if (out.acceptance_events > 0) {
        const double n = static_cast<double>(out.acceptance_events);
        out.log_increment_mean = sum / n;
        const double var = (out.acceptance_events > 1)
                               ? std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0))
                               : 0.0;
        out.log_increment_stddev = std::sqrt(var);
        // z for a two-sided 99% interval
        out.ci99_half_width = 2.5758293035489004 * out.log_increment_stddev / std::sqrt(n);
    }
    return out;
}

// Wealth trajectory of one path (W_1 .. W_T), identical to the same path
// inside simulate().
inline std::vector<double> simulate_trajectory(const SimulationSpec& spec, int path) {
    validate_spec(spec);
    if (path < 0 || path >= spec.paths) throw OutOfDomain("path index out of range");
    std::vector<detail::PreparedGamble> prepared;
    for (const auto& g : spec.rotation) prepared.push_back(detail::prepare(g, spec.loss_floor));
    std::vector<double> traj;
    traj.reserve(static_cast<std::size_t>(spec.horizon));
    detail::run_path(prepared, spec, path,
                     [&](long long, double w) { traj.push_back(w); });
    return traj;
}

// Tests E[log-increment | acceptance] >= 0 at the 99% level: the log-wealth
// process is a submartingale under the acceptance policy, so the interval
// must not sit entirely below zero.
inline SubmartingaleReport submartingale_check(const WealthPathStats& stats,
                                               long long min_events = 10000) {
    if (stats.acceptance_events < min_events)
        throw InsufficientEvents(stats.acceptance_events, min_events);
    SubmartingaleReport r;
    r.events = stats.acceptance_events;
    r.mean = stats.log_increment_mean;
    r.ci99_half_width = stats.ci99_half_width;
    r.pass = r.mean >= -r.ci99_half_width;
    return r;
}

}  // namespace riskiness
