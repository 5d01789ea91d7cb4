#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "riskiness/dyadic.hpp"
#include "riskiness/riskiness.hpp"
#include "riskiness/simulate.hpp"
#include "riskiness/sweep.hpp"
#include "riskiness/tree.hpp"

namespace riskiness {

using json = nlohmann::json;

namespace detail {

// Strict schemas: unknown fields are rejected so typos cannot silently
// change meaning.
inline void expect_keys(const json& j, std::initializer_list<const char*> allowed,
                        const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) throw ParseError(where + ": unknown field '" + key + "'");
    }
}

inline double get_number(const json& j, const char* field, const std::string& where) {
    if (!j.contains(field))
        throw ParseError(where + ": missing field '" + field + "'");
    const auto& v = j.at(field);
    if (!v.is_number()) throw ParseError(where + ": field '" + field + "' must be a number");
    return v.get<double>();
}

}  // namespace detail

inline Gamble parse_gamble(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw ParseError("gamble: expected an object with a 'type' field");
    const std::string type = j.at("type").is_string() ? j.at("type").get<std::string>() : "";
    if (type == "discrete") {
        detail::expect_keys(j, {"type", "outcomes"}, "discrete gamble");
        if (!j.contains("outcomes") || !j.at("outcomes").is_array())
            throw ParseError("discrete gamble: 'outcomes' must be an array of [value, probability]");
        DiscreteGamble g;
        for (const auto& o : j.at("outcomes")) {
            if (!o.is_array() || o.size() != 2 || !o[0].is_number() || !o[1].is_number())
                throw ParseError("discrete gamble: each outcome must be [value, probability]");
            g.outcomes.emplace_back(o[0].get<double>(), o[1].get<double>());
        }
        return g;
    }
    if (type == "density") {
        if (!j.contains("family") || !j.at("family").is_string())
            throw ParseError("density gamble: missing 'family'");
        const std::string family = j.at("family").get<std::string>();
        DensityGamble g;
        if (family == "uniform") {
            detail::expect_keys(j, {"type", "family", "a", "b"}, "uniform density");
            g.family = UniformDensity{detail::get_number(j, "a", "uniform density"),
                                      detail::get_number(j, "b", "uniform density")};
        } else if (family == "beta") {
            detail::expect_keys(j, {"type", "family", "alpha", "beta", "a", "b"}, "beta density");
            g.family = BetaDensity{detail::get_number(j, "alpha", "beta density"),
                                   detail::get_number(j, "beta", "beta density"),
                                   detail::get_number(j, "a", "beta density"),
                                   detail::get_number(j, "b", "beta density")};
        } else if (family == "lognormal") {
            detail::expect_keys(j, {"type", "family", "mu", "sigma", "theta"},
                                "lognormal density");
            g.family = ShiftedLognormalDensity{detail::get_number(j, "mu", "lognormal density"),
                                               detail::get_number(j, "sigma", "lognormal density"),
                                               detail::get_number(j, "theta", "lognormal density")};
        } else if (family == "tabulated") {
            detail::expect_keys(j, {"type", "family", "x", "f"}, "tabulated density");
            if (!j.contains("x") || !j.contains("f") || !j.at("x").is_array() ||
                !j.at("f").is_array())
                throw ParseError("tabulated density: 'x' and 'f' must be arrays");
            std::vector<double> xs, fs;
            for (const auto& v : j.at("x")) {
                if (!v.is_number()) throw ParseError("tabulated density: 'x' entries must be numbers");
                xs.push_back(v.get<double>());
            }
            for (const auto& v : j.at("f")) {
                if (!v.is_number()) throw ParseError("tabulated density: 'f' entries must be numbers");
                fs.push_back(v.get<double>());
            }
            g.family = TabulatedDensity::make(std::move(xs), std::move(fs));
        } else {
            throw ParseError("density gamble: unknown family '" + family + "'");
        }
        return g;
    }
    throw ParseError("gamble: unknown type '" + type + "'");
}

namespace detail {

inline TreeSpecNode parse_tree_node(const json& j, const std::string& where, bool root) {
    TreeSpecNode n;
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    expect_keys(j, {"p", "children", "payoff"}, where);
    if (j.contains("p")) {
        if (!j.at("p").is_number()) throw ParseError(where + ": 'p' must be a number");
        n.prob = j.at("p").get<double>();
    } else if (!root) {
        throw ParseError(where + ": missing branch probability 'p'");
    }
    if (j.contains("children")) {
        if (!j.at("children").is_array() || j.at("children").empty())
            throw ParseError(where + ": 'children' must be a non-empty array");
        if (j.contains("payoff"))
            throw ParseError(where + ": payoff on an internal node");
        int c = 0;
        for (const auto& cj : j.at("children"))
            n.children.push_back(parse_tree_node(cj, where + "/" + std::to_string(c++), false));
    } else {
        if (!j.contains("payoff")) throw ParseError(where + ": leaf without 'payoff'");
        if (!j.at("payoff").is_number()) throw ParseError(where + ": 'payoff' must be a number");
        n.payoff = j.at("payoff").get<double>();
        n.has_payoff = true;
    }
    return n;
}

}  // namespace detail

inline GambleTree parse_tree(const json& j) {
    return build_tree(detail::parse_tree_node(j, "tree", true));
}

inline SimulationSpec parse_simulation_spec(const json& j) {
    detail::expect_keys(j,
                        {"gamble", "rotation", "initial_wealth", "horizon", "paths", "seed",
                         "loss_floor", "csv_paths"},
                        "simulation spec");
    SimulationSpec spec;
    if (j.contains("gamble") == j.contains("rotation"))
        throw ParseError("simulation spec: provide exactly one of 'gamble' or 'rotation'");
    if (j.contains("gamble")) {
        spec.rotation.push_back(parse_gamble(j.at("gamble")));
    } else {
        if (!j.at("rotation").is_array() || j.at("rotation").empty())
            throw ParseError("simulation spec: 'rotation' must be a non-empty array");
        for (const auto& gj : j.at("rotation")) spec.rotation.push_back(parse_gamble(gj));
    }
    spec.initial_wealth = detail::get_number(j, "initial_wealth", "simulation spec");
    const double horizon = detail::get_number(j, "horizon", "simulation spec");
    if (horizon < 0 || horizon != std::floor(horizon))
        throw ParseError("simulation spec: 'horizon' must be a nonnegative integer");
    spec.horizon = static_cast<long long>(horizon);
    const double paths = detail::get_number(j, "paths", "simulation spec");
    if (paths < 1 || paths != std::floor(paths))
        throw ParseError("simulation spec: 'paths' must be a positive integer");
    spec.paths = static_cast<int>(paths);
    if (j.contains("seed")) {
        const double seed = detail::get_number(j, "seed", "simulation spec");
        if (seed < 0 || seed != std::floor(seed))
            throw ParseError("simulation spec: 'seed' must be a nonnegative integer");
        spec.seed = static_cast<std::uint64_t>(seed);
    }
    if (j.contains("loss_floor"))
        spec.loss_floor = detail::get_number(j, "loss_floor", "simulation spec");
    if (j.contains("csv_paths")) {
        const double cp = detail::get_number(j, "csv_paths", "simulation spec");
        if (cp < 0 || cp != std::floor(cp))
            throw ParseError("simulation spec: 'csv_paths' must be a nonnegative integer");
        spec.csv_paths = static_cast<int>(cp);
    }
    return spec;
}

inline SweepSpec parse_sweep_spec(const json& j) {
    detail::expect_keys(j, {"family", "param", "lo", "hi", "step", "fixed"}, "sweep spec");
    SweepSpec spec;
    if (!j.contains("family") || !j.at("family").is_string())
        throw ParseError("sweep spec: missing 'family'");
    spec.family = j.at("family").get<std::string>();
    if (!j.contains("param") || !j.at("param").is_string())
        throw ParseError("sweep spec: missing 'param'");
    spec.param = j.at("param").get<std::string>();
    spec.lo = detail::get_number(j, "lo", "sweep spec");
    spec.hi = detail::get_number(j, "hi", "sweep spec");
    spec.step = detail::get_number(j, "step", "sweep spec");
    if (j.contains("fixed")) {
        if (!j.at("fixed").is_object()) throw ParseError("sweep spec: 'fixed' must be an object");
        for (const auto& [key, value] : j.at("fixed").items()) {
            if (!value.is_number())
                throw ParseError("sweep spec: fixed parameter '" + key + "' must be a number");
            spec.fixed[key] = value.get<double>();
        }
    }
    if (spec.fixed.count(spec.param))
        throw ParseError("sweep spec: '" + spec.param + "' is both swept and fixed");
    return spec;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

inline json to_json(const GambleStats& s) {
    return json{{"mean", s.mean},
                {"second_moment", s.second_moment},
                {"max_loss", s.max_loss},
                {"prob_negative", s.prob_negative}};
}

inline json to_json(const RiskinessResult& r) {
    return json{{"rho", r.rho},
                {"lambda", r.lambda},
                {"regime", regime_name(r.regime)},
                {"residual", r.residual}};
}

inline json to_json(const WealthPathStats& s, const SimulationSpec& spec) {
    double final_sum = 0.0;
    for (const auto& p : s.paths) final_sum += p.final_wealth;
    json j{{"paths", spec.paths},
           {"horizon", spec.horizon},
           {"initial_wealth", spec.initial_wealth},
           {"seed", spec.seed},
           {"min_wealth", s.min_wealth},
           {"all_positive", s.all_positive},
           {"frac_min_below", json{{"1e-1", s.frac_below_1e1},
                                   {"1e-3", s.frac_below_1e3},
                                   {"1e-6", s.frac_below_1e6}}},
           {"acceptance_events", s.acceptance_events},
           {"log_increment_mean", s.log_increment_mean},
           {"ci99_half_width", s.ci99_half_width},
           {"final_wealth_mean", s.paths.empty() ? 0.0
                                                 : final_sum / static_cast<double>(s.paths.size())}};
    try {
        auto sub = submartingale_check(s);
        j["submartingale_pass"] = sub.pass;
    } catch (const InsufficientEvents&) {
        j["submartingale_pass"] = nullptr;
    }
    return j;
}

inline json to_json(const ConvergenceReport& rep) {
    json levels = json::array();
    for (const auto& l : rep.levels)
        levels.push_back(json{{"level", l.level}, {"lambda", l.lambda}, {"rho", l.rho}});
    return json{{"levels", levels},
                {"not_yet_a_gamble", rep.not_yet},
                {"lambda_limit", rep.lambda_limit},
                {"lambda_target", rep.lambda_target},
                {"rho_target", rep.rho_target},
                {"regime_target", regime_name(rep.regime_target)},
                {"monotone", rep.monotone},
                {"gap", rep.gap}};
}

// CSV of the approximation levels, same formatting rules as the sweep CSV.
inline void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "level,lambda,rho,status\n";
    std::size_t li = 0, si = 0;
    while (li < rep.levels.size() || si < rep.not_yet.size()) {
        const int ln = li < rep.levels.size() ? rep.levels[li].level
                                              : std::numeric_limits<int>::max();
        const int sn = si < rep.not_yet.size() ? rep.not_yet[si]
                                               : std::numeric_limits<int>::max();
        if (sn < ln) {
            os << sn << ",,,not_yet_a_gamble\n";
            ++si;
        } else {
            os << ln << ',' << num(rep.levels[li].lambda) << ',' << num(rep.levels[li].rho)
               << ",ok\n";
            ++li;
        }
    }
}

}  // namespace riskiness
