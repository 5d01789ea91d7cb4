#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "riskiness/json_io.hpp"

using namespace riskiness;

namespace {

const std::string kData = RISKINESS_TEST_DATA;

json load(const std::string& name) { return load_json_file(kData + "/" + name); }

}  // namespace

TEST_CASE("gamble files parse into the right families") {
    auto bern = parse_gamble(load("bernoulli.json"));
    REQUIRE(std::holds_alternative<DiscreteGamble>(bern));
    CHECK(std::get<DiscreteGamble>(bern).outcomes.size() == 2);

    auto unif = parse_gamble(load("uniform_ml.json"));
    REQUIRE(std::holds_alternative<DensityGamble>(unif));
    CHECK(std::holds_alternative<UniformDensity>(std::get<DensityGamble>(unif).family));

    auto beta = parse_gamble(load("beta.json"));
    CHECK(std::holds_alternative<BetaDensity>(std::get<DensityGamble>(beta).family));

    auto ln = parse_gamble(load("lognormal.json"));
    CHECK(std::holds_alternative<ShiftedLognormalDensity>(std::get<DensityGamble>(ln).family));

    auto tab = parse_gamble(load("tabulated.json"));
    CHECK(std::holds_alternative<TabulatedDensity>(std::get<DensityGamble>(tab).family));
}

TEST_CASE("schema violations are parse errors") {
    CHECK_THROWS_AS(parse_gamble(load("bad_unknown_field.json")), ParseError);
    CHECK_THROWS_AS(parse_gamble(json{{"type", "discrete"}}), ParseError);
    CHECK_THROWS_AS(parse_gamble(json{{"type", "density"}, {"family", "cauchy"}}), ParseError);
    CHECK_THROWS_AS(parse_gamble(json{{"type", "wat"}}), ParseError);
    CHECK_THROWS_AS(parse_gamble(json::array({1, 2})), ParseError);
    CHECK_THROWS_AS(
        parse_gamble(json{{"type", "discrete"}, {"outcomes", json::array({json::array({1.0})})}}),
        ParseError);
    CHECK_THROWS_AS(parse_gamble(json{{"type", "density"},
                                      {"family", "uniform"},
                                      {"a", "x"},
                                      {"b", 1.0}}),
                    ParseError);
}

TEST_CASE("file loading distinguishes missing files from bad syntax") {
    CHECK_THROWS_AS(load_json_file(kData + "/does_not_exist.json"), Error);
    try {
        load_json_file(kData + "/does_not_exist.json");
    } catch (const ParseError&) {
        FAIL("missing file must not be a ParseError");
    } catch (const Error&) {
        SUCCEED();
    }
    CHECK_THROWS_AS(load_json_file(kData + "/bad_not_json.json"), ParseError);
}

TEST_CASE("tree files build the appendix trees") {
    auto t = parse_tree(load("tree1.json"));
    CHECK(t.horizon == 2);
    CHECK(t.nodes.size() == 7);
    CHECK_THROWS_AS(parse_tree(json{{"children", json::array()}}), ParseError);
    CHECK_THROWS_AS(parse_tree(json{{"p", 1.0}}), ParseError);
}

TEST_CASE("simulation specs enforce one input and integer fields") {
    auto spec = parse_simulation_spec(load("sim_small.json"));
    CHECK(spec.rotation.size() == 1);
    CHECK(spec.initial_wealth == 2000.0);
    CHECK(spec.horizon == 200);
    CHECK(spec.paths == 50);
    CHECK(spec.seed == 12345);
    CHECK(spec.csv_paths == 3);

    json base = load("sim_small.json");
    json both = base;
    both["rotation"] = json::array({base.at("gamble")});
    CHECK_THROWS_AS(parse_simulation_spec(both), ParseError);

    json neither = base;
    neither.erase("gamble");
    CHECK_THROWS_AS(parse_simulation_spec(neither), ParseError);

    json frac = base;
    frac["horizon"] = 10.5;
    CHECK_THROWS_AS(parse_simulation_spec(frac), ParseError);

    json negseed = base;
    negseed["seed"] = -3;
    CHECK_THROWS_AS(parse_simulation_spec(negseed), ParseError);

    json unknown = base;
    unknown["extra"] = 1;
    CHECK_THROWS_AS(parse_simulation_spec(unknown), ParseError);
}

TEST_CASE("sweep specs reject contradictory parameters") {
    auto spec = parse_sweep_spec(load("sweep_uniform.json"));
    CHECK(spec.family == "uniform");
    CHECK(spec.param == "b");
    CHECK(spec.lo == 171.7);
    CHECK(spec.step == 0.05);

    json j = load("sweep_uniform.json");
    j["fixed"]["b"] = 5.0;
    CHECK_THROWS_AS(parse_sweep_spec(j), ParseError);

    json j2 = load("sweep_uniform.json");
    j2["fixed"]["a"] = "oops";
    CHECK_THROWS_AS(parse_sweep_spec(j2), ParseError);
}

TEST_CASE("sweep CSV layout is byte-stable") {
    std::vector<SweepRow> rows(3);
    rows[0].param = 1.5;
    rows[0].rho = 100.0;
    rows[0].lambda = 0.25;
    rows[0].regime = Regime::MaximalLoss;
    rows[1].param = 2.0;
    rows[1].status = SweepRow::Status::NotAGamble;
    rows[2].param = 0.5;
    rows[2].rho = 2.0;
    rows[2].lambda = 0.5;
    rows[2].regime = Regime::EquationSolved;

    std::ostringstream os;
    write_sweep_csv(os, rows);
    CHECK(os.str() ==
          "param,rho,lambda,regime,status\n"
          "1.5,100,0.25,maximal_loss,ok\n"
          "2,,,,not_a_gamble\n"
          "0.5,2,0.5,equation_solved,ok\n");
}

TEST_CASE("convergence CSV interleaves skipped levels in order") {
    ConvergenceReport rep;
    rep.not_yet = {1, 2};
    rep.levels.push_back({3, 0.25, 4.0});
    std::ostringstream os;
    write_convergence_csv(os, rep);
    CHECK(os.str() ==
          "level,lambda,rho,status\n"
          "1,,,not_yet_a_gamble\n"
          "2,,,not_yet_a_gamble\n"
          "3,0.25,4,ok\n");
}

TEST_CASE("result serialization carries the regime names") {
    RiskinessResult r{200.0, 0.005, Regime::EquationSolved, 1e-12};
    auto j = to_json(r);
    CHECK(j.at("rho") == 200.0);
    CHECK(j.at("regime") == "equation_solved");

    GambleStats s{50.0, 25000.0, 100.0, 0.5};
    auto js = to_json(s);
    CHECK(js.at("mean") == 50.0);
    CHECK(js.at("max_loss") == 100.0);
    CHECK(js.at("prob_negative") == 0.5);
}
