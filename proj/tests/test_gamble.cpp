#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "riskiness/gamble.hpp"
#include "support/oracles.hpp"

using namespace riskiness;

namespace {

DiscreteGamble bernoulli() { return {{{200.0, 0.5}, {-100.0, 0.5}}}; }

DensityGamble uniform(double a, double b) { return {UniformDensity{a, b}}; }

}  // namespace

TEST_CASE("discrete validation computes exact moments") {
    auto s = validate(bernoulli());
    CHECK(s.mean == Catch::Approx(50.0).epsilon(1e-15));
    CHECK(s.second_moment == Catch::Approx(25000.0).epsilon(1e-15));
    CHECK(s.max_loss == 100.0);
    CHECK(s.prob_negative == Catch::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("uniform moments by quadrature") {
    auto s = validate(uniform(-100.0, 200.0));
    CHECK(s.mean == Catch::Approx(50.0).epsilon(1e-12));
    CHECK(s.second_moment == Catch::Approx(10000.0).epsilon(1e-12));  // (b^3-a^3)/(3(b-a))
    CHECK(s.max_loss == 100.0);
    CHECK(s.prob_negative == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("beta moments match the closed forms") {
    DensityGamble g{BetaDensity{2.0, 3.5, -100.0, 200.0}};
    auto s = validate(g);
    CHECK(s.mean == Catch::Approx(100.0 / 11.0).epsilon(1e-10));
    CHECK(s.second_moment == Catch::Approx(5170000.0 / 1573.0).epsilon(1e-9));
    CHECK(s.max_loss == 100.0);
    // P(X < 0) = I_{1/3}(2, 3.5)
    CHECK(s.prob_negative ==
          Catch::Approx(riskiness::math::betainc_reg(2.0, 3.5, 1.0 / 3.0)).epsilon(1e-10));
}

TEST_CASE("shifted lognormal moments") {
    DensityGamble g{ShiftedLognormalDensity{1.0, 2.0, -10.0}};
    auto s = validate(g);
    CHECK(s.mean == Catch::Approx(-10.0 + std::exp(3.0)).epsilon(1e-10));
    // E X^2 = theta^2 + 2 theta e^{mu + s^2/2} + e^{2 mu + 2 s^2}
    const double m1 = std::exp(3.0), m2r = std::exp(10.0);
    CHECK(s.second_moment == Catch::Approx(100.0 - 20.0 * m1 + m2r).epsilon(1e-9));
    CHECK(s.max_loss == 10.0);
    // P(X < 0) = Phi((log 10 - mu)/sigma)
    CHECK(s.prob_negative ==
          Catch::Approx(riskiness::math::normal_cdf((std::log(10.0) - 1.0) / 2.0))
              .epsilon(1e-10));
}

TEST_CASE("precondition failures throw NotAGamble") {
    CHECK_THROWS_AS(validate(uniform(-100.0, 50.0)), NotAGamble);  // mean -25
    CHECK_THROWS_AS(validate(DiscreteGamble{{{200.0, 0.5}, {100.0, 0.5}}}), NotAGamble);
    CHECK_THROWS_AS(validate(DiscreteGamble{{{200.0, 0.6}, {-100.0, 0.6}}}), NotAGamble);
    CHECK_THROWS_AS(validate(DiscreteGamble{{{200.0, 1.0}}}), NotAGamble);
    CHECK_THROWS_AS(validate(DiscreteGamble{{{200.0, 0.5}, {-100.0, -0.5}}}), NotAGamble);
    CHECK_THROWS_AS(validate(DensityGamble{ShiftedLognormalDensity{1.0, 2.0, -25.0}}),
                    NotAGamble);  // mean = e^3 - 25 < 0
    CHECK_THROWS_AS(validate(DensityGamble{BetaDensity{-1.0, 2.0, -100.0, 200.0}}), NotAGamble);
    CHECK_THROWS_AS(validate(uniform(-100.0, -50.0)), NotAGamble);
    CHECK_THROWS_AS(validate(uniform(10.0, 200.0)), NotAGamble);  // no loss mass
}

TEST_CASE("tabulated construction validates and normalizes") {
    CHECK_THROWS_AS(TabulatedDensity::make({0.0, 1.0}, {1.0}), NotAGamble);
    CHECK_THROWS_AS(TabulatedDensity::make({0.0, 0.0, 1.0}, {1.0, 1.0, 1.0}), NotAGamble);
    CHECK_THROWS_AS(TabulatedDensity::make({0.0, 1.0, 2.0}, {1.0, -1.0, 1.0}), NotAGamble);
    CHECK_THROWS_AS(TabulatedDensity::make({0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}), NotAGamble);

    auto d = TabulatedDensity::make({-50.0, 0.0, 100.0}, {2.0, 2.0, 2.0});
    DensityGamble g{d};
    CHECK(density(g, 0.0) == Catch::Approx(1.0 / 150.0).epsilon(1e-12));
    CHECK(cdf(g, 100.0) == Catch::Approx(1.0).margin(1e-12));
    auto s = validate(g);
    CHECK(s.mean == Catch::Approx(25.0).epsilon(1e-10));  // uniform(-50, 100)
    CHECK(s.prob_negative == Catch::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("cdf and quantile are inverse across families") {
    const DensityGamble gambles[] = {
        uniform(-100.0, 150.0),
        DensityGamble{BetaDensity{2.0, 3.5, -100.0, 200.0}},
        DensityGamble{BetaDensity{0.6, 1.4, -50.0, 120.0}},
        DensityGamble{ShiftedLognormalDensity{1.0, 2.0, -10.0}},
        DensityGamble{TabulatedDensity::make({-50.0, -10.0, 40.0, 100.0},
                                             {0.2, 1.0, 0.7, 0.1})},
    };
    for (const auto& g : gambles) {
        for (double p : {1e-6, 0.01, 0.25, 0.5, 0.8, 0.99}) {
            const double x = quantile(g, p);
            CHECK(cdf(g, x) == Catch::Approx(p).margin(1e-9));
        }
        CHECK_THROWS_AS(quantile(g, -0.1), OutOfDomain);
        CHECK_THROWS_AS(quantile(g, 1.5), OutOfDomain);
    }
}

TEST_CASE("uniform quantile closed form") {
    auto g = uniform(-100.0, 200.0);
    CHECK(quantile(g, 1.0 / 3.0) == Catch::Approx(0.0).margin(1e-12));
    CHECK(quantile(g, 0.5) == Catch::Approx(50.0).epsilon(1e-13));
    CHECK(cdf(g, -100.0) == 0.0);
    CHECK(cdf(g, 200.0) == 1.0);
    CHECK(cdf(g, -150.0) == 0.0);
    CHECK(cdf(g, 250.0) == 1.0);
}

TEST_CASE("half-line truncation point carries nearly all mass") {
    DensityGamble g{ShiftedLognormalDensity{1.0, 2.0, -10.0}};
    const double tp = truncation_point(g);
    CHECK(tp > 0.0);
    CHECK(cdf(g, tp) == Catch::Approx(1.0 - 1e-12).margin(1e-11));
    CHECK(support_kind(g) == SupportKind::HalfLine);
    CHECK(support_kind(uniform(-1.0, 2.0)) == SupportKind::Compact);
}

TEST_CASE("max loss across representations") {
    CHECK(max_loss(Gamble{bernoulli()}) == 100.0);
    CHECK(max_loss(Gamble{uniform(-35.0, 80.0)}) == 35.0);
    CHECK(max_loss(Gamble{DensityGamble{ShiftedLognormalDensity{0.0, 1.0, -3.0}}}) == 3.0);
}

TEST_CASE("density integrates to one via an independent rule") {
    DensityGamble g{BetaDensity{2.0, 3.5, -100.0, 200.0}};
    const double total =
        oracles::simpson([&](double x) { return density(g, x); }, -100.0, 200.0, 20000);
    CHECK(total == Catch::Approx(1.0).margin(1e-7));
}
