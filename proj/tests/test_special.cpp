#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "riskiness/math/special.hpp"
#include "support/oracles.hpp"

namespace m = riskiness::math;
namespace ref = oracles::ref;

TEST_CASE("normal quantile hits reference points") {
    CHECK(m::normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-15));
    CHECK(m::normal_quantile(0.975) == Catch::Approx(ref::z_975).epsilon(1e-13));
    CHECK(m::normal_quantile(0.3) == Catch::Approx(ref::z_03).epsilon(1e-13));
    CHECK(m::normal_quantile(1.0 - 1e-12) == Catch::Approx(ref::z_1m1e12).epsilon(1e-11));
    CHECK(m::normal_quantile(1e-12) == Catch::Approx(-7.034483825301131).epsilon(1e-11));
}

TEST_CASE("normal quantile and cdf are inverse on a grid") {
    for (double p : {1e-10, 1e-6, 0.01, 0.2, 0.5, 0.7, 0.99, 1.0 - 1e-7}) {
        const double z = m::normal_quantile(p);
        CHECK(m::normal_cdf(z) == Catch::Approx(p).epsilon(1e-11));
    }
}

TEST_CASE("normal quantile is antisymmetric") {
    for (double p : {0.001, 0.1, 0.25, 0.45}) {
        CHECK(m::normal_quantile(p) == Catch::Approx(-m::normal_quantile(1.0 - p)).margin(1e-13));
    }
}

TEST_CASE("lbeta agrees with the gamma-function identity") {
    CHECK(m::lbeta(2.0, 3.5) ==
          Catch::Approx(std::lgamma(2.0) + std::lgamma(3.5) - std::lgamma(5.5)).margin(1e-14));
    CHECK(m::lbeta(0.5, 0.5) == Catch::Approx(std::log(3.141592653589793)).epsilon(1e-14));
}

TEST_CASE("regularized incomplete beta hits reference points") {
    CHECK(m::betainc_reg(2.0, 3.5, 0.3) == Catch::Approx(ref::ibeta_2_35_03).epsilon(1e-13));
    CHECK(m::betainc_reg(2.0, 2.0, 0.5) == Catch::Approx(0.5).epsilon(1e-14));
    CHECK(m::betainc_reg(0.5, 0.5, 0.9) == Catch::Approx(ref::ibeta_05_05_09).epsilon(1e-12));
    CHECK(m::betainc_reg(5.0, 1.5, 0.123) == Catch::Approx(ref::ibeta_5_15_0123).epsilon(1e-11));
    CHECK(m::betainc_reg(2.0, 3.5, 0.0) == 0.0);
    CHECK(m::betainc_reg(2.0, 3.5, 1.0) == 1.0);
}

TEST_CASE("incomplete beta symmetry I_x(a,b) = 1 - I_{1-x}(b,a)") {
    for (double x : {0.05, 0.3, 0.62, 0.97}) {
        CHECK(m::betainc_reg(1.7, 4.2, x) ==
              Catch::Approx(1.0 - m::betainc_reg(4.2, 1.7, 1.0 - x)).margin(1e-13));
    }
}

TEST_CASE("inverse incomplete beta round-trips") {
    CHECK(m::betainc_inv(2.0, 3.5, 0.75) == Catch::Approx(ref::ibetainv_2_35_075).epsilon(1e-12));
    for (double p : {1e-8, 0.01, 0.4, 0.8, 0.999}) {
        for (auto [a, b] : {std::pair{0.6, 2.0}, {2.0, 3.5}, {4.0, 0.7}}) {
            const double x = m::betainc_inv(a, b, p);
            CHECK(m::betainc_reg(a, b, x) == Catch::Approx(p).margin(1e-10));
        }
    }
}

TEST_CASE("digamma helper used by the beta boundary oracle") {
    const double gamma = 0.5772156649015329;
    CHECK(oracles::digamma(1.0) == Catch::Approx(-gamma).epsilon(1e-12));
    CHECK(oracles::digamma(2.0) == Catch::Approx(1.0 - gamma).epsilon(1e-12));
    // psi(5.5) = psi(1/2) + sum_{k=0}^{4} 1/(1/2 + k), psi(1/2) = -gamma - 2 log 2
    CHECK(oracles::digamma(5.5) ==
          Catch::Approx(1.0 / 0.5 + 1.0 / 1.5 + 1.0 / 2.5 + 1.0 / 3.5 + 1.0 / 4.5 - gamma -
                        2.0 * std::log(2.0))
              .epsilon(1e-11));
}
