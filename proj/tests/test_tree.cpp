#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "riskiness/tree.hpp"
#include "support/oracles.hpp"

using namespace riskiness;
namespace ref = oracles::ref;

namespace {

TreeSpecNode leaf(double p, double payoff) {
    TreeSpecNode n;
    n.prob = p;
    n.payoff = payoff;
    n.has_payoff = true;
    return n;
}

TreeSpecNode node(double p, std::vector<TreeSpecNode> children) {
    TreeSpecNode n;
    n.prob = p;
    n.children = std::move(children);
    return n;
}

// Two-period tree: two equally likely states, each followed by a
// fifty-fifty one-period gamble.
TreeSpecNode two_period(double g1, double l1, double g2, double l2) {
    return node(1.0, {node(0.5, {leaf(0.5, g1), leaf(0.5, l1)}),
                      node(0.5, {leaf(0.5, g2), leaf(0.5, l2)})});
}

}  // namespace

TEST_CASE("tree construction rejects malformed input") {
    // leaves at different depths
    CHECK_THROWS_AS(build_tree(node(1.0, {leaf(0.5, 100.0),
                                          node(0.5, {leaf(0.5, 50.0), leaf(0.5, -20.0)})})),
                    ParseError);
    // branch probabilities must sum to one
    CHECK_THROWS_AS(build_tree(node(1.0, {leaf(0.3, 100.0), leaf(0.3, -50.0)})), ParseError);
    // nonpositive probability
    CHECK_THROWS_AS(build_tree(node(1.0, {leaf(0.0, 100.0), leaf(1.0, -50.0)})), ParseError);
    // no periods at all
    CHECK_THROWS_AS(build_tree(leaf(1.0, 5.0)), ParseError);
    // internal node with a payoff
    auto bad = node(1.0, {leaf(0.5, 10.0), leaf(0.5, -10.0)});
    bad.has_payoff = true;
    bad.payoff = 3.0;
    CHECK_THROWS_AS(build_tree(bad), ParseError);
}

TEST_CASE("conditional distributions multiply path probabilities") {
    auto t = build_tree(two_period(600.0, -100.0, 1000.0, -200.0));
    CHECK(t.horizon == 2);
    REQUIRE(t.nodes.size() == 7);
    auto dist = conditional_distribution(t, 0);
    REQUIRE(dist.size() == 4);
    double total = 0.0;
    for (const auto& [v, p] : dist) {
        CHECK(p == Catch::Approx(0.25).margin(1e-15));
        total += p;
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-15));
    CHECK(conditional_max_loss(t, 0) == 200.0);
}

TEST_CASE("two-period tree riskiness process") {
    auto t = build_tree(two_period(600.0, -100.0, 1000.0, -200.0));
    auto p = riskiness_process(t);
    REQUIRE(p.entries.size() == 3);  // root + two depth-1 states

    CHECK(p.entries[0].depth == 0);
    CHECK(p.entries[0].result.rho == Catch::Approx(ref::tree1_root_rho).epsilon(1e-9));

    CHECK(p.entries[1].max_loss == 100.0);
    CHECK(p.entries[1].result.rho == Catch::Approx(120.0).margin(1e-9));
    CHECK(p.entries[2].max_loss == 200.0);
    CHECK(p.entries[2].result.rho == Catch::Approx(250.0).margin(1e-9));
}

TEST_CASE("second appendix tree shares date-1 riskiness but not the root") {
    auto t = build_tree(two_period(840.0, -105.0, 6000.0, -240.0));
    auto p = riskiness_process(t);
    REQUIRE(p.entries.size() == 3);
    CHECK(p.entries[0].result.rho == Catch::Approx(ref::tree2_root_rho).epsilon(1e-9));
    CHECK(p.entries[1].result.rho == Catch::Approx(120.0).margin(1e-9));
    CHECK(p.entries[2].result.rho == Catch::Approx(250.0).margin(1e-9));
}

TEST_CASE("terminal and loss-free nodes are rejected") {
    auto t = build_tree(two_period(600.0, -100.0, 1000.0, -200.0));
    // node indices: 0 root, 1 first state, 2/3 its leaves, ...
    CHECK_THROWS_AS(conditional_riskiness(t, 2), OutOfDomain);

    auto no_loss = build_tree(node(1.0, {node(0.5, {leaf(0.5, 600.0), leaf(0.5, 100.0)}),
                                         node(0.5, {leaf(0.5, 1000.0), leaf(0.5, -200.0)})}));
    CHECK_THROWS_AS(conditional_riskiness(no_loss, 1), NotConditionalGamble);
    CHECK_THROWS_AS(riskiness_process(no_loss), NotConditionalGamble);
}

TEST_CASE("shape comparison ignores payoffs, rejects different filtrations") {
    auto t1 = build_tree(two_period(600.0, -100.0, 1000.0, -200.0));
    auto t2 = build_tree(two_period(840.0, -105.0, 6000.0, -240.0));
    CHECK(same_shape(t1, t2));

    auto t3 = build_tree(node(1.0, {node(0.4, {leaf(0.5, 600.0), leaf(0.5, -100.0)}),
                                    node(0.6, {leaf(0.5, 1000.0), leaf(0.5, -200.0)})}));
    CHECK_FALSE(same_shape(t1, t3));
    CHECK_THROWS_AS(time_consistency_check(t1, t3), ShapeMismatch);
}

TEST_CASE("equal one-period riskiness with different roots violates consistency") {
    auto t1 = build_tree(two_period(600.0, -100.0, 1000.0, -200.0));
    auto t2 = build_tree(two_period(840.0, -105.0, 6000.0, -240.0));

    auto v = time_consistency_check(t1, t2);
    REQUIRE(v.found);
    CHECK(v.depth == 0);
    CHECK(v.node == ".");
    CHECK(v.rho_a == Catch::Approx(ref::tree1_root_rho).epsilon(1e-6));
    CHECK(v.rho_b == Catch::Approx(ref::tree2_root_rho).epsilon(1e-6));

    auto none = time_consistency_check(t1, t1);
    CHECK_FALSE(none.found);
}
