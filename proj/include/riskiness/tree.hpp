#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "riskiness/riskiness.hpp"

namespace riskiness {

// Node of a finite gamble tree.  Interior nodes carry branch probabilities;
// leaves carry the terminal payoff.  All leaves sit at the same depth (the
// horizon), so depths index the filtration.
struct TreeNode {
    double prob = 1.0;    // probability of the edge from the parent (root: 1)
    double payoff = 0.0;  // leaves only
    bool leaf = false;
    int parent = -1;
    int depth = 0;
    std::string path;     // "." for the root, then "0", "0/1", ...
    std::vector<int> children;
};

struct GambleTree {
    std::vector<TreeNode> nodes;  // root at index 0
    int horizon = 0;
};

// Literal-friendly builder input.
struct TreeSpecNode {
    double prob = 1.0;
    double payoff = 0.0;
    bool has_payoff = false;
    std::vector<TreeSpecNode> children;
};

namespace detail {

inline int build_tree_rec(GambleTree& t, const TreeSpecNode& s, int parent, int depth,
                          const std::string& path) {
    const int idx = static_cast<int>(t.nodes.size());
    TreeNode n;
    n.prob = s.prob;
    n.parent = parent;
    n.depth = depth;
    n.path = path;
    if (depth > 0 && (!(s.prob > 0.0) || !(s.prob <= 1.0) || !std::isfinite(s.prob)))
        throw ParseError("node " + path + ": branch probability must be in (0, 1]");
    if (s.children.empty()) {
        if (!s.has_payoff) throw ParseError("leaf " + path + " has no payoff");
        if (!std::isfinite(s.payoff)) throw ParseError("leaf " + path + ": payoff must be finite");
        n.leaf = true;
        n.payoff = s.payoff;
        t.nodes.push_back(std::move(n));
        if (t.horizon == 0) t.horizon = depth;
        else if (t.horizon != depth)
            throw ParseError("leaves at different depths (" + std::to_string(t.horizon) +
                             " and " + std::to_string(depth) + "); the horizon must be uniform");
        return idx;
    }
    if (s.has_payoff) throw ParseError("node " + path + ": payoff on an internal node");
    t.nodes.push_back(std::move(n));
    double total = 0.0;
    for (std::size_t c = 0; c < s.children.size(); ++c) {
        total += s.children[c].prob;
        const std::string cpath =
            (depth == 0) ? std::to_string(c) : path + "/" + std::to_string(c);
        const int cidx = build_tree_rec(t, s.children[c], idx, depth + 1, cpath);
        t.nodes[idx].children.push_back(cidx);
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ParseError("node " + path + ": branch probabilities sum to " +
                         std::to_string(total) + ", expected 1");
    return idx;
}

}  // namespace detail

inline GambleTree build_tree(const TreeSpecNode& root) {
    GambleTree t;
    t.horizon = 0;
    detail::build_tree_rec(t, root, -1, 0, ".");
    if (t.horizon < 1) throw ParseError("a gamble tree needs at least one period");
    return t;
}

// Conditional distribution of the terminal payoff given the node: leaf
// payoffs under it, weighted by the product of branch probabilities along
// the way.
inline std::vector<std::pair<double, double>> conditional_distribution(const GambleTree& t,
                                                                       int node) {
    std::vector<std::pair<double, double>> dist;
    std::vector<std::pair<int, double>> stack{{node, 1.0}};
    while (!stack.empty()) {
        auto [i, w] = stack.back();
        stack.pop_back();
        const TreeNode& n = t.nodes[i];
        if (n.leaf) {
            dist.emplace_back(n.payoff, w);
            continue;
        }
        for (int c : n.children) stack.emplace_back(c, w * t.nodes[c].prob);
    }
    return dist;
}

// L_s at the node: the worst payoff still reachable, negated.
inline double conditional_max_loss(const GambleTree& t, int node) {
    double vmin = std::numeric_limits<double>::infinity();
    for (const auto& [v, p] : conditional_distribution(t, node)) vmin = std::min(vmin, v);
    return -vmin;
}

// Riskiness of the conditional distribution at a node of depth < horizon.
// The regime branch mirrors the unconditional dichotomy: a conditional law
// with positive mass at its minimum sends phi to -infinity at the boundary,
// so the equation always has a root here; MaximalLoss could only arise for
// diffuse conditional laws (an extension point not reachable with leaf
// payoffs).
inline RiskinessResult conditional_riskiness(const GambleTree& t, int node,
                                             double tol = 1e-10) {
    const TreeNode& n = t.nodes[node];
    if (n.depth >= t.horizon)
        throw OutOfDomain("node " + n.path + " is terminal; no one-period-ahead gamble");
    auto dist = conditional_distribution(t, node);
    double mean = 0.0, vmin = std::numeric_limits<double>::infinity();
    double m2 = 0.0;
    for (const auto& [v, p] : dist) {
        mean += p * v;
        m2 += p * v * v;
        vmin = std::min(vmin, v);
    }
    if (!(vmin < 0.0))
        throw NotConditionalGamble(n.path, "no loss outcomes in the conditional distribution");
    if (!(mean > 0.0))
        throw NotConditionalGamble(n.path, "nonpositive conditional mean " + std::to_string(mean));
    auto [lambda, residual] = detail::solve_discrete(dist, tol, mean, m2);
    return {1.0 / lambda, lambda, Regime::EquationSolved, residual};
}

struct ProcessEntry {
    int node = 0;
    std::string path;
    int depth = 0;
    double max_loss = 0.0;
    RiskinessResult result;
};

struct RiskinessProcess {
    std::vector<ProcessEntry> entries;  // all nodes of depth < horizon, by depth
    int horizon = 0;
};

// The conditional riskiness process: rho at every non-terminal node.
inline RiskinessProcess riskiness_process(const GambleTree& t, double tol = 1e-10) {
    RiskinessProcess p;
    p.horizon = t.horizon;
    for (int depth = 0; depth < t.horizon; ++depth) {
        for (int i = 0; i < static_cast<int>(t.nodes.size()); ++i) {
            if (t.nodes[i].depth != depth) continue;
            ProcessEntry e;
            e.node = i;
            e.path = t.nodes[i].path;
            e.depth = depth;
            e.max_loss = conditional_max_loss(t, i);
            e.result = conditional_riskiness(t, i, tol);
            p.entries.push_back(std::move(e));
        }
    }
    return p;
}

// Structural equality of the filtrations: same branching and edge
// probabilities (within 1e-12); payoffs may differ.
inline bool same_shape(const GambleTree& a, const GambleTree& b) {
    if (a.nodes.size() != b.nodes.size() || a.horizon != b.horizon) return false;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        const TreeNode& x = a.nodes[i];
        const TreeNode& y = b.nodes[i];
        if (x.leaf != y.leaf || x.depth != y.depth || x.children != y.children) return false;
        if (std::abs(x.prob - y.prob) > 1e-12) return false;
    }
    return true;
}

struct ConsistencyViolation {
    bool found = false;
    // Direction +1: rho_a >= rho_b held at every depth s+1 node, yet
    // rho_a < rho_b at a depth-s node; -1 for the mirrored comparison.
    int direction = 0;
    int depth = 0;
    std::string node;
    double rho_a = 0.0;
    double rho_b = 0.0;
};

// Dominance at one period ahead need not propagate backward: search for a
// depth s where one process dominates everywhere at depth s+1 but the order
// reverses at some depth-s node.
inline ConsistencyViolation time_consistency_check(const GambleTree& a, const GambleTree& b,
                                                   double tol = 1e-10) {
    if (!same_shape(a, b))
        throw ShapeMismatch("trees do not share the same filtration shape");
    auto pa = riskiness_process(a, tol);
    auto pb = riskiness_process(b, tol);

    auto rho_at = [](const RiskinessProcess& p, int depth) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& e : p.entries)
            if (e.depth == depth) out.emplace_back(e.path, e.result.rho);
        return out;
    };

    ConsistencyViolation v;
    for (int s = 0; s + 1 < a.horizon; ++s) {
        auto next_a = rho_at(pa, s + 1);
        auto next_b = rho_at(pb, s + 1);
        auto here_a = rho_at(pa, s);
        auto here_b = rho_at(pb, s);
        for (int dir : {+1, -1}) {
            bool premise = true;
            for (std::size_t i = 0; i < next_a.size(); ++i) {
                const double da = next_a[i].second, db = next_b[i].second;
                const double slack = 1e-9 * std::max(1.0, std::max(da, db));
                if (dir * (da - db) < -slack) { premise = false; break; }
            }
            if (!premise) continue;
            for (std::size_t i = 0; i < here_a.size(); ++i) {
                const double da = here_a[i].second, db = here_b[i].second;
                const double slack = 1e-8 * std::max(1.0, std::max(da, db));
                if (dir * (da - db) < -slack) {
                    v.found = true;
                    v.direction = dir;
                    v.depth = s;
                    v.node = here_a[i].first;
                    v.rho_a = da;
                    v.rho_b = db;
                    return v;
                }
            }
        }
    }
    return v;
}

}  // namespace riskiness
