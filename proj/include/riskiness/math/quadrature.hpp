#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace riskiness::math {

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
    bool converged = true;

    QuadratureResult& operator+=(const QuadratureResult& o) {
        value += o.value;
        error_bound += o.error_bound;
        converged = converged && o.converged;
        return *this;
    }
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss, nodes/weights for [-1, 1].
// Gauss nodes are the odd-index Kronrod nodes.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gauss_kronrod(F&& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double k15 = kKronrodWeights[7] * fc;
    double g7 = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = h * kKronrodNodes[i];
        const double fsum = f(c - x) + f(c + x);
        k15 += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) g7 += kGaussWeights[i / 2] * fsum;
    }
    value = k15 * h;
    // QUADPACK-style sharpened estimate: the Kronrod error decays much
    // faster than |K15-G7|, so (200 d)^1.5 is reliable once d is small
    // while staying conservative (>= d) when d is large.
    const double d = std::abs(k15 - g7) * std::abs(h);
    double e = 200.0 * d;
    e = (e >= 1.0) ? d : e * std::sqrt(e);
    // Never claim better than a few ulps of the accumulated magnitude.
    const double floor = std::abs(value) * std::numeric_limits<double>::epsilon() * 4.0;
    err = std::max(e, floor);
}

struct Segment {
    double a, b, value, err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b]: repeatedly bisect
// the segment with the largest error estimate until the total estimate
// drops below abs_tol or the segment budget is exhausted.  The returned
// error_bound is the honest total estimate either way.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol,
                           int max_segments = 4096) {
    QuadratureResult out;
    if (a == b) return out;

    std::priority_queue<detail::Segment> queue;
    detail::Segment s{a, b, 0.0, 0.0};
    detail::gauss_kronrod(f, s.a, s.b, s.value, s.err);
    double total_value = s.value;
    double total_err = s.err;
    queue.push(s);
    int segments = 1;

    int stalled = 0;
    while (total_err > abs_tol && segments < max_segments && stalled < 64) {
        detail::Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval no longer representable; put it back and stop.
            queue.push(worst);
            break;
        }
        detail::Segment left{worst.a, mid, 0.0, 0.0};
        detail::Segment right{mid, worst.b, 0.0, 0.0};
        detail::gauss_kronrod(f, left.a, left.b, left.value, left.err);
        detail::gauss_kronrod(f, right.a, right.b, right.value, right.err);
        total_value += left.value + right.value - worst.value;
        // Track whether refinement still reduces the estimate; once splits
        // only shuffle rounding-floor error around, further work is futile.
        const double gain = worst.err - (left.err + right.err);
        stalled = (gain > 0.125 * worst.err) ? 0 : stalled + 1;
        total_err += left.err + right.err - worst.err;
        queue.push(left);
        queue.push(right);
        ++segments;
    }

    // Recompute the totals from the final partition: the incremental sums
    // above accumulate cancellation noise over many refinements.
    total_value = 0.0;
    total_err = 0.0;
    while (!queue.empty()) {
        total_value += queue.top().value;
        total_err += queue.top().err;
        queue.pop();
    }
    out.value = total_value;
    out.error_bound = total_err;
    out.converged = total_err <= abs_tol;
    return out;
}

// Integral of w over (0, delta] where w has an integrable logarithmic
// endpoint singularity at 0 (w(u) ~ c log u near 0).  Under u = e^v it
// becomes int_{-inf}^{log delta} g(v) dv with g(v) = w(e^v) e^v smooth
// and decaying like |v| e^v; the caller supplies g directly so that
// power-law prefactors can be folded into one exp and never overflow.
// Panels are marched leftward from log_delta until two consecutive
// contributions fall below the resolution threshold.
template <class G>
QuadratureResult log_endpoint_integral(G&& g, double log_delta, double abs_tol,
                                       int max_panels = 600) {
    QuadratureResult out;
    const double panel = 15.0;
    double hi = log_delta;
    const double stop = std::max(abs_tol * 1e-3, 1e-300);
    int quiet = 0;
    for (int k = 0; k < max_panels; ++k) {
        const double lo = hi - panel;
        double v = 0.0, e = 0.0;
        detail::gauss_kronrod(g, lo, hi, v, e);
        out.value += v;
        out.error_bound += e;
        hi = lo;
        if (std::abs(v) < stop) {
            if (++quiet >= 2) {
                // Remaining tail is bounded by a geometric continuation of
                // the last panels.
                out.error_bound += 2.0 * std::abs(v) + stop;
                return out;
            }
        } else {
            quiet = 0;
        }
    }
    out.converged = false;
    return out;
}

}  // namespace riskiness::math
