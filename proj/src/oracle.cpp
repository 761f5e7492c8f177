#include "fads/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

namespace fads {

JointExpectations exact_joint_enumeration(const ModelParams& p, int n) {
    validate(p);
    if (n < 2 || n > 10)
        throw ValidationError("exact_joint_enumeration: n=" + std::to_string(n) +
                              " outside [2, 10]");
    const DerivedConstants c = derive_constants(p);
    const int periods = n + 1;
    const std::uint32_t paths = 1u << periods;
    const double a = p.alpha, e = p.epsilon;

    // signal-match probabilities by match count
    std::vector<double> pow_match(periods + 1), pow_miss(periods + 1);
    pow_match[0] = pow_miss[0] = 1.0;
    for (int i = 1; i <= periods; ++i) {
        pow_match[i] = pow_match[i - 1] * a;
        pow_miss[i] = pow_miss[i - 1] * (1.0 - a);
    }

    // per state path: prior probability and state-change fraction
    std::vector<double> p_theta(paths), q_theta(paths);
    for (std::uint32_t mask = 0; mask < paths; ++mask) {
        const std::uint32_t flips = (mask ^ (mask >> 1)) & (paths / 2 - 1);
        const int nflips = std::popcount(flips);
        p_theta[mask] = 0.5 * std::pow(e, nflips) *
                        std::pow(1.0 - e, periods - 1 - nflips);
        q_theta[mask] = static_cast<double>(nflips) / n;
    }

    // per signal path: action-change fraction from the belief recursion
    std::vector<double> q_a(paths);
    for (std::uint32_t mask = 0; mask < paths; ++mask) {
        double l = 0.0;
        Action act = Sign::up;
        int changes = 0;
        for (int t = 0; t < periods; ++t) {
            if (t > 0)
                l = in_cascade(classify_region(l, c)) ? cascade_decay(l, p)
                                                      : learning_step(l, act, p);
            const Signal s = (mask >> t) & 1u ? Sign::up : Sign::down;
            const Action prev = act;
            act = choose_action(posterior_llr(l, s, c), act);
            if (t > 0 && act != prev) ++changes;
        }
        q_a[mask] = static_cast<double>(changes) / n;
    }

    JointExpectations out{0.0, 0.0};
    double total = 0.0;
    for (std::uint32_t th = 0; th < paths; ++th) {
        const double pt = p_theta[th];
        for (std::uint32_t sm = 0; sm < paths; ++sm) {
            const int misses = std::popcount(sm ^ th);
            const double prob = pt * pow_match[periods - misses] * pow_miss[misses];
            out.q_a += prob * q_a[sm];
            out.q_theta += prob * q_theta[th];
            total += prob;
        }
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::logic_error("joint enumeration mass " + std::to_string(total));
    return out;
}

std::int64_t default_gap_depth(const DerivedConstants& c) {
    return 10 * (c.cascade_cap_floor + 2);
}

OracleResult expected_gap_interval(double l0, const ModelParams& p,
                                   std::int64_t depth) {
    validate(p);
    if (!std::isfinite(l0) || l0 == 0.0)
        throw ValidationError("expected_gap_interval: l0 must be finite and nonzero");
    if (depth < 1) throw ValidationError("expected_gap_interval: depth >= 1");
    const DerivedConstants c = derive_constants(p);
    // The model is mirror-symmetric, so negative starts are evaluated by
    // reflection; this makes interval(l0) == interval(-l0) exact.
    const double start = std::abs(l0);

    struct Node {
        double l;
        std::int64_t k;
        double logp;
    };
    std::vector<Node> stack{{start, 0, 0.0}};
    double partial = 0.0;   // sum of prob * switch-time over absorbed paths
    double frontier = 0.0;  // unabsorbed mass at the depth limit
    while (!stack.empty()) {
        const Node nd = stack.back();
        stack.pop_back();
        if (nd.k == depth) {
            frontier += std::exp(nd.logp);
            continue;
        }
        const auto visit = [&](double lnext, double log_branch) {
            const double lp = nd.logp + log_branch;
            if (lnext < 0.0) {  // sign switched; l == 0 inherits and continues
                partial += std::exp(lp) * static_cast<double>(nd.k + 1);
            } else {
                stack.push_back({lnext, nd.k + 1, lp});
            }
        };
        if (in_cascade(classify_region(nd.l, c))) {
            visit(cascade_decay(nd.l, p), 0.0);
        } else {
            const double pu = signal_prob_up(nd.l, p);
            visit(learning_step_up(nd.l, p), std::log(pu));
            visit(learning_step_down(nd.l, p), std::log1p(-pu));
        }
    }

    OracleResult out;
    out.depth = depth;
    out.mass_unresolved = frontier;
    out.value_low = partial + frontier * 1.0;
    out.value_high = partial + frontier * (static_cast<double>(depth) + c.mean_gap_bound);
    out.low_confidence = frontier > 0.5;
    return out;
}

std::vector<double> post_switch_values(const ModelParams& p, int periods) {
    validate(p);
    const DerivedConstants c = derive_constants(p);

    struct Node {
        double l;
        int sign;  // sign of the last nonzero llr; 0 while unset
    };
    std::vector<double> values;
    std::vector<Node> level{{0.0, 0}};
    std::vector<Node> next;
    for (int t = 0; t < periods; ++t) {
        next.clear();
        for (const Node& nd : level) {
            const auto visit = [&](double lnext) {
                int sg = nd.sign;
                if (lnext != 0.0) {
                    sg = lnext > 0.0 ? 1 : -1;
                    if (nd.sign != 0 && sg != nd.sign) values.push_back(lnext);
                }
                next.push_back({lnext, sg});
            };
            if (in_cascade(classify_region(nd.l, c))) {
                visit(cascade_decay(nd.l, p));
            } else {
                visit(learning_step_up(nd.l, p));
                visit(learning_step_down(nd.l, p));
            }
        }
        level.swap(next);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

namespace {

// Escalates depth until the interval is decisively on one side of the
// bound (or numerically converged); returns the final interval.
OracleResult decide_against_bound(double l0, const ModelParams& p,
                                  std::int64_t depth0, double bound) {
    std::int64_t depth = depth0;
    OracleResult r = expected_gap_interval(l0, p, depth);
    constexpr std::int64_t kMaxDepth = std::int64_t{1} << 22;
    while (r.value_high >= bound && r.value_low < bound && depth < kMaxDepth &&
           r.value_high - r.value_low > 1e-9 * (1.0 + bound)) {
        depth *= 2;
        r = expected_gap_interval(l0, p, depth);
    }
    return r;
}

}  // namespace

BoundsRow verify_bounds_point(const ModelParams& p) {
    const DerivedConstants c = derive_constants(p);
    BoundsRow row;
    row.alpha = p.alpha;
    row.epsilon = p.epsilon;
    row.cascade_cap = c.cascade_cap;
    row.mean_gap_bound = c.mean_gap_bound;
    row.inv_epsilon = 1.0 / p.epsilon;

    bool pass = c.mean_gap_bound < row.inv_epsilon && c.mean_gap_bound > 1.0;

    // longest possible cascade: iterate the decay map from the llr supremum
    double l = learning_step_up(c.c_alpha, p);
    std::int64_t len = 0;
    while (l >= c.c_alpha && len <= c.cascade_cap_floor + 4) {
        ++len;
        l = cascade_decay(l, p);
    }
    row.max_cascade_len = len;
    pass = pass && len <= c.cascade_cap_floor;

    const std::int64_t depth0 = default_gap_depth(c);
    row.depth_used = depth0;
    for (double l0 : post_switch_values(p)) {
        OracleResult r = decide_against_bound(l0, p, depth0, c.mean_gap_bound);
        if (r.value_high > row.interval_high) {
            row.interval_low = r.value_low;
            row.interval_high = r.value_high;
            row.worst_l0 = l0;
            row.depth_used = r.depth;
        }
        pass = pass && r.value_high < c.mean_gap_bound;
    }
    row.pass = pass;
    return row;
}

std::vector<BoundsRow> verify_bounds(std::span<const ModelParams> grid) {
    for (const ModelParams& p : grid) validate(p);
    std::vector<BoundsRow> rows;
    rows.reserve(grid.size());
    for (const ModelParams& p : grid) rows.push_back(verify_bounds_point(p));
    return rows;
}

}  // namespace fads
