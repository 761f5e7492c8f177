#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fads/model.hpp"

namespace fads {

/// Certified interval for an expected first sign-switch time, from
/// enumerating the marginal llr chain to a finite depth.  The unresolved
/// tail is closed from below by one period and from above by
/// depth + mean_gap_bound (the expected remaining time from any unswitched
/// value is below the bound), so
///   value_high - value_low <= mass_unresolved * (depth + mean_gap_bound).
struct OracleResult {
    double value_low = 0.0;
    double value_high = 0.0;
    std::int64_t depth = 0;
    double mass_unresolved = 0.0;
    bool low_confidence = false;  ///< mass_unresolved > 0.5
};

/// Exact expectations of the change frequencies Q_a(n), Q_theta(n),
/// obtained by enumerating every (state path, signal path) pair over n+1
/// periods with its exact probability.  Cost O(4^n); n is capped at 10.
struct JointExpectations {
    double q_a;
    double q_theta;
};

JointExpectations exact_joint_enumeration(const ModelParams& p, int n);

/// Default enumeration depth, 10 * (floor(K) + 2).
std::int64_t default_gap_depth(const DerivedConstants& c);

/// Enumerates signal sequences from l0 (up-signal probability
/// signal_prob_up, cascade periods deterministic) until the llr sign flips
/// or the depth is exhausted.  Path probabilities are carried in log space
/// and exponentiated at accumulation.  l0 must be finite and nonzero.
OracleResult expected_gap_interval(double l0, const ModelParams& p,
                                   std::int64_t depth);

/// Distinct llr values observed immediately after a sign switch, over all
/// signal paths of the given length starting from l=0.  Values are exact
/// doubles, deduplicated without tolerance.
std::vector<double> post_switch_values(const ModelParams& p, int periods = 12);

/// One line of the bound-verification table.
struct BoundsRow {
    double alpha = 0.0;
    double epsilon = 0.0;
    double cascade_cap = 0.0;     ///< K
    double mean_gap_bound = 0.0;  ///< M
    double inv_epsilon = 0.0;
    std::int64_t max_cascade_len = 0;  ///< periods in a cascade started at the llr supremum
    double interval_low = 0.0;    ///< widest certified gap interval over the
    double interval_high = 0.0;   ///<   sampled post-switch values
    double worst_l0 = 0.0;
    std::int64_t depth_used = 0;
    bool pass = false;
};

/// Checks, for one parameter point: M < 1/epsilon, the iterated cascade
/// length is at most floor(K), and the certified gap interval at every
/// sampled post-switch value lies below M.  Depth starts at
/// default_gap_depth and doubles until each interval is decisively on one
/// side of M.
BoundsRow verify_bounds_point(const ModelParams& p);

/// verify_bounds_point over a grid; any invalid point throws before any
/// row is produced.
std::vector<BoundsRow> verify_bounds(std::span<const ModelParams> grid);

}  // namespace fads
