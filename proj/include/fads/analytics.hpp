#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fads/simulate.hpp"

namespace fads {

/// Change counts and llr sign-switch bookkeeping for one trace.
///
/// Switch times are 1-based period indices: T_i is the first period whose
/// llr carries the new sign.  T_0 = 0 by convention, so gaps[0] = T_1.
/// A period with l exactly 0 inherits the previous sign (counted in
/// zero_hits, never as a switch).
struct SwitchStats {
    std::int64_t n = 0;               ///< comparisons, horizon - 1
    std::int64_t action_changes = 0;  ///< #{t <= n : a_t != a_{t+1}}
    std::int64_t state_changes = 0;   ///< #{t <= n : theta_t != theta_{t+1}}
    double q_a = 0.0;
    double q_theta = 0.0;
    std::vector<std::int64_t> switch_times;
    std::vector<std::int64_t> gaps;   ///< D_i = T_i - T_{i-1}; empty when < 2 switches
    std::int64_t zero_hits = 0;
    bool enough_switches = false;
};

struct ChangeCounts {
    std::int64_t n;
    std::int64_t action_changes;
    std::int64_t state_changes;
    double q_a;
    double q_theta;
};

/// Exact change frequencies with n = horizon - 1.  Throws on horizon < 2.
ChangeCounts change_frequencies(const Trace& trace);

/// Full switch statistics; throws on horizon < 2.
SwitchStats switch_gaps(const Trace& trace);

/// Sign-switch scan of a bare llr path (shared with the marginal chain).
struct LlrSwitches {
    std::vector<std::int64_t> times;
    std::int64_t zero_hits = 0;
};
LlrSwitches llr_switch_times(std::span<const double> llr);

/// Action changes not preceded by another change:
/// #{t >= 3 : a_t != a_{t-1} and a_{t-1} == a_{t-2}}.  Throws on horizon < 3.
std::int64_t restricted_fad_count(const Trace& trace);

/// The complementary reading (changes that complete a back-to-back pair):
/// #{t >= 3 : a_t != a_{t-1} and a_{t-1} != a_{t-2}}.  Throws on horizon < 3.
std::int64_t consecutive_change_count(const Trace& trace);

/// One maximal run of cascade-region periods, with the llr value that
/// entered it and the value observed right after it ended.  Runs still open
/// at the end of the trace are not reported (their exit is unobserved).
struct CascadeEpisode {
    std::int64_t enter_t;
    double enter_l;
    std::int64_t length;
    double exit_l;
};

std::vector<CascadeEpisode> cascade_episodes(const Trace& trace);

/// Longest run of cascade-region periods, trailing partial run included.
std::int64_t max_cascade_run(const Trace& trace);

/// Per-trace summary feeding a FadReport.
struct SeedReport {
    std::uint64_t seed = 0;
    std::int64_t action_changes = 0;
    std::int64_t state_changes = 0;
    double q_a = 0.0;
    double q_theta = 0.0;
    double margin = 0.0;
    bool fads_emerged = false;   ///< q_a > q_theta
    double mean_gap = 0.0;       ///< mean of D_i over i >= 2; NaN when no fresh gap
    std::int64_t gap_count = 0;  ///< number of fresh gaps (i >= 2)
    std::int64_t restricted_fads = 0;
    std::int64_t consecutive_changes = 0;
    std::int64_t zero_hits = 0;
    std::int64_t max_cascade_run = 0;
};

SeedReport seed_report(const Trace& trace);

/// Aggregate over traces sharing (params, horizon).  Pooled values are
/// unweighted averages of per-seed values; gaps within a seed are dependent,
/// so seeds are never merged into one gap pool.
struct FadReport {
    ModelParams params;
    std::int64_t horizon = 0;
    std::vector<SeedReport> per_seed;
    double q_a = 0.0;
    double q_theta = 0.0;
    double margin = 0.0;
    bool fads_emerged = false;
    bool fads_in_every_seed = false;
    double mean_gap = 0.0;  ///< average of per-seed mean gaps (seeds with none excluded)
    double restricted_fads_mean = 0.0;
    double consecutive_changes_mean = 0.0;
};

/// Throws ValidationError on empty input or mixed (params, horizon).
FadReport fad_report(std::span<const Trace> traces);

/// Aggregation step shared by fad_report and streaming callers that
/// summarize each trace and discard it.
FadReport aggregate_seed_reports(const ModelParams& params, std::int64_t horizon,
                                 std::vector<SeedReport> seeds);

/// Expanding-window diagnostic for the first four moments of the gaps:
/// the OLS slope of each moment against the window index must not be
/// significantly positive (one-sided t test at 5%, 10 windows).
struct MomentStability {
    double slope[4];
    double t_stat[4];
    bool stable[4];
    bool all_stable;
};

MomentStability moment_stability(std::span<const std::int64_t> gaps);

}  // namespace fads
