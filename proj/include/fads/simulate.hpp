#pragma once

#include <cstdint>
#include <vector>

#include "fads/model.hpp"

namespace fads {

/// One full sample path is reproducible from (params, horizon, seed).
/// The initial state is uniform on {-1,+1}; this is not configurable.
struct RunConfig {
    ModelParams params;
    std::int64_t horizon = 2;  ///< number of periods N, >= 2
    std::uint64_t seed = 1;
};

/// Throws ValidationError on bad params or horizon < 2.
void validate(const RunConfig& cfg);

/// Full record of one period.
struct TraceStep {
    std::int64_t t;    ///< 1-based period index
    double l_pub;      ///< public llr about the current state, given past actions
    double L_post;     ///< posterior llr after the private signal
    StateValue theta;
    Signal signal;
    Action action;
    Region region;     ///< classify_region(l_pub)
};

struct Trace {
    RunConfig config;
    std::vector<TraceStep> steps;
};

/// Generates a full path of (theta, signal, l, L, action) under the event
/// timing: the state transitions, the agent observes a signal about the new
/// state, then acts.  l at t=1 is 0.  Two RNG draws per period, in the order
/// (transition, signal).  Memory is O(horizon); horizons up to 1e7 are fine
/// (32 bytes per step).
Trace simulate(const RunConfig& cfg);

/// As simulate(), reusing the capacity of `out.steps`.
void simulate(const RunConfig& cfg, Trace& out);

/// Path of the public llr alone, driven by the marginal up-signal
/// probability signal_prob_up(l) in the learning region; cascade periods
/// decay deterministically (one RNG draw per learning-region period).
/// Same marginal law as the l column of simulate(); used to cross-check
/// the enumeration oracle.
struct LlrChain {
    RunConfig config;
    std::vector<double> l_pub;  ///< l_pub[i] is the llr at period i+1
};

LlrChain simulate_llr_chain(const RunConfig& cfg);

/// Re-checks every per-step invariant of a finished trace (region labels,
/// action/posterior consistency, transition maps linking consecutive
/// steps, action = sign of next llr).  Throws std::logic_error with the
/// offending period on the first violation.  Intended for tests.
void check_trace(const Trace& trace);

}  // namespace fads
