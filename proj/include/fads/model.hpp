#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

// Core model: parameters, closed-form constants, and the exact one-step
// belief/action maps of a sequential learning process whose binary state
// flips with probability epsilon each period and whose private signals
// match the state with probability alpha.
//
// All beliefs are carried as log-likelihood ratios (log-odds of the +1
// state); the recursions below are applied directly in log-odds space and
// never pass through probabilities, which keeps them stable near certainty.

namespace fads {

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Signal precision and per-period state-switch probability.
/// Valid domain: 1/2 < alpha < 1 and 0 < epsilon < alpha*(1-alpha).
struct ModelParams {
    double alpha = 0.8;
    double epsilon = 0.05;
};

// The derived constants are singular at the domain boundaries, so
// validation keeps this margin away from them.
inline constexpr double kParamBoundaryMargin = 1e-9;

/// Throws ValidationError naming the violated bound.
void validate(const ModelParams& p);

/// Closed-form thresholds and bounds implied by (alpha, epsilon).
struct DerivedConstants {
    double c_alpha;        ///< log-odds contributed by a single signal, ln(alpha/(1-alpha))
    double c_u;            ///< smallest positive llr from which one up-signal starts a cascade
    double cascade_cap;    ///< K: real-valued cap on consecutive periods spent in a cascade
    std::int64_t cascade_cap_floor;  ///< greatest integer <= K
    double mean_gap_bound; ///< M: bound on the expected periods between llr sign switches, < 1/epsilon
};

/// Computes all constants; validates `p` first.
DerivedConstants derive_constants(const ModelParams& p);

/// Binary label used for the state, the private signal and the action.
enum class Sign : std::int8_t { down = -1, up = +1 };

inline Sign operator-(Sign s) { return s == Sign::up ? Sign::down : Sign::up; }
inline int to_int(Sign s) { return static_cast<int>(s); }
inline Sign sign_of(double x, Sign when_zero) {
    if (x > 0.0) return Sign::up;
    if (x < 0.0) return Sign::down;
    return when_zero;
}

using StateValue = Sign;
using Signal = Sign;
using Action = Sign;

enum class Region : std::int8_t { down_cascade = -1, learning = 0, up_cascade = +1 };

namespace detail {
// ln(a*e^l + b) for a, b > 0, stable for any finite l.
inline double log_affine_exp(double a, double b, double l) {
    if (l > 0.0) return l + std::log(a + b * std::exp(-l));
    return std::log(a * std::exp(l) + b);
}
}  // namespace detail

/// One-step update of the public llr in the learning region after an
/// up action (the action reveals the signal, then the state transitions).
inline double learning_step_up(double llr, const ModelParams& p) {
    const double a = p.alpha, e = p.epsilon;
    return detail::log_affine_exp((1.0 - e) * a, e * (1.0 - a), llr) -
           detail::log_affine_exp(e * a, (1.0 - e) * (1.0 - a), llr);
}

/// Mirror of learning_step_up for a down action.
inline double learning_step_down(double llr, const ModelParams& p) {
    const double a = p.alpha, e = p.epsilon;
    return detail::log_affine_exp((1.0 - e) * (1.0 - a), e * a, llr) -
           detail::log_affine_exp(e * (1.0 - a), (1.0 - e) * a, llr);
}

inline double learning_step(double llr, Sign action, const ModelParams& p) {
    return action == Sign::up ? learning_step_up(llr, p) : learning_step_down(llr, p);
}

/// Deterministic decay of the public llr toward zero while actions carry
/// no information; only the state transition moves the belief.
inline double cascade_decay(double llr, const ModelParams& p) {
    const double e = p.epsilon;
    return detail::log_affine_exp(1.0 - e, e, llr) -
           detail::log_affine_exp(e, 1.0 - e, llr);
}

/// Posterior llr after observing a private signal: the public llr shifted
/// by +-c_alpha.
inline double posterior_llr(double llr, Signal s, const DerivedConstants& c) {
    return s == Sign::up ? llr + c.c_alpha : llr - c.c_alpha;
}

/// Strict preference decides; exact indifference repeats the predecessor.
inline Action choose_action(double posterior, Action prev_action) {
    return sign_of(posterior, prev_action);
}

/// Boundary |llr| == c_alpha counts as a cascade (exact comparison; no
/// tolerance band, so the dynamics are unchanged).
inline Region classify_region(double llr, const DerivedConstants& c) {
    if (llr >= c.c_alpha) return Region::up_cascade;
    if (llr <= -c.c_alpha) return Region::down_cascade;
    return Region::learning;
}

inline bool in_cascade(Region r) { return r != Region::learning; }

/// Belief q = e^l / (1 + e^l) recovered from a log-likelihood ratio.
inline double belief_from_llr(double llr) { return 1.0 / (1.0 + std::exp(-llr)); }

/// Marginal probability of an up-signal given the public llr:
/// pi(l) = q*alpha + (1-q)*(1-alpha), increasing in l, pi(0) = 1/2.
inline double signal_prob_up(double llr, const ModelParams& p) {
    const double q = belief_from_llr(llr);
    return q * p.alpha + (1.0 - q) * (1.0 - p.alpha);
}

/// sup of signal_prob_up over the positive learning region,
/// attained at c_alpha: 1 - 2*alpha*(1-alpha).
inline double signal_prob_up_sup(const ModelParams& p) {
    return 1.0 - 2.0 * p.alpha * (1.0 - p.alpha);
}

}  // namespace fads
