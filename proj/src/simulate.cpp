#include "fads/simulate.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fads/rng.hpp"

namespace fads {

void validate(const RunConfig& cfg) {
    validate(cfg.params);
    if (cfg.horizon < 2)
        throw ValidationError("horizon=" + std::to_string(cfg.horizon) +
                              " violates horizon >= 2");
}

void simulate(const RunConfig& cfg, Trace& out) {
    validate(cfg);
    const ModelParams p = cfg.params;
    const DerivedConstants c = derive_constants(p);
    RngStream rng(cfg.seed);

    out.config = cfg;
    out.steps.clear();
    out.steps.reserve(static_cast<std::size_t>(cfg.horizon));

    double l = 0.0;
    StateValue theta = rng.uniform_sign();
    Signal s = rng.signal_for(theta, p.alpha);
    double post = posterior_llr(l, s, c);
    // l=0 puts the posterior at +-c_alpha, so the t=1 predecessor default
    // is a dead branch.
    assert(post != 0.0);
    Action a = choose_action(post, Sign::up);
    out.steps.push_back({1, l, post, theta, s, a, classify_region(l, c)});

    for (std::int64_t t = 2; t <= cfg.horizon; ++t) {
        theta = rng.transition(theta, p.epsilon);
        l = in_cascade(classify_region(l, c)) ? cascade_decay(l, p)
                                              : learning_step(l, a, p);
        s = rng.signal_for(theta, p.alpha);
        post = posterior_llr(l, s, c);
        a = choose_action(post, a);
        out.steps.push_back({t, l, post, theta, s, a, classify_region(l, c)});
    }
}

Trace simulate(const RunConfig& cfg) {
    Trace t;
    simulate(cfg, t);
    return t;
}

LlrChain simulate_llr_chain(const RunConfig& cfg) {
    validate(cfg);
    const ModelParams p = cfg.params;
    const DerivedConstants c = derive_constants(p);
    RngStream rng(cfg.seed);

    LlrChain out;
    out.config = cfg;
    out.l_pub.reserve(static_cast<std::size_t>(cfg.horizon));
    double l = 0.0;
    out.l_pub.push_back(l);
    for (std::int64_t t = 2; t <= cfg.horizon; ++t) {
        if (in_cascade(classify_region(l, c))) {
            l = cascade_decay(l, p);
        } else {
            l = rng.bernoulli(signal_prob_up(l, p)) ? learning_step_up(l, p)
                                                    : learning_step_down(l, p);
        }
        out.l_pub.push_back(l);
    }
    return out;
}

namespace {
[[noreturn]] void fail(std::int64_t t, const std::string& what) {
    throw std::logic_error("trace invariant violated at t=" +
                           std::to_string(t) + ": " + what);
}
}  // namespace

void check_trace(const Trace& trace) {
    const ModelParams p = trace.config.params;
    const DerivedConstants c = derive_constants(p);
    const auto& steps = trace.steps;
    if (steps.size() != static_cast<std::size_t>(trace.config.horizon))
        fail(0, "length != horizon");
    if (steps[0].l_pub != 0.0) fail(1, "l at t=1 is not 0");

    for (std::size_t i = 0; i < steps.size(); ++i) {
        const TraceStep& st = steps[i];
        if (st.t != static_cast<std::int64_t>(i) + 1) fail(st.t, "period index");
        if (st.region != classify_region(st.l_pub, c)) fail(st.t, "region label");
        if (st.L_post != posterior_llr(st.l_pub, st.signal, c))
            fail(st.t, "posterior llr");
        if (st.L_post != 0.0 && st.action != sign_of(st.L_post, st.action))
            fail(st.t, "action vs posterior sign");
        if (st.L_post == 0.0 && i > 0 && st.action != steps[i - 1].action)
            fail(st.t, "tie-break did not repeat predecessor");
        if (in_cascade(st.region) && st.action != sign_of(st.l_pub, st.action))
            fail(st.t, "cascade action vs llr sign");

        if (i + 1 < steps.size()) {
            const TraceStep& next = steps[i + 1];
            const double expect = in_cascade(st.region)
                                      ? cascade_decay(st.l_pub, p)
                                      : learning_step(st.l_pub, st.action, p);
            if (next.l_pub != expect) fail(next.t, "transition map link");
            if (next.l_pub != 0.0 && st.action != sign_of(next.l_pub, st.action))
                fail(st.t, "action != sign of next llr");
        }
    }
}

}  // namespace fads
