#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fads/analytics.hpp"
#include "fads/simulate.hpp"

using namespace fads;

namespace {

const ModelParams kFig{0.8, 0.05};

// Minimal trace with prescribed action/state columns; the llr columns are
// irrelevant for the change counters.
Trace fake_trace(const std::vector<int>& actions, const std::vector<int>& states) {
    Trace t;
    t.config = {kFig, static_cast<std::int64_t>(actions.size()), 0};
    for (std::size_t i = 0; i < actions.size(); ++i) {
        TraceStep st{};
        st.t = static_cast<std::int64_t>(i) + 1;
        st.action = actions[i] > 0 ? Sign::up : Sign::down;
        st.theta = states[i] > 0 ? Sign::up : Sign::down;
        st.signal = Sign::up;
        st.region = Region::learning;
        t.steps.push_back(st);
    }
    return t;
}

}  // namespace

TEST_CASE("change frequencies: direct counts") {
    const Trace t = fake_trace({1, 1, -1, 1}, {1, 1, 1, -1});
    const ChangeCounts cc = change_frequencies(t);
    CHECK(cc.n == 3);
    CHECK(cc.action_changes == 2);
    CHECK(cc.state_changes == 1);
    CHECK(cc.q_a == doctest::Approx(2.0 / 3.0));
    CHECK(cc.q_theta == doctest::Approx(1.0 / 3.0));

    const Trace tiny = fake_trace({1}, {1});
    CHECK_THROWS_AS(change_frequencies(tiny), ValidationError);
}

TEST_CASE("switch times and gaps by definition") {
    // l signs: +, +, -, -, +  ->  T1 = 3, T2 = 5, D = (3, 2)
    const std::vector<double> llr{0.5, 1.0, -1.0, -0.2, 0.1};
    const LlrSwitches sw = llr_switch_times(llr);
    REQUIRE(sw.times.size() == 2);
    CHECK(sw.times[0] == 3);
    CHECK(sw.times[1] == 5);
    CHECK(sw.zero_hits == 0);
}

TEST_CASE("a zero llr inherits the previous sign") {
    const std::vector<double> llr{0.5, 0.0, -0.5, 0.0, -0.1, 0.2};
    const LlrSwitches sw = llr_switch_times(llr);
    REQUIRE(sw.times.size() == 2);
    CHECK(sw.times[0] == 3);  // the zero at t=2 is not a switch
    CHECK(sw.times[1] == 6);
    CHECK(sw.zero_hits == 2);

    // leading zero (the flat prior) is not a zero hit
    const std::vector<double> lead{0.0, 0.4, -0.4};
    CHECK(llr_switch_times(lead).zero_hits == 0);
}

TEST_CASE("switch_gaps flags traces with fewer than two switches") {
    const Trace t = simulate({kFig, 4, 1});
    const SwitchStats ss = switch_gaps(t);
    if (ss.switch_times.size() < 2) {
        CHECK_FALSE(ss.enough_switches);
        CHECK(ss.gaps.empty());
    }
    const Trace longer = simulate({kFig, 5000, 1});
    const SwitchStats ss2 = switch_gaps(longer);
    REQUIRE(ss2.enough_switches);
    REQUIRE(ss2.gaps.size() == ss2.switch_times.size());
    CHECK(ss2.gaps[0] == ss2.switch_times[0]);  // T_0 = 0
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < ss2.gaps.size(); ++i) {
        CHECK(ss2.gaps[i] > 0);
        if (i > 0) CHECK(ss2.switch_times[i] > ss2.switch_times[i - 1]);
        sum += ss2.gaps[i];
    }
    CHECK(sum == ss2.switch_times.back());
}

TEST_CASE("restricted fads: both readings on hand examples") {
    const Trace t = fake_trace({1, -1, 1, 1, -1}, {1, 1, 1, 1, 1});
    CHECK(restricted_fad_count(t) == 1);      // only the change at t=5
    CHECK(consecutive_change_count(t) == 1);  // only the change at t=3

    const Trace flat = fake_trace({1, 1, 1, 1}, {1, 1, 1, 1});
    CHECK(restricted_fad_count(flat) == 0);
    CHECK(consecutive_change_count(flat) == 0);

    const Trace tiny = fake_trace({1, -1}, {1, 1});
    CHECK_THROWS_AS(restricted_fad_count(tiny), ValidationError);

    // every change is either restricted or consecutive (t >= 3)
    const Trace sim = simulate({kFig, 50000, 21});
    std::int64_t changes_from_t3 = 0;
    for (std::size_t i = 2; i < sim.steps.size(); ++i)
        changes_from_t3 += sim.steps[i].action != sim.steps[i - 1].action;
    CHECK(restricted_fad_count(sim) + consecutive_change_count(sim) ==
          changes_from_t3);
}

TEST_CASE("cascade episodes: entry, exit and cap") {
    const DerivedConstants c = derive_constants(kFig);
    const Trace t = simulate({kFig, 200000, 31});
    const auto episodes = cascade_episodes(t);
    REQUIRE(!episodes.empty());
    for (const CascadeEpisode& ep : episodes) {
        CHECK(std::abs(ep.enter_l) >= c.c_alpha);
        CHECK(std::abs(ep.exit_l) < c.c_alpha);
        CHECK(((ep.enter_l > 0) == (ep.exit_l > 0)));
        CHECK(ep.length >= 1);
        CHECK(ep.length <= c.cascade_cap_floor);
    }
    CHECK(max_cascade_run(t) <= c.cascade_cap_floor);

    // all-learning trace has no episodes
    const Trace quiet = fake_trace({1, 1, 1}, {1, 1, 1});
    CHECK(cascade_episodes(quiet).empty());
    CHECK(max_cascade_run(quiet) == 0);
}

TEST_CASE("switch count reconstructs the action-change count") {
    // a_t = sign(l_{t+1}), so action changes on t in [1, N-2] equal llr sign
    // switches, provided l never hits exactly 0.
    for (std::uint64_t seed : {2u, 12u, 22u}) {
        const Trace t = simulate({kFig, 100000, seed});
        const SwitchStats ss = switch_gaps(t);
        if (ss.zero_hits != 0) continue;
        std::int64_t changes = 0;
        for (std::size_t i = 0; i + 2 < t.steps.size(); ++i)
            changes += t.steps[i].action != t.steps[i + 1].action;
        CHECK(changes == static_cast<std::int64_t>(ss.switch_times.size()));
    }
}

TEST_CASE("fad report pools seeds and rejects mixed inputs") {
    std::vector<Trace> traces;
    for (std::uint64_t seed = 1; seed <= 4; ++seed)
        traces.push_back(simulate({kFig, 20000, seed}));
    const FadReport rep = fad_report(traces);
    CHECK(rep.per_seed.size() == 4);
    double qa = 0;
    for (const SeedReport& s : rep.per_seed) qa += s.q_a;
    CHECK(rep.q_a == doctest::Approx(qa / 4.0));
    CHECK(rep.margin == doctest::Approx(rep.q_a - rep.q_theta));
    CHECK(rep.fads_emerged == (rep.margin > 0));

    traces.push_back(simulate({{0.8, 0.01}, 20000, 1}));
    CHECK_THROWS_AS(fad_report(traces), ValidationError);
    traces.pop_back();
    traces.push_back(simulate({kFig, 10000, 1}));
    CHECK_THROWS_AS(fad_report(traces), ValidationError);
}

TEST_CASE("q_theta estimates epsilon within three standard errors") {
    for (double eps : {0.05, 0.016}) {
        const ModelParams p{0.8, eps};
        std::vector<Trace> traces;
        for (std::uint64_t seed = 100; seed < 108; ++seed)
            traces.push_back(simulate({p, 50000, seed}));
        const FadReport rep = fad_report(traces);
        const double n = 50000 - 1;
        const double se = std::sqrt(eps * (1 - eps) / (n * 8));
        CHECK(std::abs(rep.q_theta - eps) < 3 * se);
    }
}

TEST_CASE("gap moments are stable over expanding windows") {
    const Trace t = simulate({kFig, 400000, 77});
    const SwitchStats ss = switch_gaps(t);
    REQUIRE(ss.enough_switches);
    // fresh gaps only (i >= 2)
    const std::vector<std::int64_t> fresh(ss.gaps.begin() + 1, ss.gaps.end());
    const MomentStability ms = moment_stability(fresh);
    for (int r = 0; r < 4; ++r) {
        CAPTURE(r);
        CAPTURE(ms.t_stat[r]);
        CHECK(ms.stable[r]);
    }
    CHECK(ms.all_stable);

    std::vector<std::int64_t> few{1, 2, 3};
    CHECK_THROWS_AS(moment_stability(few), ValidationError);
}

TEST_CASE("mean gap sits below the closed-form bound") {
    const DerivedConstants c = derive_constants(kFig);
    std::vector<Trace> traces;
    for (std::uint64_t seed = 300; seed < 308; ++seed)
        traces.push_back(simulate({kFig, 100000, seed}));
    const FadReport rep = fad_report(traces);
    CHECK(rep.mean_gap < c.mean_gap_bound);
    CHECK(rep.mean_gap > 1.0);
}
