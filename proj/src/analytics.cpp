#include "fads/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fads {

namespace {

void require_horizon(const Trace& trace, std::int64_t min) {
    if (static_cast<std::int64_t>(trace.steps.size()) < min)
        throw ValidationError("trace too short: need horizon >= " +
                              std::to_string(min));
}

}  // namespace

ChangeCounts change_frequencies(const Trace& trace) {
    require_horizon(trace, 2);
    const auto& s = trace.steps;
    ChangeCounts out{};
    out.n = static_cast<std::int64_t>(s.size()) - 1;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        out.action_changes += s[i].action != s[i + 1].action;
        out.state_changes += s[i].theta != s[i + 1].theta;
    }
    out.q_a = static_cast<double>(out.action_changes) / static_cast<double>(out.n);
    out.q_theta = static_cast<double>(out.state_changes) / static_cast<double>(out.n);
    return out;
}

LlrSwitches llr_switch_times(std::span<const double> llr) {
    LlrSwitches out;
    int cur = 0;
    for (std::size_t i = 0; i < llr.size(); ++i) {
        const double l = llr[i];
        if (l == 0.0) {
            if (i > 0) ++out.zero_hits;  // l=0 at t=1 is the prior, not a hit
            continue;
        }
        const int sgn = l > 0.0 ? 1 : -1;
        if (cur != 0 && sgn != cur)
            out.times.push_back(static_cast<std::int64_t>(i) + 1);
        cur = sgn;
    }
    return out;
}

SwitchStats switch_gaps(const Trace& trace) {
    require_horizon(trace, 2);
    const ChangeCounts cc = change_frequencies(trace);

    std::vector<double> llr(trace.steps.size());
    std::transform(trace.steps.begin(), trace.steps.end(), llr.begin(),
                   [](const TraceStep& st) { return st.l_pub; });
    LlrSwitches sw = llr_switch_times(llr);

    SwitchStats out;
    out.n = cc.n;
    out.action_changes = cc.action_changes;
    out.state_changes = cc.state_changes;
    out.q_a = cc.q_a;
    out.q_theta = cc.q_theta;
    out.switch_times = std::move(sw.times);
    out.zero_hits = sw.zero_hits;
    out.enough_switches = out.switch_times.size() >= 2;
    if (out.enough_switches) {
        out.gaps.reserve(out.switch_times.size());
        std::int64_t prev = 0;  // T_0 = 0
        for (std::int64_t t : out.switch_times) {
            out.gaps.push_back(t - prev);
            prev = t;
        }
    }
    return out;
}

std::int64_t restricted_fad_count(const Trace& trace) {
    require_horizon(trace, 3);
    const auto& s = trace.steps;
    std::int64_t count = 0;
    for (std::size_t i = 2; i < s.size(); ++i)
        count += s[i].action != s[i - 1].action && s[i - 1].action == s[i - 2].action;
    return count;
}

std::int64_t consecutive_change_count(const Trace& trace) {
    require_horizon(trace, 3);
    const auto& s = trace.steps;
    std::int64_t count = 0;
    for (std::size_t i = 2; i < s.size(); ++i)
        count += s[i].action != s[i - 1].action && s[i - 1].action != s[i - 2].action;
    return count;
}

std::vector<CascadeEpisode> cascade_episodes(const Trace& trace) {
    std::vector<CascadeEpisode> out;
    const auto& s = trace.steps;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!in_cascade(s[i].region)) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < s.size() && s[i].region == s[start].region) ++i;
        if (i == s.size()) break;  // open at the horizon; exit unobserved
        out.push_back({s[start].t, s[start].l_pub,
                       static_cast<std::int64_t>(i - start), s[i].l_pub});
    }
    return out;
}

std::int64_t max_cascade_run(const Trace& trace) {
    std::int64_t best = 0, run = 0;
    for (const TraceStep& st : trace.steps) {
        run = in_cascade(st.region) ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

SeedReport seed_report(const Trace& trace) {
    require_horizon(trace, 3);
    SwitchStats ss = switch_gaps(trace);
    SeedReport r;
    r.seed = trace.config.seed;
    r.action_changes = ss.action_changes;
    r.state_changes = ss.state_changes;
    r.q_a = ss.q_a;
    r.q_theta = ss.q_theta;
    r.margin = ss.q_a - ss.q_theta;
    r.fads_emerged = r.margin > 0.0;
    r.gap_count = ss.gaps.empty() ? 0 : static_cast<std::int64_t>(ss.gaps.size()) - 1;
    if (r.gap_count > 0) {
        double sum = 0.0;
        for (std::size_t i = 1; i < ss.gaps.size(); ++i)
            sum += static_cast<double>(ss.gaps[i]);
        r.mean_gap = sum / static_cast<double>(r.gap_count);
    } else {
        r.mean_gap = std::numeric_limits<double>::quiet_NaN();
    }
    r.restricted_fads = restricted_fad_count(trace);
    r.consecutive_changes = consecutive_change_count(trace);
    r.zero_hits = ss.zero_hits;
    r.max_cascade_run = max_cascade_run(trace);
    return r;
}

FadReport aggregate_seed_reports(const ModelParams& params, std::int64_t horizon,
                                 std::vector<SeedReport> seeds) {
    if (seeds.empty()) throw ValidationError("fad_report: no traces");
    FadReport rep;
    rep.params = params;
    rep.horizon = horizon;
    double sum_qa = 0, sum_qt = 0, sum_restricted = 0, sum_consecutive = 0;
    double sum_gap = 0;
    std::int64_t seeds_with_gaps = 0;
    rep.fads_in_every_seed = true;
    for (const SeedReport& r : seeds) {
        sum_qa += r.q_a;
        sum_qt += r.q_theta;
        sum_restricted += static_cast<double>(r.restricted_fads);
        sum_consecutive += static_cast<double>(r.consecutive_changes);
        if (r.gap_count > 0) {
            sum_gap += r.mean_gap;
            ++seeds_with_gaps;
        }
        rep.fads_in_every_seed = rep.fads_in_every_seed && r.fads_emerged;
    }
    const double ns = static_cast<double>(seeds.size());
    rep.q_a = sum_qa / ns;
    rep.q_theta = sum_qt / ns;
    rep.margin = rep.q_a - rep.q_theta;
    rep.fads_emerged = rep.margin > 0.0;
    rep.mean_gap = seeds_with_gaps > 0
                       ? sum_gap / static_cast<double>(seeds_with_gaps)
                       : std::numeric_limits<double>::quiet_NaN();
    rep.restricted_fads_mean = sum_restricted / ns;
    rep.consecutive_changes_mean = sum_consecutive / ns;
    rep.per_seed = std::move(seeds);
    return rep;
}

FadReport fad_report(std::span<const Trace> traces) {
    if (traces.empty()) throw ValidationError("fad_report: no traces");
    const ModelParams p = traces.front().config.params;
    const std::int64_t horizon = traces.front().config.horizon;
    for (const Trace& t : traces) {
        if (t.config.params.alpha != p.alpha ||
            t.config.params.epsilon != p.epsilon || t.config.horizon != horizon)
            throw ValidationError("fad_report: traces mix parameters or horizons");
    }
    std::vector<SeedReport> seeds;
    seeds.reserve(traces.size());
    for (const Trace& t : traces) seeds.push_back(seed_report(t));
    return aggregate_seed_reports(p, horizon, std::move(seeds));
}

MomentStability moment_stability(std::span<const std::int64_t> gaps) {
    constexpr int kWindows = 10;
    constexpr double kTCrit95Df8 = 1.8595;  // one-sided 5%, df = kWindows - 2
    if (gaps.size() < kWindows)
        throw ValidationError("moment_stability: need at least 10 gaps");

    MomentStability out{};
    out.all_stable = true;
    for (int r = 1; r <= 4; ++r) {
        double y[kWindows];
        for (int w = 0; w < kWindows; ++w) {
            const std::size_t len = gaps.size() * (w + 1) / kWindows;
            double sum = 0.0;
            for (std::size_t i = 0; i < len; ++i)
                sum += std::pow(static_cast<double>(gaps[i]), r);
            y[w] = sum / static_cast<double>(len);
        }
        // OLS of y on window index 1..kWindows
        double xbar = (kWindows + 1) / 2.0, ybar = 0.0;
        for (double v : y) ybar += v;
        ybar /= kWindows;
        double sxx = 0.0, sxy = 0.0;
        for (int w = 0; w < kWindows; ++w) {
            const double dx = (w + 1) - xbar;
            sxx += dx * dx;
            sxy += dx * (y[w] - ybar);
        }
        const double slope = sxy / sxx;
        double sse = 0.0;
        for (int w = 0; w < kWindows; ++w) {
            const double resid = y[w] - ybar - slope * ((w + 1) - xbar);
            sse += resid * resid;
        }
        const double se = std::sqrt(sse / (kWindows - 2) / sxx);
        const double t = se > 0.0 ? slope / se : 0.0;
        out.slope[r - 1] = slope;
        out.t_stat[r - 1] = t;
        out.stable[r - 1] = t < kTCrit95Df8;
        out.all_stable = out.all_stable && out.stable[r - 1];
    }
    return out;
}

}  // namespace fads
