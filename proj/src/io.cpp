#include "fads/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fads {

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::int64_t parse_int(std::string_view s) {
    char* end = nullptr;
    const std::string buf(s);
    const long long v = std::strtoll(buf.c_str(), &end, 10);
    if (end == buf.c_str() || *end != '\0')
        throw IoError("bad integer field: '" + buf + "'");
    return v;
}

Sign parse_sign(std::string_view s) {
    const std::int64_t v = parse_int(s);
    if (v == 1) return Sign::up;
    if (v == -1) return Sign::down;
    throw IoError("bad sign field: " + std::string(s));
}

void expect_header(std::istream& is, const std::string& want) {
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty input, expected header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != want)
        throw IoError("bad header: got '" + line + "', want '" + want + "'");
}

constexpr const char* kTraceHeader = "t,theta,signal,l_pub,L_post,action,region";
constexpr const char* kReportHeader =
    "alpha,epsilon,horizon,seed,q_a,q_theta,margin,ratio,fads,action_changes,"
    "state_changes,restricted_fads,consecutive_changes,mean_gap,gap_count,"
    "zero_hits,max_cascade_run";
constexpr const char* kBoundsHeader =
    "alpha,epsilon,K,M,inv_eps,max_cascade_len,interval_low,interval_high,pass";
constexpr const char* kOracleHeader =
    "l0,depth,value_low,value_high,mass_unresolved,low_confidence";

double seed_ratio(const SeedReport& s) {
    return s.q_theta > 0.0 ? s.q_a / s.q_theta
                           : std::numeric_limits<double>::quiet_NaN();
}

double json_real(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN()
                       : j.get<double>();
}

}  // namespace

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_real(std::string_view s) {
    const std::string buf(s);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end == buf.c_str() || *end != '\0')
        throw IoError("bad real field: '" + buf + "'");
    return v;
}

std::string to_string(Region r) {
    switch (r) {
        case Region::learning: return "learning";
        case Region::up_cascade: return "up_cascade";
        case Region::down_cascade: return "down_cascade";
    }
    throw IoError("bad region value");
}

Region region_from_string(std::string_view s) {
    if (s == "learning") return Region::learning;
    if (s == "up_cascade") return Region::up_cascade;
    if (s == "down_cascade") return Region::down_cascade;
    throw IoError("bad region field: " + std::string(s));
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
    os << kTraceHeader << '\n';
    for (const TraceStep& st : trace.steps) {
        os << st.t << ',' << to_int(st.theta) << ',' << to_int(st.signal) << ','
           << format_real(st.l_pub) << ',' << format_real(st.L_post) << ','
           << to_int(st.action) << ',' << to_string(st.region) << '\n';
    }
}

std::vector<TraceStep> read_trace_csv(std::istream& is) {
    expect_header(is, kTraceHeader);
    std::vector<TraceStep> out;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 7) throw IoError("trace row needs 7 fields: " + line);
        TraceStep st;
        st.t = parse_int(f[0]);
        st.theta = parse_sign(f[1]);
        st.signal = parse_sign(f[2]);
        st.l_pub = parse_real(f[3]);
        st.L_post = parse_real(f[4]);
        st.action = parse_sign(f[5]);
        st.region = region_from_string(f[6]);
        out.push_back(st);
    }
    return out;
}

void write_trace_jsonl(std::ostream& os, const Trace& trace) {
    for (const TraceStep& st : trace.steps) {
        nlohmann::json j{{"t", st.t},
                         {"theta", to_int(st.theta)},
                         {"signal", to_int(st.signal)},
                         {"l_pub", st.l_pub},
                         {"L_post", st.L_post},
                         {"action", to_int(st.action)},
                         {"region", to_string(st.region)}};
        os << j.dump() << '\n';
    }
}

std::vector<TraceStep> read_trace_jsonl(std::istream& is) {
    std::vector<TraceStep> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw IoError("bad json line: " + line);
        TraceStep st;
        st.t = j.at("t").get<std::int64_t>();
        st.theta = j.at("theta").get<int>() == 1 ? Sign::up : Sign::down;
        st.signal = j.at("signal").get<int>() == 1 ? Sign::up : Sign::down;
        st.l_pub = j.at("l_pub").get<double>();
        st.L_post = j.at("L_post").get<double>();
        st.action = j.at("action").get<int>() == 1 ? Sign::up : Sign::down;
        st.region = region_from_string(j.at("region").get<std::string>());
        out.push_back(st);
    }
    return out;
}

void write_guides_csv(std::ostream& os, const DerivedConstants& c) {
    os << "label,value\n";
    os << "upper_cascade_boundary," << format_real(c.c_alpha) << '\n';
    os << "center," << format_real(0.0) << '\n';
    os << "lower_cascade_boundary," << format_real(-c.c_alpha) << '\n';
}

nlohmann::json guides_json(const DerivedConstants& c) {
    return {{"upper_cascade_boundary", c.c_alpha},
            {"center", 0.0},
            {"lower_cascade_boundary", -c.c_alpha}};
}

namespace {

nlohmann::json seed_json(const SeedReport& s) {
    return {{"seed", s.seed},
            {"action_changes", s.action_changes},
            {"state_changes", s.state_changes},
            {"q_a", s.q_a},
            {"q_theta", s.q_theta},
            {"margin", s.margin},
            {"fads_emerged", s.fads_emerged},
            {"mean_gap", s.mean_gap},
            {"gap_count", s.gap_count},
            {"restricted_fads", s.restricted_fads},
            {"consecutive_changes", s.consecutive_changes},
            {"zero_hits", s.zero_hits},
            {"max_cascade_run", s.max_cascade_run}};
}

SeedReport seed_from_json(const nlohmann::json& j) {
    SeedReport s;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.action_changes = j.at("action_changes").get<std::int64_t>();
    s.state_changes = j.at("state_changes").get<std::int64_t>();
    s.q_a = json_real(j.at("q_a"));
    s.q_theta = json_real(j.at("q_theta"));
    s.margin = json_real(j.at("margin"));
    s.fads_emerged = j.at("fads_emerged").get<bool>();
    s.mean_gap = json_real(j.at("mean_gap"));
    s.gap_count = j.at("gap_count").get<std::int64_t>();
    s.restricted_fads = j.at("restricted_fads").get<std::int64_t>();
    s.consecutive_changes = j.at("consecutive_changes").get<std::int64_t>();
    s.zero_hits = j.at("zero_hits").get<std::int64_t>();
    s.max_cascade_run = j.at("max_cascade_run").get<std::int64_t>();
    return s;
}

}  // namespace

nlohmann::json report_json(const FadReport& rep) {
    nlohmann::json per_seed = nlohmann::json::array();
    for (const SeedReport& s : rep.per_seed) per_seed.push_back(seed_json(s));
    return {{"alpha", rep.params.alpha},
            {"epsilon", rep.params.epsilon},
            {"horizon", rep.horizon},
            {"q_a", rep.q_a},
            {"q_theta", rep.q_theta},
            {"margin", rep.margin},
            {"fads_emerged", rep.fads_emerged},
            {"fads_in_every_seed", rep.fads_in_every_seed},
            {"mean_gap", rep.mean_gap},
            {"restricted_fads_mean", rep.restricted_fads_mean},
            {"consecutive_changes_mean", rep.consecutive_changes_mean},
            {"per_seed", per_seed}};
}

FadReport report_from_json(const nlohmann::json& j) {
    FadReport rep;
    rep.params.alpha = j.at("alpha").get<double>();
    rep.params.epsilon = j.at("epsilon").get<double>();
    rep.horizon = j.at("horizon").get<std::int64_t>();
    rep.q_a = json_real(j.at("q_a"));
    rep.q_theta = json_real(j.at("q_theta"));
    rep.margin = json_real(j.at("margin"));
    rep.fads_emerged = j.at("fads_emerged").get<bool>();
    rep.fads_in_every_seed = j.at("fads_in_every_seed").get<bool>();
    rep.mean_gap = json_real(j.at("mean_gap"));
    rep.restricted_fads_mean = json_real(j.at("restricted_fads_mean"));
    rep.consecutive_changes_mean = json_real(j.at("consecutive_changes_mean"));
    for (const auto& js : j.at("per_seed")) rep.per_seed.push_back(seed_from_json(js));
    return rep;
}

void write_report_csv_header(std::ostream& os) { os << kReportHeader << '\n'; }

void write_report_csv_rows(std::ostream& os, const FadReport& rep) {
    for (const SeedReport& s : rep.per_seed) {
        os << format_real(rep.params.alpha) << ',' << format_real(rep.params.epsilon)
           << ',' << rep.horizon << ',' << s.seed << ',' << format_real(s.q_a) << ','
           << format_real(s.q_theta) << ',' << format_real(s.margin) << ','
           << format_real(seed_ratio(s)) << ',' << (s.fads_emerged ? 1 : 0) << ','
           << s.action_changes << ',' << s.state_changes << ',' << s.restricted_fads
           << ',' << s.consecutive_changes << ',' << format_real(s.mean_gap) << ','
           << s.gap_count << ',' << s.zero_hits << ',' << s.max_cascade_run << '\n';
    }
}

std::vector<ReportCsvRow> read_report_csv(std::istream& is) {
    expect_header(is, kReportHeader);
    std::vector<ReportCsvRow> out;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 17) throw IoError("report row needs 17 fields: " + line);
        ReportCsvRow r{};
        r.alpha = parse_real(f[0]);
        r.epsilon = parse_real(f[1]);
        r.horizon = parse_int(f[2]);
        r.seed.seed = static_cast<std::uint64_t>(parse_int(f[3]));
        r.seed.q_a = parse_real(f[4]);
        r.seed.q_theta = parse_real(f[5]);
        r.seed.margin = parse_real(f[6]);
        r.ratio = parse_real(f[7]);
        r.seed.fads_emerged = parse_int(f[8]) != 0;
        r.seed.action_changes = parse_int(f[9]);
        r.seed.state_changes = parse_int(f[10]);
        r.seed.restricted_fads = parse_int(f[11]);
        r.seed.consecutive_changes = parse_int(f[12]);
        r.seed.mean_gap = parse_real(f[13]);
        r.seed.gap_count = parse_int(f[14]);
        r.seed.zero_hits = parse_int(f[15]);
        r.seed.max_cascade_run = parse_int(f[16]);
        out.push_back(r);
    }
    return out;
}

void write_bounds_csv(std::ostream& os, std::span<const BoundsRow> rows) {
    os << kBoundsHeader << '\n';
    for (const BoundsRow& r : rows) {
        os << format_real(r.alpha) << ',' << format_real(r.epsilon) << ','
           << format_real(r.cascade_cap) << ',' << format_real(r.mean_gap_bound)
           << ',' << format_real(r.inv_epsilon) << ',' << r.max_cascade_len << ','
           << format_real(r.interval_low) << ',' << format_real(r.interval_high)
           << ',' << (r.pass ? 1 : 0) << '\n';
    }
}

std::vector<BoundsRow> read_bounds_csv(std::istream& is) {
    expect_header(is, kBoundsHeader);
    std::vector<BoundsRow> out;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 9) throw IoError("bounds row needs 9 fields: " + line);
        BoundsRow r;
        r.alpha = parse_real(f[0]);
        r.epsilon = parse_real(f[1]);
        r.cascade_cap = parse_real(f[2]);
        r.mean_gap_bound = parse_real(f[3]);
        r.inv_epsilon = parse_real(f[4]);
        r.max_cascade_len = parse_int(f[5]);
        r.interval_low = parse_real(f[6]);
        r.interval_high = parse_real(f[7]);
        r.pass = parse_int(f[8]) != 0;
        out.push_back(r);
    }
    return out;
}

void write_oracle_csv_header(std::ostream& os) { os << kOracleHeader << '\n'; }

void write_oracle_csv_row(std::ostream& os, double l0, const OracleResult& r) {
    os << format_real(l0) << ',' << r.depth << ',' << format_real(r.value_low)
       << ',' << format_real(r.value_high) << ',' << format_real(r.mass_unresolved)
       << ',' << (r.low_confidence ? 1 : 0) << '\n';
}

}  // namespace fads
