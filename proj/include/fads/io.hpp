#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fads/analytics.hpp"
#include "fads/oracle.hpp"
#include "fads/simulate.hpp"

// File formats.  Reals are written with 17 significant digits (CSV) or
// shortest-round-trip form (JSON), so every emitted file re-parses into
// bit-identical values.

namespace fads {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_real(double x);             // %.17g
double parse_real(std::string_view s);         // throws IoError on junk

std::string to_string(Region r);
Region region_from_string(std::string_view s);

// --- traces ---------------------------------------------------------------
// CSV header: t,theta,signal,l_pub,L_post,action,region
void write_trace_csv(std::ostream& os, const Trace& trace);
std::vector<TraceStep> read_trace_csv(std::istream& is);

// JSON-lines variant, identical fields.
void write_trace_jsonl(std::ostream& os, const Trace& trace);
std::vector<TraceStep> read_trace_jsonl(std::istream& is);

// Horizontal guide values (+-c_alpha and 0) accompanying a plotted trace.
void write_guides_csv(std::ostream& os, const DerivedConstants& c);
nlohmann::json guides_json(const DerivedConstants& c);

// --- fad reports ----------------------------------------------------------
nlohmann::json report_json(const FadReport& rep);
FadReport report_from_json(const nlohmann::json& j);

// CSV summary, one row per seed.
void write_report_csv_header(std::ostream& os);
void write_report_csv_rows(std::ostream& os, const FadReport& rep);

struct ReportCsvRow {
    double alpha;
    double epsilon;
    std::int64_t horizon;
    SeedReport seed;
    double ratio;  // q_a / q_theta
};
std::vector<ReportCsvRow> read_report_csv(std::istream& is);

// --- bound verification table ----------------------------------------------
// CSV header: alpha,epsilon,K,M,inv_eps,max_cascade_len,interval_low,interval_high,pass
void write_bounds_csv(std::ostream& os, std::span<const BoundsRow> rows);
std::vector<BoundsRow> read_bounds_csv(std::istream& is);

// --- oracle intervals -------------------------------------------------------
// CSV header: l0,depth,value_low,value_high,mass_unresolved,low_confidence
void write_oracle_csv_header(std::ostream& os);
void write_oracle_csv_row(std::ostream& os, double l0, const OracleResult& r);

}  // namespace fads
