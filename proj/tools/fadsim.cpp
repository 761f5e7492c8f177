// Command-line front end: run simulations, parameter sweeps, bound
// verification, and emit traces, reports and plot-ready data files.
//
// Exit codes are a stable contract: 0 ok, 1 I/O error, 2 validation error,
// 3 bound verification failed.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fads/analytics.hpp"
#include "fads/io.hpp"
#include "fads/model.hpp"
#include "fads/oracle.hpp"
#include "fads/parallel.hpp"
#include "fads/simulate.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitVerifyFailed = 3;

struct Options {
    double alpha = 0.8;
    double eps = 0.05;
    std::int64_t horizon = 100000;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> seeds;
    std::int64_t num_seeds = 0;
    std::string out;
    std::string format = "csv";
    std::string config;
    std::int64_t depth = 0;  // 0 = default_gap_depth
    double l0 = 0.0;
    bool l0_given = false;
    std::vector<double> alpha_grid;
    std::vector<double> eps_grid;
    unsigned jobs = 0;
};

const std::vector<double> kDefaultAlphaGrid = {0.55, 0.6, 0.7, 0.8, 0.9, 0.95};
const std::vector<double> kDefaultEpsFractions = {0.5, 0.1, 0.01, 0.001};

void add_common(CLI::App* sub, Options& o, bool with_params = true) {
    if (with_params) {
        sub->add_option("--alpha", o.alpha, "signal precision, in (1/2, 1)");
        sub->add_option("--eps", o.eps,
                        "state-switch probability, in (0, alpha*(1-alpha))");
    }
    sub->add_option("--out", o.out, "output file (stdout when omitted)");
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", o.config, "JSON file with defaults for these flags");
}

void add_seeds(CLI::App* sub, Options& o) {
    sub->add_option("--seed", o.seed, "base RNG seed");
    sub->add_option("--seeds", o.seeds, "explicit seed list (overrides --seed)")
        ->delimiter(',');
    sub->add_option("--num-seeds", o.num_seeds,
                    "run seeds seed..seed+num-1 (ignored when --seeds given)");
}

// JSON config supplies defaults; explicit flags win.
void apply_config(const CLI::App* sub, Options& o) {
    if (o.config.empty()) return;
    std::ifstream is(o.config);
    if (!is) throw fads::IoError("cannot open config: " + o.config);
    json cfg = json::parse(is, nullptr, false);
    if (cfg.is_discarded())
        throw fads::ValidationError("config is not valid JSON: " + o.config);

    const auto unset = [&](const char* flag) {
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() == 0;
    };
    if (unset("--alpha") && cfg.contains("alpha")) o.alpha = cfg["alpha"];
    if (unset("--eps") && cfg.contains("eps")) o.eps = cfg["eps"];
    if (unset("--n") && cfg.contains("n")) o.horizon = cfg["n"];
    if (unset("--seed") && cfg.contains("seed")) o.seed = cfg["seed"];
    if (unset("--seeds") && cfg.contains("seeds"))
        o.seeds = cfg["seeds"].get<std::vector<std::uint64_t>>();
    if (unset("--num-seeds") && cfg.contains("num_seeds"))
        o.num_seeds = cfg["num_seeds"];
    if (unset("--out") && cfg.contains("out")) o.out = cfg["out"];
    if (unset("--format") && cfg.contains("format")) o.format = cfg["format"];
    if (unset("--depth") && cfg.contains("depth")) o.depth = cfg["depth"];
    if (unset("--alpha-grid") && cfg.contains("alpha_grid"))
        o.alpha_grid = cfg["alpha_grid"].get<std::vector<double>>();
    if (unset("--eps-grid") && cfg.contains("eps_grid"))
        o.eps_grid = cfg["eps_grid"].get<std::vector<double>>();
    if (unset("--jobs") && cfg.contains("jobs")) o.jobs = cfg["jobs"];
}

std::vector<std::uint64_t> resolve_seeds(const Options& o) {
    if (!o.seeds.empty()) return o.seeds;
    if (o.num_seeds > 0) {
        std::vector<std::uint64_t> out;
        out.reserve(static_cast<std::size_t>(o.num_seeds));
        for (std::int64_t i = 0; i < o.num_seeds; ++i)
            out.push_back(o.seed + static_cast<std::uint64_t>(i));
        return out;
    }
    return {o.seed};
}

// Writes through a stringstream so a failed open never leaves a partial file.
void write_file(const std::string& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw fads::IoError("cannot open for writing: " + path);
    os << contents;
    if (!os) throw fads::IoError("write failed: " + path);
}

void emit(const std::string& out, const std::string& contents) {
    if (out.empty())
        std::cout << contents;
    else
        write_file(out, contents);
}

std::string with_suffix(const std::string& path, const std::string& tag) {
    const std::filesystem::path p(path);
    std::filesystem::path q = p;
    q.replace_extension();
    return q.string() + tag + p.extension().string();
}

std::vector<fads::ModelParams> resolve_grid(const Options& o) {
    const std::vector<double>& alphas =
        o.alpha_grid.empty() ? kDefaultAlphaGrid : o.alpha_grid;
    std::vector<fads::ModelParams> grid;
    for (double a : alphas) {
        if (o.eps_grid.empty()) {
            for (double frac : kDefaultEpsFractions)
                grid.push_back({a, frac * a * (1.0 - a)});
        } else {
            for (double e : o.eps_grid) grid.push_back({a, e});
        }
    }
    for (const fads::ModelParams& p : grid) fads::validate(p);
    return grid;
}

fads::FadReport run_report(const fads::ModelParams& params, std::int64_t horizon,
                           const std::vector<std::uint64_t>& seeds,
                           unsigned jobs) {
    std::vector<fads::SeedReport> per_seed(seeds.size());
    fads::parallel_for_index(
        seeds.size(),
        [&](std::size_t i) {
            const fads::Trace trace =
                fads::simulate({params, horizon, seeds[i]});
            per_seed[i] = fads::seed_report(trace);
        },
        jobs);
    return fads::aggregate_seed_reports(params, horizon, std::move(per_seed));
}

int run_simulate(const Options& o) {
    const fads::ModelParams params{o.alpha, o.eps};
    fads::validate(params);
    const fads::FadReport rep =
        run_report(params, o.horizon, resolve_seeds(o), o.jobs);

    std::ostringstream body;
    if (o.format == "json") {
        body << fads::report_json(rep).dump(2) << '\n';
    } else {
        fads::write_report_csv_header(body);
        fads::write_report_csv_rows(body, rep);
    }
    emit(o.out, body.str());
    char line[160];
    std::snprintf(line, sizeof line, "Q_a=%.6g Q_theta=%.6g fads=%s\n", rep.q_a,
                  rep.q_theta, rep.fads_emerged ? "true" : "false");
    std::cout << line;
    return kExitOk;
}

int run_trace(const Options& o) {
    const fads::ModelParams params{o.alpha, o.eps};
    const fads::DerivedConstants c = fads::derive_constants(params);
    if (o.out.empty())
        throw fads::ValidationError("trace requires --out (two files are written)");
    const fads::Trace trace = fads::simulate({params, o.horizon, o.seed});

    std::ostringstream body, guides;
    if (o.format == "json") {
        fads::write_trace_jsonl(body, trace);
        guides << fads::guides_json(c).dump(2) << '\n';
    } else {
        fads::write_trace_csv(body, trace);
        fads::write_guides_csv(guides, c);
    }
    write_file(o.out, body.str());
    write_file(with_suffix(o.out, ".guides"), guides.str());
    return kExitOk;
}

int run_sweep(const Options& o) {
    const std::vector<fads::ModelParams> grid = resolve_grid(o);
    const std::vector<std::uint64_t> seeds = resolve_seeds(o);
    if (seeds.empty()) throw fads::ValidationError("sweep needs at least one seed");

    const std::size_t jobs_n = grid.size() * seeds.size();
    std::vector<fads::SeedReport> cells(jobs_n);
    fads::parallel_for_index(
        jobs_n,
        [&](std::size_t i) {
            const fads::ModelParams& p = grid[i / seeds.size()];
            const std::uint64_t seed = seeds[i % seeds.size()];
            cells[i] = fads::seed_report(fads::simulate({p, o.horizon, seed}));
        },
        o.jobs);

    std::vector<fads::FadReport> reports;
    reports.reserve(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::vector<fads::SeedReport> block(
            cells.begin() + static_cast<std::ptrdiff_t>(g * seeds.size()),
            cells.begin() + static_cast<std::ptrdiff_t>((g + 1) * seeds.size()));
        reports.push_back(
            fads::aggregate_seed_reports(grid[g], o.horizon, std::move(block)));
    }

    std::ostringstream body;
    if (o.format == "json") {
        json arr = json::array();
        for (const fads::FadReport& r : reports) arr.push_back(fads::report_json(r));
        body << arr.dump(2) << '\n';
    } else {
        fads::write_report_csv_header(body);
        for (const fads::FadReport& r : reports) fads::write_report_csv_rows(body, r);
    }
    emit(o.out, body.str());
    return kExitOk;
}

int run_verify(const Options& o) {
    const std::vector<fads::ModelParams> grid = resolve_grid(o);
    std::vector<fads::BoundsRow> rows(grid.size());
    fads::parallel_for_index(
        grid.size(),
        [&](std::size_t i) { rows[i] = fads::verify_bounds_point(grid[i]); },
        o.jobs);

    std::ostringstream body;
    if (o.format == "json") {
        json arr = json::array();
        for (const fads::BoundsRow& r : rows) {
            arr.push_back({{"alpha", r.alpha},
                           {"epsilon", r.epsilon},
                           {"K", r.cascade_cap},
                           {"M", r.mean_gap_bound},
                           {"inv_eps", r.inv_epsilon},
                           {"max_cascade_len", r.max_cascade_len},
                           {"interval_low", r.interval_low},
                           {"interval_high", r.interval_high},
                           {"worst_l0", r.worst_l0},
                           {"depth_used", r.depth_used},
                           {"pass", r.pass}});
        }
        body << arr.dump(2) << '\n';
    } else {
        fads::write_bounds_csv(body, rows);
    }
    emit(o.out, body.str());

    for (const fads::BoundsRow& r : rows) {
        if (!r.pass) {
            std::cerr << "verify: FAIL at alpha=" << r.alpha
                      << " eps=" << r.epsilon << " (interval ["
                      << r.interval_low << ", " << r.interval_high
                      << "] vs M=" << r.mean_gap_bound << ", max cascade "
                      << r.max_cascade_len << " vs floor(K)="
                      << static_cast<std::int64_t>(std::floor(r.cascade_cap))
                      << ")\n";
        }
    }
    const bool all_pass =
        std::all_of(rows.begin(), rows.end(),
                    [](const fads::BoundsRow& r) { return r.pass; });
    return all_pass ? kExitOk : kExitVerifyFailed;
}

int run_oracle(const Options& o) {
    const fads::ModelParams params{o.alpha, o.eps};
    const fads::DerivedConstants c = fads::derive_constants(params);
    const std::int64_t depth = o.depth > 0 ? o.depth : fads::default_gap_depth(c);

    std::vector<double> starts;
    if (o.l0_given)
        starts.push_back(o.l0);
    else
        starts = fads::post_switch_values(params);

    std::vector<fads::OracleResult> results(starts.size());
    fads::parallel_for_index(
        starts.size(),
        [&](std::size_t i) {
            results[i] = fads::expected_gap_interval(starts[i], params, depth);
        },
        o.jobs);

    std::ostringstream body;
    if (o.format == "json") {
        json arr = json::array();
        for (std::size_t i = 0; i < starts.size(); ++i) {
            arr.push_back({{"l0", starts[i]},
                           {"depth", results[i].depth},
                           {"value_low", results[i].value_low},
                           {"value_high", results[i].value_high},
                           {"mass_unresolved", results[i].mass_unresolved},
                           {"low_confidence", results[i].low_confidence}});
        }
        body << arr.dump(2) << '\n';
    } else {
        fads::write_oracle_csv_header(body);
        for (std::size_t i = 0; i < starts.size(); ++i)
            fads::write_oracle_csv_row(body, starts[i], results[i]);
    }
    emit(o.out, body.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential social-learning simulator with a changing binary state"};
    app.require_subcommand(1);

    Options o;
    CLI::App* sim = app.add_subcommand(
        "simulate", "simulate seeds and report fad statistics");
    add_common(sim, o);
    add_seeds(sim, o);
    sim->add_option("--n", o.horizon, "periods per run");
    sim->add_option("--jobs", o.jobs, "worker threads (0 = hardware)");

    CLI::App* trace = app.add_subcommand(
        "trace", "emit one trace plus plot guide values");
    add_common(trace, o);
    trace->add_option("--n", o.horizon, "periods");
    trace->add_option("--seed", o.seed, "RNG seed");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "fad reports over a parameter grid");
    add_common(sweep, o, /*with_params=*/false);
    add_seeds(sweep, o);
    sweep->add_option("--n", o.horizon, "periods per run");
    sweep->add_option("--alpha-grid", o.alpha_grid, "alpha values")->delimiter(',');
    sweep->add_option("--eps-grid", o.eps_grid,
                      "epsilon values (default: {0.5,0.1,0.01,0.001}*alpha*(1-alpha))")
        ->delimiter(',');
    sweep->add_option("--jobs", o.jobs, "worker threads (0 = hardware)");

    CLI::App* verify = app.add_subcommand(
        "verify", "check the closed-form bounds against enumeration");
    add_common(verify, o, /*with_params=*/false);
    verify->add_option("--alpha-grid", o.alpha_grid, "alpha values")->delimiter(',');
    verify->add_option("--eps-grid", o.eps_grid, "epsilon values")->delimiter(',');
    verify->add_option("--jobs", o.jobs, "worker threads (0 = hardware)");

    CLI::App* oracle = app.add_subcommand(
        "oracle", "certified expected-gap intervals by enumeration");
    add_common(oracle, o);
    oracle->add_option("--depth", o.depth, "enumeration depth (0 = default)");
    oracle->add_option("--l0", o.l0, "single starting llr instead of the sampled set")
        ->trigger_on_parse()
        ->each([&](const std::string&) { o.l0_given = true; });
    oracle->add_option("--jobs", o.jobs, "worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        apply_config(sub, o);
        if (sub == sim) return run_simulate(o);
        if (sub == trace) return run_trace(o);
        if (sub == sweep) return run_sweep(o);
        if (sub == verify) return run_verify(o);
        return run_oracle(o);
    } catch (const fads::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const fads::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}
