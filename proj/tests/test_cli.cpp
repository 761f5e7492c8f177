#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fads/io.hpp"
#include "fads/model.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

const fs::path kWork = [] {
    fs::path dir = fs::temp_directory_path() / "fadsim_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}();

CmdResult run(const std::string& args) {
    const fs::path out = kWork / "stdout.txt";
    const fs::path err = kWork / "stderr.txt";
    const std::string cmd = std::string(FADSIM_BIN) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    return {WEXITSTATUS(raw), slurp(out), slurp(err)};
}

}  // namespace

TEST_CASE("simulate: summary line and report file") {
    const fs::path rep = kWork / "rep.json";
    const CmdResult r = run("simulate --alpha 0.8 --eps 0.05 --n 100000 --seed 7 "
                            "--format json --out " + rep.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("Q_a=") != std::string::npos);
    CHECK(r.out.find("Q_theta=") != std::string::npos);
    CHECK(r.out.find("fads=true") != std::string::npos);

    const nlohmann::json j = nlohmann::json::parse(slurp(rep));
    CHECK(j.at("alpha").get<double>() == 0.8);
    CHECK(j.at("fads_emerged").get<bool>());
    CHECK(j.at("q_a").get<double>() > j.at("q_theta").get<double>());
    CHECK(j.at("per_seed").size() == 1);
    // schema fields the other tools rely on
    const fads::FadReport parsed = fads::report_from_json(j);
    CHECK(parsed.horizon == 100000);
}

TEST_CASE("simulate: validation failures exit 2 and name the bound") {
    const CmdResult r = run("simulate --alpha 0.4 --eps 0.05 --n 1000 --seed 1");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("alpha") != std::string::npos);

    CHECK(run("simulate --alpha 0.8 --eps 0.2 --n 1000 --seed 1").exit_code == 2);
    CHECK(run("simulate --alpha 0.8 --eps 0.05 --n 1 --seed 1").exit_code == 2);
    CHECK(run("simulate --no-such-flag").exit_code == 2);
    CHECK(run("").exit_code == 2);  // a subcommand is required
}

TEST_CASE("simulate: io failures exit 1") {
    const CmdResult r = run("simulate --alpha 0.8 --eps 0.05 --n 1000 --seed 1 "
                            "--out /nonexistent-dir/x.csv");
    CHECK(r.exit_code == 1);
}

TEST_CASE("simulate: multiple seeds pool into one report") {
    const fs::path rep = kWork / "rep8.json";
    const CmdResult r = run("simulate --alpha 0.8 --eps 0.05 --n 20000 "
                            "--seeds 1,2,3,4 --format json --out " + rep.string());
    CHECK(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(rep));
    CHECK(j.at("per_seed").size() == 4);

    const CmdResult r2 = run("simulate --alpha 0.8 --eps 0.05 --n 20000 "
                             "--seed 1 --num-seeds 4 --format json --out " +
                             rep.string());
    CHECK(r2.exit_code == 0);
    const nlohmann::json j2 = nlohmann::json::parse(slurp(rep));
    CHECK(j2.at("per_seed")[3].at("seed").get<std::uint64_t>() == 4);
}

TEST_CASE("trace: emits the path and the guide companion") {
    const fs::path tr = kWork / "trace.csv";
    const CmdResult r = run("trace --alpha 0.8 --eps 0.05 --n 100 --seed 3 --out " +
                            tr.string());
    CHECK(r.exit_code == 0);

    std::ifstream is(tr);
    const auto steps = fads::read_trace_csv(is);
    REQUIRE(steps.size() == 100);
    const fads::ModelParams p{0.8, 0.05};
    const double sup =
        fads::learning_step_up(fads::derive_constants(p).c_alpha, p);
    for (const auto& st : steps) CHECK(std::abs(st.l_pub) <= sup);

    const std::string guides = slurp(kWork / "trace.guides.csv");
    CHECK(guides.find("1.386294") != std::string::npos);
    CHECK(guides.find("-1.386294") != std::string::npos);

    CHECK(run("trace --alpha 0.8 --eps 0.05 --n 100 --seed 3").exit_code == 2);
    CHECK(run("trace --alpha 0.8 --eps 0.05 --n 0 --seed 3 --out " +
              tr.string()).exit_code == 2);
}

TEST_CASE("trace: jsonl format round-trips") {
    const fs::path tr = kWork / "trace.jsonl";
    const CmdResult r = run("trace --alpha 0.8 --eps 0.05 --n 50 --seed 4 "
                            "--format json --out " + tr.string());
    CHECK(r.exit_code == 0);
    std::ifstream is(tr);
    CHECK(fads::read_trace_jsonl(is).size() == 50);
    const nlohmann::json g = nlohmann::json::parse(slurp(kWork / "trace.guides.jsonl"));
    CHECK(g.contains("upper_cascade_boundary"));
}

TEST_CASE("sweep: deterministic rows over an explicit grid") {
    const fs::path out = kWork / "sweep.csv";
    const std::string cmd = "sweep --alpha-grid 0.7,0.8 --eps-grid 0.02,0.05 "
                            "--n 20000 --seeds 1,2 --out " + out.string();
    CHECK(run(cmd).exit_code == 0);
    const std::string first = slurp(out);
    CHECK(run(cmd).exit_code == 0);
    CHECK(slurp(out) == first);  // byte-identical on repeat

    std::ifstream is(out);
    const auto rows = fads::read_report_csv(is);
    REQUIRE(rows.size() == 8);  // 2 alphas x 2 eps x 2 seeds, grid-major order
    CHECK(rows[0].alpha == 0.7);
    CHECK(rows[0].epsilon == 0.02);
    CHECK(rows[0].seed.seed == 1);
    CHECK(rows[1].seed.seed == 2);
    CHECK(rows[2].epsilon == 0.05);
    CHECK(rows[7].alpha == 0.8);
    for (const auto& row : rows) CHECK(row.seed.fads_emerged);
}

TEST_CASE("verify: reference point passes, exit 0") {
    const fs::path out = kWork / "verify.csv";
    const CmdResult r = run("verify --alpha-grid 0.8 --eps-grid 0.05,0.01 --out " +
                            out.string());
    CHECK(r.exit_code == 0);
    std::ifstream is(out);
    const auto rows = fads::read_bounds_csv(is);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.pass);
        CHECK(row.mean_gap_bound < row.inv_epsilon);
        CHECK(row.interval_high < row.mean_gap_bound);
    }
    CHECK(rows[1].max_cascade_len == 19);  // floor(K(0.8, 0.01))

    // invalid grid point -> validation, not a bound failure
    CHECK(run("verify --alpha-grid 0.8 --eps-grid 0.16").exit_code == 2);
}

TEST_CASE("verify: the known failing corner exits 3") {
    // conditional worst-case gap exceeds M at alpha=0.95, eps=0.5*a*(1-a)
    const CmdResult r = run("verify --alpha-grid 0.95 --eps-grid 0.02375");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("FAIL") != std::string::npos);
}

TEST_CASE("oracle: intervals below the closed-form bound") {
    const fs::path out = kWork / "oracle.csv";
    const CmdResult r = run("oracle --alpha 0.8 --eps 0.01 --out " + out.string());
    CHECK(r.exit_code == 0);
    std::ifstream is(out);
    std::string line;
    std::getline(is, line);
    CHECK(line == "l0,depth,value_low,value_high,mass_unresolved,low_confidence");
    int rows = 0;
    while (std::getline(is, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        std::stringstream row(line.substr(comma + 1));
        std::string depth, lo, hi;
        std::getline(row, depth, ',');
        std::getline(row, lo, ',');
        std::getline(row, hi, ',');
        CHECK(fads::parse_real(hi) < 60.7);
        CHECK(fads::parse_real(lo) >= 1.0);
        ++rows;
    }
    CHECK(rows > 10);

    const CmdResult single = run("oracle --alpha 0.8 --eps 0.05 --l0 0.5 --depth 60");
    CHECK(single.exit_code == 0);
    CHECK(single.out.find("\n0.5,60,") != std::string::npos);
}

TEST_CASE("config file supplies defaults, flags win") {
    const fs::path cfg = kWork / "cfg.json";
    {
        std::ofstream os(cfg);
        os << R"({"alpha": 0.8, "eps": 0.05, "n": 5000, "seed": 11})";
    }
    const fs::path rep = kWork / "cfgrep.json";
    const CmdResult r = run("simulate --config " + cfg.string() +
                            " --format json --out " + rep.string());
    CHECK(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(rep));
    CHECK(j.at("horizon").get<std::int64_t>() == 5000);
    CHECK(j.at("per_seed")[0].at("seed").get<std::uint64_t>() == 11);

    const CmdResult r2 = run("simulate --config " + cfg.string() +
                             " --n 6000 --format json --out " + rep.string());
    CHECK(r2.exit_code == 0);
    CHECK(nlohmann::json::parse(slurp(rep)).at("horizon").get<std::int64_t>() ==
          6000);

    CHECK(run("simulate --config /no/such/file.json").exit_code == 1);
}
