#include "fraclms/cli.hpp"
#include "fraclms/config.hpp"
#include "fraclms/errors.hpp"
#include "fraclms/output.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

using namespace fraclms;
using namespace fraclms::cli;
namespace fs = std::filesystem;

namespace {

Request parse(std::vector<std::string> args, std::optional<std::string> env = std::nullopt) {
    return parse_config(args, std::move(env));
}

std::string field_error(std::vector<std::string> args) {
    try {
        parse(std::move(args));
    } catch (const ConfigError& e) {
        return e.field().empty() ? std::string("<usage>") : e.field();
    }
    return {};
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("fraclms_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int invoke(std::vector<std::string> args, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int rc = run_main(args, out, err, std::nullopt);
    if (err_text) *err_text = err.str();
    return rc;
}

} // namespace

TEST_CASE("defaults follow the published setup") {
    const Request r = parse({"run", "sysid"});
    CHECK(r.command == Command::Run);
    REQUIRE(r.specs.size() == 2);
    for (const auto& s : r.specs) {
        CHECK(s.kind == ExperimentKind::SysId);
        CHECK(s.algorithm == Algorithm::RvpFlms);
        CHECK(s.filter.mu == 1e-4);
        CHECK(s.filter.mu_f == 1e-4);
        CHECK(s.filter.num_taps == 3);
        CHECK(s.filter.v0 == 0.5);
        CHECK(s.filter.alpha == 0.9);
        CHECK(s.filter.beta == 0.99);
        CHECK(s.filter.gamma_c == 0.9);
        CHECK(s.filter.v_min == 0.5);
        CHECK(s.filter.v_max == 1.0);
        CHECK(s.run_length == 500);
        CHECK(s.ensemble_size == 200);
        CHECK(s.plant.coeffs == std::vector<double>{0.9, 0.3, -0.1});
    }
    CHECK(r.specs[0].snr_db == 10.0);
    CHECK(r.specs[1].snr_db == 20.0);
}

TEST_CASE("invalid values are rejected with the field named") {
    CHECK(field_error({"run", "sysid", "--alpha", "1.5"}) == "alpha");
    CHECK(field_error({"run", "sysid", "--beta", "0"}) == "beta");
    CHECK(field_error({"run", "sysid", "--v-min", "0.9", "--v-max", "0.6", "--v0", "0.7"}) == "v-max");
    CHECK(field_error({"run", "sysid", "--mu", "abc"}) == "mu");
    CHECK(field_error({"run", "sysid", "--algo", "nlms"}) == "algo");
    CHECK(field_error({"run", "sysid", "--len", "2"}) == "len");
    CHECK(field_error({"run", "banana"}) == "experiment");
    CHECK(field_error({"run", "sysid", "--bogus", "1"}) == "<usage>");
    CHECK(field_error({}) == "<usage>");
}

TEST_CASE("repeated flags expand into a cartesian product") {
    const Request r = parse({"run", "eq", "--snr", "10", "--snr", "20"});
    REQUIRE(r.specs.size() == 2);
    CHECK(r.specs[0].snr_db == 10.0);
    CHECK(r.specs[1].snr_db == 20.0);
    ExperimentSpec a = r.specs[0];
    a.snr_db = 20.0;
    CHECK(same_spec(a, r.specs[1]));

    const Request grid = parse({"compare", "sysid", "--snr", "10", "--snr", "20", "--algo", "flms", "--algo", "rvp"});
    CHECK(grid.command == Command::Compare);
    CHECK(grid.specs.size() == 4);

    const Request both = parse({"compare"});
    CHECK(both.specs.size() == 8);

    const Request noiseless = parse({"run", "sysid", "--snr", "inf"});
    REQUIRE(noiseless.specs.size() == 1);
    CHECK(noiseless.specs[0].snr_db == kNoiselessSnr);
}

TEST_CASE("config file, environment and flag precedence") {
    const fs::path dir = scratch("precedence");
    const fs::path cfg = dir / "exp.cfg";
    write_file(cfg, "# sweep\nmu = 0.002\nmu-f = 0.003\nseed = 11\nsnr = 5\nsnr = 15\nalgo = flms\n");

    const Request file_only = parse({"run", "sysid", "--config", cfg.string()}, "99");
    REQUIRE(file_only.specs.size() == 2);
    CHECK(file_only.specs[0].filter.mu == 0.002);
    CHECK(file_only.specs[0].filter.mu_f == 0.003);
    CHECK(file_only.specs[0].master_seed == 11);
    CHECK(file_only.specs[0].algorithm == Algorithm::Flms);
    CHECK(file_only.specs[1].snr_db == 15.0);

    const Request flags = parse({"run", "sysid", "--config", cfg.string(), "--mu", "0.004", "--seed", "3"}, "99");
    CHECK(flags.specs[0].filter.mu == 0.004);
    CHECK(flags.specs[0].filter.mu_f == 0.003);
    CHECK(flags.specs[0].master_seed == 3);

    CHECK(parse({"run", "sysid"}, "99").specs[0].master_seed == 99);
    CHECK(parse({"run", "sysid"}).specs[0].filter.mu == 1e-4);

    write_file(dir / "bad.cfg", "alpha = 2\n");
    CHECK(field_error({"run", "sysid", "--config", (dir / "bad.cfg").string()}) == "alpha");
    CHECK_THROWS_AS(parse_config_text("unknown = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("novalue\n"), ConfigError);
}

TEST_CASE("curve CSV format") {
    LearningCurve c = analyze_curve(std::vector<double>(500, -10.4412345678901234));
    const std::string csv = render_curve_csv(c);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 501);
    CHECK(csv.starts_with("iteration,mse_db\n1,-10.4412345679\n"));
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(format_sig12(-0.000123456789012345) == "-0.000123456789012");
}

TEST_CASE("manifest round-trips through JSON") {
    RunManifest m;
    m.command = "compare";
    ExperimentSpec a;
    a.snr_db = kNoiselessSnr;
    a.master_seed = 0xFFFFFFFFFFFFFFFFULL;
    a.filter.mu = 0.1 + 0.2;
    ExperimentSpec b;
    b.kind = ExperimentKind::Equalization;
    b.algorithm = Algorithm::Lms;
    b.plant = FirSystem({0.5, -0.25});
    b.decision_delay = 2;
    m.specs = {a, b};
    m.master_seed = a.master_seed;
    m.outputs = {"comparison.csv"};
    m.wall_time_s = 1.0 / 3.0;
    const RunManifest back = RunManifest::from_json(m.to_json());
    CHECK(back == m);
    CHECK(back.to_json() == m.to_json());
    CHECK_THROWS_AS(RunManifest::from_json("{}"), ConfigError);
}

TEST_CASE("comparison table is sorted and stable under permutation") {
    std::vector<ComparisonRecord> recs = {
        {ExperimentKind::SysId, 20.0, Algorithm::RvpFlms, -20.2, 50},
        {ExperimentKind::SysId, 10.0, Algorithm::RvpFlms, -10.44, 45},
        {ExperimentKind::SysId, 20.0, Algorithm::Flms, -20.17, 90},
        {ExperimentKind::SysId, 10.0, Algorithm::Flms, -10.43, 80},
    };
    const std::string table = render_comparison_csv(recs);
    CHECK(table ==
          "experiment,snr_db,algorithm,steady_state_db,convergence_iter\n"
          "sysid,10,flms,-10.43,80\n"
          "sysid,10,rvp,-10.44,45\n"
          "sysid,20,flms,-20.17,90\n"
          "sysid,20,rvp,-20.2,50\n");
    std::mt19937_64 rng(0);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(recs.begin(), recs.end(), rng);
        CHECK(render_comparison_csv(recs) == table);
    }
    CHECK_THROWS_AS(render_comparison_csv({}), ConfigError);
}

TEST_CASE("run writes CSV and manifest, repeatably") {
    const fs::path dir = scratch("run");
    const std::vector<std::string> base = {"run", "sysid", "--snr", "10", "--len", "500", "--ensemble", "4", "--seed", "2"};
    auto args = base;
    args.insert(args.end(), {"--out", (dir / "a").string()});
    REQUIRE(invoke(args) == kExitOk);
    args = base;
    args.insert(args.end(), {"--out", (dir / "b").string()});
    REQUIRE(invoke(args) == kExitOk);

    const std::string a = read_file(dir / "a" / "sysid_rvp_snr10.csv");
    CHECK(a == read_file(dir / "b" / "sysid_rvp_snr10.csv"));
    CHECK(std::count(a.begin(), a.end(), '\n') == 501);

    const RunManifest m = RunManifest::from_json(read_file(dir / "a" / "sysid_rvp_snr10.json"));
    CHECK(m.command == "run");
    CHECK(m.outputs == std::vector<std::string>{"sysid_rvp_snr10.csv"});
    REQUIRE(m.specs.size() == 1);
    CHECK(m.specs[0].ensemble_size == 4);
    CHECK(m.specs[0].master_seed == 2);

    // the manifest alone reproduces the data file
    REQUIRE(invoke({"replay", (dir / "a" / "sysid_rvp_snr10.json").string(), "--out", (dir / "c").string()}) ==
            kExitOk);
    CHECK(read_file(dir / "c" / "sysid_rvp_snr10.csv") == a);
}

TEST_CASE("compare writes a sorted table and replays it") {
    const fs::path dir = scratch("compare");
    REQUIRE(invoke({"compare", "sysid", "--snr", "10", "--snr", "20", "--len", "300", "--ensemble", "3", "--out",
                    dir.string()}) == kExitOk);
    const std::string table = read_file(dir / "comparison.csv");
    CHECK(std::count(table.begin(), table.end(), '\n') == 5);
    CHECK(table.find("sysid,10,flms,") != std::string::npos);
    CHECK(table.find("sysid,20,rvp,") != std::string::npos);
    CHECK(fs::exists(dir / "sysid_flms_snr10.csv"));
    CHECK(fs::exists(dir / "sysid_rvp_snr20.json"));

    REQUIRE(invoke({"replay", (dir / "comparison.json").string(), "--out", (dir / "again").string()}) == kExitOk);
    CHECK(read_file(dir / "again" / "comparison.csv") == table);
}

TEST_CASE("exit codes") {
    std::string err;
    CHECK(invoke({"run", "sysid", "--alpha", "1.5"}, &err) == kExitUsage);
    CHECK(err.find("alpha") != std::string::npos);
    CHECK(invoke({"frobnicate"}) == kExitUsage);

    const fs::path dir = scratch("codes");
    CHECK(invoke({"run", "sysid", "--mu", "50", "--len", "100", "--ensemble", "2", "--out", dir.string()}, &err) ==
          kExitDivergence);
    CHECK(err.find("iteration") != std::string::npos);

    write_file(dir / "blocker", "x");
    CHECK(invoke({"run", "sysid", "--len", "10", "--ensemble", "1", "--out", (dir / "blocker" / "sub").string()},
                 &err) == kExitIo);
    CHECK(err.find("blocker") != std::string::npos);

    CHECK(invoke({"--help"}) == kExitOk);
}

TEST_CASE("output matches the checked-in golden file") {
    const fs::path dir = scratch("golden");
    REQUIRE(invoke({"run", "sysid", "--algo", "rvp", "--snr", "10", "--len", "200", "--ensemble", "4", "--seed", "7",
                    "--out", dir.string()}) == kExitOk);
    CHECK(read_file(dir / "sysid_rvp_snr10.csv") == read_file(fs::path(FRACLMS_GOLDEN_DIR) / "sysid_rvp_snr10.csv"));
}
