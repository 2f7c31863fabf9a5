#include "fraclms/config.hpp"

#include "fraclms/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace fraclms::cli {

namespace {

// Every key accepted as a flag (--key) or as a config-file entry.
constexpr std::array<const char*, 17> kKeys = {
    "algo", "snr",  "taps",  "mu",    "mu-f", "v0",  "alpha",  "beta",    "gamma",
    "v-min", "v-max", "len", "ensemble", "seed", "delay", "threads", "out",
};

bool is_repeatable(std::string_view key) { return key == "algo" || key == "snr"; }

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw ConfigError(key, "expected a number, got '" + text + "'");
    }
    return value;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    }
    return value;
}

double to_finite(const std::string& key, const std::string& text) {
    const double v = to_double(key, text);
    if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
    return v;
}

struct Settings {
    std::vector<Algorithm> algos;
    std::vector<double> snrs;
    FilterConfig filter;
    std::size_t run_length = 500;
    std::size_t ensemble = 200;
    std::uint64_t seed = 1;
    std::size_t delay = 0;
    unsigned threads = 0;
    std::filesystem::path out = ".";
};

void apply(Settings& s, const std::string& key, const std::vector<std::string>& values) {
    const std::string& v = values.back();
    if (key == "algo") {
        s.algos.clear();
        for (const auto& a : values) s.algos.push_back(parse_algorithm(a));
    } else if (key == "snr") {
        s.snrs.clear();
        for (const auto& t : values) {
            const double snr = to_double("snr", t);
            if (std::isnan(snr) || snr == -std::numeric_limits<double>::infinity()) {
                throw ConfigError("snr", "must be a number or inf");
            }
            s.snrs.push_back(snr);
        }
    } else if (key == "taps") {
        s.filter.num_taps = to_unsigned(key, v);
    } else if (key == "mu") {
        s.filter.mu = to_finite(key, v);
    } else if (key == "mu-f") {
        s.filter.mu_f = to_finite(key, v);
    } else if (key == "v0") {
        s.filter.v0 = to_finite(key, v);
    } else if (key == "alpha") {
        s.filter.alpha = to_finite(key, v);
    } else if (key == "beta") {
        s.filter.beta = to_finite(key, v);
    } else if (key == "gamma") {
        s.filter.gamma_c = to_finite(key, v);
    } else if (key == "v-min") {
        s.filter.v_min = to_finite(key, v);
    } else if (key == "v-max") {
        s.filter.v_max = to_finite(key, v);
    } else if (key == "len") {
        s.run_length = to_unsigned(key, v);
    } else if (key == "ensemble") {
        s.ensemble = to_unsigned(key, v);
    } else if (key == "seed") {
        s.seed = to_unsigned(key, v);
    } else if (key == "delay") {
        s.delay = to_unsigned(key, v);
    } else if (key == "threads") {
        s.threads = static_cast<unsigned>(to_unsigned(key, v));
    } else if (key == "out") {
        s.out = v;
    } else {
        throw ConfigError(key, "unknown setting");
    }
}

void add_settings_options(CLI::App& app, std::map<std::string, CLI::Option*>& opts) {
    for (const char* key : kKeys) {
        std::string name = std::string("--") + key;
        CLI::Option* opt = app.add_option(name, "");
        opt->type_size(1);
        if (is_repeatable(key)) {
            opt->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->expected(1)->allow_extra_args(false);
        } else {
            opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        }
        opts[key] = opt;
    }
    opts["config"] = app.add_option("--config", "flat key = value settings file");
    opts["algo"]->description("lms | flms | rvp (repeatable)");
    opts["snr"]->description("SNR in dB, or inf for noiseless (repeatable)");
    opts["seed"]->description("master seed (fallback: FRACLMS_SEED)");
    opts["out"]->description("output directory");
    opts["len"]->description("samples per run");
    opts["ensemble"]->description("independent runs averaged into the curve");
    opts["delay"]->description("equalizer decision delay in samples");
}

} // namespace

std::string format_shortest(double value) {
    if (value == std::numeric_limits<double>::infinity()) return "inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_sig12(double value) {
    if (value == std::numeric_limits<double>::infinity()) return "inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

KeyValues parse_config_text(const std::string& text, const std::string& origin) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config", origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.starts_with("--")) key.erase(0, 2);
        if (std::find_if(kKeys.begin(), kKeys.end(), [&](const char* k) { return key == k; }) == kKeys.end()) {
            throw ConfigError(key, origin + ":" + std::to_string(lineno) + ": unknown setting");
        }
        if (value.empty()) throw ConfigError(key, origin + ":" + std::to_string(lineno) + ": missing value");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

Request parse_config(std::span<const std::string> args, std::optional<std::string> env_seed) {
    CLI::App app{"Fractional LMS adaptive filter experiments", "fraclms"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "run one experiment and write its learning curves");
    std::string run_kind;
    run->add_option("experiment", run_kind, "sysid | eq")->required();

    CLI::App* cmp = app.add_subcommand("compare", "run FLMS/RVP-FLMS sweeps and tabulate convergence");
    std::vector<std::string> cmp_kinds;
    cmp->add_option("experiments", cmp_kinds, "sysid and/or eq (default: both)");

    CLI::App* replay = app.add_subcommand("replay", "re-run the experiments recorded in a manifest");
    std::string manifest;
    std::string replay_out;
    replay->add_option("manifest", manifest, "manifest .json written by run or compare")->required();
    replay->add_option("--out", replay_out, "output directory (default: the manifest's directory)");

    std::map<std::string, CLI::Option*> run_opts;
    std::map<std::string, CLI::Option*> cmp_opts;
    add_settings_options(*run, run_opts);
    add_settings_options(*cmp, cmp_opts);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    Request req;
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        req.help = true;
        req.help_text = app.help();
        return req;
    } catch (const CLI::ParseError& e) {
        throw ConfigError("", e.what());
    }

    if (replay->parsed()) {
        req.command = Command::Replay;
        req.manifest = manifest;
        req.out_dir = replay_out.empty() ? std::filesystem::path(manifest).parent_path() : std::filesystem::path(replay_out);
        if (req.out_dir.empty()) req.out_dir = ".";
        return req;
    }

    const bool is_run = run->parsed();
    auto& opts = is_run ? run_opts : cmp_opts;
    req.command = is_run ? Command::Run : Command::Compare;

    Settings s;
    if (env_seed && !env_seed->empty()) s.seed = to_unsigned("FRACLMS_SEED", *env_seed);

    if (opts["config"]->count() > 0) {
        std::map<std::string, std::vector<std::string>> file_values;
        for (auto& [k, v] : read_config_file(opts["config"]->as<std::string>())) file_values[k].push_back(v);
        for (auto& [k, v] : file_values) apply(s, k, v);
    }
    for (const char* key : kKeys) {
        if (opts[key]->count() > 0) apply(s, key, opts[key]->results());
    }

    if (s.snrs.empty()) s.snrs = {10.0, 20.0};
    if (s.algos.empty()) {
        s.algos = is_run ? std::vector<Algorithm>{Algorithm::RvpFlms}
                         : std::vector<Algorithm>{Algorithm::Flms, Algorithm::RvpFlms};
    }
    std::vector<ExperimentKind> kinds;
    if (is_run) {
        kinds.push_back(parse_experiment_kind(run_kind));
    } else if (cmp_kinds.empty()) {
        kinds = {ExperimentKind::SysId, ExperimentKind::Equalization};
    } else {
        for (const auto& k : cmp_kinds) kinds.push_back(parse_experiment_kind(k));
    }

    req.out_dir = s.out;
    for (ExperimentKind kind : kinds) {
        for (double snr : s.snrs) {
            for (Algorithm algo : s.algos) {
                ExperimentSpec spec;
                spec.kind = kind;
                spec.snr_db = snr;
                spec.algorithm = algo;
                spec.filter = s.filter;
                spec.run_length = s.run_length;
                spec.ensemble_size = s.ensemble;
                spec.master_seed = s.seed;
                spec.decision_delay = s.delay;
                spec.threads = s.threads;
                spec.validate();
                req.specs.push_back(std::move(spec));
            }
        }
    }
    return req;
}

Request parse_config(std::span<const std::string> args) {
    const char* env = std::getenv("FRACLMS_SEED");
    return parse_config(args, env ? std::optional<std::string>(env) : std::nullopt);
}

} // namespace fraclms::cli
