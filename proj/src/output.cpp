#include "fraclms/output.hpp"

#include "fraclms/config.hpp"
#include "fraclms/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

namespace fraclms::cli {

using nlohmann::json;

namespace {

// JSON has no infinity; the noiseless sentinel is stored as the string "inf".
json snr_to_json(double snr) {
    if (snr == kNoiselessSnr) return "inf";
    return snr;
}

double snr_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return kNoiselessSnr;
        throw ConfigError("snr", "unrecognised SNR '" + j.get<std::string>() + "' in manifest");
    }
    return j.get<double>();
}

json spec_to_json(const ExperimentSpec& s) {
    return json{
        {"experiment", std::string(to_string(s.kind))},
        {"plant", s.plant.coeffs},
        {"snr_db", snr_to_json(s.snr_db)},
        {"run_length", s.run_length},
        {"ensemble_size", s.ensemble_size},
        {"algorithm", std::string(to_string(s.algorithm))},
        {"taps", s.filter.num_taps},
        {"mu", s.filter.mu},
        {"mu_f", s.filter.mu_f},
        {"v0", s.filter.v0},
        {"alpha", s.filter.alpha},
        {"beta", s.filter.beta},
        {"gamma", s.filter.gamma_c},
        {"v_min", s.filter.v_min},
        {"v_max", s.filter.v_max},
        {"master_seed", s.master_seed},
        {"decision_delay", s.decision_delay},
        {"threads", s.threads},
    };
}

ExperimentSpec spec_from_json(const json& j) {
    ExperimentSpec s;
    s.kind = parse_experiment_kind(j.at("experiment").get<std::string>());
    s.plant = FirSystem(j.at("plant").get<std::vector<double>>());
    s.snr_db = snr_from_json(j.at("snr_db"));
    s.run_length = j.at("run_length").get<std::size_t>();
    s.ensemble_size = j.at("ensemble_size").get<std::size_t>();
    s.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    s.filter.num_taps = j.at("taps").get<std::size_t>();
    s.filter.mu = j.at("mu").get<double>();
    s.filter.mu_f = j.at("mu_f").get<double>();
    s.filter.v0 = j.at("v0").get<double>();
    s.filter.alpha = j.at("alpha").get<double>();
    s.filter.beta = j.at("beta").get<double>();
    s.filter.gamma_c = j.at("gamma").get<double>();
    s.filter.v_min = j.at("v_min").get<double>();
    s.filter.v_max = j.at("v_max").get<double>();
    s.master_seed = j.at("master_seed").get<std::uint64_t>();
    s.decision_delay = j.at("decision_delay").get<std::size_t>();
    s.threads = j.at("threads").get<unsigned>();
    return s;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& data_path) {
    std::filesystem::path p = data_path;
    p.replace_extension(".json");
    return p;
}

} // namespace

std::string RunManifest::to_json() const {
    json j;
    j["tool"] = tool;
    j["version"] = version;
    j["command"] = command;
    j["master_seed"] = master_seed;
    j["specs"] = json::array();
    for (const auto& s : specs) j["specs"].push_back(spec_to_json(s));
    j["outputs"] = outputs;
    j["wall_time_s"] = wall_time_s;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        RunManifest m;
        m.tool = j.at("tool").get<std::string>();
        m.version = j.at("version").get<std::string>();
        m.command = j.at("command").get<std::string>();
        m.master_seed = j.at("master_seed").get<std::uint64_t>();
        for (const auto& s : j.at("specs")) m.specs.push_back(spec_from_json(s));
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        m.wall_time_s = j.at("wall_time_s").get<double>();
        return m;
    } catch (const json::exception& e) {
        throw ConfigError("manifest", e.what());
    }
}

bool same_spec(const ExperimentSpec& a, const ExperimentSpec& b) {
    const auto& fa = a.filter;
    const auto& fb = b.filter;
    return a.kind == b.kind && a.plant.coeffs == b.plant.coeffs && a.snr_db == b.snr_db &&
           a.run_length == b.run_length && a.ensemble_size == b.ensemble_size && a.algorithm == b.algorithm &&
           a.master_seed == b.master_seed && a.decision_delay == b.decision_delay && a.threads == b.threads &&
           fa.num_taps == fb.num_taps && fa.mu == fb.mu && fa.mu_f == fb.mu_f && fa.v0 == fb.v0 &&
           fa.alpha == fb.alpha && fa.beta == fb.beta && fa.gamma_c == fb.gamma_c && fa.v_min == fb.v_min &&
           fa.v_max == fb.v_max;
}

bool operator==(const RunManifest& a, const RunManifest& b) {
    return a.tool == b.tool && a.version == b.version && a.command == b.command && a.master_seed == b.master_seed &&
           a.outputs == b.outputs && a.wall_time_s == b.wall_time_s && a.specs.size() == b.specs.size() &&
           std::equal(a.specs.begin(), a.specs.end(), b.specs.begin(), same_spec);
}

std::string curve_stem(const ExperimentSpec& spec) {
    return std::string(to_string(spec.kind)) + "_" + std::string(to_string(spec.algorithm)) + "_snr" +
           format_shortest(spec.snr_db);
}

std::string render_curve_csv(const LearningCurve& curve) {
    std::string out = "iteration,mse_db\n";
    out.reserve(out.size() + curve.mse_db.size() * 24);
    for (std::size_t i = 0; i < curve.mse_db.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_sig12(curve.mse_db[i]);
        out += '\n';
    }
    return out;
}

std::string render_comparison_csv(std::vector<ComparisonRecord> records) {
    if (records.empty()) throw ConfigError("compare", "comparison table needs at least one record");
    auto key = [](const ComparisonRecord& r) {
        return std::make_tuple(to_string(r.kind), r.snr_db, to_string(r.algorithm));
    };
    std::stable_sort(records.begin(), records.end(),
                     [&](const ComparisonRecord& a, const ComparisonRecord& b) { return key(a) < key(b); });
    std::string out = "experiment,snr_db,algorithm,steady_state_db,convergence_iter\n";
    for (const auto& r : records) {
        out += std::string(to_string(r.kind)) + ',' + format_sig12(r.snr_db) + ',' + std::string(to_string(r.algorithm)) +
               ',' + format_sig12(r.steady_state_db) + ',' + std::to_string(r.convergence_iter) + '\n';
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory for " + path.string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit_curve(const LearningCurve& curve, const ExperimentSpec& spec, const std::filesystem::path& path) {
    if (curve.mse_db.empty()) throw ConfigError("len", "refusing to write an empty learning curve");
    write_file(path, render_curve_csv(curve));
    RunManifest m;
    m.command = "run";
    m.specs = {spec};
    m.master_seed = spec.master_seed;
    m.outputs = {path.filename().string()};
    m.wall_time_s = curve.wall_time_s;
    write_file(manifest_path_for(path), m.to_json());
}

void emit_comparison(const std::vector<ComparisonRecord>& records, const std::vector<ExperimentSpec>& specs,
                     const std::filesystem::path& path, double wall_time_s) {
    write_file(path, render_comparison_csv(records));
    RunManifest m;
    m.command = "compare";
    m.specs = specs;
    m.master_seed = specs.empty() ? 0 : specs.front().master_seed;
    m.outputs = {path.filename().string()};
    m.wall_time_s = wall_time_s;
    write_file(manifest_path_for(path), m.to_json());
}

} // namespace fraclms::cli
