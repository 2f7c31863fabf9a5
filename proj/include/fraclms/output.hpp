#ifndef FRACLMS_OUTPUT_HPP
#define FRACLMS_OUTPUT_HPP

#include "fraclms/experiments.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fraclms::cli {

inline constexpr const char* kToolName = "fraclms";
inline constexpr const char* kToolVersion = "1.0.0";

/// Everything needed to reproduce a set of output files.
struct RunManifest {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::string command;                      ///< "run" or "compare"
    std::vector<ExperimentSpec> specs;
    std::uint64_t master_seed = 0;
    std::vector<std::string> outputs;         ///< file names relative to the manifest
    double wall_time_s = 0.0;

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

bool same_spec(const ExperimentSpec& a, const ExperimentSpec& b);
bool operator==(const RunManifest& a, const RunManifest& b);

struct ComparisonRecord {
    ExperimentKind kind;
    double snr_db;
    Algorithm algorithm;
    double steady_state_db;
    std::size_t convergence_iter;
};

/// "<kind>_<algo>_snr<snr>" without extension.
std::string curve_stem(const ExperimentSpec& spec);

/// CSV text with header "iteration,mse_db"; iterations are 1-based.
std::string render_curve_csv(const LearningCurve& curve);
/// CSV text sorted by (experiment, snr_db, algorithm). Throws ConfigError when empty.
std::string render_comparison_csv(std::vector<ComparisonRecord> records);

/// Writes the curve CSV at `path` and its manifest next to it (same stem, .json).
void emit_curve(const LearningCurve& curve, const ExperimentSpec& spec, const std::filesystem::path& path);
/// Writes the comparison table and its manifest (same stem, .json).
void emit_comparison(const std::vector<ComparisonRecord>& records, const std::vector<ExperimentSpec>& specs,
                     const std::filesystem::path& path, double wall_time_s);

/// Writes `content` byte-for-byte, creating parent directories. Throws IoError naming the path.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

} // namespace fraclms::cli

#endif // FRACLMS_OUTPUT_HPP
