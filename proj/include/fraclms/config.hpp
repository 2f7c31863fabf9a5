#ifndef FRACLMS_CONFIG_HPP
#define FRACLMS_CONFIG_HPP

#include "fraclms/experiments.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fraclms::cli {

enum class Command { Run, Compare, Replay };

/// Fully resolved command line. Every spec has passed validate().
struct Request {
    Command command = Command::Run;
    std::vector<ExperimentSpec> specs;
    std::filesystem::path out_dir = ".";
    std::filesystem::path manifest;  ///< replay only
    bool help = false;
    std::string help_text;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Flat "key = value" lines; '#' starts a comment; keys may repeat.
KeyValues parse_config_text(const std::string& text, const std::string& origin = "config");
KeyValues read_config_file(const std::filesystem::path& path);

/// Parses the tokens after the program name. Precedence is flags, then the
/// --config file, then `env_seed` (for the seed only), then built-in defaults.
/// Repeated --snr / --algo values expand into the cartesian product of specs.
/// Throws ConfigError naming the offending field.
Request parse_config(std::span<const std::string> args, std::optional<std::string> env_seed);

/// Same, with the seed fallback read from FRACLMS_SEED.
Request parse_config(std::span<const std::string> args);

/// Shortest round-tripping text for a double; "inf" for +infinity.
std::string format_shortest(double value);
/// 12 significant digits, locale independent.
std::string format_sig12(double value);

} // namespace fraclms::cli

#endif // FRACLMS_CONFIG_HPP
