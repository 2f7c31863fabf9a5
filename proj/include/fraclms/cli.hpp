#ifndef FRACLMS_CLI_HPP
#define FRACLMS_CLI_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

namespace fraclms::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitIo = 4;

/// Entry point behind the `fraclms` executable. `args` excludes the program name.
int run_main(std::span<const std::string> args, std::ostream& out, std::ostream& err,
             std::optional<std::string> env_seed);

} // namespace fraclms::cli

#endif // FRACLMS_CLI_HPP
