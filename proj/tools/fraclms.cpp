#include "fraclms/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    const char* env_seed = std::getenv("FRACLMS_SEED");
    return fraclms::cli::run_main(args, std::cout, std::cerr,
                                  env_seed ? std::optional<std::string>(env_seed) : std::nullopt);
}
