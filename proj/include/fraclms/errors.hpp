#ifndef FRACLMS_ERRORS_HPP
#define FRACLMS_ERRORS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fraclms {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid or inconsistent configuration; `field()` names the offending parameter.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A filter produced a non-finite weight, output or fractional power.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::size_t iteration, std::optional<std::size_t> run_index = std::nullopt)
        : std::runtime_error(describe(iteration, run_index)), iteration_(iteration), run_index_(run_index) {}

    std::size_t iteration() const noexcept { return iteration_; }
    std::optional<std::size_t> run_index() const noexcept { return run_index_; }

private:
    static std::string describe(std::size_t iteration, std::optional<std::size_t> run) {
        std::string msg = "filter diverged at iteration " + std::to_string(iteration);
        if (run) msg += " of ensemble run " + std::to_string(*run);
        return msg;
    }

    std::size_t iteration_;
    std::optional<std::size_t> run_index_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fraclms

#endif // FRACLMS_ERRORS_HPP
