#ifndef FRACLMS_FILTERS_HPP
#define FRACLMS_FILTERS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace fraclms {

enum class Algorithm : std::uint8_t { Lms, Flms, RvpFlms };

/// Short names used on the command line and in output files: "lms", "flms", "rvp".
std::string_view to_string(Algorithm algo) noexcept;
/// Accepts "lms", "flms", "rvp" and "rvp_flms". Throws ConfigError otherwise.
Algorithm parse_algorithm(std::string_view name);

/// Step sizes and power-schedule constants shared by the three filters.
/// Defaults are the reference experiment settings.
struct FilterConfig {
    std::size_t num_taps = 3;
    double mu = 1e-4;      ///< integer-order gradient step
    double mu_f = 1e-4;    ///< fractional-order gradient step
    double v0 = 0.5;       ///< initial (FLMS: fixed) fractional power
    double alpha = 0.9;    ///< forgetting factor of the error correlation average
    double beta = 0.99;    ///< decay of the fractional power
    double gamma_c = 0.9;  ///< gain on the squared error correlation
    double v_min = 0.5;
    double v_max = 1.0;

    /// Throws ConfigError naming the first field that violates its constraint.
    void validate() const;
};

struct FilterState {
    std::vector<double> w;
    double v = 0.5;       ///< current fractional power
    double p = 0.0;       ///< averaged correlation e(n) e(n-1)
    double e_prev = 0.0;
    std::size_t n = 0;    ///< completed adaptation steps
};

struct AdaptOutcome {
    double y;
    double e;
};

/// Zero weights, v = v0, empty error history.
FilterState reset(const FilterConfig& config);
void reset(FilterState& state, const FilterConfig& config);

/// Inner product of the tap weights with the regressor.
double predict(const FilterState& state, std::span<const double> x);

// Single-sample adaptation steps. Each throws ConfigError on a regressor length
// mismatch and DivergenceError (carrying state.n) if the update leaves a
// non-finite value behind; the state is not advanced in that case.

/// w <- w + mu e x
AdaptOutcome adapt_lms(FilterState& state, const FilterConfig& config, std::span<const double> x, double d);

/// w_k <- w_k + mu e x_k + mu_f e x_k sgn(w_k)|w_k|^(1-v0) / Gamma(2-v0)
AdaptOutcome adapt_flms(FilterState& state, const FilterConfig& config, std::span<const double> x, double d);

/// FLMS step with the current power v(n), then
///   p <- alpha p + (1-alpha) e e_prev
///   v <- clamp(beta v + gamma_c p^2, v_min, v_max)
AdaptOutcome adapt_rvp_flms(FilterState& state, const FilterConfig& config, std::span<const double> x, double d);

AdaptOutcome adapt(Algorithm algo, FilterState& state, const FilterConfig& config, std::span<const double> x,
                   double d);

/// Owns a config and state for one algorithm. Not thread-safe; one instance per run.
class AdaptiveFilter {
public:
    AdaptiveFilter(Algorithm algo, FilterConfig config);

    AdaptOutcome adapt(std::span<const double> x, double d) { return fraclms::adapt(algo_, state_, config_, x, d); }
    double predict(std::span<const double> x) const { return fraclms::predict(state_, x); }
    void reset() { fraclms::reset(state_, config_); }

    Algorithm algorithm() const noexcept { return algo_; }
    const FilterConfig& config() const noexcept { return config_; }
    const FilterState& state() const noexcept { return state_; }

private:
    Algorithm algo_;
    FilterConfig config_;
    FilterState state_;
};

} // namespace fraclms

#endif // FRACLMS_FILTERS_HPP
