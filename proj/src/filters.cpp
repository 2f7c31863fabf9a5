#include "fraclms/filters.hpp"

#include "fraclms/errors.hpp"
#include "fraclms/fracmath.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fraclms {

std::string_view to_string(Algorithm algo) noexcept {
    switch (algo) {
    case Algorithm::Lms: return "lms";
    case Algorithm::Flms: return "flms";
    case Algorithm::RvpFlms: return "rvp";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "lms") return Algorithm::Lms;
    if (name == "flms") return Algorithm::Flms;
    if (name == "rvp" || name == "rvp_flms" || name == "rvp-flms") return Algorithm::RvpFlms;
    throw ConfigError("algo", "unknown algorithm '" + std::string(name) + "' (expected lms, flms or rvp)");
}

void FilterConfig::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (num_taps == 0) throw ConfigError("taps", "must be at least 1");
    if (!finite(mu) || mu <= 0.0) throw ConfigError("mu", "must be positive");
    if (!finite(mu_f) || mu_f < 0.0) throw ConfigError("mu-f", "must be non-negative");
    if (!finite(alpha) || alpha <= 0.0 || alpha >= 1.0) throw ConfigError("alpha", "must satisfy 0 < alpha < 1");
    if (!finite(beta) || beta <= 0.0 || beta >= 1.0) throw ConfigError("beta", "must satisfy 0 < beta < 1");
    if (!finite(gamma_c) || gamma_c <= 0.0) throw ConfigError("gamma", "must be positive");
    if (!finite(v_min) || v_min <= 0.0) throw ConfigError("v-min", "must be positive");
    if (!finite(v_max) || v_max > 1.0) throw ConfigError("v-max", "must not exceed 1");
    if (v_max <= v_min) throw ConfigError("v-max", "must be greater than v-min");
    if (!finite(v0) || v0 < v_min || v0 > v_max) throw ConfigError("v0", "must lie in [v-min, v-max]");
}

FilterState reset(const FilterConfig& config) {
    FilterState state;
    reset(state, config);
    return state;
}

void reset(FilterState& state, const FilterConfig& config) {
    state.w.assign(config.num_taps, 0.0);
    state.v = config.v0;
    state.p = 0.0;
    state.e_prev = 0.0;
    state.n = 0;
}

namespace {

void check_length(const FilterState& state, std::span<const double> x) {
    if (x.size() != state.w.size()) {
        throw ConfigError("taps", "regressor length " + std::to_string(x.size()) + " does not match " +
                                      std::to_string(state.w.size()) + " taps");
    }
}

double dot(std::span<const double> w, std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * x[k];
    return acc;
}

AdaptOutcome error_of(const FilterState& state, std::span<const double> x, double d) {
    check_length(state, x);
    const double y = dot(state.w, x);
    const double e = d - y;
    if (!std::isfinite(y) || !std::isfinite(e)) throw DivergenceError(state.n);
    return {y, e};
}

// Fractional gradient step shared by FLMS and RVP-FLMS. Writes into `next`
// so that a divergent step leaves the caller's weights untouched.
void fractional_step(std::span<const double> w, std::span<double> next, const FilterConfig& config,
                     std::span<const double> x, double e, double v, std::size_t iteration) {
    // v sits on a clamp bound (or is fixed) most of the time
    thread_local double cached_v = -1.0;
    thread_local double cached_gamma = 1.0;
    if (v != cached_v) {
        cached_gamma = gamma(2.0 - v);
        cached_v = v;
    }
    const double exponent = 1.0 - v;
    const double frac_gain = config.mu_f / cached_gamma;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double ex = e * x[k];
        next[k] = w[k] + config.mu * ex + frac_gain * ex * signed_frac_pow(w[k], exponent);
        if (!std::isfinite(next[k])) throw DivergenceError(iteration);
    }
}

constexpr std::size_t kStackTaps = 64;

template <typename Fn>
void with_scratch(std::size_t taps, Fn&& fn) {
    if (taps <= kStackTaps) {
        double buf[kStackTaps];
        fn(std::span<double>(buf, taps));
    } else {
        std::vector<double> buf(taps);
        fn(std::span<double>(buf));
    }
}

} // namespace

double predict(const FilterState& state, std::span<const double> x) {
    check_length(state, x);
    return dot(state.w, x);
}

AdaptOutcome adapt_lms(FilterState& state, const FilterConfig& config, std::span<const double> x, double d) {
    const AdaptOutcome out = error_of(state, x, d);
    with_scratch(state.w.size(), [&](std::span<double> next) {
        for (std::size_t k = 0; k < next.size(); ++k) {
            next[k] = state.w[k] + config.mu * out.e * x[k];
            if (!std::isfinite(next[k])) throw DivergenceError(state.n);
        }
        std::copy(next.begin(), next.end(), state.w.begin());
    });
    state.e_prev = out.e;
    ++state.n;
    return out;
}

AdaptOutcome adapt_flms(FilterState& state, const FilterConfig& config, std::span<const double> x, double d) {
    const AdaptOutcome out = error_of(state, x, d);
    with_scratch(state.w.size(), [&](std::span<double> next) {
        fractional_step(state.w, next, config, x, out.e, config.v0, state.n);
        std::copy(next.begin(), next.end(), state.w.begin());
    });
    state.e_prev = out.e;
    ++state.n;
    return out;
}

AdaptOutcome adapt_rvp_flms(FilterState& state, const FilterConfig& config, std::span<const double> x, double d) {
    const AdaptOutcome out = error_of(state, x, d);
    const double p = config.alpha * state.p + (1.0 - config.alpha) * out.e * state.e_prev;
    const double v = std::clamp(config.beta * state.v + config.gamma_c * p * p, config.v_min, config.v_max);
    if (!std::isfinite(p) || !std::isfinite(v)) throw DivergenceError(state.n);
    with_scratch(state.w.size(), [&](std::span<double> next) {
        // weights move with v(n); the schedule advances afterwards
        fractional_step(state.w, next, config, x, out.e, state.v, state.n);
        std::copy(next.begin(), next.end(), state.w.begin());
    });
    state.p = p;
    state.v = v;
    state.e_prev = out.e;
    ++state.n;
    return out;
}

AdaptOutcome adapt(Algorithm algo, FilterState& state, const FilterConfig& config, std::span<const double> x,
                   double d) {
    switch (algo) {
    case Algorithm::Lms: return adapt_lms(state, config, x, d);
    case Algorithm::Flms: return adapt_flms(state, config, x, d);
    case Algorithm::RvpFlms: return adapt_rvp_flms(state, config, x, d);
    }
    throw ConfigError("algo", "unknown algorithm");
}

AdaptiveFilter::AdaptiveFilter(Algorithm algo, FilterConfig config) : algo_(algo), config_(config) {
    config_.validate();
    fraclms::reset(state_, config_);
}

} // namespace fraclms
