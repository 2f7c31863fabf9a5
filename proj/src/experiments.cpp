#include "fraclms/experiments.hpp"

#include "fraclms/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace fraclms {

std::string_view to_string(ExperimentKind kind) noexcept {
    return kind == ExperimentKind::SysId ? "sysid" : "eq";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
    if (name == "sysid") return ExperimentKind::SysId;
    if (name == "eq" || name == "equalization") return ExperimentKind::Equalization;
    throw ConfigError("experiment", "unknown experiment '" + std::string(name) + "' (expected sysid or eq)");
}

void ExperimentSpec::validate() const {
    filter.validate();
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
        throw ConfigError("snr", "must be a number or inf");
    }
    if (ensemble_size == 0) throw ConfigError("ensemble", "must be at least 1");
    if (run_length < filter.num_taps) throw ConfigError("len", "must be at least the number of taps");
    if (decision_delay >= run_length) throw ConfigError("delay", "must be shorter than the run length");
}

LearningCurve analyze_curve(std::vector<double> mse_db) {
    if (mse_db.empty()) throw ConfigError("len", "cannot analyse an empty learning curve");
    LearningCurve curve;
    curve.mse_db = std::move(mse_db);
    const auto& db = curve.mse_db;
    const std::size_t n = db.size();

    const auto tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(kSteadyStateFraction * static_cast<double>(n))));
    curve.steady_state_db =
        std::accumulate(db.end() - static_cast<std::ptrdiff_t>(tail), db.end(), 0.0) / static_cast<double>(tail);

    // Trailing moving average; the window is shorter for the first few samples.
    // Scan backwards for the last sample outside the band.
    curve.convergence_iter = 1;
    for (std::size_t i = n; i-- > 0;) {
        const std::size_t first = i + 1 >= kConvergenceWindow ? i + 1 - kConvergenceWindow : 0;
        double acc = 0.0;
        for (std::size_t j = first; j <= i; ++j) acc += db[j];
        const double smoothed = acc / static_cast<double>(i - first + 1);
        if (std::fabs(smoothed - curve.steady_state_db) > kConvergenceBandDb) {
            curve.convergence_iter = std::min(i + 2, n);
            break;
        }
    }
    return curve;
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index) noexcept {
    return derive_seed(master_seed, static_cast<std::uint64_t>(run_index));
}

RunTrace run_member(const ExperimentSpec& spec, std::size_t run_index) {
    const SignalFrame frame = make_frame(spec.plant, spec.run_length, spec.snr_db, run_seed(spec.master_seed, run_index));

    // sysid: BPSK in, noisy plant output as reference.
    // eq: noisy channel output in, (delayed) BPSK as reference.
    const bool sysid = spec.kind == ExperimentKind::SysId;
    const std::vector<double>& input = sysid ? frame.x : frame.noisy;

    FilterState state = reset(spec.filter);
    std::vector<double> regressor(spec.filter.num_taps);
    RunTrace trace;
    trace.squared_error.resize(spec.run_length);
    for (std::size_t t = 0; t < spec.run_length; ++t) {
        double desired;
        if (sysid) {
            desired = frame.noisy[t];
        } else {
            desired = t >= spec.decision_delay ? frame.x[t - spec.decision_delay] : 0.0;
        }
        fill_regressor(input, t, regressor);
        try {
            const AdaptOutcome out = adapt(spec.algorithm, state, spec.filter, regressor, desired);
            trace.squared_error[t] = out.e * out.e;
        } catch (const DivergenceError& err) {
            throw DivergenceError(err.iteration(), run_index);
        }
    }
    trace.final_weights = std::move(state.w);
    return trace;
}

namespace {

// Members are summed in fixed-size blocks and the block sums are combined in
// block order, so the floating-point result is independent of the thread count.
constexpr std::size_t kBlockSize = 8;

struct BlockSum {
    std::vector<double> squared_error;
    std::vector<double> weights;
};

} // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, std::span<const std::size_t> run_order) {
    spec.validate();
    const auto started = std::chrono::steady_clock::now();

    std::vector<std::size_t> order(run_order.begin(), run_order.end());
    if (order.empty()) {
        order.resize(spec.ensemble_size);
        std::iota(order.begin(), order.end(), std::size_t{0});
    } else {
        std::vector<std::size_t> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] != i || sorted.size() != spec.ensemble_size) {
                throw ConfigError("ensemble", "run order must be a permutation of the ensemble indices");
            }
        }
    }

    const std::size_t blocks = (spec.ensemble_size + kBlockSize - 1) / kBlockSize;
    std::vector<BlockSum> sums(blocks);
    std::atomic<std::size_t> next_block{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;
    std::size_t failure_run = std::numeric_limits<std::size_t>::max();

    auto worker = [&] {
        for (;;) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= blocks) return;
            BlockSum& sum = sums[b];
            sum.squared_error.assign(spec.run_length, 0.0);
            sum.weights.assign(spec.filter.num_taps, 0.0);
            const std::size_t end = std::min(order.size(), (b + 1) * kBlockSize);
            for (std::size_t i = b * kBlockSize; i < end; ++i) {
                try {
                    const RunTrace trace = run_member(spec, order[i]);
                    for (std::size_t t = 0; t < spec.run_length; ++t) sum.squared_error[t] += trace.squared_error[t];
                    for (std::size_t k = 0; k < trace.final_weights.size(); ++k) sum.weights[k] += trace.final_weights[k];
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    // report the lowest failing run so the diagnostic is reproducible
                    if (order[i] < failure_run) {
                        failure_run = order[i];
                        failure = std::current_exception();
                    }
                    break;
                }
            }
        }
    };

    unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, blocks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> mse(spec.run_length, 0.0);
    std::vector<double> weights(spec.filter.num_taps, 0.0);
    for (const BlockSum& sum : sums) {
        for (std::size_t t = 0; t < mse.size(); ++t) mse[t] += sum.squared_error[t];
        for (std::size_t k = 0; k < weights.size(); ++k) weights[k] += sum.weights[k];
    }
    const double scale = 1.0 / static_cast<double>(spec.ensemble_size);
    for (double& m : mse) {
        const double mean = m * scale;
        m = mean > 0.0 ? std::max(kMseFloorDb, 10.0 * std::log10(mean)) : kMseFloorDb;
    }
    for (double& w : weights) w *= scale;

    ExperimentResult result;
    result.curve = analyze_curve(std::move(mse));
    result.final_weights = std::move(weights);

    double err2 = 0.0;
    const std::size_t span = std::max(result.final_weights.size(), spec.plant.coeffs.size());
    for (std::size_t k = 0; k < span; ++k) {
        const double w = k < result.final_weights.size() ? result.final_weights[k] : 0.0;
        const double a = k < spec.plant.coeffs.size() ? spec.plant.coeffs[k] : 0.0;
        err2 += (w - a) * (w - a);
    }
    result.weight_error = std::sqrt(err2);
    result.curve.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

SysIdResult run_sysid(const ExperimentSpec& spec) {
    if (spec.kind != ExperimentKind::SysId) throw ConfigError("experiment", "run_sysid needs a sysid spec");
    ExperimentResult r = run_experiment(spec);
    return {std::move(r.curve), std::move(r.final_weights), r.weight_error};
}

LearningCurve run_equalization(const ExperimentSpec& spec) {
    if (spec.kind != ExperimentKind::Equalization) {
        throw ConfigError("experiment", "run_equalization needs an eq spec");
    }
    return run_experiment(spec).curve;
}

CurveComparison compare(const LearningCurve& a, const LearningCurve& b) {
    if (a.mse_db.size() != b.mse_db.size()) {
        throw ConfigError("len", "cannot compare curves of length " + std::to_string(a.mse_db.size()) + " and " +
                                     std::to_string(b.mse_db.size()));
    }
    CurveComparison c;
    c.convergence_iter_a = a.convergence_iter;
    c.convergence_iter_b = b.convergence_iter;
    c.steady_state_db_a = a.steady_state_db;
    c.steady_state_db_b = b.steady_state_db;
    c.convergence_diff = static_cast<long long>(a.convergence_iter) - static_cast<long long>(b.convergence_iter);
    c.steady_state_diff_db = a.steady_state_db - b.steady_state_db;
    return c;
}

} // namespace fraclms
