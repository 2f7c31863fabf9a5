#ifndef FRACLMS_EXPERIMENTS_HPP
#define FRACLMS_EXPERIMENTS_HPP

#include "fraclms/filters.hpp"
#include "fraclms/signals.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace fraclms {

enum class ExperimentKind : std::uint8_t { SysId, Equalization };

/// "sysid" / "eq"
std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::SysId;
    FirSystem plant = FirSystem::reference_plant();
    double snr_db = 10.0;
    std::size_t run_length = 500;
    std::size_t ensemble_size = 200;
    Algorithm algorithm = Algorithm::RvpFlms;
    FilterConfig filter;
    std::uint64_t master_seed = 1;
    /// Equalizer training lag: the desired sample at time t is the symbol sent at t - delay.
    std::size_t decision_delay = 0;
    /// Worker threads for the ensemble; 0 picks the hardware concurrency. Results do not depend on it.
    unsigned threads = 0;

    void validate() const;
};

/// Per-iteration MSE values below this are reported at this level instead of -inf.
inline constexpr double kMseFloorDb = -300.0;
/// Width of the moving average used for convergence detection.
inline constexpr std::size_t kConvergenceWindow = 5;
/// Band around the steady state that the smoothed curve must stay inside.
inline constexpr double kConvergenceBandDb = 1.0;
/// Fraction of the curve, taken from the end, averaged into the steady state.
inline constexpr double kSteadyStateFraction = 0.2;

struct LearningCurve {
    std::vector<double> mse_db;   ///< ensemble-averaged e^2 per iteration, in dB
    double steady_state_db = 0.0;
    /// 1-based iteration from which the smoothed curve stays within the band.
    std::size_t convergence_iter = 0;
    double wall_time_s = 0.0;     ///< informational only
};

/// Fills steady_state_db and convergence_iter from mse_db (which must be non-empty).
LearningCurve analyze_curve(std::vector<double> mse_db);

struct SysIdResult {
    LearningCurve curve;
    std::vector<double> final_weights;  ///< ensemble mean of the last tap weights
    double weight_error = 0.0;          ///< Euclidean distance to the true plant
};

/// Result shape shared by both experiments; weight_error is only meaningful for sysid.
struct ExperimentResult {
    LearningCurve curve;
    std::vector<double> final_weights;
    double weight_error = 0.0;
};

/// Learning curve of one ensemble. Throws DivergenceError carrying the run index.
/// run_order, when non-empty, must be a permutation of [0, ensemble_size) and only
/// changes the order in which members are accumulated.
ExperimentResult run_experiment(const ExperimentSpec& spec, std::span<const std::size_t> run_order = {});

SysIdResult run_sysid(const ExperimentSpec& spec);
LearningCurve run_equalization(const ExperimentSpec& spec);

/// Single ensemble member: the squared error per iteration and the final weights.
struct RunTrace {
    std::vector<double> squared_error;
    std::vector<double> final_weights;
};
RunTrace run_member(const ExperimentSpec& spec, std::size_t run_index);

/// Seed of ensemble member `run_index`.
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index) noexcept;

struct CurveComparison {
    std::size_t convergence_iter_a = 0;
    std::size_t convergence_iter_b = 0;
    double steady_state_db_a = 0.0;
    double steady_state_db_b = 0.0;
    /// a minus b
    long long convergence_diff = 0;
    double steady_state_diff_db = 0.0;
};

CurveComparison compare(const LearningCurve& a, const LearningCurve& b);

} // namespace fraclms

#endif // FRACLMS_EXPERIMENTS_HPP
