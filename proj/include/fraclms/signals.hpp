#ifndef FRACLMS_SIGNALS_HPP
#define FRACLMS_SIGNALS_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace fraclms {

/// Finite impulse response of an unknown plant or channel: y(t) = sum_i coeffs[i] x(t-i).
struct FirSystem {
    std::vector<double> coeffs;

    explicit FirSystem(std::vector<double> c);

    /// 0.9, 0.3, -0.1: the three-zero plant used by both experiments.
    static FirSystem reference_plant();
};

/// Sentinel SNR that disables noise injection.
inline constexpr double kNoiselessSnr = std::numeric_limits<double>::infinity();

/// SplitMix64 finaliser; maps (seed, stream) to an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Gaussian and uniform draws over std::mt19937_64, whose output sequence is
/// fixed by the C++ standard. Conversions are done here rather than through
/// <random> distributions so that streams are identical on every toolchain.
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1], 53-bit resolution.
    double uniform_open0();
    /// Standard normal via Box-Muller; draws come in pairs.
    double gaussian();
    /// Fair coin as +1 / -1 from the top bit of one engine output.
    double sign();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::vector<double> gen_bpsk(std::size_t length, std::uint64_t seed);

/// Zero pre-history convolution; output length equals input length.
std::vector<double> fir_filter(const FirSystem& sys, std::span<const double> x);

struct NoisySignal {
    std::vector<double> noisy;
    double sigma;
};

/// Adds N(0, sigma^2) with sigma^2 = mean(clean^2) / 10^(snr_db/10).
/// snr_db == +inf returns the clean signal unchanged with sigma = 0.
NoisySignal add_awgn(std::span<const double> clean, double snr_db, std::uint64_t seed);

/// Mean of squares.
double signal_power(std::span<const double> x);

/// (x(t), x(t-1), ..., x(t-num_taps+1)), zeros before t = 0.
std::vector<double> make_regressor(std::span<const double> x, std::size_t t, std::size_t num_taps);
/// Same as above into caller storage; out.size() sets the tap count.
void fill_regressor(std::span<const double> x, std::size_t t, std::span<double> out);

struct SignalFrame {
    std::vector<double> x;      ///< transmitted BPSK symbols
    std::vector<double> clean;  ///< system output without noise
    std::vector<double> noisy;  ///< clean plus AWGN
    double snr_db;              ///< realised SNR (+inf when noiseless)
    std::uint64_t seed;
};

/// BPSK through `sys` plus AWGN, with independent symbol and noise streams derived from `seed`.
SignalFrame make_frame(const FirSystem& sys, std::size_t length, double snr_db, std::uint64_t seed);

} // namespace fraclms

#endif // FRACLMS_SIGNALS_HPP
