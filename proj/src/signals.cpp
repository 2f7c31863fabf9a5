#include "fraclms/signals.hpp"

#include "fraclms/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fraclms {

FirSystem::FirSystem(std::vector<double> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) throw ConfigError("plant", "FIR system needs at least one coefficient");
    for (double a : coeffs) {
        if (!std::isfinite(a)) throw ConfigError("plant", "FIR coefficients must be finite");
    }
}

FirSystem FirSystem::reference_plant() { return FirSystem({0.9, 0.3, -0.1}); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double NoiseSource::uniform_open0() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double NoiseSource::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    const double theta = 2.0 * std::numbers::pi * uniform_open0();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double NoiseSource::sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

std::vector<double> gen_bpsk(std::size_t length, std::uint64_t seed) {
    if (length == 0) throw ConfigError("len", "BPSK sequence length must be at least 1");
    NoiseSource src(seed);
    std::vector<double> out(length);
    for (double& s : out) s = src.sign();
    return out;
}

std::vector<double> fir_filter(const FirSystem& sys, std::span<const double> x) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t t = 0; t < x.size(); ++t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < sys.coeffs.size() && i <= t; ++i) acc += sys.coeffs[i] * x[t - i];
        y[t] = acc;
    }
    return y;
}

double signal_power(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (double s : x) acc += s * s;
    return acc / static_cast<double>(x.size());
}

NoisySignal add_awgn(std::span<const double> clean, double snr_db, std::uint64_t seed) {
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
        throw DomainError("SNR must be a number or +inf");
    }
    if (snr_db == kNoiselessSnr) return {std::vector<double>(clean.begin(), clean.end()), 0.0};
    const double power = signal_power(clean);
    if (!(power > 0.0) || !std::isfinite(power)) {
        throw DomainError("SNR is undefined for a signal with zero power");
    }
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    NoiseSource src(seed);
    NoisySignal out{std::vector<double>(clean.size()), sigma};
    for (std::size_t t = 0; t < clean.size(); ++t) out.noisy[t] = clean[t] + sigma * src.gaussian();
    return out;
}

void fill_regressor(std::span<const double> x, std::size_t t, std::span<double> out) {
    if (t >= x.size()) {
        throw std::out_of_range("regressor index " + std::to_string(t) + " outside sequence of length " +
                                std::to_string(x.size()));
    }
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = k <= t ? x[t - k] : 0.0;
}

std::vector<double> make_regressor(std::span<const double> x, std::size_t t, std::size_t num_taps) {
    std::vector<double> out(num_taps);
    fill_regressor(x, t, out);
    return out;
}

SignalFrame make_frame(const FirSystem& sys, std::size_t length, double snr_db, std::uint64_t seed) {
    SignalFrame frame;
    frame.seed = seed;
    frame.x = gen_bpsk(length, derive_seed(seed, 0));
    frame.clean = fir_filter(sys, frame.x);
    NoisySignal n = add_awgn(frame.clean, snr_db, derive_seed(seed, 1));
    frame.noisy = std::move(n.noisy);
    if (n.sigma == 0.0) {
        frame.snr_db = kNoiselessSnr;
    } else {
        double noise_power = 0.0;
        for (std::size_t t = 0; t < length; ++t) {
            const double d = frame.noisy[t] - frame.clean[t];
            noise_power += d * d;
        }
        noise_power /= static_cast<double>(length);
        frame.snr_db = 10.0 * std::log10(signal_power(frame.clean) / noise_power);
    }
    return frame;
}

} // namespace fraclms
