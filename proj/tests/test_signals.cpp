#include "fraclms/errors.hpp"
#include "fraclms/signals.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace fraclms;

TEST_CASE("BPSK symbols are deterministic, balanced and in {-1, +1}") {
    const auto a = gen_bpsk(500, 42);
    CHECK(a.size() == 500);
    CHECK(a == gen_bpsk(500, 42));
    CHECK(a != gen_bpsk(500, 43));
    for (double s : a) CHECK((s == 1.0 || s == -1.0));
    const auto big = gen_bpsk(100000, 7);
    const double mean = std::accumulate(big.begin(), big.end(), 0.0) / static_cast<double>(big.size());
    CHECK(std::fabs(mean) <= 0.02);
    CHECK_THROWS_AS(gen_bpsk(0, 1), ConfigError);
}

TEST_CASE("FIR filter examples") {
    const std::vector<double> x{0.3, -1.2, 4.0, 2.5};
    CHECK(fir_filter(FirSystem({1.0}), x) == x);

    const FirSystem plant = FirSystem::reference_plant();
    const std::vector<double> ones(10, 1.0);
    const auto y = fir_filter(plant, ones);
    CHECK(y[0] == doctest::Approx(0.9));
    CHECK(y[1] == doctest::Approx(1.2));
    for (std::size_t t = 2; t < y.size(); ++t) CHECK(y[t] == doctest::Approx(1.1).epsilon(1e-15));

    std::vector<double> impulse(6, 0.0);
    impulse[0] = 1.0;
    CHECK(fir_filter(plant, impulse) == std::vector<double>{0.9, 0.3, -0.1, 0, 0, 0});

    CHECK_THROWS_AS(FirSystem({}), ConfigError);
    CHECK_THROWS_AS(FirSystem({1.0, NAN}), ConfigError);
}

TEST_CASE("FIR filter is linear") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    const FirSystem sys({0.4, -0.7, 0.2, 0.05});
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(64), z(64), mix(64);
        const double a = g(rng), b = g(rng);
        for (std::size_t t = 0; t < 64; ++t) {
            x[t] = g(rng);
            z[t] = g(rng);
            mix[t] = a * x[t] + b * z[t];
        }
        const auto fx = fir_filter(sys, x), fz = fir_filter(sys, z), fm = fir_filter(sys, mix);
        for (std::size_t t = 0; t < 64; ++t) CHECK(std::fabs(fm[t] - (a * fx[t] + b * fz[t])) <= 1e-12);
    }
}

TEST_CASE("AWGN sigma follows the SNR definition") {
    const std::vector<double> unit(1000, 1.0);  // power exactly 1
    CHECK(add_awgn(unit, 10.0, 1).sigma * add_awgn(unit, 10.0, 1).sigma == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(add_awgn(unit, 20.0, 1).sigma * add_awgn(unit, 20.0, 1).sigma == doctest::Approx(0.01).epsilon(1e-12));

    const auto off = add_awgn(unit, kNoiselessSnr, 1);
    CHECK(off.sigma == 0.0);
    CHECK(off.noisy == unit);

    CHECK_THROWS_AS(add_awgn(std::vector<double>(10, 0.0), 10.0, 1), DomainError);
    CHECK_THROWS_AS(add_awgn(unit, NAN, 1), DomainError);
    CHECK(add_awgn(unit, 10.0, 5).noisy == add_awgn(unit, 10.0, 5).noisy);
}

TEST_CASE("realised SNR is within 0.5 dB of the target") {
    const FirSystem plant = FirSystem::reference_plant();
    for (double snr : {0.0, 10.0, 20.0, 30.0}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const SignalFrame f = make_frame(plant, 10000, snr, seed);
            CHECK(std::fabs(f.snr_db - snr) <= 0.5);
        }
        const SignalFrame shortf = make_frame(plant, 500, snr, 99);
        CHECK(std::fabs(shortf.snr_db - snr) <= 0.5);
    }
}

TEST_CASE("gaussian source has unit variance") {
    NoiseSource src(123);
    double sum = 0, sum2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = src.gaussian();
        sum += g;
        sum2 += g * g;
    }
    CHECK(std::fabs(sum / n) < 0.01);
    CHECK(std::fabs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("regressor layout") {
    const std::vector<double> x{5, 6, 7};
    CHECK(make_regressor(x, 0, 3) == std::vector<double>{5, 0, 0});
    CHECK(make_regressor(x, 2, 3) == std::vector<double>{7, 6, 5});
    CHECK(make_regressor(x, 1, 1) == std::vector<double>{6});
    CHECK_THROWS_AS(make_regressor(x, 3, 3), std::out_of_range);
}

TEST_CASE("frames are pure functions of their seed") {
    const FirSystem plant = FirSystem::reference_plant();
    const SignalFrame a = make_frame(plant, 500, 10.0, 8);
    const SignalFrame b = make_frame(plant, 500, 10.0, 8);
    CHECK(a.x == b.x);
    CHECK(a.noisy == b.noisy);
    CHECK(a.clean == fir_filter(plant, a.x));
    CHECK(a.x.size() == a.noisy.size());
    CHECK(make_frame(plant, 500, kNoiselessSnr, 8).noisy == a.clean);
}

TEST_CASE("derived seeds differ across streams") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}
