#include "fraclms/fracmath.hpp"

#include "fraclms/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace fraclms {

FractionalPower::FractionalPower(double v) : v_(v) {
    if (!(v > 0.0 && v <= 1.0)) {
        throw DomainError("fractional power must lie in (0, 1], got " + std::to_string(v));
    }
}

namespace {

// Godfrey's coefficients for g = 607/128.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoeffs = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5,
};

} // namespace

double gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw DomainError("gamma requires a positive finite argument, got " + std::to_string(x));
    }
    if (x < 0.5) {
        // Reflection keeps the series in its accurate range.
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
    }
    const double z = x - 1.0;
    double sum = kLanczosCoeffs[0];
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
        sum += kLanczosCoeffs[i] / (z + static_cast<double>(i));
    }
    const double t = z + kLanczosG + 0.5;
    // Split t^(z+0.5) to delay overflow for large x.
    const double half_pow = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-t)) * sum;
}

double signed_frac_pow(double w, double exponent) {
    if (!std::isfinite(w)) {
        throw DomainError("signed_frac_pow requires a finite weight");
    }
    if (!(exponent >= 0.0 && exponent < 1.0)) {
        throw DomainError("signed_frac_pow exponent must lie in [0, 1), got " + std::to_string(exponent));
    }
    if (exponent == 0.0) return 1.0;
    if (w == 0.0) return 0.0;
    const double mag = exponent == 0.5 ? std::sqrt(std::fabs(w)) : std::pow(std::fabs(w), exponent);
    return std::signbit(w) ? -mag : mag;
}

} // namespace fraclms
