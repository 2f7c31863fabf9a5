#ifndef FRACLMS_FRACMATH_HPP
#define FRACLMS_FRACMATH_HPP

namespace fraclms {

/// Order of a fractional derivative, restricted to (0, 1].
class FractionalPower {
public:
    explicit FractionalPower(double v);

    double value() const noexcept { return v_; }
    /// Exponent 1 - v applied to a weight by the fractional gradient term.
    double weight_exponent() const noexcept { return 1.0 - v_; }

private:
    double v_;
};

/// Gamma function for positive real arguments (Lanczos, g = 607/128, 15 terms).
/// Relative error is below 1e-14 on [0.5, 5].
double gamma(double x);

/// sign(w) * |w|^exponent for exponent in [0, 1).
/// exponent == 0 yields exactly 1 for every w, including w == 0.
double signed_frac_pow(double w, double exponent);

} // namespace fraclms

#endif // FRACLMS_FRACMATH_HPP
