//! Scaled complementary error function.

use libm::erfc;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// `exp(x^2)` with the square split so that the leading part is exact.
pub(crate) fn exp_sq(x: f64) -> f64 {
    let hi = (x * 4096.0).round() / 4096.0;
    let lo = x - hi;
    (hi * hi).exp() * (lo * (2.0 * hi + lo)).exp()
}

/// `erfcx(x) = exp(x^2) erfc(x)`.
///
/// Finite for every `x >= -26`; overflows to infinity below that.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 * exp_sq(x) - erfcx(-x);
    }
    if x < 25.0 {
        return exp_sq(x) * erfc(x);
    }
    // asymptotic series, the terms shrink below 1e-20 by k = 8 for x >= 25
    let w = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..12 {
        term *= -((2 * k - 1) as f64) * w;
        sum += term;
    }
    sum * FRAC_1_SQRT_PI / x
}
