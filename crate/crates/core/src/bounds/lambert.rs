//! Principal branch of the Lambert W function on `x >= 0`.

const MAX_ITERATIONS: usize = 64;

/// `W(x)` with `W(x)·e^{W(x)} = x`, by Halley iteration from `log(1 + x)`.
///
/// Returns NaN for negative or NaN input.
pub fn lambert_w(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::INFINITY;
    }
    let mut w = x.ln_1p();
    for _ in 0..MAX_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    w
}
