//! Scaled complementary error function `erfcx(x) = e^{x²} erfc(x)`.

use std::f64::consts::PI;

// The series subtracts from e^{x²}; above x = 1 that cancellation costs more
// digits than the continued fraction does.
const SERIES_CUTOFF: f64 = 1.0;

/// `e^{x²} erfc(x)` without forming either factor separately.
///
/// Uses the positive-term series of `e^{x²} erf(x)` for `|x| ≤ 1` and the
/// Laplace continued fraction above. Finite for every `x ≥ -26`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x <= SERIES_CUTOFF {
        erfcx_series(x)
    } else {
        erfcx_continued_fraction(x)
    }
}

/// `e^{x²} - (2/√π) Σ 2ⁿ x^{2n+1} / (2n+1)!!`
fn erfcx_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    while term > 1e-17 * sum {
        n += 1;
        term *= 2.0 * x2 / f64::from(2 * n + 1);
        sum += term;
        if n > 500 {
            break;
        }
    }
    x2.exp() - 2.0 / PI.sqrt() * sum
}

/// `1 / (√π (x + (1/2)/(x + 1/(x + (3/2)/(x + …)))))`, modified Lentz.
fn erfcx_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..10_000 {
        let a = f64::from(n) / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() <= 2.0 * f64::EPSILON {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}
