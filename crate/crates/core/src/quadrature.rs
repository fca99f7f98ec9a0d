//! Composite Simpson rule on uniform grids.

use crate::error::{Error, Result};

/// Nodes and weights of the composite Simpson rule on `[a, b]`.
///
/// An odd `intervals` count is rounded up to the next even number.
pub fn simpson_nodes(a: f64, b: f64, intervals: usize) -> Result<Vec<(f64, f64)>> {
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(Error::domain("simpson", format!("invalid interval [{a}, {b}]")));
    }
    if intervals < 2 {
        return Err(Error::domain("simpson", "need at least two intervals"));
    }
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    Ok((0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (a + h * i as f64, w * h / 3.0)
        })
        .collect())
}

pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> Result<f64> {
    Ok(simpson_nodes(a, b, intervals)?.into_iter().map(|(x, w)| w * f(x)).sum())
}

/// Simpson rule over equally spaced samples; needs an odd count ≥ 3.
pub fn simpson_samples(samples: &[f64], spacing: f64) -> Result<f64> {
    let n = samples.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::validation(
            "simpson",
            format!("need an odd number of samples (at least 3), got {n}"),
        ));
    }
    if spacing.is_nan() || spacing <= 0.0 {
        return Err(Error::domain("simpson", "grid spacing must be positive"));
    }
    let inner: f64 = samples[1..n - 1]
        .iter()
        .enumerate()
        .map(|(i, y)| if i % 2 == 0 { 4.0 * y } else { 2.0 * y })
        .sum();
    Ok(spacing / 3.0 * (samples[0] + inner + samples[n - 1]))
}
