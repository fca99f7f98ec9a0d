//! WebAssembly bindings for a static demo page. Each export returns a flat
//! `Float64Array` of fixed-width rows.

use eventclock::decoherence::{MassSpec, ScatteringScenario};
use eventclock::echo::{distinguishability_bound_magnitude, distinguishability_factor};
use eventclock::events::{
    event_time_table, uncertainty_floor, variance_coefficient, Calibration, SigmaConvention,
};
use eventclock::planck::{FundamentalUncertainty, PhysicalConstants, DEFAULT_EXPONENT};
use wasm_bindgen::prelude::*;

/// Columns of [`echo_curve`].
pub const ECHO_COLUMNS: usize = 4;
/// Columns of [`variance_curve`].
pub const VARIANCE_COLUMNS: usize = 3;
/// Columns of [`event_time_curve`].
pub const EVENT_COLUMNS: usize = 4;

/// Size at which the event-time curve is calibrated, m.
pub const ANCHOR_SIZE: f64 = 1e-8;

fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 {
        return Err(format!("need at least 2 points, got {points}"));
    }
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(format!("range must be increasing, got [{lo}, {hi}]"));
    }
    Ok((0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect())
}

fn rounded_law() -> FundamentalUncertainty {
    FundamentalUncertainty::new(PhysicalConstants::rounded(), DEFAULT_EXPONENT).expect("default exponent is valid")
}

/// Rows `[log10 T, log10 bound, log10 exact factor, log10 floor]` for echo
/// times `10^lo ..= 10^hi` s.
pub fn echo_curve(
    decoherence_time: f64,
    separation: f64,
    floor_constant: f64,
    log10_lo: f64,
    log10_hi: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let law = rounded_law();
    let floor = uncertainty_floor(separation, floor_constant, &law).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(points * ECHO_COLUMNS);
    for x in log_grid(log10_lo, log10_hi, points)? {
        let t = 10f64.powf(x);
        let bound = distinguishability_bound_magnitude(t, decoherence_time, &law).map_err(|e| e.to_string())?;
        let width = law.delta_t(2.0 * t).map_err(|e| e.to_string())?;
        let factor = distinguishability_factor(width, decoherence_time).map_err(|e| e.to_string())?;
        out.extend([x, bound.log10(), factor.log10(), floor.log10()]);
    }
    Ok(out)
}

/// Rows `[ε, Σ_scaled(ε), Σ_fundamental(ε)]` for log-spaced `ε`.
pub fn variance_curve(epsilon_lo: f64, epsilon_hi: f64, points: usize) -> Result<Vec<f64>, String> {
    if epsilon_lo.is_nan() || epsilon_lo <= 0.0 {
        return Err(format!("ε must be positive, got {epsilon_lo}"));
    }
    let mut out = Vec::with_capacity(points * VARIANCE_COLUMNS);
    for x in log_grid(epsilon_lo.log10(), epsilon_hi.log10(), points)? {
        let e = 10f64.powf(x);
        out.extend([
            e,
            variance_coefficient(e, SigmaConvention::Scaled, DEFAULT_EXPONENT),
            variance_coefficient(e, SigmaConvention::Fundamental, DEFAULT_EXPONENT),
        ]);
    }
    Ok(out)
}

/// Rows `[log10 a, log10 τ_D, log10 τ_ev (table prefactor), log10 τ_ev
/// (crossing)]` with `L = a`, the mass density fixed by
/// `τ_D(1e-8 m) = anchor`, and the given gas density and temperature.
pub fn event_time_curve(
    anchor_decoherence_time: f64,
    particle_density: f64,
    temperature: f64,
    floor_constant: f64,
    log10_lo: f64,
    log10_hi: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let base = ScatteringScenario {
        size: ANCHOR_SIZE,
        separation: ANCHOR_SIZE,
        mass: MassSpec::Density(1.0),
        particle_density,
        temperature,
    };
    let calibration = Calibration {
        size: ANCHOR_SIZE,
        decoherence_time: anchor_decoherence_time,
    };
    let grid = log_grid(log10_lo, log10_hi, points)?;
    let sizes: Vec<f64> = grid.iter().map(|x| 10f64.powf(*x)).collect();
    let table = event_time_table(&base, &sizes, Some(calibration), floor_constant, &rounded_law())
        .map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(points * EVENT_COLUMNS);
    for (x, row) in grid.iter().zip(&table.rows) {
        out.extend([
            *x,
            row.decoherence_time.log10(),
            row.event_time_table.log10(),
            row.event_time_crossing.log10(),
        ]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = echoCurve)]
pub fn echo_curve_js(
    decoherence_time: f64,
    separation: f64,
    floor_constant: f64,
    log10_lo: f64,
    log10_hi: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    echo_curve(decoherence_time, separation, floor_constant, log10_lo, log10_hi, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = varianceCurve)]
pub fn variance_curve_js(epsilon_lo: f64, epsilon_hi: f64, points: usize) -> Result<Vec<f64>, JsError> {
    variance_curve(epsilon_lo, epsilon_hi, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = eventTimeCurve)]
pub fn event_time_curve_js(
    anchor_decoherence_time: f64,
    particle_density: f64,
    temperature: f64,
    floor_constant: f64,
    log10_lo: f64,
    log10_hi: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    event_time_curve(
        anchor_decoherence_time,
        particle_density,
        temperature,
        floor_constant,
        log10_lo,
        log10_hi,
        points,
    )
    .map_err(|e| JsError::new(&e))
}
