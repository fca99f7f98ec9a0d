//! Event criterion for a particle in a two-lobe spatial superposition.
//!
//! The momentum witness separates the coherent superposition from the
//! position mixture. Fundamental length uncertainty limits how well the
//! lobes can be prepared, which puts a floor under the witness. Once the
//! echo distinguishability bound drops below that floor the two states can
//! no longer be told apart and an event is declared.

use std::f64::consts::PI;

use crate::decoherence::{calibrate_mass, decoherence_time, scattering_constant, MassSpec, ScatteringScenario};
use crate::echo::distinguishability_bound_magnitude;
use crate::error::{Error, Result};
use crate::magnitude::Magnitude;
use crate::planck::FundamentalUncertainty;
use crate::qcore::C64;

/// Floor constant quoted alongside the variance expansion in the
/// literature; the computed infimum is used unless this is forced.
pub const REFERENCE_FLOOR_CONSTANT: f64 = 2.0;

/// Range searched for the variance-coefficient infimum.
pub const DEFAULT_EPSILON_RANGE: (f64, f64) = (1e-3, 1e3);

/// `a|φ_1⟩ + b|φ_2⟩` with Gaussian lobes of width `σ` centred at `±L/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavepacketSuperposition {
    a: C64,
    b: C64,
    separation: f64,
    width: f64,
}

impl WavepacketSuperposition {
    pub fn new(a: C64, b: C64, separation: f64, width: f64) -> Result<Self> {
        const CTX: &str = "WavepacketSuperposition";
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::validation(CTX, format!("|a|² + |b|² = {norm}, not 1")));
        }
        if !(separation > 0.0 && separation.is_finite() && width > 0.0 && width.is_finite()) {
            return Err(Error::domain(CTX, "separation and width must be positive"));
        }
        Ok(Self { a, b, separation, width })
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// `ε = σ / L`
    pub fn epsilon(&self) -> f64 {
        self.width / self.separation
    }

    /// `e^{-L²/8σ²}`, the lobe overlap scale.
    pub fn lobe_overlap(&self) -> f64 {
        (-(self.separation * self.separation) / (8.0 * self.width * self.width)).exp()
    }

    /// Warning text when the lobes are too close to be treated as
    /// orthogonal (`L < 6σ`).
    pub fn overlap_warning(&self) -> Option<String> {
        (self.separation < 6.0 * self.width).then(|| {
            format!(
                "lobe separation {} is below 6σ = {}; overlap e^(-L²/8σ²) = {:.3e}",
                self.separation,
                6.0 * self.width,
                self.lobe_overlap()
            )
        })
    }
}

/// `⟨φ_2|p|φ_1⟩ = -iħ L/(4σ²) e^{-L²/8σ²}`
pub fn momentum_cross_term(separation: f64, width: f64, hbar: f64) -> Result<C64> {
    if !(separation > 0.0 && width > 0.0 && hbar > 0.0) {
        return Err(Error::domain("momentum_cross_term", "separation, width and ħ must be positive"));
    }
    let k = hbar * separation / (4.0 * width * width) * (-(separation * separation) / (8.0 * width * width)).exp();
    Ok(C64::new(0.0, -k))
}

/// `Tr[p ρ] = -i(ab* - a*b) ħ L/(4σ²) e^{-L²/8σ²}`. The mixture over the
/// two lobes has zero mean momentum.
pub fn expected_momentum(w: &WavepacketSuperposition, hbar: f64) -> Result<f64> {
    let cross = momentum_cross_term(w.separation, w.width, hbar)?;
    // ab*⟨φ_2|p|φ_1⟩ + a*b⟨φ_1|p|φ_2⟩
    let value = w.a * w.b.conj() * cross + w.a.conj() * w.b * cross.conj();
    Ok(value.re)
}

/// How the lobe-width error follows from the length uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaConvention {
    /// `Δσ = ε ΔL`
    Scaled,
    /// `Δσ = Δ_L(σ)`
    Fundamental,
}

/// Propagated preparation uncertainty of the momentum witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceReport {
    pub witness: f64,
    /// `∂/∂L Tr[pρ] = (1/L - L/4σ²) Tr[pρ]`
    pub d_separation: f64,
    /// `∂/∂σ Tr[pρ] = (-2/σ + L²/4σ³) Tr[pρ]`
    pub d_width: f64,
    pub delta_separation: f64,
    pub delta_width: f64,
    pub variance: f64,
    /// `Σ(ε)` with `variance = Σ(ε) Tr[pρ]² ΔL²/L²`.
    pub coefficient: f64,
}

pub fn preparation_variance(
    w: &WavepacketSuperposition,
    law: &FundamentalUncertainty,
    convention: SigmaConvention,
) -> Result<VarianceReport> {
    let hbar = law.constants().hbar();
    let witness = expected_momentum(w, hbar)?;
    let (l, s) = (w.separation, w.width);
    let d_separation = (1.0 / l - l / (4.0 * s * s)) * witness;
    let d_width = (-2.0 / s + l * l / (4.0 * s * s * s)) * witness;
    let delta_separation = law.delta_l(l)?;
    let delta_width = match convention {
        SigmaConvention::Scaled => w.epsilon() * delta_separation,
        SigmaConvention::Fundamental => law.delta_l(s)?,
    };
    let variance = (d_separation * delta_separation).powi(2) + (d_width * delta_width).powi(2);
    Ok(VarianceReport {
        witness,
        d_separation,
        d_width,
        delta_separation,
        delta_width,
        variance,
        coefficient: variance_coefficient(w.epsilon(), convention, law.exponent()),
    })
}

/// `Σ(ε) = (1 - 1/4ε²)² + (Δσ/(εΔL))² (-2 + 1/4ε²)²`.
pub fn variance_coefficient(epsilon: f64, convention: SigmaConvention, exponent: f64) -> f64 {
    let y = 1.0 / (4.0 * epsilon * epsilon);
    let first = (1.0 - y).powi(2);
    let second = (y - 2.0).powi(2);
    match convention {
        SigmaConvention::Scaled => first + second,
        SigmaConvention::Fundamental => first + epsilon.powf(-2.0 * exponent) * second,
    }
}

fn variance_coefficient_slope(epsilon: f64, convention: SigmaConvention, exponent: f64) -> f64 {
    let y = 1.0 / (4.0 * epsilon * epsilon);
    let e3 = epsilon.powi(3);
    let d_first = (1.0 - y) / e3;
    let d_second = (2.0 - y) / e3;
    match convention {
        SigmaConvention::Scaled => d_first + d_second,
        SigmaConvention::Fundamental => {
            let q = -2.0 * exponent;
            d_first + q * epsilon.powf(q - 1.0) * (y - 2.0).powi(2) + epsilon.powf(q) * d_second
        }
    }
}

/// Infimum of `Σ(ε)` over a range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloorConstant {
    pub value: f64,
    /// Minimizing `ε`; at a range endpoint when the infimum is not attained
    /// inside.
    pub epsilon: f64,
}

/// Locates the infimum of `Σ(ε)` by log-spaced sampling followed by
/// bisection on the sign of `dΣ/dε`.
pub fn variance_floor_constant(
    convention: SigmaConvention,
    range: (f64, f64),
    exponent: f64,
) -> Result<FloorConstant> {
    let (lo, hi) = range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::domain("variance_floor_constant", format!("invalid ε range ({lo}, {hi})")));
    }
    const SAMPLES: usize = 4001;
    let step = (hi / lo).ln() / (SAMPLES - 1) as f64;
    let grid: Vec<f64> = (0..SAMPLES).map(|i| lo * (step * i as f64).exp()).collect();
    let sigma = |e: f64| variance_coefficient(e, convention, exponent);
    let best = (0..SAMPLES)
        .min_by(|&i, &j| sigma(grid[i]).total_cmp(&sigma(grid[j])))
        .expect("non-empty grid");
    if best == 0 || best == SAMPLES - 1 {
        return Ok(FloorConstant {
            value: sigma(grid[best]),
            epsilon: grid[best],
        });
    }
    let (mut left, mut right) = (grid[best - 1], grid[best + 1]);
    for _ in 0..200 {
        let mid = 0.5 * (left + right);
        if variance_coefficient_slope(mid, convention, exponent) > 0.0 {
            right = mid;
        } else {
            left = mid;
        }
    }
    let epsilon = 0.5 * (left + right);
    Ok(FloorConstant {
        value: sigma(epsilon),
        epsilon,
    })
}

/// `√c ΔL / L`: the witness-normalized preparation floor.
pub fn uncertainty_floor(separation: f64, floor_constant: f64, law: &FundamentalUncertainty) -> Result<Magnitude> {
    if !(separation > 0.0 && floor_constant > 0.0) {
        return Err(Error::domain("uncertainty_floor", "separation and floor constant must be positive"));
    }
    Ok(law.delta_l_magnitude(separation)? / separation * floor_constant.sqrt())
}

/// True once the echo bound no longer exceeds the preparation floor.
pub fn event_condition(
    half_span: f64,
    decoherence_time: f64,
    separation: f64,
    floor_constant: f64,
    law: &FundamentalUncertainty,
) -> Result<bool> {
    let bound = distinguishability_bound_magnitude(half_span, decoherence_time, law)?;
    let floor = uncertainty_floor(separation, floor_constant, law)?;
    Ok(bound.log10() <= floor.log10())
}

/// Prefactor convention for the event time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauConvention {
    /// Solves `bound(τ) = floor` exactly.
    Crossing,
    /// The `1 / (2(2π)^{3/2})` prefactor of the reference table: the
    /// crossing time divided by `2^{3/2}`.
    TablePrefactor,
}

/// Event time `τ_ev`, in log space.
pub fn tau_event(
    decoherence_time: f64,
    separation: f64,
    convention: TauConvention,
    floor_constant: f64,
    law: &FundamentalUncertainty,
) -> Result<Magnitude> {
    if !(decoherence_time > 0.0 && decoherence_time.is_finite()) {
        return Err(Error::domain("tau_event", "decoherence time must be positive"));
    }
    let p = law.exponent();
    let floor = uncertainty_floor(separation, floor_constant, law)?;
    // Δ_T(2τ) = √(2/π) τ_D / floor = T_P^p (2τ)^(1-p)
    let width = Magnitude::from_f64(decoherence_time) * (2.0 / PI).sqrt() / floor;
    let twice = (width / Magnitude::from_f64(law.constants().planck_time()).powf(p)).powf(1.0 / (1.0 - p));
    let crossing = twice * 0.5;
    Ok(match convention {
        TauConvention::Crossing => crossing,
        TauConvention::TablePrefactor => crossing / 2f64.powf(1.5),
    })
}

/// Reading of the decoherence anchor used to calibrate the central mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub size: f64,
    pub decoherence_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRow {
    pub size: f64,
    pub mass: f64,
    pub scattering_constant: Magnitude,
    pub decoherence_time: Magnitude,
    pub event_time_crossing: Magnitude,
    pub event_time_table: Magnitude,
}

/// Result of [`event_time_table`]: the rows plus the mass density the
/// calibration settled on.
#[derive(Debug, Clone, PartialEq)]
pub struct EventTable {
    pub mass_density: f64,
    pub calibrated_anchor_mass: Option<f64>,
    pub rows: Vec<EventRow>,
}

/// Event times for central systems of several sizes with `L = a` and a
/// common mass density.
pub fn event_time_table(
    base: &ScatteringScenario,
    sizes: &[f64],
    calibration: Option<Calibration>,
    floor_constant: f64,
    law: &FundamentalUncertainty,
) -> Result<EventTable> {
    base.validate()?;
    if sizes.is_empty() || sizes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(Error::domain("event_time_table", "sizes must be a non-empty list of positive lengths"));
    }
    let k = law.constants();
    let (mass_density, calibrated_anchor_mass) = match calibration {
        Some(cal) => {
            let anchor = base.rescaled(cal.size);
            let m = calibrate_mass(&anchor, cal.decoherence_time, k)?;
            (m / cal.size.powi(3), Some(m))
        }
        None => match base.mass {
            MassSpec::Density(rho) => (rho, None),
            MassSpec::Kilograms(m) => (m / base.size.powi(3), None),
        },
    };
    let template = ScatteringScenario {
        mass: MassSpec::Density(mass_density),
        ..*base
    };
    let rows = sizes
        .iter()
        .map(|&a| {
            let s = template.rescaled(a);
            let tau_d = decoherence_time(&s, k)?;
            let tau_d_lin = tau_d
                .to_f64()
                .ok_or_else(|| Error::domain("event_time_table", format!("τ_D for a = {a} is not representable")))?;
            Ok(EventRow {
                size: a,
                mass: s.mass_kg(),
                scattering_constant: scattering_constant(&s, k)?,
                decoherence_time: tau_d,
                event_time_crossing: tau_event(tau_d_lin, a, TauConvention::Crossing, floor_constant, law)?,
                event_time_table: tau_event(tau_d_lin, a, TauConvention::TablePrefactor, floor_constant, law)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EventTable {
        mass_density,
        calibrated_anchor_mass,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventStatus {
    Event,
    NoEvent,
    /// The prepared phases give zero momentum witness, so the protocol
    /// cannot discriminate at all.
    WitnessBlind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventReport {
    pub decoherence_time: f64,
    pub event_time: Magnitude,
    pub event_time_crossing: Magnitude,
    pub event_time_table: Magnitude,
    pub convention: TauConvention,
    pub floor_constant: f64,
    /// Witness-normalized echo bound at the queried time.
    pub bound: Magnitude,
    /// Witness-normalized preparation floor.
    pub floor: Magnitude,
    pub status: EventStatus,
}

impl EventReport {
    pub fn event(&self) -> bool {
        self.status == EventStatus::Event
    }
}

/// Evaluates the event criterion at echo time `T`.
pub fn event_report(
    wavepacket: Option<&WavepacketSuperposition>,
    half_span: f64,
    decoherence_time: f64,
    separation: f64,
    convention: TauConvention,
    floor_constant: f64,
    law: &FundamentalUncertainty,
) -> Result<EventReport> {
    let bound = distinguishability_bound_magnitude(half_span, decoherence_time, law)?;
    let floor = uncertainty_floor(separation, floor_constant, law)?;
    let crossing = tau_event(decoherence_time, separation, TauConvention::Crossing, floor_constant, law)?;
    let table = tau_event(decoherence_time, separation, TauConvention::TablePrefactor, floor_constant, law)?;
    let blind = match wavepacket {
        Some(w) => expected_momentum(w, law.constants().hbar())? == 0.0,
        None => false,
    };
    let status = if blind {
        EventStatus::WitnessBlind
    } else if bound.log10() <= floor.log10() {
        EventStatus::Event
    } else {
        EventStatus::NoEvent
    };
    Ok(EventReport {
        decoherence_time,
        event_time: match convention {
            TauConvention::Crossing => crossing,
            TauConvention::TablePrefactor => table,
        },
        event_time_crossing: crossing,
        event_time_table: table,
        convention,
        floor_constant,
        bound,
        floor,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planck::{PhysicalConstants, DEFAULT_EXPONENT};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn cross_term_is_negative_imaginary() {
        for (l, s) in [(1.0, 0.5), (3.0, 0.1), (1e-8, 1e-9)] {
            let z = momentum_cross_term(l, s, 1.0).unwrap();
            assert_eq!(z.re, 0.0);
            assert!(z.im < 0.0);
        }
        assert_eq!(momentum_cross_term(100.0, 1.0, 1.0).unwrap().im, 0.0);
    }

    #[test]
    fn real_amplitudes_have_zero_witness() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let w = WavepacketSuperposition::new(c(s, 0.0), c(s, 0.0), 4.0, 1.0).unwrap();
        assert_eq!(expected_momentum(&w, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn quarter_phase_witness() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let (l, sig) = (4.0, 1.0);
        let w = WavepacketSuperposition::new(c(s, 0.0), c(0.0, s), l, sig).unwrap();
        let want = -l / (4.0 * sig * sig) * (-l * l / (8.0 * sig * sig)).exp();
        assert!((expected_momentum(&w, 1.0).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn scaled_coefficient_values() {
        assert!((variance_coefficient(1.0, SigmaConvention::Scaled, DEFAULT_EXPONENT) - 3.625).abs() < 1e-14);
        assert!((variance_coefficient(1e6, SigmaConvention::Scaled, DEFAULT_EXPONENT) - 5.0).abs() < 1e-9);
        for e in [0.05f64, 0.2, 0.5, 2.0, 7.0] {
            let expanded = 5.0 - 1.5 / (e * e) + 1.0 / (8.0 * e.powi(4));
            assert!((variance_coefficient(e, SigmaConvention::Scaled, DEFAULT_EXPONENT) - expanded).abs() < 1e-9 * expanded);
        }
    }

    #[test]
    fn scaled_infimum() {
        let f = variance_floor_constant(SigmaConvention::Scaled, DEFAULT_EPSILON_RANGE, DEFAULT_EXPONENT).unwrap();
        assert!((f.value - 0.5).abs() < 1e-12);
        assert!((f.epsilon - 1.0 / 6f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn fundamental_infimum_is_positive_and_interior() {
        let f = variance_floor_constant(SigmaConvention::Fundamental, DEFAULT_EPSILON_RANGE, DEFAULT_EXPONENT).unwrap();
        assert!(f.value > 0.0 && f.value < 1.0);
        assert!(f.epsilon > 0.3 && f.epsilon < 0.5);
        // stationary point
        let slope = variance_coefficient_slope(f.epsilon, SigmaConvention::Fundamental, DEFAULT_EXPONENT);
        assert!(slope.abs() < 1e-8);
    }

    #[test]
    fn variance_equals_coefficient_form() {
        let law = FundamentalUncertainty::default();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for conv in [SigmaConvention::Scaled, SigmaConvention::Fundamental] {
            let w = WavepacketSuperposition::new(c(s, 0.0), c(0.0, s), 1e-8, 2.5e-9).unwrap();
            let r = preparation_variance(&w, &law, conv).unwrap();
            let form = r.coefficient * (r.witness * r.delta_separation / w.separation()).powi(2);
            assert!((r.variance / form - 1.0).abs() < 1e-12, "{conv:?}");
        }
    }

    #[test]
    fn overlap_warning_threshold() {
        let w = WavepacketSuperposition::new(c(1.0, 0.0), c(0.0, 0.0), 5.0, 1.0).unwrap();
        assert!(w.overlap_warning().is_some());
        let w = WavepacketSuperposition::new(c(1.0, 0.0), c(0.0, 0.0), 7.0, 1.0).unwrap();
        assert!(w.overlap_warning().is_none());
        assert!(WavepacketSuperposition::new(c(1.0, 0.0), c(1.0, 0.0), 7.0, 1.0).is_err());
    }

    #[test]
    fn crossing_over_table_is_two_to_three_halves() {
        let law = FundamentalUncertainty::new(PhysicalConstants::rounded(), DEFAULT_EXPONENT).unwrap();
        let a = tau_event(1e-31, 1e-8, TauConvention::Crossing, 2.0, &law).unwrap();
        let b = tau_event(1e-31, 1e-8, TauConvention::TablePrefactor, 2.0, &law).unwrap();
        assert!(((a / b).to_f64().unwrap() - 2f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn table_prefactor_matches_printed_formula() {
        let law = FundamentalUncertainty::new(PhysicalConstants::rounded(), DEFAULT_EXPONENT).unwrap();
        let (tau_d, l) = (1e-20f64, 1e-6);
        let direct = tau_d.powi(3) * l * l / (2.0 * (2.0 * PI).powf(1.5) * 5e-44f64.powi(2) * 2e-35f64.powi(2));
        let got = tau_event(tau_d, l, TauConvention::TablePrefactor, 2.0, &law).unwrap().to_f64().unwrap();
        assert!((got / direct - 1.0).abs() < 1e-12);
    }

    #[test]
    fn witness_blind_report() {
        let law = FundamentalUncertainty::default();
        let w = WavepacketSuperposition::new(c(0.6, 0.0), c(0.8, 0.0), 1e-8, 1e-9).unwrap();
        let r = event_report(Some(&w), 1e50, 1e-31, 1e-8, TauConvention::Crossing, 2.0, &law).unwrap();
        assert_eq!(r.status, EventStatus::WitnessBlind);
        let r = event_report(None, 1e50, 1e-31, 1e-8, TauConvention::Crossing, 2.0, &law).unwrap();
        assert_eq!(r.status, EventStatus::Event);
    }
}
