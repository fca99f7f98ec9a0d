//! Global echo protocol: forward evolution, perfect reversal, and the
//! residual distinguishability between the evolved state and the event
//! mixture once clock dephasing over the total span `2T` is included.

use std::f64::consts::PI;

use crate::clock::{dephase, ClockKernel, TabulatedKernel};
use crate::decoherence::{event_map, JointModel, OverlapModel, PointerModel};
use crate::error::{Error, Result};
use crate::magnitude::Magnitude;
use crate::planck::FundamentalUncertainty;
use crate::qcore::{unitary_evolve, ComplexMatrix, DensityOperator, HamiltonianSpec, Observable};
use crate::quadrature::simpson_nodes;
use crate::special::erfcx;

/// Half-width of the oracle quadrature window, in Gaussian widths.
pub const ORACLE_SPAN: f64 = 8.0;

/// Forward evolution by `t` followed by the exact reversal `e^{iHt/ħ}`.
pub fn echo_unitary(rho: &DensityOperator, h: &HamiltonianSpec, t: f64) -> Result<DensityOperator> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain("echo_unitary", format!("echo time must be non-negative, got {t}")));
    }
    let forward = unitary_evolve(rho, h, t)?;
    unitary_evolve(&forward, h, -t)
}

/// `|φ_j⟩⟨φ_k| + |φ_k⟩⟨φ_j|`
pub fn coherence_witness(pointer_states: &[Vec<crate::qcore::C64>], j: usize, k: usize) -> Result<Observable> {
    let n = pointer_states.len();
    if j >= n || k >= n || j == k {
        return Err(Error::validation(
            "coherence_witness",
            format!("need two distinct pointer indices below {n}, got ({j}, {k})"),
        ));
    }
    let a = ComplexMatrix::outer(&pointer_states[j], &pointer_states[k]);
    Observable::new(&a + &a.adjoint(), format!("X_{j}{k}"))
}

/// What the echo acts on.
#[derive(Debug, Clone)]
pub enum EchoSystem {
    /// Explicit system + environment state and Hamiltonian.
    Joint(JointModel),
    /// Pointer model with exponentially decaying environment overlaps,
    /// treated at the level of the reduced system state.
    Exponential(PointerModel),
}

impl EchoSystem {
    /// Micro-models become joint systems; exponential models stay reduced.
    pub fn from_pointer_model(model: PointerModel) -> Result<Self> {
        match model.overlap_model() {
            OverlapModel::Exponential { .. } => Ok(EchoSystem::Exponential(model)),
            OverlapModel::Micro { .. } => Ok(EchoSystem::Joint(model.joint()?)),
        }
    }

    pub fn pointer_states(&self) -> &[Vec<crate::qcore::C64>] {
        match self {
            EchoSystem::Joint(j) => &j.pointer_states,
            EchoSystem::Exponential(m) => m.pointer_states(),
        }
    }

    fn environment_dim(&self) -> usize {
        match self {
            EchoSystem::Joint(j) => j.environment_dim,
            EchoSystem::Exponential(_) => 1,
        }
    }

    /// State before the protocol starts.
    pub fn initial_state(&self) -> Result<DensityOperator> {
        match self {
            EchoSystem::Joint(j) => Ok(j.state.clone()),
            EchoSystem::Exponential(m) => m.reduced_system_state(0.0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EchoResult {
    pub final_state: DensityOperator,
    pub event_state: DensityOperator,
    /// `Tr[O(ρ(T_f) - ρ^ev(T_f))]`
    pub witness_value: f64,
    /// The same witness without clock dephasing.
    pub initial_witness: f64,
    /// Width of the timing uncertainty accumulated over `2T`, when Gaussian.
    pub span_width: Option<f64>,
    /// `√2 τ_D / (√π Δ_2T) · |initial_witness|`, for exponential models.
    pub bound_value: Option<f64>,
    /// Suppression `e^{x²} erfc(x)` (or its tabulated analogue) of the
    /// coherent witness, for exponential models.
    pub exact_factor: Option<f64>,
}

/// Timing width accumulated over the forward plus reversed span `2T`.
pub fn echo_span_width(kernel: &ClockKernel, half_span: f64) -> Result<Option<f64>> {
    kernel.validate()?;
    match kernel {
        ClockKernel::IdealDelta => Ok(Some(0.0)),
        ClockKernel::GaussianFundamental(law) => law.delta_t(2.0 * half_span).map(Some),
        ClockKernel::GaussianFixed { width } => Ok(Some(*width)),
        ClockKernel::Tabulated(_) => Ok(None),
    }
}

/// Runs the echo with clock dephasing over the total span `2T`.
///
/// `witness` acts on the system factor and is extended by the identity on
/// the environment.
pub fn echo_with_clock(
    system: &EchoSystem,
    half_span: f64,
    kernel: &ClockKernel,
    witness: &Observable,
) -> Result<EchoResult> {
    if !(half_span >= 0.0 && half_span.is_finite()) {
        return Err(Error::domain("echo_with_clock", format!("echo time must be non-negative, got {half_span}")));
    }
    let width = echo_span_width(kernel, half_span)?;
    let env_dim = system.environment_dim();
    let full_witness = witness.extend(env_dim);
    let initial = system.initial_state()?;
    let initial_event = event_map(&initial, system.pointer_states(), env_dim)?;
    let initial_witness = full_witness.trace_with(&(initial.matrix() - initial_event.matrix()))?;

    let (final_state, exact_factor, bound_value) = match system {
        EchoSystem::Joint(joint) => {
            let out = match (width, kernel) {
                (Some(w), _) => dephase(&joint.state, &joint.hamiltonian, w)?,
                (None, ClockKernel::Tabulated(table)) => tabulated_orbit_average(&joint.state, &joint.hamiltonian, table)?,
                (None, _) => unreachable!("only tabulated kernels lack a Gaussian width"),
            };
            (out, None, None)
        }
        EchoSystem::Exponential(model) => {
            let tau = model.decoherence_time().expect("exponential model");
            let factor = match (width, kernel) {
                (Some(w), _) => distinguishability_factor(w, tau)?,
                (None, ClockKernel::Tabulated(table)) => tabulated_exponential_factor(table, tau),
                (None, _) => unreachable!("only tabulated kernels lack a Gaussian width"),
            };
            let bound = match width {
                Some(w) if w > 0.0 => Some(
                    (Magnitude::from_f64(2f64.sqrt() * tau) / Magnitude::from_f64(PI.sqrt() * w))
                        .to_f64()
                        .unwrap_or(f64::MAX)
                        * initial_witness.abs(),
                ),
                _ => None,
            };
            (suppress_coherences(&initial, &initial_event, factor), Some(factor), bound)
        }
    };
    let event_state = event_map(&final_state, system.pointer_states(), env_dim)?;
    let witness_value = full_witness.trace_with(&(final_state.matrix() - event_state.matrix()))?;
    Ok(EchoResult {
        final_state,
        event_state,
        witness_value,
        initial_witness,
        span_width: width,
        bound_value,
        exact_factor,
    })
}

/// `ρ^ev + factor (ρ - ρ^ev)`: scales every pointer-basis coherence.
fn suppress_coherences(rho: &DensityOperator, event: &DensityOperator, factor: f64) -> DensityOperator {
    let coherent = rho.matrix() - event.matrix();
    DensityOperator::from_matrix_unchecked(event.matrix() + &coherent.scale_real(factor), rho.tolerance())
}

fn tabulated_orbit_average(rho: &DensityOperator, h: &HamiltonianSpec, table: &TabulatedKernel) -> Result<DensityOperator> {
    let pts: Vec<(f64, f64)> = table.points().collect();
    let spacing = pts[1].0 - pts[0].0;
    let n = pts.len() - 1;
    let mut acc = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for (i, (mu, p)) in pts.into_iter().enumerate() {
        let w = simpson_weight(i, n) * spacing / 3.0 * p;
        if w == 0.0 {
            continue;
        }
        acc = &acc + &unitary_evolve(rho, h, mu)?.matrix().scale_real(w);
    }
    Ok(DensityOperator::from_matrix_unchecked(acc, rho.tolerance()))
}

fn tabulated_exponential_factor(table: &TabulatedKernel, tau: f64) -> f64 {
    let pts: Vec<(f64, f64)> = table.points().collect();
    let spacing = pts[1].0 - pts[0].0;
    let n = pts.len() - 1;
    pts.into_iter()
        .enumerate()
        .map(|(i, (mu, p))| simpson_weight(i, n) * spacing / 3.0 * p * (-mu.abs() / tau).exp())
        .sum()
}

fn simpson_weight(i: usize, n: usize) -> f64 {
    if i == 0 || i == n {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

fn gaussian(mu: f64, delta: f64) -> f64 {
    (-(mu * mu) / (2.0 * delta * delta)).exp() / (2.0 * PI * delta * delta).sqrt()
}

/// Gaussian average of unitary orbits,
/// `∫ N(μ; 0, δ²) e^{-iHμ/ħ} ρ e^{iHμ/ħ} dμ`, by Simpson quadrature over
/// `±8δ`. Independent check of the closed-form dephasing.
pub fn gaussian_average_oracle(
    rho: &DensityOperator,
    h: &HamiltonianSpec,
    delta: f64,
    intervals: usize,
) -> Result<DensityOperator> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain("gaussian_average_oracle", "width must be positive"));
    }
    let mut acc = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for (mu, w) in simpson_nodes(-ORACLE_SPAN * delta, ORACLE_SPAN * delta, intervals)? {
        acc = &acc + &unitary_evolve(rho, h, mu)?.matrix().scale_real(w * gaussian(mu, delta));
    }
    Ok(DensityOperator::from_matrix_unchecked(acc, rho.tolerance()))
}

/// Gaussian average of the reduced state of an exponential pointer model,
/// `∫ N(μ; 0, δ²) ρ_S(|μ|) dμ`, integrating each half-line separately so the
/// kink of `e^{-|μ|/τ_D}` sits on a node.
pub fn exponential_echo_oracle(model: &PointerModel, delta: f64, intervals: usize) -> Result<DensityOperator> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain("exponential_echo_oracle", "width must be positive"));
    }
    let d = model.system_dim();
    let span = ORACLE_SPAN * delta;
    // a separate panel over the overlap decay keeps short τ_D resolved
    let knee = model.decoherence_time().map_or(span, |tau| (40.0 * tau).min(span));
    let mut nodes = simpson_nodes(0.0, knee, intervals)?;
    if knee < span {
        nodes.extend(simpson_nodes(knee, span, intervals)?);
    }
    let mut acc = ComplexMatrix::zeros(d, d);
    for (mu, w) in nodes {
        let rho = model.reduced_system_state(mu)?;
        acc = &acc + &rho.matrix().scale_real(2.0 * w * gaussian(mu, delta));
    }
    Ok(DensityOperator::from_matrix_unchecked(acc, crate::qcore::DEFAULT_TOLERANCE))
}

/// `e^{x²} erfc(x)` at `x = δ / (√2 τ_D)`.
pub fn distinguishability_factor(delta: f64, decoherence_time: f64) -> Result<f64> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::domain("distinguishability_factor", "width must be non-negative"));
    }
    if !(decoherence_time > 0.0 && decoherence_time.is_finite()) {
        return Err(Error::domain("distinguishability_factor", "decoherence time must be positive"));
    }
    let x = (Magnitude::from_f64(delta) / Magnitude::from_f64(2f64.sqrt() * decoherence_time))
        .to_f64()
        .unwrap_or(f64::INFINITY);
    Ok(erfcx(x))
}

/// `√2 τ_D / (√π Δ_T(2T))` as a log-space magnitude.
pub fn distinguishability_bound_magnitude(
    half_span: f64,
    decoherence_time: f64,
    law: &FundamentalUncertainty,
) -> Result<Magnitude> {
    if !(half_span > 0.0 && half_span.is_finite()) {
        return Err(Error::domain("distinguishability_bound", "echo time must be positive"));
    }
    if !(decoherence_time > 0.0 && decoherence_time.is_finite()) {
        return Err(Error::domain("distinguishability_bound", "decoherence time must be positive"));
    }
    let width = law.delta_t_magnitude(2.0 * half_span)?;
    Ok(Magnitude::from_f64(decoherence_time) * (2.0 / PI).sqrt() / width)
}

/// [`distinguishability_bound_magnitude`] materialized; saturates to `0` or
/// `f64::MAX` outside the representable range.
pub fn distinguishability_bound(half_span: f64, decoherence_time: f64, law: &FundamentalUncertainty) -> Result<f64> {
    let m = distinguishability_bound_magnitude(half_span, decoherence_time, law)?;
    Ok(m.to_f64().unwrap_or(if m.log10() > 0.0 { f64::MAX } else { 0.0 }))
}
