//! Relational dynamics with respect to a physical clock.
//!
//! A clock reading `T` is related to the inaccessible ideal time `t` by a
//! kernel `P_t(T)`. Averaging unitary orbits over the kernel gives the
//! effective state, which for Gaussian kernels factors into the unitary
//! evolution of an energy-basis dephased state.

use crate::error::{Error, Result};
use crate::planck::FundamentalUncertainty;
use crate::qcore::{tensor_product, unitary_evolve, ComplexMatrix, DensityOperator, HamiltonianSpec, Observable, C64};
use crate::quadrature::{simpson_nodes, simpson_samples};

/// Normalization tolerance for tabulated kernels.
pub const KERNEL_NORMALIZATION_TOLERANCE: f64 = 1e-8;

/// Half-width of a tabulated Gaussian, in standard deviations.
pub const GAUSSIAN_TABLE_SPAN: f64 = 6.0;

/// Density of the offset `u = T - t` on a uniform grid, so that
/// `P_t(T) = density(T - t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedKernel {
    start: f64,
    spacing: f64,
    density: Vec<f64>,
}

impl TabulatedKernel {
    /// Checks shape and sign only; normalization is checked by
    /// [`ClockKernel::validate`].
    pub fn new(start: f64, spacing: f64, density: Vec<f64>) -> Result<Self> {
        const CTX: &str = "TabulatedKernel";
        if !(start.is_finite() && spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::validation(CTX, "grid start must be finite and spacing positive"));
        }
        if density.len() < 3 || density.len().is_multiple_of(2) {
            return Err(Error::validation(
                CTX,
                format!("need an odd number of grid points (at least 3), got {}", density.len()),
            ));
        }
        if let Some(i) = density.iter().position(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::validation(CTX, format!("density at grid point {i} is negative or not finite")));
        }
        Ok(Self { start, spacing, density })
    }

    /// Samples `f` on `[start, stop]` with `intervals` (even) intervals.
    pub fn from_fn(f: impl Fn(f64) -> f64, start: f64, stop: f64, intervals: usize) -> Result<Self> {
        let nodes = simpson_nodes(start, stop, intervals)?;
        let spacing = nodes[1].0 - nodes[0].0;
        Self::new(start, spacing, nodes.iter().map(|(u, _)| f(*u)).collect())
    }

    /// Gaussian of the given width sampled over ±6 widths, renormalized to
    /// unit mass on that support.
    pub fn gaussian(width: f64, intervals: usize) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::domain("TabulatedKernel::gaussian", "width must be positive"));
        }
        let norm = 1.0 / (2.0 * std::f64::consts::PI * width * width).sqrt();
        let span = GAUSSIAN_TABLE_SPAN * width;
        Self::from_fn(|u| norm * (-(u * u) / (2.0 * width * width)).exp(), -span, span, intervals)?.normalized()
    }

    /// Rescales the density to unit Simpson mass.
    pub fn normalized(mut self) -> Result<Self> {
        let mass = self.mass();
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::validation("TabulatedKernel", "density has zero mass"));
        }
        for p in &mut self.density {
            *p /= mass;
        }
        Ok(self)
    }

    pub fn mass(&self) -> f64 {
        simpson_samples(&self.density, self.spacing).expect("shape checked at construction")
    }

    /// `(offset, density)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.density
            .iter()
            .enumerate()
            .map(|(i, p)| (self.start + self.spacing * i as f64, *p))
    }

    /// `(offset, density × Simpson weight)` pairs.
    fn weighted_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.density.len() - 1;
        self.points().enumerate().map(move |(i, (u, p))| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (u, p * w * self.spacing / 3.0)
        })
    }
}

/// Probability density `P_t(T)` of reading `T` at ideal time `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum ClockKernel {
    /// `δ(T - t)`.
    IdealDelta,
    /// Gaussian whose width is the fundamental uncertainty `Δ_T(T)`.
    GaussianFundamental(FundamentalUncertainty),
    /// Gaussian of fixed width in seconds.
    GaussianFixed { width: f64 },
    Tabulated(TabulatedKernel),
}

impl ClockKernel {
    pub fn validate(&self) -> Result<()> {
        match self {
            ClockKernel::IdealDelta | ClockKernel::GaussianFundamental(_) => Ok(()),
            ClockKernel::GaussianFixed { width } => {
                if *width >= 0.0 && width.is_finite() {
                    Ok(())
                } else {
                    Err(Error::validation("ClockKernel", format!("Gaussian width must be non-negative, got {width}")))
                }
            }
            ClockKernel::Tabulated(table) => {
                let mass = table.mass();
                if (mass - 1.0).abs() > KERNEL_NORMALIZATION_TOLERANCE {
                    Err(Error::validation(
                        "ClockKernel",
                        format!("tabulated kernel integrates to {mass}, not 1"),
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Gaussian width at reading `T`, if the kernel is Gaussian (zero for the
    /// ideal clock).
    pub fn gaussian_width(&self, reading: f64) -> Result<Option<f64>> {
        match self {
            ClockKernel::IdealDelta => Ok(Some(0.0)),
            ClockKernel::GaussianFundamental(law) => law.delta_t(reading).map(Some),
            ClockKernel::GaussianFixed { width } => Ok(Some(*width)),
            ClockKernel::Tabulated(_) => Ok(None),
        }
    }
}

/// Multiplies energy-basis coherences by `exp(-(E_n - E_m)² δ² / 2ħ²)`.
pub fn dephase(rho: &DensityOperator, h: &HamiltonianSpec, delta: f64) -> Result<DensityOperator> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::domain("dephase", format!("width must be non-negative, got {delta}")));
    }
    if rho.dim() != h.dim() {
        return Err(Error::dims("dephase", h.dim(), rho.dim()));
    }
    if delta == 0.0 {
        return Ok(rho.clone());
    }
    let scale = delta / h.hbar();
    let out = h.map_energy_basis(rho.matrix(), |gap| {
        let x = gap * scale;
        C64::new((-0.5 * x * x).exp(), 0.0)
    });
    Ok(DensityOperator::from_matrix_unchecked(out, rho.tolerance()))
}

/// State conditioned on the clock reading `T`.
pub fn effective_state(
    rho0: &DensityOperator,
    h: &HamiltonianSpec,
    reading: f64,
    kernel: &ClockKernel,
) -> Result<DensityOperator> {
    if !(reading >= 0.0 && reading.is_finite()) {
        return Err(Error::domain("effective_state", format!("clock reading must be non-negative, got {reading}")));
    }
    if rho0.dim() != h.dim() {
        return Err(Error::dims("effective_state", h.dim(), rho0.dim()));
    }
    kernel.validate()?;
    match kernel {
        ClockKernel::Tabulated(table) => Ok(tabulated_average(rho0, h, reading, table)),
        gaussian => {
            let width = gaussian.gaussian_width(reading)?.expect("non-tabulated kernel");
            unitary_evolve(&dephase(rho0, h, width)?, h, reading)
        }
    }
}

/// `Σ_i w_i f(u_i) ρ(T - u_i)`, accumulated in the energy basis.
fn tabulated_average(
    rho0: &DensityOperator,
    h: &HamiltonianSpec,
    reading: f64,
    table: &TabulatedKernel,
) -> DensityOperator {
    let n = h.dim();
    let energies = h.energies();
    let hbar = h.hbar();
    let weighted: Vec<(f64, f64)> = table.weighted_points().collect();
    let mut factors = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let omega = (energies[i] - energies[j]) / hbar;
            factors[(i, j)] = weighted
                .iter()
                .map(|&(u, w)| C64::from_polar(w, -omega * (reading - u)))
                .sum();
        }
    }
    let in_basis = h.to_energy_basis(rho0.matrix()).hadamard(&factors);
    DensityOperator::from_matrix_unchecked(h.from_energy_basis(&in_basis), rho0.tolerance())
}

/// Integrates `dρ/dT = -(i/ħ)[H,ρ] - (1/2ħ²) d(Δ_T²)/dT [H,[H,ρ]]` from
/// `T0` to `T1` with the explicit midpoint rule, starting from the
/// closed-form effective state at `T0`.
pub fn master_equation_evolve(
    rho0: &DensityOperator,
    h: &HamiltonianSpec,
    law: &FundamentalUncertainty,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<DensityOperator> {
    const CTX: &str = "master_equation_evolve";
    if !(t0 > 0.0 && t0.is_finite()) {
        return Err(Error::domain(
            CTX,
            format!("start reading must be strictly positive (got {t0}); the dephasing rate is singular at T = 0, use effective_state there"),
        ));
    }
    if !(t1 > t0 && t1.is_finite()) {
        return Err(Error::domain(CTX, format!("end reading {t1} must exceed start {t0}")));
    }
    if steps == 0 {
        return Err(Error::domain(CTX, "need at least one step"));
    }
    let omega = h.matrix().scale_real(1.0 / h.hbar());
    let rhs = |reading: f64, rho: &ComplexMatrix| -> Result<ComplexMatrix> {
        let rate = law.delta_t_squared_rate(reading)?;
        let comm = omega.commutator(rho);
        let double = omega.commutator(&comm);
        Ok(&comm.scale(C64::new(0.0, -1.0)) - &double.scale_real(0.5 * rate))
    };

    let start = effective_state(rho0, h, t0, &ClockKernel::GaussianFundamental(*law))?;
    let dt = (t1 - t0) / steps as f64;
    let mut rho = start.into_matrix();
    for k in 0..steps {
        let reading = t0 + dt * k as f64;
        let k1 = rhs(reading, &rho)?;
        let mid = &rho + &k1.scale_real(0.5 * dt);
        let k2 = rhs(reading + 0.5 * dt, &mid)?;
        rho = &rho + &k2.scale_real(dt);
    }
    Ok(DensityOperator::from_matrix_unchecked(rho, rho0.tolerance()))
}

/// A finite-dimensional clock with a projective reading observable
/// `T̂ = Σ_T T Π_T`.
#[derive(Debug, Clone)]
pub struct ClockModel {
    hamiltonian: HamiltonianSpec,
    initial_state: DensityOperator,
    readings: Vec<(f64, ComplexMatrix)>,
}

impl ClockModel {
    pub fn new(
        hamiltonian: HamiltonianSpec,
        initial_state: DensityOperator,
        readings: Vec<(f64, ComplexMatrix)>,
    ) -> Result<Self> {
        const CTX: &str = "ClockModel";
        let d = hamiltonian.dim();
        if initial_state.dim() != d {
            return Err(Error::dims(CTX, d, initial_state.dim()));
        }
        if readings.is_empty() {
            return Err(Error::validation(CTX, "no reading projectors"));
        }
        let mut total = ComplexMatrix::zeros(d, d);
        for (a, (ta, pa)) in readings.iter().enumerate() {
            if pa.rows() != d || pa.cols() != d {
                return Err(Error::dims(CTX, d, pa.rows()));
            }
            if !ta.is_finite() {
                return Err(Error::validation(CTX, "reading values must be finite"));
            }
            if (&(pa * pa) - pa).max_abs() > 1e-10 || pa.hermiticity_defect() > 1e-10 {
                return Err(Error::validation(CTX, format!("Π for reading {ta} is not a projector")));
            }
            for (tb, pb) in &readings[a + 1..] {
                if ta == tb {
                    return Err(Error::validation(CTX, format!("reading {ta} listed twice")));
                }
                if (pa * pb).max_abs() > 1e-10 {
                    return Err(Error::validation(CTX, format!("projectors for {ta} and {tb} are not orthogonal")));
                }
            }
            total = &total + pa;
        }
        if total.max_abs_diff(&ComplexMatrix::identity(d)) > 1e-10 {
            return Err(Error::validation(CTX, "reading projectors do not sum to the identity"));
        }
        Ok(Self {
            hamiltonian,
            initial_state,
            readings,
        })
    }

    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }

    pub fn initial_state(&self) -> &DensityOperator {
        &self.initial_state
    }

    pub fn readings(&self) -> impl Iterator<Item = f64> + '_ {
        self.readings.iter().map(|(t, _)| *t)
    }

    pub fn projector(&self, reading: f64) -> Result<&ComplexMatrix> {
        self.readings
            .iter()
            .find(|(t, _)| (t - reading).abs() <= 1e-12 * reading.abs().max(1.0))
            .map(|(_, p)| p)
            .ok_or_else(|| Error::validation("ClockModel", format!("clock has no reading {reading}")))
    }

    /// `Tr[Π_T ρ_C(t)]`
    pub fn reading_probability(&self, reading: f64, ideal_time: f64) -> Result<f64> {
        let projector = self.projector(reading)?;
        let rho = unitary_evolve(&self.initial_state, &self.hamiltonian, ideal_time)?;
        Ok((projector * rho.matrix()).trace().re)
    }

    /// The kernel `P_t(T)` for fixed `T`, tabulated over the offset
    /// `u = T - t` for `t ∈ [-t0, t0]` and normalized over that window.
    pub fn reading_kernel(&self, reading: f64, window: f64, intervals: usize) -> Result<TabulatedKernel> {
        let table = TabulatedKernel::from_fn(
            |u| self.reading_probability(reading, reading - u).unwrap_or(0.0).max(0.0),
            reading - window,
            reading + window,
            intervals,
        )?;
        self.projector(reading)?;
        table.normalized()
    }
}

/// Default integration half-window `T + 8 Δ_T(T)`.
pub fn default_window(reading: f64, law: &FundamentalUncertainty) -> Result<f64> {
    Ok(reading + 8.0 * law.delta_t(reading)?)
}

/// Conditional probability of the projector `P_O` given reading `T`:
///
/// `∫ Tr[P_O P_T ρ(t) P_T] dt / ∫ Tr[P_T ρ(t)] dt` over `t ∈ [-t0, t0]`,
///
/// where `ρ(t) = ρ_S(t) ⊗ ρ_C(t)` evolves the system and clock
/// independently.
pub fn conditional_probability(
    outcome: &Observable,
    reading: f64,
    system: &DensityOperator,
    h: &HamiltonianSpec,
    clock: &ClockModel,
    window: f64,
    intervals: usize,
) -> Result<f64> {
    const CTX: &str = "conditional_probability";
    if system.dim() != h.dim() {
        return Err(Error::dims(CTX, h.dim(), system.dim()));
    }
    if outcome.matrix().rows() != system.dim() {
        return Err(Error::dims(CTX, system.dim(), outcome.matrix().rows()));
    }
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::domain(CTX, "integration window must be positive"));
    }
    let dc = clock.hamiltonian.dim();
    let ds = system.dim();
    let clock_proj = tensor_product(&ComplexMatrix::identity(ds), clock.projector(reading)?);
    let joint_outcome = &tensor_product(outcome.matrix(), &ComplexMatrix::identity(dc)) * &clock_proj;

    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for (t, w) in simpson_nodes(-window, window, intervals)? {
        let rs = unitary_evolve(system, h, t)?;
        let rc = unitary_evolve(&clock.initial_state, &clock.hamiltonian, t)?;
        let joint = tensor_product(rs.matrix(), rc.matrix());
        let projected = &(&clock_proj * &joint) * &clock_proj;
        numerator += w * (&joint_outcome * &projected).trace().re;
        denominator += w * (&clock_proj * &joint).trace().re;
    }
    let mean_weight = denominator / (2.0 * window);
    if mean_weight.is_nan() || mean_weight < 1e-12 {
        return Err(Error::ClockNeverReads {
            reading,
            weight: mean_weight,
        });
    }
    Ok(numerator / denominator)
}

/// `Tr[P_O ρ(T)]` with the effective state of the given kernel.
pub fn conditional_probability_with_kernel(
    outcome: &Observable,
    reading: f64,
    system: &DensityOperator,
    h: &HamiltonianSpec,
    kernel: &ClockKernel,
) -> Result<f64> {
    outcome.expectation(&effective_state(system, h, reading, kernel)?)
}
