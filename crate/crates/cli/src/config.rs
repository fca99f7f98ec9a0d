//! Strict JSON scenario configuration.
//!
//! Every physical quantity carries its unit in the key name. Unknown keys
//! are rejected at any depth.

use std::path::Path;

use eventclock::clock::{ClockKernel, TabulatedKernel};
use eventclock::decoherence::{MassSpec, OverlapModel, PointerModel, ScatteringScenario, DEFAULT_MASS_DENSITY};
use eventclock::events::{
    variance_floor_constant, SigmaConvention, TauConvention, WavepacketSuperposition, DEFAULT_EPSILON_RANGE,
    REFERENCE_FLOOR_CONSTANT,
};
use eventclock::planck::{FundamentalUncertainty, PhysicalConstants, DEFAULT_EXPONENT};
use eventclock::qcore::{ComplexMatrix, DensityOperator, HamiltonianSpec, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// A complex entry written either as a real number or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cx {
    Real(f64),
    Pair([f64; 2]),
}

impl Cx {
    pub fn value(self) -> C64 {
        match self {
            Cx::Real(re) => C64::new(re, 0.0),
            Cx::Pair([re, im]) => C64::new(re, im),
        }
    }
}

fn complex_vec(v: &[Cx]) -> Vec<C64> {
    v.iter().map(|z| z.value()).collect()
}

fn complex_matrix(key: &str, rows: &[Vec<Cx>]) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| complex_vec(r)).collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| CliError::config(format!("{key}: {e}")))
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub constants: ConstantsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clock: Option<ClockConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointer_model: Option<PointerModelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scattering: Option<ScatteringConfig>,
    #[serde(default)]
    pub event: EventConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolve: Option<EvolveConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub echo: Option<EchoConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event_time: Option<EventTimeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event_table: Option<EventTableConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fr_demo: Option<FrDemoConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

impl ScenarioConfig {
    /// Parses a config, reporting the failing key path and line.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(CliError::Usage("the config file is empty; pass a JSON scenario with --config".into()));
        }
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            CliError::config(format!("at key `{path}` (line {}, column {}): {inner}", inner.line(), inner.column()))
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn law(&self) -> Result<FundamentalUncertainty> {
        self.constants.law()
    }

    pub fn hbar(&self) -> Result<f64> {
        Ok(self.constants.resolve()?.hbar())
    }

    /// Clock kernel, defaulting to the fundamental Gaussian.
    pub fn kernel(&self) -> Result<ClockKernel> {
        match &self.clock {
            Some(c) => c.resolve(self.law()?),
            None => Ok(ClockKernel::GaussianFundamental(self.law()?)),
        }
    }

    /// Names of the blocks present, in a fixed order.
    pub fn blocks(&self) -> Vec<&'static str> {
        let mut out = vec!["constants", "event"];
        for (name, present) in [
            ("clock", self.clock.is_some()),
            ("system", self.system.is_some()),
            ("pointer_model", self.pointer_model.is_some()),
            ("scattering", self.scattering.is_some()),
            ("evolve", self.evolve.is_some()),
            ("echo", self.echo.is_some()),
            ("event_time", self.event_time.is_some()),
            ("event_table", self.event_table.is_some()),
            ("fr_demo", self.fr_demo.is_some()),
            ("sweep", self.sweep.is_some()),
        ] {
            if present {
                out.push(name);
            }
        }
        out
    }
}

pub fn require<'a, T>(block: &'a Option<T>, name: &str, command: &str) -> Result<&'a T> {
    block
        .as_ref()
        .ok_or_else(|| CliError::config(format!("`{command}` needs a `{name}` block")))
}

fn positive(key: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::config(format!("{key} must be positive and finite, got {x}")))
    }
}

fn times(key: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(CliError::config(format!("{key} must list at least one time")));
    }
    for &t in values {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::config(format!("{key} entries must be non-negative and finite, got {t}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantsPreset {
    /// CODATA values with Planck scales derived from `ħ`, `G`, `c`.
    #[default]
    Si,
    /// Planck time and length rounded to `5e-44 s` and `2e-35 m`.
    Rounded,
}

fn default_exponent() -> f64 {
    DEFAULT_EXPONENT
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    #[serde(default)]
    pub preset: ConstantsPreset,
    #[serde(rename = "hbar_J_s", default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(rename = "boltzmann_J_per_K", default, skip_serializing_if = "Option::is_none")]
    pub boltzmann: Option<f64>,
    #[serde(rename = "planck_time_s", default, skip_serializing_if = "Option::is_none")]
    pub planck_time: Option<f64>,
    #[serde(rename = "planck_length_m", default, skip_serializing_if = "Option::is_none")]
    pub planck_length: Option<f64>,
    /// Planck-scale exponent `p` of the pair `(p, 1 - p)`.
    #[serde(default = "default_exponent")]
    pub uncertainty_exponent: f64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        Self {
            preset: ConstantsPreset::Si,
            hbar: None,
            boltzmann: None,
            planck_time: None,
            planck_length: None,
            uncertainty_exponent: DEFAULT_EXPONENT,
        }
    }
}

impl ConstantsConfig {
    pub fn resolve(&self) -> Result<PhysicalConstants> {
        let mut k = match self.preset {
            ConstantsPreset::Si => PhysicalConstants::si(),
            ConstantsPreset::Rounded => PhysicalConstants::rounded(),
        };
        if let Some(h) = self.hbar {
            k = k.with_hbar(positive("constants.hbar_J_s", h)?)?;
        }
        if let Some(kb) = self.boltzmann {
            k = k.with_boltzmann(positive("constants.boltzmann_J_per_K", kb)?)?;
        }
        if self.planck_time.is_some() || self.planck_length.is_some() {
            let tp = positive("constants.planck_time_s", self.planck_time.unwrap_or(k.planck_time()))?;
            let lp = positive("constants.planck_length_m", self.planck_length.unwrap_or(k.planck_length()))?;
            k = k.with_planck_scales(tp, lp)?;
        }
        Ok(k)
    }

    pub fn law(&self) -> Result<FundamentalUncertainty> {
        let p = self.uncertainty_exponent;
        if !(p > 0.0 && p < 1.0) {
            return Err(CliError::config(format!("constants.uncertainty_exponent must lie in (0, 1), got {p}")));
        }
        Ok(FundamentalUncertainty::new(self.resolve()?, p)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Ideal,
    Fundamental,
    GaussianFixed,
    Tabulated,
}

/// Clock kernel selection. `width_s` belongs to `gaussian_fixed`, the
/// `table_*` keys to `tabulated` (a density over the offset `T - t`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClockConfig {
    pub kernel: KernelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_start_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_spacing_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_density_per_s: Option<Vec<f64>>,
}

impl ClockConfig {
    pub fn resolve(&self, law: FundamentalUncertainty) -> Result<ClockKernel> {
        let has_table =
            self.table_start_s.is_some() || self.table_spacing_s.is_some() || self.table_density_per_s.is_some();
        let stray = |what: &str| CliError::config(format!("clock.{what} does not apply to kernel {:?}", self.kernel));
        match self.kernel {
            KernelKind::Ideal | KernelKind::Fundamental => {
                if self.width_s.is_some() {
                    return Err(stray("width_s"));
                }
                if has_table {
                    return Err(stray("table_*"));
                }
                Ok(match self.kernel {
                    KernelKind::Ideal => ClockKernel::IdealDelta,
                    _ => ClockKernel::GaussianFundamental(law),
                })
            }
            KernelKind::GaussianFixed => {
                if has_table {
                    return Err(stray("table_*"));
                }
                let width = self
                    .width_s
                    .ok_or_else(|| CliError::config("clock.width_s is required for gaussian_fixed"))?;
                if !(width >= 0.0 && width.is_finite()) {
                    return Err(CliError::config(format!("clock.width_s must be non-negative, got {width}")));
                }
                Ok(ClockKernel::GaussianFixed { width })
            }
            KernelKind::Tabulated => {
                if self.width_s.is_some() {
                    return Err(stray("width_s"));
                }
                let missing = |k: &str| CliError::config(format!("clock.{k} is required for a tabulated kernel"));
                let start = self.table_start_s.ok_or_else(|| missing("table_start_s"))?;
                let spacing = self.table_spacing_s.ok_or_else(|| missing("table_spacing_s"))?;
                let density = self.table_density_per_s.clone().ok_or_else(|| missing("table_density_per_s"))?;
                Ok(ClockKernel::Tabulated(TabulatedKernel::new(start, spacing, density)?))
            }
        }
    }
}

/// Closed system: a Hamiltonian (diagonal energies or a full matrix) and
/// an initial state (ket or density matrix).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(rename = "energies_J", default, skip_serializing_if = "Option::is_none")]
    pub energies: Option<Vec<f64>>,
    #[serde(rename = "hamiltonian_J", default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<Vec<Vec<Cx>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ket: Option<Vec<Cx>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<Vec<Cx>>>,
}

impl SystemConfig {
    pub fn hamiltonian(&self, hbar: f64) -> Result<HamiltonianSpec> {
        match (&self.energies, &self.hamiltonian) {
            (Some(e), None) => Ok(HamiltonianSpec::from_energies(e, hbar)?),
            (None, Some(m)) => Ok(HamiltonianSpec::new(complex_matrix("system.hamiltonian_J", m)?, hbar)?),
            _ => Err(CliError::config("system needs exactly one of energies_J or hamiltonian_J")),
        }
    }

    pub fn state(&self) -> Result<DensityOperator> {
        match (&self.ket, &self.density) {
            (Some(k), None) => Ok(DensityOperator::pure(&complex_vec(k))?),
            (None, Some(m)) => Ok(DensityOperator::new(complex_matrix("system.density", m)?)?),
            _ => Err(CliError::config("system needs exactly one of ket or density")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapKind {
    Exponential,
    Micro,
}

/// System amplitudes over a pointer basis plus an environment overlap law.
///
/// `exponential` uses `decoherence_time_s` and an optional `initial_overlap`
/// Gram matrix (all ones by default). `micro` evolves one environment state
/// under a branch Hamiltonian per pointer state.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointerModelConfig {
    pub amplitudes: Vec<Cx>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointer_states: Option<Vec<Vec<Cx>>>,
    pub overlap: OverlapKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoherence_time_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_overlap: Option<Vec<Vec<Cx>>>,
    #[serde(rename = "branch_energies_J", default, skip_serializing_if = "Option::is_none")]
    pub branch_energies: Option<Vec<Vec<f64>>>,
    #[serde(rename = "branch_hamiltonians_J", default, skip_serializing_if = "Option::is_none")]
    pub branch_hamiltonians: Option<Vec<Vec<Vec<Cx>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub environment_state: Option<Vec<Cx>>,
}

impl PointerModelConfig {
    pub fn resolve(&self, hbar: f64) -> Result<PointerModel> {
        let n = self.amplitudes.len();
        let stray = |k: &str| CliError::config(format!("pointer_model.{k} does not apply to overlap {:?}", self.overlap));
        let overlap = match self.overlap {
            OverlapKind::Exponential => {
                if self.branch_energies.is_some() || self.branch_hamiltonians.is_some() {
                    return Err(stray("branch_*"));
                }
                if self.environment_state.is_some() {
                    return Err(stray("environment_state"));
                }
                let tau = positive(
                    "pointer_model.decoherence_time_s",
                    self.decoherence_time_s
                        .ok_or_else(|| CliError::config("pointer_model.decoherence_time_s is required"))?,
                )?;
                match &self.initial_overlap {
                    Some(g) => OverlapModel::Exponential {
                        decoherence_time: tau,
                        initial: complex_matrix("pointer_model.initial_overlap", g)?,
                    },
                    None => PointerModel::fully_overlapping(n, tau),
                }
            }
            OverlapKind::Micro => {
                if self.decoherence_time_s.is_some() {
                    return Err(stray("decoherence_time_s"));
                }
                if self.initial_overlap.is_some() {
                    return Err(stray("initial_overlap"));
                }
                let branches = match (&self.branch_energies, &self.branch_hamiltonians) {
                    (Some(es), None) => es
                        .iter()
                        .map(|e| HamiltonianSpec::from_energies(e, hbar))
                        .collect::<eventclock::Result<Vec<_>>>()?,
                    (None, Some(hs)) => hs
                        .iter()
                        .map(|m| HamiltonianSpec::new(complex_matrix("pointer_model.branch_hamiltonians_J", m)?, hbar).map_err(CliError::from))
                        .collect::<Result<Vec<_>>>()?,
                    _ => {
                        return Err(CliError::config(
                            "micro overlap needs exactly one of branch_energies_J or branch_hamiltonians_J",
                        ))
                    }
                };
                let environment = complex_vec(
                    self.environment_state
                        .as_ref()
                        .ok_or_else(|| CliError::config("pointer_model.environment_state is required for micro"))?,
                );
                OverlapModel::Micro { branches, environment }
            }
        };
        let amplitudes = complex_vec(&self.amplitudes);
        Ok(match &self.pointer_states {
            Some(states) => PointerModel::new(states.iter().map(|s| complex_vec(s)).collect(), amplitudes, overlap)?,
            None => PointerModel::computational(amplitudes, overlap)?,
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationConfig {
    pub size_m: f64,
    pub decoherence_time_s: f64,
}

/// Collisional decoherence scenario. The mass is either given directly
/// (`mass_kg`, whichever body it refers to) or as `density · a³`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringConfig {
    pub size_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation_m: Option<f64>,
    pub particle_density_per_m3: f64,
    #[serde(rename = "temperature_K")]
    pub temperature: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_kg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_density_kg_per_m3: Option<f64>,
    /// Anchor `τ_D(a)` used to solve for the mass density.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationConfig>,
}

impl ScatteringConfig {
    pub fn scenario(&self) -> Result<ScatteringScenario> {
        let mass = match (self.mass_kg, self.mass_density_kg_per_m3) {
            (Some(_), Some(_)) => {
                return Err(CliError::config("scattering takes at most one of mass_kg or mass_density_kg_per_m3"))
            }
            (Some(m), None) => MassSpec::Kilograms(m),
            (None, Some(rho)) => MassSpec::Density(rho),
            (None, None) => MassSpec::Density(DEFAULT_MASS_DENSITY),
        };
        let s = ScatteringScenario {
            size: self.size_m,
            separation: self.separation_m.unwrap_or(self.size_m),
            mass,
            particle_density: self.particle_density_per_m3,
            temperature: self.temperature,
        };
        s.validate()?;
        if let Some(c) = self.calibration {
            positive("scattering.calibration.size_m", c.size_m)?;
            positive("scattering.calibration.decoherence_time_s", c.decoherence_time_s)?;
        }
        Ok(s)
    }

    pub fn calibration(&self) -> Option<eventclock::events::Calibration> {
        self.calibration.map(|c| eventclock::events::Calibration {
            size: c.size_m,
            decoherence_time: c.decoherence_time_s,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauConventionConfig {
    Crossing,
    #[default]
    TablePrefactor,
}

impl From<TauConventionConfig> for TauConvention {
    fn from(c: TauConventionConfig) -> Self {
        match c {
            TauConventionConfig::Crossing => TauConvention::Crossing,
            TauConventionConfig::TablePrefactor => TauConvention::TablePrefactor,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaConventionConfig {
    #[default]
    Scaled,
    Fundamental,
}

impl From<SigmaConventionConfig> for SigmaConvention {
    fn from(c: SigmaConventionConfig) -> Self {
        match c {
            SigmaConventionConfig::Scaled => SigmaConvention::Scaled,
            SigmaConventionConfig::Fundamental => SigmaConvention::Fundamental,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FloorMode {
    /// Numerical infimum of the variance coefficient.
    #[default]
    Computed,
    /// A fixed constant, `2` unless `floor_constant` says otherwise.
    Forced,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventConfig {
    #[serde(default)]
    pub tau_convention: TauConventionConfig,
    #[serde(default)]
    pub floor: FloorMode,
    #[serde(default)]
    pub sigma_convention: SigmaConventionConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub floor_constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_range: Option<[f64; 2]>,
}

/// The floor constant in use and, when computed, where the infimum sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedFloor {
    pub value: f64,
    pub epsilon: Option<f64>,
}

impl EventConfig {
    pub fn floor(&self, law: &FundamentalUncertainty) -> Result<ResolvedFloor> {
        match self.floor {
            FloorMode::Forced => {
                if self.epsilon_range.is_some() {
                    return Err(CliError::config("event.epsilon_range only applies to floor = computed"));
                }
                let value = positive("event.floor_constant", self.floor_constant.unwrap_or(REFERENCE_FLOOR_CONSTANT))?;
                Ok(ResolvedFloor { value, epsilon: None })
            }
            FloorMode::Computed => {
                if self.floor_constant.is_some() {
                    return Err(CliError::config("event.floor_constant requires floor = forced"));
                }
                let range = self.epsilon_range.map_or(DEFAULT_EPSILON_RANGE, |[a, b]| (a, b));
                if !(range.0 > 0.0 && range.1 > range.0 && range.1.is_finite()) {
                    return Err(CliError::config(format!(
                        "event.epsilon_range must be increasing and positive, got [{}, {}]",
                        range.0, range.1
                    )));
                }
                let f = variance_floor_constant(self.sigma_convention.into(), range, law.exponent())?;
                Ok(ResolvedFloor {
                    value: f.value,
                    epsilon: Some(f.epsilon),
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvolveMethod {
    #[default]
    ClosedForm,
    MasterEquation,
}

fn default_steps() -> usize {
    1000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub times_s: Vec<f64>,
    #[serde(default)]
    pub method: EvolveMethod,
    /// Midpoint steps between consecutive master-equation output times.
    #[serde(default = "default_steps")]
    pub steps_per_interval: usize,
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<()> {
        times("evolve.times_s", &self.times_s)?;
        if self.method == EvolveMethod::MasterEquation {
            if self.steps_per_interval == 0 {
                return Err(CliError::config("evolve.steps_per_interval must be at least 1"));
            }
            if self.times_s.windows(2).any(|w| w[1] <= w[0]) || self.times_s[0] <= 0.0 {
                return Err(CliError::config(
                    "master_equation needs positive, strictly increasing evolve.times_s",
                ));
            }
        }
        Ok(())
    }
}

fn default_witness() -> [usize; 2] {
    [0, 1]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EchoConfig {
    pub times_s: Vec<f64>,
    /// Pointer indices `(j, k)` of the coherence witness.
    #[serde(default = "default_witness")]
    pub witness: [usize; 2],
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavepacketConfig {
    pub a: Cx,
    pub b: Cx,
    pub width_m: f64,
}

/// Event timescale inputs: either a direct `(τ_D, L)` pair or, when both
/// are absent, the `scattering` block.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventTimeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoherence_time_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation_m: Option<f64>,
    #[serde(default)]
    pub echo_times_s: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavepacket: Option<WavepacketConfig>,
}

impl EventTimeConfig {
    pub fn wavepacket(&self, separation: f64) -> Result<Option<WavepacketSuperposition>> {
        self.wavepacket
            .map(|w| {
                WavepacketSuperposition::new(w.a.value(), w.b.value(), separation, w.width_m).map_err(CliError::from)
            })
            .transpose()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventTableConfig {
    pub sizes_m: Vec<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrDemoConfig {
    /// Amplitudes over `|h0⟩, |h1⟩, |t0⟩, |t1⟩`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<Cx>>,
    #[serde(rename = "energies_J", default, skip_serializing_if = "Option::is_none")]
    pub energies: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times_s: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Echo bound and suppression against the echo time `T`.
    EchoTimeS,
    /// Variance coefficient against `ε = σ/L`.
    Epsilon,
    /// Event table against the size `a`.
    SizeM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepConfig {
    /// Sweep points in increasing order.
    pub fn values(&self) -> Result<Vec<f64>> {
        let (a, b, n) = (self.start, self.stop, self.points);
        if n < 2 {
            return Err(CliError::config(format!("sweep.points must be at least 2, got {n}")));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(CliError::config(format!(
                "sweep range must be finite and increasing, got start {a}, stop {b}"
            )));
        }
        let last = (n - 1) as f64;
        Ok(match self.spacing {
            Spacing::Linear => (0..n).map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / last }).collect(),
            Spacing::Log => {
                if a <= 0.0 {
                    return Err(CliError::config(format!("log spacing needs a positive start, got {a}")));
                }
                let (la, lb) = (a.log10(), b.log10());
                (0..n)
                    .map(|i| match i {
                        0 => a,
                        i if i == n - 1 => b,
                        i => 10f64.powf(la + (lb - la) * i as f64 / last),
                    })
                    .collect()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_is_usage_error() {
        assert!(matches!(ScenarioConfig::parse("  \n"), Err(CliError::Usage(_))));
    }

    #[test]
    fn unknown_keys_rejected_with_path() {
        let err = ScenarioConfig::parse(r#"{"scattering": {"size": 1}}"#).unwrap_err();
        let msg = err.to_string();
        assert_eq!(err.exit_code(), 2);
        assert!(msg.contains("scattering"), "{msg}");
        assert!(msg.contains("line 1"), "{msg}");
    }

    #[test]
    fn complex_entries() {
        let cfg = ScenarioConfig::parse(r#"{"system": {"energies_J": [0, 1], "ket": [[0.6, 0], [0, 0.8]]}}"#).unwrap();
        let s = cfg.system.unwrap().state().unwrap();
        assert!((s.matrix()[(0, 1)] - C64::new(0.0, -0.48)).norm() < 1e-15);
    }

    #[test]
    fn sweep_ranges() {
        let mut s = SweepConfig {
            parameter: SweepParameter::Epsilon,
            start: 1.0,
            stop: 1e4,
            points: 5,
            spacing: Spacing::Log,
        };
        let v = s.values().unwrap();
        assert_eq!(v[0], 1.0);
        assert_eq!(v[4], 1e4);
        assert!((v[2] - 100.0).abs() < 1e-12);
        s.stop = 0.5;
        assert!(s.values().is_err());
        s.stop = 2.0;
        s.points = 1;
        assert!(s.values().is_err());
    }

    #[test]
    fn floor_modes() {
        let law = FundamentalUncertainty::default();
        let forced = EventConfig {
            floor: FloorMode::Forced,
            ..Default::default()
        };
        assert_eq!(forced.floor(&law).unwrap().value, 2.0);
        let computed = EventConfig::default().floor(&law).unwrap();
        assert!((computed.value - 0.5).abs() < 1e-9);
        let bad = EventConfig {
            floor_constant: Some(3.0),
            ..Default::default()
        };
        assert!(bad.floor(&law).is_err());
    }

    #[test]
    fn kernel_keys_must_match_kind() {
        let law = FundamentalUncertainty::default();
        let c = ClockConfig {
            kernel: KernelKind::Fundamental,
            width_s: Some(1.0),
            table_start_s: None,
            table_spacing_s: None,
            table_density_per_s: None,
        };
        assert!(c.resolve(law).is_err());
    }
}
