//! Physical constants and the fundamental time/length uncertainty laws
//! `Δ_T = T_P^p T^(1-p)` and `Δ_L = L_P^p L^(1-p)` (default `p = 2/3`).

use crate::error::{Error, Result};
use crate::magnitude::Magnitude;

/// Reduced Planck constant, J·s.
pub const HBAR_SI: f64 = 1.054571817e-34;
/// Newtonian constant of gravitation, m³ kg⁻¹ s⁻².
pub const G_SI: f64 = 6.67430e-11;
/// Speed of light, m/s.
pub const C_SI: f64 = 2.99792458e8;
/// Boltzmann constant, J/K.
pub const K_B_SI: f64 = 1.380649e-23;

/// Rounded Planck time, s, used in published order-of-magnitude tables.
pub const ROUNDED_PLANCK_TIME: f64 = 5e-44;
/// Rounded Planck length, m.
pub const ROUNDED_PLANCK_LENGTH: f64 = 2e-35;

pub const DEFAULT_EXPONENT: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
    gravitational: f64,
    speed_of_light: f64,
    boltzmann: f64,
    planck_time: f64,
    planck_length: f64,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("PhysicalConstants", format!("{name} must be positive and finite, got {x}")))
    }
}

impl PhysicalConstants {
    /// Builds a constant set with Planck scales derived from `ħ`, `G`, `c`.
    pub fn new(hbar: f64, gravitational: f64, speed_of_light: f64, boltzmann: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        positive("G", gravitational)?;
        positive("c", speed_of_light)?;
        positive("k_B", boltzmann)?;
        let planck_length = (hbar * gravitational / speed_of_light.powi(3)).sqrt();
        Ok(Self {
            hbar,
            gravitational,
            speed_of_light,
            boltzmann,
            planck_time: planck_length / speed_of_light,
            planck_length,
        })
    }

    /// CODATA SI values.
    pub fn si() -> Self {
        Self::new(HBAR_SI, G_SI, C_SI, K_B_SI).expect("SI constants are positive")
    }

    /// SI constants with the Planck scales forced to `5e-44 s` and `2e-35 m`.
    pub fn rounded() -> Self {
        Self::si()
            .with_planck_scales(ROUNDED_PLANCK_TIME, ROUNDED_PLANCK_LENGTH)
            .expect("rounded Planck scales are positive")
    }

    /// Overrides the Planck time and length independently of `ħ`, `G`, `c`.
    /// The relation `T_P = L_P / c` no longer holds afterwards.
    pub fn with_planck_scales(mut self, planck_time: f64, planck_length: f64) -> Result<Self> {
        positive("planck_time", planck_time)?;
        positive("planck_length", planck_length)?;
        self.planck_time = planck_time;
        self.planck_length = planck_length;
        Ok(self)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        self.hbar = hbar;
        Ok(self)
    }

    pub fn with_boltzmann(mut self, boltzmann: f64) -> Result<Self> {
        positive("k_B", boltzmann)?;
        self.boltzmann = boltzmann;
        Ok(self)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn gravitational(&self) -> f64 {
        self.gravitational
    }

    pub fn speed_of_light(&self) -> f64 {
        self.speed_of_light
    }

    pub fn boltzmann(&self) -> f64 {
        self.boltzmann
    }

    pub fn planck_time(&self) -> f64 {
        self.planck_time
    }

    pub fn planck_length(&self) -> f64 {
        self.planck_length
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::si()
    }
}

/// The uncertainty law: constants plus the Planck-scale exponent `p` of the
/// pair `(p, 1 - p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalUncertainty {
    constants: PhysicalConstants,
    exponent: f64,
}

impl FundamentalUncertainty {
    pub fn new(constants: PhysicalConstants, exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent < 1.0) {
            return Err(Error::domain(
                "FundamentalUncertainty",
                format!("exponent must lie in (0, 1), got {exponent}"),
            ));
        }
        Ok(Self { constants, exponent })
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// `Δ_T(T)` in seconds.
    pub fn delta_t(&self, elapsed: f64) -> Result<f64> {
        scaled_uncertainty("delta_T", self.constants.planck_time, elapsed, self.exponent)
    }

    /// `Δ_L(L)` in meters.
    pub fn delta_l(&self, length: f64) -> Result<f64> {
        scaled_uncertainty("delta_L", self.constants.planck_length, length, self.exponent)
    }

    pub fn delta_t_magnitude(&self, elapsed: f64) -> Result<Magnitude> {
        check_arg("delta_T", elapsed)?;
        Ok(scaled_magnitude(self.constants.planck_time, elapsed, self.exponent))
    }

    pub fn delta_l_magnitude(&self, length: f64) -> Result<Magnitude> {
        check_arg("delta_L", length)?;
        Ok(scaled_magnitude(self.constants.planck_length, length, self.exponent))
    }

    /// `d(Δ_T²)/dT = 2(1-p) T_P^(2p) T^(1-2p)`, singular at `T = 0` when
    /// `p > 1/2`.
    pub fn delta_t_squared_rate(&self, elapsed: f64) -> Result<f64> {
        if !(elapsed > 0.0 && elapsed.is_finite()) {
            return Err(Error::domain(
                "delta_T_squared_rate",
                format!("elapsed time must be positive, got {elapsed}"),
            ));
        }
        let p = self.exponent;
        let mag = Magnitude::from_f64(self.constants.planck_time).powf(2.0 * p)
            * Magnitude::from_f64(elapsed).powf(1.0 - 2.0 * p)
            * (2.0 * (1.0 - p));
        Ok(mag.to_f64().unwrap_or(0.0))
    }
}

impl Default for FundamentalUncertainty {
    fn default() -> Self {
        Self {
            constants: PhysicalConstants::si(),
            exponent: DEFAULT_EXPONENT,
        }
    }
}

fn check_arg(context: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(context, format!("interval must be non-negative and finite, got {x}")))
    }
}

fn scaled_magnitude(planck: f64, x: f64, p: f64) -> Magnitude {
    Magnitude::from_f64(planck).powf(p) * Magnitude::from_f64(x).powf(1.0 - p)
}

fn scaled_uncertainty(context: &'static str, planck: f64, x: f64, p: f64) -> Result<f64> {
    check_arg(context, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x >= 1e-100 {
        let direct = planck.powf(p) * x.powf(1.0 - p);
        if direct.is_normal() {
            return Ok(direct);
        }
    }
    Ok(scaled_magnitude(planck, x, p).to_f64().unwrap_or(0.0))
}
