//! Environmental decoherence: pointer-basis models, the event (pointer
//! diagonal) projection and the collisional scattering timescale.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::magnitude::Magnitude;
use crate::planck::PhysicalConstants;
use crate::qcore::{
    evolve_ket, hermitian_eigendecomposition, inner, tensor_product, ComplexMatrix, DensityOperator,
    HamiltonianSpec, C64,
};

/// How the environment branch states overlap as time goes on.
#[derive(Debug, Clone, PartialEq)]
pub enum OverlapModel {
    /// `⟨E_j(t)|E_k(t)⟩ = g_jk(0) e^{-|t|/τ_D}` for `j ≠ k`.
    Exponential {
        decoherence_time: f64,
        initial: ComplexMatrix,
    },
    /// Exact branch evolution `|E_j(t)⟩ = e^{-iH_j t/ħ}|E_r⟩`.
    Micro {
        branches: Vec<HamiltonianSpec>,
        environment: Vec<C64>,
    },
}

/// System amplitudes over a pointer basis plus an environment overlap law.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerModel {
    pointer_states: Vec<Vec<C64>>,
    amplitudes: Vec<C64>,
    overlap: OverlapModel,
}

/// Checks that `states` are orthonormal vectors of a common dimension.
pub fn check_orthonormal(context: &'static str, states: &[Vec<C64>], tol: f64) -> Result<usize> {
    let dim = states.first().map_or(0, Vec::len);
    if dim == 0 {
        return Err(Error::validation(context, "no pointer states"));
    }
    for (j, a) in states.iter().enumerate() {
        if a.len() != dim {
            return Err(Error::dims(context, dim, a.len()));
        }
        for (k, b) in states.iter().enumerate().skip(j) {
            let want = if j == k { 1.0 } else { 0.0 };
            if (inner(a, b) - C64::new(want, 0.0)).norm() > tol {
                return Err(Error::validation(
                    context,
                    format!("pointer states {j} and {k} are not orthonormal"),
                ));
            }
        }
    }
    Ok(dim)
}

impl PointerModel {
    pub fn new(pointer_states: Vec<Vec<C64>>, amplitudes: Vec<C64>, overlap: OverlapModel) -> Result<Self> {
        const CTX: &str = "PointerModel";
        check_orthonormal(CTX, &pointer_states, 1e-10)?;
        let n = pointer_states.len();
        if amplitudes.len() != n {
            return Err(Error::dims(CTX, n, amplitudes.len()));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::validation(CTX, format!("amplitudes have Σ|α|² = {norm}, not 1")));
        }
        match &overlap {
            OverlapModel::Exponential {
                decoherence_time,
                initial,
            } => {
                if !(*decoherence_time > 0.0 && decoherence_time.is_finite()) {
                    return Err(Error::domain(CTX, "decoherence time must be positive"));
                }
                if initial.rows() != n || initial.cols() != n {
                    return Err(Error::dims(CTX, format!("{n}x{n} initial overlaps"), initial.rows()));
                }
                for j in 0..n {
                    if (initial[(j, j)] - C64::new(1.0, 0.0)).norm() > 1e-12 {
                        return Err(Error::validation(CTX, format!("initial overlap g_{j}{j} must be 1")));
                    }
                    for k in 0..n {
                        if initial[(j, k)].norm() > 1.0 + 1e-12 {
                            return Err(Error::validation(CTX, format!("|g_{j}{k}(0)| exceeds 1")));
                        }
                    }
                }
                check_gram("PointerModel", initial)?;
            }
            OverlapModel::Micro { branches, environment } => {
                if branches.len() != n {
                    return Err(Error::dims(CTX, format!("{n} branch Hamiltonians"), branches.len()));
                }
                let de = environment.len();
                if let Some(b) = branches.iter().find(|b| b.dim() != de) {
                    return Err(Error::dims(CTX, de, b.dim()));
                }
                if branches.iter().any(|b| b.hbar() != branches[0].hbar()) {
                    return Err(Error::validation(CTX, "branch Hamiltonians use different ħ"));
                }
                let en: f64 = environment.iter().map(|z| z.norm_sqr()).sum();
                if (en - 1.0).abs() > 1e-12 {
                    return Err(Error::validation(CTX, "environment state is not normalized"));
                }
            }
        }
        Ok(Self {
            pointer_states,
            amplitudes,
            overlap,
        })
    }

    /// Pointer basis = computational basis of dimension `amplitudes.len()`.
    pub fn computational(amplitudes: Vec<C64>, overlap: OverlapModel) -> Result<Self> {
        let n = amplitudes.len();
        let basis = (0..n)
            .map(|j| (0..n).map(|i| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        Self::new(basis, amplitudes, overlap)
    }

    /// Exponential overlaps with `g_jk(0) = 1` for every pair.
    pub fn fully_overlapping(n: usize, decoherence_time: f64) -> OverlapModel {
        OverlapModel::Exponential {
            decoherence_time,
            initial: ComplexMatrix::from_fn(n, n, |_, _| C64::new(1.0, 0.0)),
        }
    }

    pub fn pointer_states(&self) -> &[Vec<C64>] {
        &self.pointer_states
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn overlap_model(&self) -> &OverlapModel {
        &self.overlap
    }

    pub fn system_dim(&self) -> usize {
        self.pointer_states[0].len()
    }

    pub fn decoherence_time(&self) -> Option<f64> {
        match &self.overlap {
            OverlapModel::Exponential { decoherence_time, .. } => Some(*decoherence_time),
            OverlapModel::Micro { .. } => None,
        }
    }

    /// `⟨E_j(t)|E_k(t)⟩`
    pub fn overlap(&self, j: usize, k: usize, t: f64) -> Result<C64> {
        let n = self.pointer_states.len();
        if j >= n || k >= n {
            return Err(Error::validation("overlap", format!("pointer index out of range (have {n})")));
        }
        if !t.is_finite() {
            return Err(Error::domain("overlap", "time must be finite"));
        }
        match &self.overlap {
            OverlapModel::Exponential {
                decoherence_time,
                initial,
            } => Ok(if j == k {
                C64::new(1.0, 0.0)
            } else {
                initial[(j, k)] * (-t.abs() / decoherence_time).exp()
            }),
            OverlapModel::Micro { branches, environment } => {
                let ej = evolve_ket(environment, &branches[j], t)?;
                let ek = evolve_ket(environment, &branches[k], t)?;
                Ok(inner(&ej, &ek))
            }
        }
    }

    /// `ψ = Σ α_j |φ_j⟩`
    pub fn system_ket(&self) -> Vec<C64> {
        let d = self.system_dim();
        let mut psi = vec![C64::new(0.0, 0.0); d];
        for (a, phi) in self.amplitudes.iter().zip(&self.pointer_states) {
            for (p, x) in psi.iter_mut().zip(phi) {
                *p += a * x;
            }
        }
        psi
    }

    /// `Σ_jk α_j α_k* ⟨E_k(t)|E_j(t)⟩ |φ_j⟩⟨φ_k|`
    pub fn reduced_system_state(&self, t: f64) -> Result<DensityOperator> {
        let n = self.pointer_states.len();
        let gram = ComplexMatrix::from_fn(n, n, |j, k| self.overlap(j, k, t).unwrap_or_default());
        check_gram("reduced_system_state", &gram)?;
        let d = self.system_dim();
        let mut rho = ComplexMatrix::zeros(d, d);
        for j in 0..n {
            for k in 0..n {
                // Tr_E |E_j⟩⟨E_k| = ⟨E_k|E_j⟩
                let coeff = self.amplitudes[j] * self.amplitudes[k].conj() * gram[(k, j)];
                let term = ComplexMatrix::outer(&self.pointer_states[j], &self.pointer_states[k]).scale(coeff);
                rho = &rho + &term;
            }
        }
        DensityOperator::new(rho)
    }

    /// `Σ_j |α_j|² |φ_j⟩⟨φ_j|`
    pub fn event_state(&self) -> DensityOperator {
        let d = self.system_dim();
        let mut rho = ComplexMatrix::zeros(d, d);
        for (a, phi) in self.amplitudes.iter().zip(&self.pointer_states) {
            rho = &rho + &ComplexMatrix::projector(phi).scale_real(a.norm_sqr());
        }
        DensityOperator::from_matrix_unchecked(rho, crate::qcore::DEFAULT_TOLERANCE)
    }

    /// Joint description of a micro-model: the initial product state
    /// `|ψ⟩⟨ψ| ⊗ |E_r⟩⟨E_r|`, the commuting Hamiltonian
    /// `Σ_j |φ_j⟩⟨φ_j| ⊗ H_j` and the environment dimension.
    pub fn joint(&self) -> Result<JointModel> {
        let OverlapModel::Micro { branches, environment } = &self.overlap else {
            return Err(Error::validation(
                "PointerModel::joint",
                "only micro-models have an explicit environment",
            ));
        };
        let de = environment.len();
        let d = self.system_dim();
        let mut h = ComplexMatrix::zeros(d * de, d * de);
        for (phi, branch) in self.pointer_states.iter().zip(branches) {
            h = &h + &tensor_product(&ComplexMatrix::projector(phi), branch.matrix());
        }
        let hamiltonian = HamiltonianSpec::new(h, branches[0].hbar())?;
        let system = DensityOperator::pure(&self.system_ket())?;
        let env = DensityOperator::pure(environment)?;
        Ok(JointModel {
            state: system.tensor(&env),
            hamiltonian,
            pointer_states: self.pointer_states.clone(),
            environment_dim: de,
        })
    }
}

/// A system-environment state with its pointer basis.
#[derive(Debug, Clone)]
pub struct JointModel {
    pub state: DensityOperator,
    pub hamiltonian: HamiltonianSpec,
    pub pointer_states: Vec<Vec<C64>>,
    pub environment_dim: usize,
}

fn check_gram(context: &'static str, gram: &ComplexMatrix) -> Result<()> {
    let min = hermitian_eigendecomposition(&gram.hermitian_part())?.values[0];
    if min < -1e-10 {
        return Err(Error::validation(
            context,
            format!("overlap matrix is not positive semidefinite (eigenvalue {min:e})"),
        ));
    }
    Ok(())
}

/// `Σ_j (|φ_j⟩⟨φ_j| ⊗ 1_E) ρ (|φ_j⟩⟨φ_j| ⊗ 1_E)`: the classically
/// interpretable mixture over pointer states.
///
/// Fails when the pointer set does not cover the support of `rho` (the
/// projected operator would lose trace).
pub fn event_map(
    rho: &DensityOperator,
    pointer_states: &[Vec<C64>],
    environment_dim: usize,
) -> Result<DensityOperator> {
    const CTX: &str = "event_map";
    let ds = check_orthonormal(CTX, pointer_states, 1e-10)?;
    if ds * environment_dim != rho.dim() {
        return Err(Error::dims(CTX, format!("{ds}*{environment_dim}"), rho.dim()));
    }
    let id = ComplexMatrix::identity(environment_dim);
    let mut out = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for phi in pointer_states {
        let p = tensor_product(&ComplexMatrix::projector(phi), &id);
        out = &out + &(&(&p * rho.matrix()) * &p);
    }
    DensityOperator::with_tolerance(out.hermitian_part(), rho.tolerance())
}

/// Mass of the central system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MassSpec {
    Kilograms(f64),
    /// `M = density · a³`.
    Density(f64),
}

/// Collisional decoherence of a spatial superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringScenario {
    /// Cross-section size `a`, m.
    pub size: f64,
    /// Superposition separation `L`, m.
    pub separation: f64,
    pub mass: MassSpec,
    /// Environment particle density `ν`, m⁻³.
    pub particle_density: f64,
    /// Environment temperature, K.
    pub temperature: f64,
}

/// Mass density used when none is configured, kg/m³.
pub const DEFAULT_MASS_DENSITY: f64 = 2.65e3;

impl ScatteringScenario {
    pub fn validate(&self) -> Result<()> {
        let mass_value = match self.mass {
            MassSpec::Kilograms(m) | MassSpec::Density(m) => m,
        };
        for (name, v) in [
            ("size", self.size),
            ("separation", self.separation),
            ("mass", mass_value),
            ("particle density", self.particle_density),
            ("temperature", self.temperature),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain("ScatteringScenario", format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn mass_kg(&self) -> f64 {
        match self.mass {
            MassSpec::Kilograms(m) => m,
            MassSpec::Density(rho) => (Magnitude::from_f64(rho) * Magnitude::from_f64(self.size).powf(3.0))
                .to_f64()
                .unwrap_or(0.0),
        }
    }

    fn mass_magnitude(&self) -> Magnitude {
        match self.mass {
            MassSpec::Kilograms(m) => Magnitude::from_f64(m),
            MassSpec::Density(rho) => Magnitude::from_f64(rho) * Magnitude::from_f64(self.size).powf(3.0),
        }
    }

    /// Same scenario at a new size with `L = a`, keeping the mass density.
    pub fn rescaled(&self, size: f64) -> Self {
        let mass = match self.mass {
            MassSpec::Kilograms(m) => MassSpec::Density(m / self.size.powi(3)),
            density => density,
        };
        Self {
            size,
            separation: size,
            mass,
            ..*self
        }
    }
}

/// `(√(2π)·8 / 3ħ²) ν a² (k_B T)^{3/2}`: everything in Λ except `√M`.
fn scattering_prefactor(s: &ScatteringScenario, k: &PhysicalConstants) -> Magnitude {
    Magnitude::from_f64((2.0 * PI).sqrt() * 8.0 / 3.0)
        / Magnitude::from_f64(k.hbar()).powf(2.0)
        * Magnitude::from_f64(s.particle_density)
        * Magnitude::from_f64(s.size).powf(2.0)
        * Magnitude::from_f64(k.boltzmann() * s.temperature).powf(1.5)
}

/// Scattering constant `Λ = (√(2π)·8 / 3ħ²) ν √M a² (k_B T)^{3/2}`,
/// in m⁻² s⁻¹.
pub fn scattering_constant(s: &ScatteringScenario, k: &PhysicalConstants) -> Result<Magnitude> {
    s.validate()?;
    Ok(scattering_prefactor(s, k) * s.mass_magnitude().sqrt())
}

/// `τ_D = 1 / (Λ L²)`
pub fn decoherence_time(s: &ScatteringScenario, k: &PhysicalConstants) -> Result<Magnitude> {
    let lambda = scattering_constant(s, k)?;
    Ok((lambda * Magnitude::from_f64(s.separation).powf(2.0)).recip())
}

/// Mass making `τ_D` equal `target` for the given scenario.
pub fn calibrate_mass(s: &ScatteringScenario, target: f64, k: &PhysicalConstants) -> Result<f64> {
    s.validate()?;
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::domain("calibrate_mass", "target decoherence time must be positive"));
    }
    // 1/(τ L²) = prefactor · √M
    let sqrt_m = (Magnitude::from_f64(target) * Magnitude::from_f64(s.separation).powf(2.0)).recip()
        / scattering_prefactor(s, k);
    sqrt_m
        .powf(2.0)
        .to_f64()
        .ok_or_else(|| Error::domain("calibrate_mass", "calibrated mass is not representable"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn grain() -> ScatteringScenario {
        ScatteringScenario {
            size: 1e-8,
            separation: 1e-8,
            mass: MassSpec::Density(DEFAULT_MASS_DENSITY),
            particle_density: 3e23,
            temperature: 300.0,
        }
    }

    #[test]
    fn exponential_overlap_values() {
        let model = PointerModel::computational(
            vec![c(0.6), c(0.8)],
            OverlapModel::Exponential {
                decoherence_time: 2.0,
                initial: ComplexMatrix::from_real_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap(),
            },
        )
        .unwrap();
        assert_eq!(model.overlap(0, 1, 0.0).unwrap(), c(0.5));
        assert!((model.overlap(0, 1, 2.0).unwrap() - c(0.5 / std::f64::consts::E)).norm() < 1e-15);
        assert_eq!(model.overlap(1, 1, 5.0).unwrap(), c(1.0));
        assert_eq!(model.overlap(0, 1, -2.0).unwrap(), model.overlap(0, 1, 2.0).unwrap());
    }

    #[test]
    fn identical_branches_never_decohere() {
        let h = HamiltonianSpec::from_energies(&[0.0, 1.0, 2.5], 1.0).unwrap();
        let env = vec![c(1.0 / 3f64.sqrt()); 3];
        let model = PointerModel::computational(
            vec![c(0.6), c(0.8)],
            OverlapModel::Micro {
                branches: vec![h.clone(), h],
                environment: env,
            },
        )
        .unwrap();
        for t in [0.0, 0.3, 10.0] {
            assert!((model.overlap(0, 1, t).unwrap() - c(1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn pure_state_at_time_zero() {
        let amps = vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let model = PointerModel::computational(amps.clone(), PointerModel::fully_overlapping(2, 1.0)).unwrap();
        let rho = model.reduced_system_state(0.0).unwrap();
        let pure = DensityOperator::pure(&amps).unwrap();
        assert!(rho.distance(&pure) < 1e-15);
    }

    #[test]
    fn late_time_state_is_event_state() {
        let amps = vec![c(0.6), c(0.8)];
        let model = PointerModel::computational(amps, PointerModel::fully_overlapping(2, 1.0)).unwrap();
        let late = model.reduced_system_state(40.0).unwrap();
        assert!(late.distance(&model.event_state()) < 1e-12);
    }

    #[test]
    fn inconsistent_overlaps_rejected() {
        let g = ComplexMatrix::from_real_rows(&[
            vec![1.0, 1.0, -1.0],
            vec![1.0, 1.0, 1.0],
            vec![-1.0, 1.0, 1.0],
        ])
        .unwrap();
        let amps = vec![c(1.0 / 3f64.sqrt()); 3];
        let err = PointerModel::computational(
            amps,
            OverlapModel::Exponential {
                decoherence_time: 1.0,
                initial: g,
            },
        )
        .unwrap_err();
        assert!(err.to_string().contains("positive semidefinite"));
    }

    #[test]
    fn event_map_on_superposition() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityOperator::pure(&[c(s), c(s)]).unwrap();
        let basis = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]];
        let ev = event_map(&plus, &basis, 1).unwrap();
        assert!(ev.distance(&DensityOperator::maximally_mixed(2)) < 1e-15);
        let again = event_map(&ev, &basis, 1).unwrap();
        assert!(again.distance(&ev) < 1e-15);
    }

    #[test]
    fn scattering_structure() {
        let k = PhysicalConstants::si();
        let base = scattering_constant(&grain(), &k).unwrap();
        let mut s = grain();
        s.particle_density *= 2.0;
        let ratio = (scattering_constant(&s, &k).unwrap() / base).to_f64().unwrap();
        assert!((ratio - 2.0).abs() < 1e-12);
        let mut s = grain();
        s.temperature *= 4.0;
        let ratio = (scattering_constant(&s, &k).unwrap() / base).to_f64().unwrap();
        assert!((ratio - 8.0).abs() < 1e-12);
    }

    #[test]
    fn decoherence_time_quarters_with_double_separation() {
        let k = PhysicalConstants::si();
        let t1 = decoherence_time(&grain(), &k).unwrap();
        let mut s = grain();
        s.separation *= 2.0;
        let t2 = decoherence_time(&s, &k).unwrap();
        assert!(((t2 / t1).to_f64().unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn calibration_hits_anchor() {
        let k = PhysicalConstants::si();
        let m = calibrate_mass(&grain(), 1e-31, &k).unwrap();
        let s = ScatteringScenario {
            mass: MassSpec::Kilograms(m),
            ..grain()
        };
        let tau = decoherence_time(&s, &k).unwrap().to_f64().unwrap();
        assert!((tau / 1e-31 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_fields() {
        let mut s = grain();
        s.temperature = 0.0;
        assert!(scattering_constant(&s, &PhysicalConstants::si()).is_err());
    }
}
