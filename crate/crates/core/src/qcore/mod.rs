//! Dense complex linear algebra for finite-dimensional states and
//! observables.

mod density;
mod eigen;
mod hamiltonian;
mod matrix;

pub use density::{DensityOperator, Observable, DEFAULT_TOLERANCE};
pub use eigen::{hermitian_eigendecomposition, EigenDecomposition, HERMITIAN_TOLERANCE};
pub use hamiltonian::HamiltonianSpec;
pub use matrix::{inner, tensor_ket, tensor_product, ComplexMatrix, C64};

use crate::error::{Error, Result};

/// Factor of a bipartite space `A ⊗ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Traces out `traced` from a state on `A ⊗ B` with dimensions `dims`.
pub fn partial_trace(
    rho: &DensityOperator,
    dims: (usize, usize),
    traced: Subsystem,
) -> Result<DensityOperator> {
    let (da, db) = dims;
    if da == 0 || db == 0 || da * db != rho.dim() {
        return Err(Error::dims(
            "partial_trace",
            format!("{da}*{db}"),
            rho.dim(),
        ));
    }
    let m = rho.matrix();
    let reduced = match traced {
        Subsystem::B => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::A => ComplexMatrix::from_fn(db, db, |k, l| {
            (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()
        }),
    };
    Ok(DensityOperator::from_matrix_unchecked(reduced, rho.tolerance()))
}

fn check_dims(context: &'static str, rho: &DensityOperator, h: &HamiltonianSpec) -> Result<()> {
    if rho.dim() != h.dim() {
        return Err(Error::dims(context, h.dim(), rho.dim()));
    }
    Ok(())
}

/// `e^{-iHt/ħ} ρ e^{iHt/ħ}`, via eigenphases.
pub fn unitary_evolve(rho: &DensityOperator, h: &HamiltonianSpec, t: f64) -> Result<DensityOperator> {
    check_dims("unitary_evolve", rho, h)?;
    if !t.is_finite() {
        return Err(Error::domain("unitary_evolve", "time must be finite"));
    }
    let hbar = h.hbar();
    let evolved = h.map_energy_basis(rho.matrix(), |gap| C64::from_polar(1.0, -gap * t / hbar));
    Ok(DensityOperator::from_matrix_unchecked(evolved, rho.tolerance()))
}

/// `e^{-iHt/ħ} |ψ⟩`
pub fn evolve_ket(ket: &[C64], h: &HamiltonianSpec, t: f64) -> Result<Vec<C64>> {
    if ket.len() != h.dim() {
        return Err(Error::dims("evolve_ket", h.dim(), ket.len()));
    }
    let v = h.eigenvectors();
    let mut coeffs = v.adjoint().apply(ket);
    for (c, e) in coeffs.iter_mut().zip(h.energies()) {
        *c *= C64::from_polar(1.0, -e * t / h.hbar());
    }
    Ok(v.apply(&coeffs))
}
