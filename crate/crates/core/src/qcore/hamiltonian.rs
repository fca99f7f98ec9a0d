use super::eigen::hermitian_eigendecomposition;
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// A Hermitian generator together with its spectral decomposition.
///
/// Evolution and dephasing are carried out in the eigenbasis, so the
/// decomposition is computed once here and reused for every time value.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    matrix: ComplexMatrix,
    energies: Vec<f64>,
    eigenvectors: ComplexMatrix,
    hbar: f64,
}

impl HamiltonianSpec {
    pub fn new(matrix: ComplexMatrix, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::domain("HamiltonianSpec", format!("hbar must be positive, got {hbar}")));
        }
        let eig = hermitian_eigendecomposition(&matrix)?;
        Ok(Self {
            matrix,
            energies: eig.values,
            eigenvectors: eig.vectors,
            hbar,
        })
    }

    /// Hamiltonian that is diagonal in the computational basis.
    pub fn from_energies(energies: &[f64], hbar: f64) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(energies), hbar)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Unitary whose columns are the energy eigenvectors.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// `V† m V`
    pub fn to_energy_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.eigenvectors.adjoint() * m) * &self.eigenvectors
    }

    /// `V m V†`
    pub fn from_energy_basis(&self, m: &ComplexMatrix) -> ComplexMatrix {
        &(&self.eigenvectors * m) * &self.eigenvectors.adjoint()
    }

    /// Bohr frequencies `(E_n - E_m)/ħ`.
    pub fn bohr_frequencies(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| {
            C64::new((self.energies[i] - self.energies[j]) / self.hbar, 0.0)
        })
    }

    /// Applies `f(E_n - E_m)` entrywise in the energy basis and rotates back.
    pub(crate) fn map_energy_basis(
        &self,
        m: &ComplexMatrix,
        f: impl Fn(f64) -> C64,
    ) -> ComplexMatrix {
        let mut in_basis = self.to_energy_basis(m);
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                in_basis[(i, j)] *= f(self.energies[i] - self.energies[j]);
            }
        }
        self.from_energy_basis(&in_basis)
    }
}
