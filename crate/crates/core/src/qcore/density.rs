use super::eigen::hermitian_eigendecomposition;
use super::matrix::{tensor_product, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Default absolute tolerance for state validation.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Positive, unit-trace Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    tolerance: f64,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tolerance: f64) -> Result<Self> {
        if tolerance.is_nan() || tolerance < 0.0 {
            return Err(Error::domain("DensityOperator", "tolerance must be non-negative"));
        }
        let state = Self { matrix, tolerance };
        state.validate()?;
        Ok(state)
    }

    /// Projector onto a normalized copy of `ket`.
    pub fn pure(ket: &[C64]) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::validation("DensityOperator", "state vector has zero norm"));
        }
        let unit: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector(&unit))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// Wraps the Hermitian part of `matrix` without checking positivity or
    /// trace. Used by maps that preserve both by construction.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix, tolerance: f64) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
            tolerance,
        }
    }

    /// Checks Hermiticity, unit trace and positivity against the tolerance.
    pub fn validate(&self) -> Result<()> {
        const CTX: &str = "DensityOperator";
        let m = &self.matrix;
        if !m.is_square() {
            return Err(Error::validation(CTX, format!("not square ({}x{})", m.rows(), m.cols())));
        }
        let defect = m.hermiticity_defect();
        if defect > self.tolerance {
            return Err(Error::validation(CTX, format!("not Hermitian (defect {defect:e})")));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > self.tolerance {
            return Err(Error::validation(CTX, format!("trace is {} + {}i, not 1", tr.re, tr.im)));
        }
        let min = self.min_eigenvalue();
        if min < -self.tolerance {
            return Err(Error::validation(
                CTX,
                format!("not positive semidefinite (smallest eigenvalue {min:e})"),
            ));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        self.matrix.data().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Diagonal entries in the stored basis.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigendecomposition(&self.matrix.hermitian_part())
            .map(|e| e.values)
            .unwrap_or_default()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(f64::NAN)
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        Self::from_matrix_unchecked(
            tensor_product(&self.matrix, &other.matrix),
            self.tolerance.max(other.tolerance),
        )
    }

    /// Max-entry distance to another state.
    pub fn distance(&self, other: &DensityOperator) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

/// A labelled Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
    label: String,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > 1e-12 * matrix.max_abs().max(1.0) {
            return Err(Error::validation("Observable", format!("not Hermitian (defect {defect:e})")));
        }
        Ok(Self {
            matrix,
            label: label.into(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `O ⊗ 1` on a composite with a trailing factor of dimension `dim`.
    pub fn extend(&self, dim: usize) -> Observable {
        Observable {
            matrix: tensor_product(&self.matrix, &ComplexMatrix::identity(dim)),
            label: format!("{} ⊗ 1_{dim}", self.label),
        }
    }

    /// `Tr[O ρ]` for any operator of matching shape.
    pub fn trace_with(&self, m: &ComplexMatrix) -> Result<f64> {
        if m.rows() != self.matrix.cols() || m.cols() != self.matrix.rows() {
            return Err(Error::dims("Observable::trace_with", self.matrix.rows(), m.rows()));
        }
        Ok((&self.matrix * m).trace().re)
    }

    pub fn expectation(&self, rho: &DensityOperator) -> Result<f64> {
        self.trace_with(rho.matrix())
    }
}
