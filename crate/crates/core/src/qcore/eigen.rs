use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Relative Hermiticity tolerance accepted by [`hermitian_eigendecomposition`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Eigenvalues in ascending order with the matching unitary of eigenvector
/// columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Diagonalizes a Hermitian matrix.
///
/// Each eigenvector column is rephased so that its largest-magnitude
/// component is real and positive; ties go to the lowest index.
pub fn hermitian_eigendecomposition(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    const CTX: &str = "hermitian_eigendecomposition";
    if !m.is_square() {
        return Err(Error::validation(
            CTX,
            format!("matrix is not square ({}x{})", m.rows(), m.cols()),
        ));
    }
    let scale = m.max_abs();
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOLERANCE * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::validation(
            CTX,
            format!("matrix is not Hermitian (max |m_ij - conj(m_ji)| = {defect:e})"),
        ));
    }
    let n = m.rows();
    if scale == 0.0 {
        return Ok(EigenDecomposition {
            values: vec![0.0; n],
            vectors: ComplexMatrix::identity(n),
        });
    }

    // Work on the unit-scaled Hermitian part so tiny physical units (joules)
    // do not reach the iteration thresholds.
    let normalized = m.hermitian_part().scale_real(1.0 / scale);
    let eig = normalized.to_nalgebra().symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let values = order.iter().map(|&k| eig.eigenvalues[k] * scale).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let v: Vec<C64> = (0..n).map(|i| eig.eigenvectors[(i, k)]).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let anchor = v
            .iter()
            .position(|z| z.norm() >= peak * (1.0 - 1e-12))
            .expect("eigenvector has a largest component");
        let phase = v[anchor].conj() / v[anchor].norm();
        for (i, z) in v.iter().enumerate() {
            vectors[(i, col)] = z * phase / norm;
        }
        vectors[(anchor, col)].im = 0.0;
    }
    Ok(EigenDecomposition { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_spectrum() {
        let e = hermitian_eigendecomposition(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.values.len(), 2);
        for v in &e.values {
            assert!((v - 1.0).abs() < 1e-15);
        }
        let gram = &e.vectors.adjoint() * &e.vectors;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn diagonal_input_keeps_identity_vectors() {
        let e = hermitian_eigendecomposition(&ComplexMatrix::from_real_diagonal(&[0.7, 0.3])).unwrap();
        assert!((e.values[0] - 0.3).abs() < 1e-15);
        assert!((e.values[1] - 0.7).abs() < 1e-15);
        let swap = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(e.vectors.max_abs_diff(&swap) < 1e-15);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let rect = ComplexMatrix::zeros(2, 3);
        let err = hermitian_eigendecomposition(&rect).unwrap_err();
        assert!(err.to_string().contains("not square"));
        let skew = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let err = hermitian_eigendecomposition(&skew).unwrap_err();
        assert!(err.to_string().contains("not Hermitian"));
    }

    #[test]
    fn largest_component_is_real_positive() {
        let m = ComplexMatrix::from_rows(&[
            vec![C64::new(1.0, 0.0), C64::new(0.3, -0.8)],
            vec![C64::new(0.3, 0.8), C64::new(-2.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigendecomposition(&m).unwrap();
        for col in 0..2 {
            let v = e.vectors.column(col);
            let k = if v[0].norm() >= v[1].norm() { 0 } else { 1 };
            assert_eq!(v[k].im, 0.0);
            assert!(v[k].re > 0.0);
        }
    }
}
