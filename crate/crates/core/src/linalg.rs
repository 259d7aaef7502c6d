//! Dense hermitian eigensolves and determinants on top of nalgebra.
//!
//! Real symmetric input takes the real solver; genuinely complex input uses
//! nalgebra's complex hermitian path. Eigenpairs always come back sorted by
//! ascending eigenvalue.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative asymmetry above which a matrix is rejected as non-hermitian.
const HERMITIAN_TOL: f64 = 1e-12;

/// Largest `|A[i][j] - conj(A[j][i])|`.
pub fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn check_hermitian(m: &DMatrix<Complex64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidParameter(format!(
            "matrix of shape {:?} is not square",
            m.shape()
        )));
    }
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let defect = hermitian_defect(m);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

fn is_real(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

fn sort_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx
}

/// Eigendecomposition of a real symmetric matrix, ascending.
pub fn eigh_real(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(m.clone());
    let order = sort_order(eig.eigenvalues.as_slice());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigendecomposition of a hermitian matrix, ascending. Columns of the
/// returned matrix are the orthonormal eigenvectors.
pub fn eigh(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    check_hermitian(m)?;
    if is_real(m) {
        let (values, vectors) = eigh_real(&m.map(|z| z.re));
        return Ok((values, vectors.map(|x| Complex64::new(x, 0.0))));
    }
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let order = sort_order(eig.eigenvalues.as_slice());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut values: Vec<f64> = if is_real(m) {
        SymmetricEigen::new(m.map(|z| z.re))
            .eigenvalues
            .iter()
            .copied()
            .collect()
    } else {
        SymmetricEigen::new(m.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Spectral norm of a hermitian matrix given its spectrum.
pub fn spectral_norm_of(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Determinant by partially pivoted LU. The empty matrix has determinant 1.
pub fn determinant(m: &DMatrix<Complex64>) -> Complex64 {
    if m.nrows() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if is_real(m) {
        Complex64::new(m.map(|z| z.re).lu().determinant(), 0.0)
    } else {
        m.clone().lu().determinant()
    }
}

/// Euclidean norm of a complex vector.
pub fn norm(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
