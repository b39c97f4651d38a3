//! Small dense Hermitian helpers shared by the reductions and the dynamics.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fock::C64;

/// Asymmetry above this is reported as a logic error rather than rounding.
pub const HERMITIAN_TOLERANCE: f64 = 1e-9;

/// Eigenvalues in `[-EIGEN_CLAMP, 0)` are treated as zero.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Largest entry of `|m - m†|`.
pub fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†) / 2`, failing if the asymmetry exceeds [`HERMITIAN_TOLERANCE`].
pub fn symmetrize(m: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension { expected: m.nrows(), got: m.ncols() });
    }
    let defect = hermitian_defect(m);
    if defect > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }
    Ok((m + m.adjoint()) * C64::new(0.5, 0.0))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(m: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let h = symmetrize(m)?;
    let n = h.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvalsh(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    let h = symmetrize(m)?;
    if h.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Clamp numerical dust and reject genuinely negative eigenvalues.
pub fn clamp_eigenvalues(values: &[f64]) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|&v| {
            if v < -EIGEN_CLAMP {
                Err(Error::NegativeEigenvalue(v))
            } else {
                Ok(v.max(0.0))
            }
        })
        .collect()
}

/// `-Σ λ log₂ λ` with `0 log 0 = 0`.
pub fn shannon_bits(values: &[f64]) -> f64 {
    values.iter().filter(|&&v| v > 0.0).map(|&v| v * v.recip().log2()).sum()
}

/// Binary entropy `h(x)` in bits.
pub fn binary_entropy(x: f64) -> f64 {
    shannon_bits(&[x, 1.0 - x])
}

/// `exp(-i t H) v` for Hermitian `H` by spectral decomposition.
pub fn expm_hermitian_apply(h: &DMatrix<C64>, t: f64, v: &DVector<C64>) -> Result<DVector<C64>> {
    let (values, vectors) = eigh(h)?;
    let coeffs = vectors.adjoint() * v;
    let phased = DVector::from_iterator(
        coeffs.len(),
        coeffs.iter().zip(&values).map(|(c, &e)| c * C64::new(0.0, -t * e).exp()),
    );
    Ok(&vectors * phased)
}

/// `exp(-i t H)` as a matrix.
pub fn expm_hermitian(h: &DMatrix<C64>, t: f64) -> Result<DMatrix<C64>> {
    let (values, vectors) = eigh(h)?;
    let n = values.len();
    let diag = DMatrix::from_fn(n, n, |r, c| {
        if r == c { C64::new(0.0, -t * values[r]).exp() } else { C64::new(0.0, 0.0) }
    });
    Ok(&vectors * diag * vectors.adjoint())
}

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
