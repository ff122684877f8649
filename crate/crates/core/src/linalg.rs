//! Small symmetric-matrix helpers shared by the cost, sampler and collision code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Maximum absolute asymmetry tolerated for covariance inputs.
pub const SYMMETRY_TOL: f64 = 1e-9;
/// Slack on the smallest eigenvalue for `A ⪯ B` style checks.
pub const PSD_TOL: f64 = 1e-9;
/// Eigenvalue floor applied before taking square roots.
pub const EIGEN_CLAMP: f64 = 1e-15;

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Eigendecomposition of `(M + Mᵀ)/2`.
pub fn sym_eigen(m: &DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("non-finite matrix entry".into()));
    }
    SymmetricEigen::try_new(symmetrize(m), f64::EPSILON, 0)
        .ok_or_else(|| Error::Eigen("symmetric eigensolver did not converge".into()))
}

pub fn eigenvalues(m: &DMatrix<f64>) -> Result<DVector<f64>> {
    Ok(sym_eigen(m)?.eigenvalues)
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().cloned().fold(f64::INFINITY, f64::min))
}

pub fn max_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues(m)?.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}

/// Rebuilds `V f(Λ) Vᵀ` from an eigendecomposition.
pub fn eigen_map(eig: &SymmetricEigen<f64, nalgebra::Dyn>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let v = &eig.eigenvectors;
    let mapped = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|&l| f(l)));
    let out = v * DMatrix::from_diagonal(&mapped) * v.transpose();
    symmetrize(&out)
}

/// Symmetric square root and inverse square root of an SPD matrix.
pub fn sqrt_and_inv_sqrt(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let eig = sym_eigen(m)?;
    let sqrt = eigen_map(&eig, |l| l.max(EIGEN_CLAMP).sqrt());
    let inv_sqrt = eigen_map(&eig, |l| 1.0 / l.max(EIGEN_CLAMP).sqrt());
    Ok((sqrt, inv_sqrt))
}

pub fn check_square(m: &DMatrix<f64>, dim: usize) -> Result<()> {
    if m.nrows() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: m.nrows() });
    }
    if m.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: m.ncols() });
    }
    Ok(())
}

pub fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let asymmetry = max_asymmetry(m);
    if !(asymmetry <= SYMMETRY_TOL) {
        return Err(Error::NotSymmetric { asymmetry });
    }
    Ok(())
}

/// Symmetric with a strictly positive smallest eigenvalue.
pub fn check_pd(m: &DMatrix<f64>) -> Result<()> {
    check_symmetric(m)?;
    let min_eigenvalue = min_eigenvalue(m)?;
    if !(min_eigenvalue > 0.0) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    Ok(())
}

/// Symmetric with smallest eigenvalue at least `-tol`.
pub fn check_psd(m: &DMatrix<f64>, tol: f64) -> Result<()> {
    check_symmetric(m)?;
    let min_eigenvalue = min_eigenvalue(m)?;
    if !(min_eigenvalue >= -tol) {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
    }
    Ok(())
}

/// `a ⪯ b` up to `tol` on the smallest eigenvalue of `b - a`.
pub fn dominated_by(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(&(b - a))? >= -tol)
}

pub fn frobenius_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm()
}
