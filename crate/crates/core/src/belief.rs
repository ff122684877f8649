//! Gaussian beliefs and the travel / information / total transition costs.
//!
//! The information cost of steering a predicted covariance `P̂` down to a
//! target `P` is the smallest log-det reduction over all `Q` dominated by
//! both. With `σ_i` the eigenvalues of `P^{-1/2} P̂ P^{-1/2}` it equals
//! `½ Σ max(0, log σ_i)`, which is what [`info_cost`] evaluates directly.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// A Gaussian belief over the robot position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BeliefRepr", into = "BeliefRepr")]
pub struct Belief {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct BeliefRepr {
    pub mean: Vec<f64>,
    /// Row-major.
    pub cov: Vec<Vec<f64>>,
}

impl TryFrom<BeliefRepr> for Belief {
    type Error = Error;

    fn try_from(repr: BeliefRepr) -> Result<Self> {
        let mean = DVector::from_vec(repr.mean);
        let cov = matrix_from_rows(&repr.cov, mean.len())?;
        Belief::new(mean, cov)
    }
}

impl From<Belief> for BeliefRepr {
    fn from(b: Belief) -> Self {
        BeliefRepr { mean: b.mean.iter().cloned().collect(), cov: matrix_to_rows(&b.cov) }
    }
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>], dim: usize) -> Result<DMatrix<f64>> {
    if rows.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: rows.len() });
    }
    for row in rows {
        if row.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
        }
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

pub(crate) fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

impl Belief {
    /// Validates that `cov` is a symmetric positive-definite `d×d` matrix.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if mean.is_empty() {
            return Err(Error::InvalidArgument("belief mean must have dimension ≥ 1".into()));
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("belief mean must be finite".into()));
        }
        linalg::check_square(&cov, mean.len())?;
        linalg::check_pd(&cov)?;
        Ok(Belief { mean, cov })
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn new_unchecked(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Belief { mean, cov }
    }

    pub fn from_slices(mean: &[f64], cov_row_major: &[f64]) -> Result<Self> {
        let d = mean.len();
        if cov_row_major.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, got: cov_row_major.len() });
        }
        Belief::new(DVector::from_column_slice(mean), DMatrix::from_row_slice(d, d, cov_row_major))
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }
}

/// Process noise per unit travel length and the information-cost weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NoiseRepr", into = "NoiseRepr")]
pub struct NoiseModel {
    w: DMatrix<f64>,
    alpha: f64,
    w_max_eigenvalue: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct NoiseRepr {
    pub w: Vec<Vec<f64>>,
    pub alpha: f64,
}

impl TryFrom<NoiseRepr> for NoiseModel {
    type Error = Error;

    fn try_from(repr: NoiseRepr) -> Result<Self> {
        let w = matrix_from_rows(&repr.w, repr.w.len())?;
        NoiseModel::new(w, repr.alpha)
    }
}

impl From<NoiseModel> for NoiseRepr {
    fn from(n: NoiseModel) -> Self {
        NoiseRepr { w: matrix_to_rows(&n.w), alpha: n.alpha }
    }
}

impl NoiseModel {
    pub fn new(w: DMatrix<f64>, alpha: f64) -> Result<Self> {
        if w.nrows() == 0 {
            return Err(Error::InvalidArgument("noise matrix must be at least 1×1".into()));
        }
        linalg::check_square(&w, w.nrows())?;
        linalg::check_psd(&w, 1e-12)?;
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha must be ≥ 0, got {alpha}")));
        }
        let w_max_eigenvalue = linalg::max_eigenvalue(&w)?.max(0.0);
        Ok(NoiseModel { w, alpha, w_max_eigenvalue })
    }

    /// `scale · I` in dimension `dim`.
    pub fn isotropic(dim: usize, scale: f64, alpha: f64) -> Result<Self> {
        NoiseModel::new(DMatrix::identity(dim, dim) * scale, alpha)
    }

    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn w(&self) -> &DMatrix<f64> {
        &self.w
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Largest singular value of `W`.
    pub fn w_max_eigenvalue(&self) -> f64 {
        self.w_max_eigenvalue
    }
}

/// An ordered, nonempty sequence of beliefs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    nodes: Vec<Belief>,
}

impl Chain {
    /// Rejects empty chains and consecutive duplicates.
    pub fn new(nodes: Vec<Belief>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::EmptyChain);
        }
        for pair in nodes.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::InvalidArgument("consecutive chain nodes are identical".into()));
            }
        }
        Ok(Chain { nodes })
    }

    pub(crate) fn new_unchecked(nodes: Vec<Belief>) -> Self {
        debug_assert!(!nodes.is_empty());
        Chain { nodes }
    }

    pub fn nodes(&self) -> &[Belief] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> &Belief {
        &self.nodes[0]
    }

    pub fn last(&self) -> &Belief {
        &self.nodes[self.nodes.len() - 1]
    }

    pub fn into_nodes(self) -> Vec<Belief> {
        self.nodes
    }
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Euclidean distance between two mean positions.
pub fn travel_cost(x1: &DVector<f64>, x2: &DVector<f64>) -> Result<f64> {
    check_dims(x1.len(), x2.len())?;
    Ok((x2 - x1).norm())
}

/// Covariance after travelling from `x1` to `x2` without sensing: `P + ‖x2−x1‖ W`.
pub fn predicted_covariance(
    p: &DMatrix<f64>,
    x1: &DVector<f64>,
    x2: &DVector<f64>,
    noise: &NoiseModel,
) -> Result<DMatrix<f64>> {
    linalg::check_square(p, x1.len())?;
    check_dims(x1.len(), noise.dim())?;
    linalg::check_pd(p)?;
    let len = travel_cost(x1, x2)?;
    Ok(grow(p, len, noise))
}

pub(crate) fn grow(p: &DMatrix<f64>, len: f64, noise: &NoiseModel) -> DMatrix<f64> {
    p + noise.w() * len
}

fn check_pair(p_hat: &DMatrix<f64>, p_next: &DMatrix<f64>) -> Result<()> {
    linalg::check_square(p_next, p_hat.nrows())?;
    linalg::check_square(p_hat, p_hat.nrows())?;
    linalg::check_pd(p_hat)?;
    linalg::check_pd(p_next)
}

/// Closed-form minimizer of the information cost: the covariance `Q` with
/// `Q ⪯ P_next`, `Q ⪯ P̂` and maximal determinant.
pub fn info_cost_minimizer(p_hat: &DMatrix<f64>, p_next: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_pair(p_hat, p_next)?;
    let (sqrt_next, inv_sqrt_next) = linalg::sqrt_and_inv_sqrt(p_next)?;
    minimizer_whitened(p_hat, &sqrt_next, &inv_sqrt_next)
}

pub(crate) fn minimizer_whitened(
    p_hat: &DMatrix<f64>,
    sqrt_next: &DMatrix<f64>,
    inv_sqrt_next: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let whitened = inv_sqrt_next * p_hat * inv_sqrt_next;
    let eig = linalg::sym_eigen(&whitened)?;
    if eig.eigenvalues.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::Eigen("whitened predicted covariance is not positive definite".into()));
    }
    let capped = linalg::eigen_map(&eig, |s| s.min(1.0));
    Ok(linalg::symmetrize(&(sqrt_next * capped * sqrt_next)))
}

/// `½ Σ max(0, log σ_i)` over the eigenvalues of `P_next^{-1/2} P̂ P_next^{-1/2}`.
pub fn info_cost(p_hat: &DMatrix<f64>, p_next: &DMatrix<f64>) -> Result<f64> {
    check_pair(p_hat, p_next)?;
    let (_, inv_sqrt_next) = linalg::sqrt_and_inv_sqrt(p_next)?;
    info_cost_whitened(p_hat, &inv_sqrt_next)
}

pub(crate) fn info_cost_whitened(p_hat: &DMatrix<f64>, inv_sqrt_next: &DMatrix<f64>) -> Result<f64> {
    let whitened = inv_sqrt_next * p_hat * inv_sqrt_next;
    let sigma = linalg::eigenvalues(&whitened)?;
    Ok(0.5 * sigma.iter().map(|&s| s.ln().max(0.0)).sum::<f64>())
}

/// Travel distance plus `α` times the information cost. Not symmetric.
pub fn edge_cost(b1: &Belief, b2: &Belief, noise: &NoiseModel) -> Result<f64> {
    check_dims(b1.dim(), b2.dim())?;
    check_dims(b1.dim(), noise.dim())?;
    let len = (b2.mean() - b1.mean()).norm();
    if noise.alpha() == 0.0 {
        return Ok(len);
    }
    let (_, inv_sqrt_next) = linalg::sqrt_and_inv_sqrt(b2.cov())?;
    Ok(len + noise.alpha() * info_cost_whitened(&grow(b1.cov(), len, noise), &inv_sqrt_next)?)
}

/// Whether `b2.cov ⪯ P̂` within `tol` on the smallest eigenvalue.
pub fn is_lossless(b1: &Belief, b2: &Belief, noise: &NoiseModel, tol: f64) -> Result<bool> {
    check_dims(b1.dim(), b2.dim())?;
    check_dims(b1.dim(), noise.dim())?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be ≥ 0, got {tol}")));
    }
    let len = (b2.mean() - b1.mean()).norm();
    linalg::dominated_by(b2.cov(), &grow(b1.cov(), len, noise), tol)
}

/// Replaces `b.cov` by the information-cost minimizer so `b_prev → result` is lossless.
pub fn lossless_refine(b_prev: &Belief, b: &Belief, noise: &NoiseModel) -> Result<Belief> {
    check_dims(b_prev.dim(), b.dim())?;
    check_dims(b.dim(), noise.dim())?;
    let len = (b.mean() - b_prev.mean()).norm();
    let p_hat = grow(b_prev.cov(), len, noise);
    let (sqrt_next, inv_sqrt_next) = linalg::sqrt_and_inv_sqrt(b.cov())?;
    let refined = minimizer_whitened(&p_hat, &sqrt_next, &inv_sqrt_next)?;
    Ok(Belief::new_unchecked(b.mean().clone(), refined))
}

/// Sum of edge costs over consecutive pairs.
pub fn chain_cost(chain: &Chain, noise: &NoiseModel) -> Result<f64> {
    if chain.is_empty() {
        return Err(Error::EmptyChain);
    }
    chain.nodes().windows(2).map(|pair| edge_cost(&pair[0], &pair[1], noise)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn diag(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_column_slice(v))
    }

    fn vec2(a: f64, b: f64) -> DVector<f64> {
        DVector::from_column_slice(&[a, b])
    }

    #[test]
    fn travel_cost_examples() {
        assert_eq!(travel_cost(&vec2(0.0, 0.0), &vec2(0.0, 0.0)).unwrap(), 0.0);
        assert!(close(travel_cost(&vec2(0.0, 0.0), &vec2(3.0, 4.0)).unwrap(), 5.0, 1e-15));
        let err = travel_cost(&vec2(0.0, 0.0), &DVector::from_column_slice(&[1.0]));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn predicted_covariance_examples() {
        let noise = NoiseModel::isotropic(2, 0.5, 1.0).unwrap();
        let p = predicted_covariance(&diag(&[1.0, 1.0]), &vec2(0.0, 0.0), &vec2(2.0, 0.0), &noise).unwrap();
        assert!((p - diag(&[2.0, 2.0])).norm() < 1e-15);
        let same = predicted_covariance(&diag(&[1.0, 3.0]), &vec2(1.0, 1.0), &vec2(1.0, 1.0), &noise).unwrap();
        assert_eq!(same, diag(&[1.0, 3.0]));
        assert!(predicted_covariance(&diag(&[1.0, -1.0]), &vec2(0.0, 0.0), &vec2(1.0, 0.0), &noise).is_err());
    }

    #[test]
    fn minimizer_examples() {
        let p = info_cost_minimizer(&diag(&[2.0, 2.0]), &diag(&[4.0, 4.0])).unwrap();
        assert!((p - diag(&[2.0, 2.0])).norm() < 1e-12);
        let p = info_cost_minimizer(&diag(&[2.0, 2.0]), &diag(&[1.0, 4.0])).unwrap();
        assert!((p - diag(&[1.0, 2.0])).norm() < 1e-12);
    }

    #[test]
    fn info_cost_examples() {
        assert_eq!(info_cost(&diag(&[1.0, 1.0]), &diag(&[2.0, 2.0])).unwrap(), 0.0);
        assert!(close(info_cost(&diag(&[4.0, 4.0]), &diag(&[1.0, 1.0])).unwrap(), 2.0 * 2f64.ln(), 1e-12));
        assert!(close(info_cost(&diag(&[4.0, 0.25]), &diag(&[1.0, 1.0])).unwrap(), 0.5 * 4f64.ln(), 1e-12));
        assert!(info_cost(&diag(&[1.0, 0.0]), &diag(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn edge_cost_examples() {
        let noise = NoiseModel::isotropic(2, 1.0, 1.0).unwrap();
        let b1 = Belief::new(vec2(0.0, 0.0), diag(&[1.0, 1.0])).unwrap();
        let b2 = Belief::new(vec2(3.0, 4.0), diag(&[6.0, 6.0])).unwrap();
        assert!(close(edge_cost(&b1, &b2, &noise).unwrap(), 5.0, 1e-12));

        let e2 = (-2.0f64).exp();
        let sensed = Belief::new(vec2(0.0, 0.0), diag(&[e2, e2])).unwrap();
        assert!(close(edge_cost(&b1, &sensed, &noise).unwrap(), 2.0, 1e-12));
        // reverse direction costs nothing: the quasi-pseudo-metric is asymmetric
        assert_eq!(edge_cost(&sensed, &b1, &noise).unwrap(), 0.0);

        let no_info = NoiseModel::isotropic(2, 1.0, 0.0).unwrap();
        assert!(close(edge_cost(&b1, &sensed, &no_info).unwrap(), 0.0, 1e-15));
    }

    #[test]
    fn lossless_examples() {
        let noise = NoiseModel::isotropic(2, 1.0, 1.0).unwrap();
        let b_prev = Belief::new(vec2(0.0, 0.0), diag(&[1.0, 1.0])).unwrap();
        let exact = Belief::new(vec2(1.0, 0.0), diag(&[2.0, 2.0])).unwrap();
        assert!(is_lossless(&b_prev, &exact, &noise, 0.0).unwrap());
        let doubled = Belief::new(vec2(1.0, 0.0), diag(&[4.0, 4.0])).unwrap();
        assert!(!is_lossless(&b_prev, &doubled, &noise, 1e-9).unwrap());

        let refined = lossless_refine(&b_prev, &doubled, &noise).unwrap();
        assert!((refined.cov() - diag(&[2.0, 2.0])).norm() < 1e-12);
        let b = Belief::new(vec2(1.0, 0.0), diag(&[1.0, 4.0])).unwrap();
        let refined = lossless_refine(&b_prev, &b, &noise).unwrap();
        assert!((refined.cov() - diag(&[1.0, 2.0])).norm() < 1e-12);
        let fixed = lossless_refine(&b_prev, &refined, &noise).unwrap();
        assert!((fixed.cov() - refined.cov()).norm() < 1e-9);
    }

    #[test]
    fn chain_cost_small_cases() {
        let noise = NoiseModel::isotropic(2, 1.0, 1.0).unwrap();
        let b1 = Belief::new(vec2(0.0, 0.0), diag(&[1.0, 1.0])).unwrap();
        let b2 = Belief::new(vec2(1.0, 0.0), diag(&[0.5, 1.0])).unwrap();
        assert_eq!(chain_cost(&Chain::new(vec![b1.clone()]).unwrap(), &noise).unwrap(), 0.0);
        let c = chain_cost(&Chain::new(vec![b1.clone(), b2.clone()]).unwrap(), &noise).unwrap();
        assert_eq!(c, edge_cost(&b1, &b2, &noise).unwrap());
        assert!(matches!(Chain::new(vec![]), Err(Error::EmptyChain)));
    }

    #[test]
    fn noise_validation() {
        assert!(NoiseModel::isotropic(2, 1.0, -1.0).is_err());
        assert!(NoiseModel::new(diag(&[1.0, -0.1]), 1.0).is_err());
        assert_eq!(NoiseModel::new(diag(&[0.5, 2.0]), 1.0).unwrap().w_max_eigenvalue(), 2.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn spd2() -> impl Strategy<Value = DMatrix<f64>> {
            prop::collection::vec(-1.0..1.0f64, 4).prop_map(|v| {
                let g = DMatrix::from_vec(2, 2, v);
                linalg::symmetrize(&(&g * g.transpose() + DMatrix::identity(2, 2) * 0.05))
            })
        }

        proptest! {
            #[test]
            fn info_cost_is_scale_invariant(a in spd2(), b in spd2(), s in 0.1..10.0f64) {
                let c = info_cost(&a, &b).unwrap();
                let cs = info_cost(&(&a * s), &(&b * s)).unwrap();
                prop_assert!((c - cs).abs() <= 1e-9 * c.max(1.0));
            }

            #[test]
            fn information_cost_satisfies_the_triangle_shortcut(a in spd2(), b in spd2(), c in spd2()) {
                // sensing straight to c never costs more than sensing via b
                let direct = info_cost(&a, &c).unwrap();
                let q = info_cost_minimizer(&a, &b).unwrap();
                let via = info_cost(&a, &b).unwrap() + info_cost(&q, &c).unwrap();
                prop_assert!(direct <= via + 1e-9);
            }
        }
    }
}
