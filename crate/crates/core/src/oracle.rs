//! Independent numerical checks used by the self-check suites and tests.
//! Nothing here is used by the planner itself.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;

use crate::belief::{Belief, NoiseModel};
use crate::error::{Error, Result};
use crate::geometry::{collision_free_belief, Environment, SWEEP_STEPS};
use crate::linalg;
use crate::stats;

fn chol(m: &DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    Cholesky::new(linalg::symmetrize(m))
}

fn log_det(c: &Cholesky<f64, Dyn>) -> f64 {
    2.0 * c.l_dirty().diagonal().iter().take(c.l_dirty().nrows()).map(|v| v.ln()).sum::<f64>()
}

fn sym_basis(d: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in i..d {
            let mut e = DMatrix::zeros(d, d);
            e[(i, j)] = 1.0;
            e[(j, i)] = 1.0;
            out.push(e);
        }
    }
    out
}

struct Barrier<'a> {
    a: &'a DMatrix<f64>,
    b: &'a DMatrix<f64>,
    mu: f64,
}

impl Barrier<'_> {
    fn value(&self, q: &DMatrix<f64>) -> Option<f64> {
        let cq = chol(q)?;
        let ca = chol(&(self.a - q))?;
        let cb = chol(&(self.b - q))?;
        Some(-log_det(&cq) - self.mu * (log_det(&ca) + log_det(&cb)))
    }
}

/// Maximizes `log det Q` subject to `Q ⪯ A`, `Q ⪯ B` by a log-barrier Newton
/// method and returns `(½ log det A − ½ log det Q, Q)`.
pub fn info_cost_numeric(p_hat: &DMatrix<f64>, p_next: &DMatrix<f64>) -> Result<(f64, DMatrix<f64>)> {
    let d = p_hat.nrows();
    let ca = chol(p_hat).ok_or(Error::NotPositiveDefinite { min_eigenvalue: f64::NAN })?;
    chol(p_next).ok_or(Error::NotPositiveDefinite { min_eigenvalue: f64::NAN })?;
    let floor = linalg::min_eigenvalue(p_hat)?.min(linalg::min_eigenvalue(p_next)?);
    let mut q = DMatrix::identity(d, d) * (0.5 * floor);
    let basis = sym_basis(d);
    let k = basis.len();
    let mut mu = 1.0;
    while mu > 1e-13 {
        let barrier = Barrier { a: p_hat, b: p_next, mu };
        for _ in 0..200 {
            let qi = chol(&q).unwrap().inverse();
            let ai = chol(&(p_hat - &q)).unwrap().inverse();
            let bi = chol(&(p_next - &q)).unwrap().inverse();
            let grad_m = -&qi + (&ai + &bi) * mu;
            let g = DVector::from_fn(k, |r, _| (&grad_m * &basis[r]).trace());
            let mut h = DMatrix::zeros(k, k);
            for r in 0..k {
                let qr = &qi * &basis[r] * &qi;
                let ar = &ai * &basis[r] * &ai;
                let br = &bi * &basis[r] * &bi;
                for s in r..k {
                    let v = (&qr * &basis[s]).trace() + mu * ((&ar * &basis[s]).trace() + (&br * &basis[s]).trace());
                    h[(r, s)] = v;
                    h[(s, r)] = v;
                }
            }
            let Some(hc) = Cholesky::new(h) else { break };
            let step = -hc.solve(&g);
            let decrement = -g.dot(&step);
            if decrement < 1e-20 {
                break;
            }
            let dir = basis.iter().zip(step.iter()).fold(DMatrix::zeros(d, d), |acc, (e, s)| acc + e * *s);
            let f0 = barrier.value(&q).unwrap();
            let mut t = 1.0;
            loop {
                let cand = &q + &dir * t;
                if let Some(f) = barrier.value(&cand) {
                    if f <= f0 - 0.25 * t * decrement {
                        q = cand;
                        break;
                    }
                }
                t *= 0.5;
                if t < 1e-20 {
                    break;
                }
            }
            if t < 1e-20 {
                break;
            }
        }
        mu /= 10.0;
    }
    let cq = chol(&q).ok_or(Error::Eigen("barrier iterate left the cone".into()))?;
    Ok((0.5 * (log_det(&ca) - log_det(&cq)), q))
}

/// Checks the transition exactly at `10 ×` the sweep resolution, without any margin.
pub fn dense_transition_audit(b1: &Belief, x2: &DVector<f64>, noise: &NoiseModel, env: &Environment) -> Result<bool> {
    let steps = 10 * SWEEP_STEPS;
    let len = (x2 - b1.mean()).norm();
    for k in 0..=steps {
        let lambda = k as f64 / steps as f64;
        let x = b1.mean() * (1.0 - lambda) + x2 * lambda;
        let p = b1.cov() + noise.w() * (lambda * len);
        if !collision_free_belief(&Belief::new_unchecked(x, p), env)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monte-Carlo estimate of `∫_{[0,1]^d} ∏_{i<j} |t_i − t_j|` with its standard error.
pub fn mc_selberg_half<R: Rng + ?Sized>(d: usize, samples: usize, rng: &mut R) -> (f64, f64) {
    let mut t = vec![0.0; d];
    let values: Vec<f64> = (0..samples)
        .map(|_| {
            t.iter_mut().for_each(|v| *v = rng.random());
            crate::spd::vandermonde_abs(&t)
        })
        .collect();
    stats::mean_and_se(&values)
}

/// Monte-Carlo estimate of the flat volume of `{0 ≺ P ⪯ diag(a)}` with its standard error.
pub fn mc_dominated_volume<R: Rng + ?Sized>(a: &[f64], samples: usize, rng: &mut R) -> Result<(f64, f64)> {
    let d = a.len();
    if a.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument("eigenvalues must be positive".into()));
    }
    let big_a = DMatrix::from_diagonal(&DVector::from_column_slice(a));
    let mut box_volume = a.iter().product::<f64>();
    for i in 0..d {
        for j in i + 1..d {
            box_volume *= 2.0 * (a[i] * a[j]).sqrt();
        }
    }
    let mut hits = 0u64;
    let mut p = DMatrix::zeros(d, d);
    for _ in 0..samples {
        for i in 0..d {
            p[(i, i)] = rng.random::<f64>() * a[i];
            for j in i + 1..d {
                let s = (a[i] * a[j]).sqrt();
                let v = rng.random_range(-s..s);
                p[(i, j)] = v;
                p[(j, i)] = v;
            }
        }
        if linalg::min_eigenvalue(&p)? > 0.0 && linalg::min_eigenvalue(&(&big_a - &p))? >= 0.0 {
            hits += 1;
        }
    }
    let frac = hits as f64 / samples as f64;
    let se = (frac * (1.0 - frac) / samples as f64).sqrt();
    Ok((frac * box_volume, se * box_volume))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn barrier_oracle_diagonal_case() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 0.25]));
        let (v, q) = info_cost_numeric(&a, &DMatrix::identity(2, 2)).unwrap();
        assert!((v - 0.5 * 4f64.ln()).abs() < 1e-8, "{v}");
        assert!((q[(0, 0)] - 1.0).abs() < 1e-6 && (q[(1, 1)] - 0.25).abs() < 1e-6);
    }

    #[test]
    fn barrier_oracle_dominated_case_is_zero() {
        let a = DMatrix::identity(3, 3);
        let (v, _) = info_cost_numeric(&a, &(DMatrix::identity(3, 3) * 2.0)).unwrap();
        assert!(v.abs() < 1e-8);
    }

    #[test]
    fn mc_volume_of_unit_interval() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let (v, se) = mc_dominated_volume(&[1.0], 1000, &mut rng).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(se, 0.0);
    }
}
