//! Uniform sampling of covariance matrices on a trace band.
//!
//! A draw is assembled as `P = t · U diag(λ) Uᵀ`:
//! the trace `t` has density `∝ t^{m−1}` on `(c₁, c₂]` with `m = d(d+1)/2`,
//! the unit-trace spectrum `λ` has density `∝ ∏_{i<j}|λ_i − λ_j|` on the
//! simplex (rejection from a uniform-simplex proposal), and `U` is Haar
//! distributed. Eigenvalues stay unordered and columns keep random signs,
//! which absorbs the `(d! 2^d)^{-1}` multiplicity of the polar chart.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg;
use crate::volume::TraceBand;

/// Largest dimension the rejection sampler supports.
pub const MAX_SAMPLER_DIM: usize = 6;
/// Proposals allowed per returned sample.
pub const REJECTION_BUDGET: u64 = 1_000_000;

/// Haar-distributed orthogonal matrix via QR of a Gaussian matrix with the
/// signs of `R`'s diagonal folded into `Q`.
pub fn haar_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `∏_{i<j} |λ_i − λ_j|`.
pub fn vandermonde_abs(lambda: &[f64]) -> f64 {
    let mut acc = 1.0;
    for i in 0..lambda.len() {
        for j in (i + 1)..lambda.len() {
            acc *= (lambda[i] - lambda[j]).abs();
        }
    }
    acc
}

/// Maximum of [`vandermonde_abs`] over the unit simplex.
///
/// At the optimum the smallest eigenvalue is zero. Writing the sorted spectrum
/// through its consecutive gaps makes the log-objective concave, and the
/// stationarity conditions are solved by a damped multiplicative fixed point.
pub fn simplex_vandermonde_max(d: usize) -> f64 {
    static CACHE: [OnceLock<f64>; MAX_SAMPLER_DIM + 1] = [const { OnceLock::new() }; MAX_SAMPLER_DIM + 1];
    if d <= MAX_SAMPLER_DIM {
        *CACHE[d].get_or_init(|| compute_simplex_vandermonde_max(d))
    } else {
        compute_simplex_vandermonde_max(d)
    }
}

fn compute_simplex_vandermonde_max(d: usize) -> f64 {
    if d <= 1 {
        return 1.0;
    }
    let gaps_n = d - 1;
    // sum of eigenvalues = Σ (d − i) g_i for 1-based gap index i
    let weights: Vec<f64> = (1..=gaps_n).map(|i| (d - i) as f64).collect();
    let pairs = (d * (d - 1) / 2) as f64;
    let mut gaps = vec![1.0; gaps_n];
    let normalize = |g: &mut [f64]| {
        let s: f64 = g.iter().zip(&weights).map(|(a, w)| a * w).sum();
        g.iter_mut().for_each(|a| *a /= s);
    };
    normalize(&mut gaps);
    let spectrum = |g: &[f64]| {
        let mut lam = vec![0.0; d];
        for k in 1..d {
            lam[k] = lam[k - 1] + g[k - 1];
        }
        lam
    };
    for _ in 0..20_000 {
        let lam = spectrum(&gaps);
        let mut grad = vec![0.0; gaps_n];
        for a in 0..d {
            for b in (a + 1)..d {
                let inv = 1.0 / (lam[b] - lam[a]);
                for g in grad.iter_mut().take(b).skip(a) {
                    *g += inv;
                }
            }
        }
        for i in 0..gaps_n {
            gaps[i] *= (grad[i] / (pairs * weights[i])).sqrt();
        }
        normalize(&mut gaps);
    }
    vandermonde_abs(&spectrum(&gaps))
}

/// Unit-trace spectrum with density `∝ ∏|λ_i − λ_j|` on the simplex.
/// Returns the spectrum and the number of proposals consumed.
pub fn sample_simplex_spectrum<R: Rng + ?Sized>(d: usize, rng: &mut R, budget: u64) -> Result<(Vec<f64>, u64)> {
    let bound = simplex_vandermonde_max(d) * (1.0 + 1e-9);
    let mut lambda = vec![0.0; d];
    for attempt in 1..=budget {
        let mut total = 0.0;
        for l in lambda.iter_mut() {
            *l = rng.sample::<f64, _>(Exp1);
            total += *l;
        }
        lambda.iter_mut().for_each(|l| *l /= total);
        if lambda.iter().any(|&l| !(l > 0.0)) {
            continue;
        }
        let u: f64 = rng.random();
        if u * bound <= vandermonde_abs(&lambda) {
            return Ok((lambda, attempt));
        }
    }
    Err(Error::RejectionBudget { budget })
}

/// Trace with density `∝ t^{m−1}` on `(lo, hi]` by inverse CDF.
pub fn sample_trace<R: Rng + ?Sized>(band: &TraceBand, exponent: f64, rng: &mut R) -> f64 {
    let ratio = (band.lo() / band.hi()).powf(exponent);
    loop {
        let u: f64 = rng.random();
        let t = band.hi() * (ratio + u * (1.0 - ratio)).powf(1.0 / exponent);
        if t > band.lo() && t <= band.hi() {
            return t;
        }
    }
}

/// Uniform draw from the trace band under the flat matrix volume element.
pub fn sample_uniform_spd<R: Rng + ?Sized>(band: &TraceBand, rng: &mut R) -> Result<DMatrix<f64>> {
    sample_with_trace_exponent(band, band.free_entries() as f64, rng)
}

/// Same construction with a configurable trace exponent; only the default
/// `m = d(d+1)/2` is uniform. Exposed so statistical checks can be run against
/// a deliberately wrong sampler.
pub fn sample_with_trace_exponent<R: Rng + ?Sized>(
    band: &TraceBand,
    exponent: f64,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let d = band.dim();
    if d > MAX_SAMPLER_DIM {
        return Err(Error::InvalidArgument(format!(
            "uniform SPD sampler supports d ≤ {MAX_SAMPLER_DIM}, got {d}"
        )));
    }
    let mut used = 0;
    while used < REJECTION_BUDGET {
        let (lambda, consumed) = sample_simplex_spectrum(d, rng, REJECTION_BUDGET - used)?;
        used += consumed;
        let t = sample_trace(band, exponent, rng);
        let u = haar_orthogonal(d, rng);
        let spectrum = DVector::from_iterator(d, lambda.iter().map(|l| l * t));
        let p = linalg::symmetrize(&(&u * DMatrix::from_diagonal(&spectrum) * u.transpose()));
        let trace = p.trace();
        if trace > band.lo() && trace <= band.hi() && linalg::min_eigenvalue(&p)? > 0.0 {
            return Ok(p);
        }
    }
    Err(Error::RejectionBudget { budget: REJECTION_BUDGET })
}
