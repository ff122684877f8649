//! Volumes of covariance sets and the Selberg integral.
//!
//! Volumes are measured with the flat element on the `d(d+1)/2` free entries
//! of a symmetric matrix, which in polar coordinates `P = U Λ Uᵀ` reads
//! `det θ · ∏_{i<j}|λ_i − λ_j| · ∏ dλ_i`.

use std::f64::consts::PI;

use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

/// Covariance matrices of dimension `dim` whose trace lies in `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceBand {
    dim: usize,
    lo: f64,
    hi: f64,
}

impl TraceBand {
    pub fn new(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("trace band dimension must be ≥ 1".into()));
        }
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidArgument(format!("trace band needs 0 ≤ lo < hi, got ({lo}, {hi}]")));
        }
        Ok(TraceBand { dim, lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Number of free entries `d(d+1)/2`, which is also the degree of homogeneity of volume.
    pub fn free_entries(&self) -> usize {
        free_entries(self.dim)
    }
}

pub fn free_entries(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn checked_gamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(Error::GammaPole(x));
    }
    Ok(gamma(x))
}

/// Volume of the unit-trace slice `{P ⪰ 0 : Tr P = 1}` scaled so that the band
/// volume is `(c₂^m − c₁^m)/m · V_r`.
pub fn ln_unit_trace_volume(dim: usize) -> f64 {
    let m = free_entries(dim) as f64;
    let d = dim as f64;
    let mut acc = d * (d - 1.0) / 4.0 * PI.ln();
    for k in 2..=dim {
        acc += ln_gamma((k as f64 + 1.0) / 2.0);
    }
    acc - ln_gamma(m)
}

pub fn unit_trace_volume(dim: usize) -> Result<f64> {
    finite_positive(ln_unit_trace_volume(dim).exp(), "unit-trace volume")
}

fn finite_positive(v: f64, what: &'static str) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Overflow(what))
    }
}

/// Volume of the trace band `(c₁, c₂]`.
pub fn volume_trace_band(band: &TraceBand) -> Result<f64> {
    let m = band.free_entries() as f64;
    let ln_scale = ln_unit_trace_volume(band.dim) - m.ln() + m * band.hi.ln();
    let shell = 1.0 - (band.lo / band.hi).powf(m);
    finite_positive(ln_scale.exp() * shell, "trace band volume")
}

/// Selberg integral `S_d(a1, a2, a3)` via its gamma-product closed form.
pub fn selberg(d: usize, a1: f64, a2: f64, a3: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidArgument("Selberg dimension must be ≥ 1".into()));
    }
    if !(a1 > 0.0 && a2 > 0.0) {
        return Err(Error::InvalidArgument(format!("Selberg needs a1, a2 > 0, got {a1}, {a2}")));
    }
    let df = d as f64;
    let mut bound = 1.0 / df;
    if d > 1 {
        bound = bound.min(a1 / (df - 1.0)).min(a2 / (df - 1.0));
    }
    if !(a3 > -bound) {
        return Err(Error::InvalidArgument(format!("Selberg integral diverges for a3 = {a3}")));
    }
    let mut product = 1.0;
    for j in 0..d {
        let jf = j as f64;
        let num = checked_gamma(a1 + jf * a3)? * checked_gamma(a2 + jf * a3)? * checked_gamma(1.0 + (jf + 1.0) * a3)?;
        let den = checked_gamma(a1 + a2 + (df + jf - 1.0) * a3)? * checked_gamma(1.0 + a3)?;
        product *= num / den;
    }
    if !product.is_finite() {
        return Err(Error::Overflow("Selberg integral"));
    }
    Ok(product)
}

/// Multivariate gamma `Γ_d(a) = π^{d(d−1)/4} ∏_{j=1}^d Γ(a + (1 − j)/2)`.
pub fn multivariate_gamma(d: usize, a: f64) -> Result<f64> {
    let df = d as f64;
    let mut acc = PI.powf(df * (df - 1.0) / 4.0);
    for j in 1..=d {
        acc *= checked_gamma(a + (1.0 - j as f64) / 2.0)?;
    }
    Ok(acc)
}

/// `∫_{O(d)} det θ = 2^d π^{d²/2} / Γ_d(d/2)`.
pub fn orthogonal_group_volume(d: usize) -> Result<f64> {
    let df = d as f64;
    finite_positive(2f64.powi(d as i32) * PI.powf(df * df / 2.0) / multivariate_gamma(d, df / 2.0)?, "O(d) volume")
}

/// `V_d = (d! 2^d)^{-1} · vol O(d)`.
pub fn dominated_volume_constant(d: usize) -> Result<f64> {
    let factorial: f64 = (1..=d).map(|k| k as f64).product();
    finite_positive(orthogonal_group_volume(d)? / (factorial * 2f64.powi(d as i32)), "V_d")
}

/// Volume of the unit ball `τ_d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let df = d as f64;
    PI.powf(df / 2.0) / gamma(df / 2.0 + 1.0)
}

/// Lower bound on the volume of `{Q ⪰ 0 : Q ⪯ A}` for `A` with the given
/// eigenvalues: the exact volume of `{Q ⪰ 0 : Q ⪯ b I}` with `b = min eig`.
pub fn vol_lower_bound_dominated(eigenvalues: &[f64]) -> Result<f64> {
    let d = eigenvalues.len();
    if d == 0 {
        return Err(Error::InvalidArgument("need at least one eigenvalue".into()));
    }
    let b = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(b > 0.0) {
        return Err(Error::InvalidArgument(format!("eigenvalues must be positive, smallest is {b}")));
    }
    let m = free_entries(d) as i32;
    finite_positive(dominated_volume_constant(d)? * b.powi(m) * selberg(d, 1.0, 1.0, 0.5)?, "dominated volume bound")
}
