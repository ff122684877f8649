//! Connection-radius schedules and the lower bound on the schedule constant γ.

use serde::Serialize;

use crate::belief::NoiseModel;
use crate::error::{Error, Result};
use crate::geometry::Environment;
use crate::volume;

use super::params::PlannerParams;

/// `h = min{√(χ²ρ)/16, ρ/(18 σ̄(W))}`; the second term drops out when `W = 0`.
pub fn base_step(env: &Environment, rho: f64, noise: &NoiseModel) -> f64 {
    let sensing = (env.chi_sq() * rho).sqrt() / 16.0;
    let growth = rho / (18.0 * noise.w_max_eigenvalue());
    sensing.min(growth)
}

/// Every factor entering the γ lower bound, kept for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct GammaFloor {
    pub h: f64,
    pub unit_ball_volume: f64,
    pub free_volume: f64,
    pub dominated_constant: f64,
    pub unit_trace_volume: f64,
    pub selberg: f64,
    pub band_inverse: f64,
    pub g1: f64,
    pub g2: f64,
    pub floor: f64,
}

pub fn gamma_floor_report(env: &Environment, params: &PlannerParams, noise: &NoiseModel) -> Result<GammaFloor> {
    let d = env.dim();
    let df = d as f64;
    let m = volume::free_entries(d) as i32;
    let rho = params.rho;
    let h = base_step(env, rho, noise);
    let unit_ball_volume = volume::unit_ball_volume(d);
    let free_volume = env.free_volume()?;
    let dominated_constant = volume::dominated_volume_constant(d)?;
    let unit_trace_volume = volume::unit_trace_volume(d)?;
    let selberg = volume::selberg(d, 1.0, 1.0, 0.5)?;
    let band_inverse = 1.0 / (params.r_max.powi(m) - (rho * df).powi(m));
    if !(band_inverse > 0.0) || !band_inverse.is_finite() {
        return Err(Error::InvalidArgument("trace band (ρd, R] is empty or overflows".into()));
    }
    let g1 = unit_ball_volume * h.powi(d as i32) / free_volume;
    let g2 = dominated_constant * selberg * 0.5 * (df * (df + 1.0)) / unit_trace_volume
        * (2.0 * rho).powi(m)
        * band_inverse;
    let exponent = 2.0 / (df * (df + 3.0));
    let floor = ((df * df + 3.0 * df + 2.0) / (g1 * g2 * df * (df + 3.0))).powf(exponent);
    if !floor.is_finite() || !(floor > 0.0) {
        return Err(Error::Overflow("gamma floor"));
    }
    Ok(GammaFloor {
        h,
        unit_ball_volume,
        free_volume,
        dominated_constant,
        unit_trace_volume,
        selberg,
        band_inverse,
        g1,
        g2,
        floor,
    })
}

/// Strict lower bound on γ for the standard schedule.
pub fn compute_gamma_floor(env: &Environment, params: &PlannerParams, noise: &NoiseModel) -> Result<f64> {
    Ok(gamma_floor_report(env, params, noise)?.floor)
}

fn check_n(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("radius schedule needs n ≥ 2, got {n}")));
    }
    let nf = n as f64;
    Ok(nf.ln() / nf)
}

/// `δ_n = min{γ (log n / n)^{2/(d(d+3))}, ½}`.
pub fn delta_standard(n: usize, dim: usize, gamma: f64) -> Result<f64> {
    let ratio = check_n(n)?;
    let df = dim as f64;
    Ok((gamma * ratio.powf(2.0 / (df * (df + 3.0)))).min(0.5))
}

/// `δ^L_n = min{γ (log n / n)^{1/(d(2d+8))}, 1}`.
pub fn delta_lossless(n: usize, dim: usize, gamma: f64) -> Result<f64> {
    let ratio = check_n(n)?;
    let df = dim as f64;
    Ok((gamma * ratio.powf(1.0 / (df * (2.0 * df + 8.0)))).min(1.0))
}

/// `D_min = 3 ℓ_n` with `ℓ_n = δ_n h`.
pub fn connection_radius(n: usize, env: &Environment, params: &PlannerParams, noise: &NoiseModel) -> Result<f64> {
    let delta = delta_standard(n, env.dim(), params.gamma)?;
    Ok(3.0 * delta * base_step(env, params.rho, noise))
}

/// `D_min = 2 ℓ^L_n` with
/// `ℓ^L_n = min{δ(1 − ¾δ)ρ/(3σ̄(W)), δρ/9, (δ/3) χ^{1/4} ρ^{1/8}, q_n}`,
/// `χ = √(χ²)` and `q_n` the standard-schedule `ℓ_n`.
pub fn connection_radius_lossless(
    n: usize,
    env: &Environment,
    params: &PlannerParams,
    noise: &NoiseModel,
) -> Result<f64> {
    let delta = delta_lossless(n, env.dim(), params.gamma)?;
    let q_n = delta_standard(n, env.dim(), params.gamma)? * base_step(env, params.rho, noise);
    let rho = params.rho;
    let chi = env.chi_sq().sqrt();
    let terms = [
        delta * (1.0 - 0.75 * delta) * rho / (3.0 * noise.w_max_eigenvalue()),
        delta * rho / 9.0,
        delta / 3.0 * chi.powf(0.25) * rho.powf(0.125),
        q_n,
    ];
    Ok(2.0 * terms.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Radius for the configured mode, with `n < 2` treated as `n = 2`.
pub fn radius_for(n: usize, env: &Environment, params: &PlannerParams, noise: &NoiseModel) -> Result<f64> {
    let n = n.max(2);
    match params.mode {
        super::Mode::Standard => connection_radius(n, env, params, noise),
        super::Mode::Lossless => connection_radius_lossless(n, env, params, noise),
    }
}

/// Smallest `n` with `δ_n < ½`, or `None` when it exceeds `u64`.
pub fn n_star(dim: usize, gamma: f64) -> Option<u64> {
    let below = |n: u64| delta_standard(n as usize, dim, gamma).map(|d| d < 0.5).unwrap_or(false);
    // log n / n is increasing on [2, 3) and decreasing afterwards
    for n in 2..=3 {
        if below(n) {
            return Some(n);
        }
    }
    let mut hi: u64 = 4;
    while !below(hi) {
        hi = hi.checked_mul(2)?;
        if hi > (1u64 << 62) {
            return None;
        }
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}
