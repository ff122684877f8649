//! Obstacle-free move-and-sense cost and a brute-force check of it.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::belief::{self, Belief, NoiseModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineResult {
    pub cost: f64,
    pub travel_part: f64,
    pub info_part: f64,
    #[serde(serialize_with = "serialize_rows")]
    pub grown_cov: DMatrix<f64>,
}

fn serialize_rows<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(belief::matrix_to_rows(m))
}

fn check(b0: &Belief, bg: &Belief, noise: &NoiseModel) -> Result<()> {
    for got in [bg.dim(), noise.dim()] {
        if got != b0.dim() {
            return Err(Error::DimensionMismatch { expected: b0.dim(), got });
        }
    }
    Ok(())
}

/// Travel the straight line without sensing, then sense once on arrival.
pub fn move_and_sense_cost(b0: &Belief, bg: &Belief, noise: &NoiseModel) -> Result<BaselineResult> {
    check(b0, bg, noise)?;
    let travel_part = (bg.mean() - b0.mean()).norm();
    let grown_cov = belief::grow(b0.cov(), travel_part, noise);
    let info_part = belief::info_cost(&grown_cov, bg.cov())?;
    Ok(BaselineResult { cost: travel_part + noise.alpha() * info_part, travel_part, info_part, grown_cov })
}

/// Cheapest straight-line strategy that stops at `segments − 1` grid points
/// and senses at each stop toward a blend of its predicted covariance and the
/// goal covariance, then senses to the goal on arrival.
pub fn multi_sense_oracle(b0: &Belief, bg: &Belief, noise: &NoiseModel, segments: usize, grid: usize) -> Result<f64> {
    check(b0, bg, noise)?;
    if !(1..=3).contains(&segments) {
        return Err(Error::InvalidArgument(format!("segments must be 1, 2 or 3, got {segments}")));
    }
    if grid < 8 {
        return Err(Error::InvalidArgument(format!("grid must be ≥ 8, got {grid}")));
    }
    let total = (bg.mean() - b0.mean()).norm();
    let mut best = f64::INFINITY;
    let mut stops = Vec::with_capacity(segments - 1);
    let mut blends = Vec::with_capacity(segments - 1);
    search_stops(b0, bg, noise, total, segments - 1, grid, 1, &mut stops, &mut blends, &mut best)?;
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn search_stops(
    b0: &Belief,
    bg: &Belief,
    noise: &NoiseModel,
    total: f64,
    remaining: usize,
    grid: usize,
    first: usize,
    stops: &mut Vec<usize>,
    blends: &mut Vec<usize>,
    best: &mut f64,
) -> Result<()> {
    if remaining == 0 {
        *best = best.min(strategy_cost(b0, bg, noise, total, grid, stops, blends)?);
        return Ok(());
    }
    for k in first..grid {
        for theta in 0..=grid {
            stops.push(k);
            blends.push(theta);
            search_stops(b0, bg, noise, total, remaining - 1, grid, k + 1, stops, blends, best)?;
            stops.pop();
            blends.pop();
        }
    }
    Ok(())
}

fn strategy_cost(
    b0: &Belief,
    bg: &Belief,
    noise: &NoiseModel,
    total: f64,
    grid: usize,
    stops: &[usize],
    blends: &[usize],
) -> Result<f64> {
    let mut cov = b0.cov().clone();
    let mut pos = 0.0;
    let mut cost = 0.0;
    for (&k, &theta) in stops.iter().zip(blends) {
        let at = total * k as f64 / grid as f64;
        let p_hat = belief::grow(&cov, at - pos, noise);
        let w = theta as f64 / grid as f64;
        let target = &p_hat * (1.0 - w) + bg.cov() * w;
        let sensed = belief::info_cost_minimizer(&p_hat, &target)?;
        cost += (at - pos) + noise.alpha() * belief::info_cost(&p_hat, &sensed)?;
        cov = sensed;
        pos = at;
    }
    let p_hat = belief::grow(&cov, total - pos, noise);
    Ok(cost + (total - pos) + noise.alpha() * belief::info_cost(&p_hat, bg.cov())?)
}
