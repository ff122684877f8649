//! Roadmap planners over Gaussian beliefs.

mod params;
mod radius;
mod roadmap;
mod search;

use std::time::Instant;

pub use params::{Mode, PlannerParams, DEFAULT_K_NEAR};
pub use radius::{
    base_step, compute_gamma_floor, connection_radius, connection_radius_lossless, delta_lossless,
    delta_standard, gamma_floor_report, n_star, radius_for, GammaFloor,
};
pub use roadmap::{build_roadmap, connect, sample_free_belief, Edge, Roadmap, SpatialGrid, GOAL, INIT, LOSSLESS_TOL};
pub use search::{dijkstra, near_from, near_to, search, shortest_path, PlanResult, PlanStats};

use crate::belief::{self, Belief, Chain, NoiseModel};
use crate::error::Result;
use crate::geometry::Environment;

/// Forward pass replacing each covariance by the information-cost minimizer
/// against its already refined predecessor.
pub fn lossless_modify(chain: &Chain, noise: &NoiseModel) -> Result<Chain> {
    let mut out: Vec<Belief> = Vec::with_capacity(chain.len());
    out.push(chain.first().clone());
    for b in &chain.nodes()[1..] {
        let refined = belief::lossless_refine(out.last().unwrap(), b, noise)?;
        out.push(refined);
    }
    Ok(Chain::new_unchecked(out))
}

/// Builds a roadmap, searches it and, in standard mode, refines the chain.
pub fn plan(
    env: &Environment,
    b_init: &Belief,
    b_final: &Belief,
    noise: &NoiseModel,
    params: &PlannerParams,
) -> Result<PlanResult> {
    let start = Instant::now();
    let roadmap = build_roadmap(env, b_init, b_final, noise, params)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut result = plan_on(&roadmap)?;
    result.stats.build_ms = build_ms;
    Ok(result)
}

/// Search plus mode-dependent post-processing on an existing roadmap.
pub fn plan_on(roadmap: &Roadmap) -> Result<PlanResult> {
    let mut result = search(roadmap)?;
    if roadmap.params().mode == Mode::Standard {
        let start = Instant::now();
        result.chain = lossless_modify(&result.chain, roadmap.noise())?;
        result.cost = belief::chain_cost(&result.chain, roadmap.noise())?;
        result.stats.search_ms += start.elapsed().as_secs_f64() * 1e3;
    }
    Ok(result)
}
