//! Roadmap construction over sampled beliefs.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::belief::{self, Belief, NoiseModel};
use crate::error::{Error, Result};
use crate::geometry::{collision_free_belief, collision_free_transition, Environment};
use crate::linalg;
use crate::rng::RngState;
use crate::spd::sample_uniform_spd;

use super::params::{Mode, PlannerParams};
use super::radius;

/// Tolerance used for the lossless edge predicate.
pub const LOSSLESS_TOL: f64 = 1e-9;
/// Draws allowed per sampled belief before giving up.
pub const SAMPLE_ATTEMPTS: usize = 1_000_000;

pub const INIT: usize = 0;
pub const GOAL: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub to: usize,
    pub cost: f64,
}

/// Directed roadmap; node 0 is the initial belief and node 1 the goal.
#[derive(Debug, Clone, PartialEq)]
pub struct Roadmap {
    pub(crate) nodes: Vec<Belief>,
    pub(crate) edges: Vec<Vec<Edge>>,
    pub(crate) env: Environment,
    pub(crate) noise: NoiseModel,
    pub(crate) params: PlannerParams,
    pub(crate) d_min: f64,
    pub(crate) collision_checks: u64,
}

impl Roadmap {
    /// Assembles a roadmap from explicit parts, recomputing every edge cost.
    pub fn from_parts(
        nodes: Vec<Belief>,
        edge_list: &[(usize, usize)],
        env: Environment,
        noise: NoiseModel,
        params: PlannerParams,
        d_min: f64,
    ) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidArgument("roadmap needs the two endpoint nodes".into()));
        }
        let mut edges = vec![Vec::new(); nodes.len()];
        for &(from, to) in edge_list {
            if from >= nodes.len() || to >= nodes.len() || from == to {
                return Err(Error::InvalidArgument(format!("invalid edge {from} → {to}")));
            }
            let cost = belief::edge_cost(&nodes[from], &nodes[to], &noise)?;
            edges[from].push(Edge { to, cost });
        }
        Ok(Roadmap { nodes, edges, env, noise, params, d_min, collision_checks: 0 })
    }

    pub fn nodes(&self) -> &[Belief] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Belief {
        &self.nodes[i]
    }

    pub fn out_edges(&self, i: usize) -> &[Edge] {
        &self.edges[i]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn params(&self) -> &PlannerParams {
        &self.params
    }

    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    pub fn collision_checks(&self) -> u64 {
        self.collision_checks
    }

    /// Nodes other than `node` whose mean lies within `radius` (linear scan).
    pub fn near(&self, node: usize, radius: f64) -> Vec<usize> {
        let x = self.nodes[node].mean();
        (0..self.nodes.len())
            .filter(|&j| j != node && (self.nodes[j].mean() - x).norm() <= radius)
            .collect()
    }

    /// Whether the transition `from → to` may become an edge in this roadmap's mode.
    pub fn qualifies(&self, from: usize, to: usize) -> Result<bool> {
        edge_qualifies(&self.nodes[from], &self.nodes[to], &self.noise, &self.env, self.params.mode)
    }
}

pub(crate) fn edge_qualifies(
    b1: &Belief,
    b2: &Belief,
    noise: &NoiseModel,
    env: &Environment,
    mode: Mode,
) -> Result<bool> {
    if mode == Mode::Lossless && !belief::is_lossless(b1, b2, noise, LOSSLESS_TOL)? {
        return Ok(false);
    }
    collision_free_transition(b1, b2.mean(), noise, env)
}

/// Uniform hash grid over node means for fixed-radius queries.
pub struct SpatialGrid {
    cell: f64,
    dim: usize,
    cells: HashMap<Vec<i64>, Vec<usize>>,
}

impl SpatialGrid {
    pub fn new(points: &[&DVector<f64>], cell: f64) -> Self {
        let dim = points.first().map(|p| p.len()).unwrap_or(1);
        let mut cells: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(Self::key(p, cell)).or_default().push(i);
        }
        SpatialGrid { cell, dim, cells }
    }

    fn key(p: &DVector<f64>, cell: f64) -> Vec<i64> {
        p.iter().map(|v| (v / cell).floor() as i64).collect()
    }

    /// Candidate indices from the 3^d block of cells around `p`; callers filter by distance.
    pub fn candidates(&self, p: &DVector<f64>) -> Vec<usize> {
        let center = Self::key(p, self.cell);
        let mut out = Vec::new();
        let mut offset = vec![-1i64; self.dim];
        loop {
            let key: Vec<i64> = center.iter().zip(&offset).map(|(c, o)| c + o).collect();
            if let Some(ids) = self.cells.get(&key) {
                out.extend_from_slice(ids);
            }
            let mut k = 0;
            while k < self.dim {
                offset[k] += 1;
                if offset[k] <= 1 {
                    break;
                }
                offset[k] = -1;
                k += 1;
            }
            if k == self.dim {
                break;
            }
        }
        out.sort_unstable();
        out
    }
}

/// Draws a belief with mean uniform on the bounds and covariance uniform on the
/// trace band, rejecting until the confidence ellipse is collision-free.
pub fn sample_free_belief(
    env: &Environment,
    params: &PlannerParams,
    rng: &mut RngState,
) -> Result<Belief> {
    let d = env.dim();
    let band = params.trace_band(d)?;
    let bounds = env.bounds();
    for _ in 0..SAMPLE_ATTEMPTS {
        let cov = sample_uniform_spd(&band, rng)?;
        let mean = DVector::from_fn(d, |k, _| rng.random_range(bounds.lo[k]..bounds.hi[k]));
        if env.point_in_obstacle(&mean) {
            continue;
        }
        let b = Belief::new_unchecked(mean, cov);
        if collision_free_belief(&b, env)? {
            return Ok(b);
        }
    }
    Err(Error::DegenerateEnvironment(format!(
        "no collision-free belief found in {SAMPLE_ATTEMPTS} draws"
    )))
}

fn check_inputs(env: &Environment, b_init: &Belief, b_final: &Belief, noise: &NoiseModel) -> Result<()> {
    for got in [b_init.dim(), b_final.dim(), noise.dim()] {
        if got != env.dim() {
            return Err(Error::DimensionMismatch { expected: env.dim(), got });
        }
    }
    Ok(())
}

static GAMMA_WARNED: AtomicBool = AtomicBool::new(false);
static GOAL_WARNED: AtomicBool = AtomicBool::new(false);

// studies build many roadmaps from one config; repeat warnings go to debug
fn warn_once(flag: &AtomicBool, args: std::fmt::Arguments) {
    if flag.swap(true, Ordering::Relaxed) {
        log::debug!("{args}");
    } else {
        log::warn!("{args}");
    }
}

/// Samples `params.n` beliefs and connects every ordered pair whose means are
/// within the connection radius and whose transition qualifies.
pub fn build_roadmap(
    env: &Environment,
    b_init: &Belief,
    b_final: &Belief,
    noise: &NoiseModel,
    params: &PlannerParams,
) -> Result<Roadmap> {
    check_inputs(env, b_init, b_final, noise)?;
    let d = env.dim();
    params.validate(d)?;
    if !collision_free_belief(b_init, env)? {
        return Err(Error::InitInCollision);
    }
    match radius::compute_gamma_floor(env, params, noise) {
        Ok(floor) if params.gamma <= floor => warn_once(
            &GAMMA_WARNED,
            format_args!("gamma {} is below the schedule floor {floor}", params.gamma),
        ),
        Ok(_) => {}
        Err(e) => warn_once(&GAMMA_WARNED, format_args!("could not evaluate the gamma floor: {e}")),
    }
    let goal_trace = b_final.cov().trace();
    if !(goal_trace > params.rho * d as f64 && goal_trace <= params.r_max) {
        warn_once(&GOAL_WARNED, format_args!("goal covariance trace {goal_trace} lies outside the sampling band"));
    }

    let mut rng = RngState::from_seed(params.seed);
    let mut nodes = Vec::with_capacity(params.n + 2);
    nodes.push(b_init.clone());
    nodes.push(b_final.clone());
    for _ in 0..params.n {
        nodes.push(sample_free_belief(env, params, &mut rng)?);
    }
    let d_min = radius::radius_for(params.n, env, params, noise)?;
    connect(nodes, env.clone(), noise.clone(), params.clone(), d_min)
}

/// Connects an explicit node set with radius `d_min`.
pub fn connect(
    nodes: Vec<Belief>,
    env: Environment,
    noise: NoiseModel,
    params: PlannerParams,
    d_min: f64,
) -> Result<Roadmap> {
    let inv_sqrt: Vec<DMatrix<f64>> = nodes
        .par_iter()
        .map(|b| linalg::sqrt_and_inv_sqrt(b.cov()).map(|(_, inv)| inv))
        .collect::<Result<_>>()?;
    let means: Vec<&DVector<f64>> = nodes.iter().map(|b| b.mean()).collect();
    let grid = (d_min < env.bounds().diameter() && d_min > 0.0).then(|| SpatialGrid::new(&means, d_min));
    let checks = AtomicU64::new(0);

    let edges: Vec<Vec<Edge>> = (0..nodes.len())
        .into_par_iter()
        .map(|i| {
            let xi = nodes[i].mean();
            let candidates = match &grid {
                Some(g) => g.candidates(xi),
                None => (0..nodes.len()).collect(),
            };
            let mut out = Vec::new();
            for j in candidates {
                if j == i {
                    continue;
                }
                let len = (nodes[j].mean() - xi).norm();
                if len > d_min {
                    continue;
                }
                checks.fetch_add(1, Ordering::Relaxed);
                if !edge_qualifies(&nodes[i], &nodes[j], &noise, &env, params.mode)? {
                    continue;
                }
                let cost = cost_with_cache(&nodes[i], &nodes[j], &inv_sqrt[j], &noise, len)?;
                out.push(Edge { to: j, cost });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    Ok(Roadmap { nodes, edges, env, noise, params, d_min, collision_checks: checks.into_inner() })
}

pub(crate) fn cost_with_cache(
    b1: &Belief,
    b2: &Belief,
    inv_sqrt_2: &DMatrix<f64>,
    noise: &NoiseModel,
    len: f64,
) -> Result<f64> {
    debug_assert_eq!(len, (b2.mean() - b1.mean()).norm());
    if noise.alpha() == 0.0 {
        return Ok(len);
    }
    Ok(len + noise.alpha() * belief::info_cost_whitened(&belief::grow(b1.cov(), len, noise), inv_sqrt_2)?)
}

impl Roadmap {
    /// Reassembles a loaded roadmap whose edges were checked by the caller.
    pub(crate) fn from_verified(
        nodes: Vec<Belief>,
        edges: Vec<Vec<Edge>>,
        env: Environment,
        noise: NoiseModel,
        params: PlannerParams,
        d_min: f64,
    ) -> Self {
        Roadmap { nodes, edges, env, noise, params, d_min, collision_checks: 0 }
    }
}
