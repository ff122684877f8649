//! JSON formats for roadmaps and plan results.

use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::belief::{self, Belief, NoiseModel};
use crate::error::{Error, Result};
use crate::geometry::Environment;
use crate::planner::{Edge, Mode, PlannerParams, Roadmap};

pub const ROADMAP_FORMAT: &str = "igprm-roadmap";
pub const RESULT_FORMAT: &str = "igprm-result";
pub const FORMAT_VERSION: u32 = 1;
/// Edges whose cost is recomputed when a roadmap is loaded.
pub const SPOT_CHECKS: usize = 16;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RoadmapFile {
    format: String,
    version: u32,
    env_hash: String,
    environment: Environment,
    noise: NoiseModel,
    params: PlannerParams,
    d_min: f64,
    nodes: Vec<Belief>,
    edges: Vec<(usize, usize, f64)>,
}

pub fn write_roadmap<W: Write>(roadmap: &Roadmap, out: W) -> Result<()> {
    let file = RoadmapFile {
        format: ROADMAP_FORMAT.into(),
        version: FORMAT_VERSION,
        env_hash: roadmap.env().hash(),
        environment: roadmap.env().clone(),
        noise: roadmap.noise().clone(),
        params: roadmap.params().clone(),
        d_min: roadmap.d_min(),
        nodes: roadmap.nodes().to_vec(),
        edges: (0..roadmap.nodes().len())
            .flat_map(|i| roadmap.out_edges(i).iter().map(move |e| (i, e.to, e.cost)))
            .collect(),
    };
    let mut w = BufWriter::new(out);
    serde_json::to_writer(&mut w, &file).map_err(|e| Error::Persist(e.to_string()))?;
    w.flush()?;
    Ok(())
}

pub fn save_roadmap(roadmap: &Roadmap, path: &Path) -> Result<()> {
    write_roadmap(roadmap, std::fs::File::create(path)?)
}

/// Parses a roadmap, checking the format tag, the environment hash (and
/// `expected_hash` if given), indices, and [`SPOT_CHECKS`] recomputed edge costs.
pub fn parse_roadmap(text: &str, expected_hash: Option<&str>) -> Result<Roadmap> {
    let file: RoadmapFile = serde_json::from_str(text).map_err(|e| Error::Persist(e.to_string()))?;
    if file.format != ROADMAP_FORMAT || file.version != FORMAT_VERSION {
        return Err(Error::Persist(format!(
            "unsupported roadmap format {} v{} (expected {ROADMAP_FORMAT} v{FORMAT_VERSION})",
            file.format, file.version
        )));
    }
    let actual = file.environment.hash();
    if actual != file.env_hash {
        return Err(Error::Persist("environment hash does not match the stored environment".into()));
    }
    if let Some(h) = expected_hash {
        if h != actual {
            return Err(Error::Persist(format!("roadmap was built for environment {actual}, expected {h}")));
        }
    }
    let dim = file.environment.dim();
    if file.noise.dim() != dim || file.nodes.iter().any(|b| b.dim() != dim) {
        return Err(Error::Persist("node or noise dimension differs from the environment".into()));
    }
    if file.nodes.len() < 2 {
        return Err(Error::Persist("roadmap must contain both endpoints".into()));
    }
    if !(file.d_min >= 0.0) {
        return Err(Error::Persist("d_min must be ≥ 0".into()));
    }
    let n = file.nodes.len();
    let mut edges = vec![Vec::new(); n];
    for &(from, to, cost) in &file.edges {
        if from >= n || to >= n || from == to {
            return Err(Error::Persist(format!("invalid edge {from} → {to}")));
        }
        if !(cost >= 0.0) || !cost.is_finite() {
            return Err(Error::Persist(format!("invalid cost {cost} on edge {from} → {to}")));
        }
        edges[from].push(Edge { to, cost });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(file.params.seed ^ file.edges.len() as u64);
    let picks = index::sample(&mut rng, file.edges.len(), SPOT_CHECKS.min(file.edges.len()));
    for k in picks {
        let (from, to, cost) = file.edges[k];
        let fresh = belief::edge_cost(&file.nodes[from], &file.nodes[to], &file.noise)?;
        if (fresh - cost).abs() > 1e-12 * fresh.abs().max(1.0) {
            return Err(Error::Persist(format!("edge {from} → {to} stores cost {cost}, recomputed {fresh}")));
        }
    }
    Ok(Roadmap::from_verified(file.nodes, edges, file.environment, file.noise, file.params, file.d_min))
}

pub fn load_roadmap(path: &Path, expected_hash: Option<&str>) -> Result<Roadmap> {
    parse_roadmap(&std::fs::read_to_string(path)?, expected_hash)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Failure,
}

/// Outcome of one planning run. Holds no timing so reruns are byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub format: String,
    pub version: u32,
    pub status: RunStatus,
    pub mode: Mode,
    pub n: usize,
    pub seed: u64,
    pub gamma: f64,
    pub d_min: f64,
    pub env_hash: String,
    pub baseline_cost: f64,
    pub cost: Option<f64>,
    pub search_cost: Option<f64>,
    pub path: Vec<usize>,
    pub chain: Vec<Belief>,
    pub edge_costs: Vec<f64>,
}

impl ResultFile {
    fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Persist(m.to_string()));
        if self.format != RESULT_FORMAT || self.version != FORMAT_VERSION {
            return bad("unsupported result format");
        }
        if self.path.len() != self.chain.len() {
            return bad("path and chain lengths differ");
        }
        if self.edge_costs.len() != self.chain.len().saturating_sub(1) {
            return bad("edge_costs must have one entry per chain edge");
        }
        match self.status {
            RunStatus::Ok if self.chain.is_empty() || self.cost.is_none() => bad("successful run without a chain"),
            RunStatus::Failure if !self.chain.is_empty() || self.cost.is_some() => bad("failed run with a chain"),
            _ => Ok(()),
        }
    }

    /// Sum of the stored chain's edge costs, recomputed.
    pub fn recomputed_cost(&self, noise: &NoiseModel) -> Result<f64> {
        let chain = crate::belief::Chain::new(self.chain.clone())?;
        belief::chain_cost(&chain, noise)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }
}

pub fn parse_result(text: &str) -> Result<ResultFile> {
    let r: ResultFile = serde_json::from_str(text).map_err(|e| Error::Persist(e.to_string()))?;
    r.check()?;
    Ok(r)
}

pub fn load_result(path: &Path) -> Result<ResultFile> {
    parse_result(&std::fs::read_to_string(path)?)
}

pub(crate) fn result_format() -> (String, u32) {
    (RESULT_FORMAT.into(), FORMAT_VERSION)
}
