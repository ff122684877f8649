//! Tiny random roadmaps and an exhaustive path oracle.

use igprm::belief;
use igprm::geometry::{self, Aabb, ConvexObstacle, Environment};
use igprm::planner::{Mode, PlannerParams, GOAL, INIT};
use igprm::{NoiseModel, Roadmap};
use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{belief as make_belief, spd_from};

pub fn random_roadmap(rng: &mut ChaCha8Rng) -> Roadmap {
    let n = rng.random_range(2..=10);
    let nodes: Vec<_> = (0..n)
        .map(|_| {
            let m = [rng.random_range(0.1..0.9), rng.random_range(0.1..0.9)];
            let g: Vec<f64> = (0..4).map(|_| rng.random_range(-0.05..0.05)).collect();
            make_belief(&m, spd_from(&g, 2, 1e-4))
        })
        .collect();
    let obstacles = if rng.random_bool(0.5) {
        let c = DVector::from_vec(vec![rng.random_range(0.3..0.7), rng.random_range(0.3..0.7)]);
        vec![ConvexObstacle::ball(c, rng.random_range(0.02..0.15)).unwrap()]
    } else {
        Vec::new()
    };
    let env = Environment::new(Aabb::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap(), obstacles, 1.0).unwrap();
    let noise = NoiseModel::isotropic(2, rng.random_range(0.0..0.01), rng.random_range(0.0..2.0)).unwrap();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(0.3) {
                edges.push((i, j));
            }
        }
    }
    let params = PlannerParams {
        rho: 1e-5,
        r_max: 1.0,
        gamma: 1.0,
        k_near: rng.random_range(1..=4),
        mode: Mode::Standard,
        n: n - 2,
        seed: 0,
    };
    Roadmap::from_parts(nodes, &edges, env, noise, params, 0.3).unwrap()
}

/// Endpoint overlay computed from scratch: the k nearest (ties by index) nodes
/// whose transition clears the obstacles.
pub fn overlay(r: &Roadmap, anchor: usize, outgoing: bool) -> Vec<usize> {
    let x = r.node(anchor).mean();
    let mut others: Vec<usize> = (0..r.nodes().len()).filter(|&j| j != anchor).collect();
    others.sort_by(|&a, &b| {
        let da = (r.node(a).mean() - x).norm();
        let db = (r.node(b).mean() - x).norm();
        da.partial_cmp(&db).unwrap().then(a.cmp(&b))
    });
    others
        .into_iter()
        .filter(|&j| {
            let (from, to) = if outgoing { (anchor, j) } else { (j, anchor) };
            geometry::collision_free_transition(r.node(from), r.node(to).mean(), r.noise(), r.env()).unwrap()
        })
        .take(r.params().k_near)
        .collect()
}

pub fn brute_force(r: &Roadmap) -> Option<f64> {
    let n = r.nodes().len();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for e in r.out_edges(i) {
            adj[i][e.to] = true;
        }
    }
    for j in overlay(r, INIT, true) {
        adj[INIT][j] = true;
    }
    for j in overlay(r, GOAL, false) {
        adj[j][GOAL] = true;
    }
    let cost = |i: usize, j: usize| belief::edge_cost(r.node(i), r.node(j), r.noise()).unwrap();
    fn dfs(
        at: usize,
        acc: f64,
        seen: &mut Vec<bool>,
        adj: &[Vec<bool>],
        cost: &dyn Fn(usize, usize) -> f64,
        best: &mut Option<f64>,
    ) {
        if at == GOAL {
            *best = Some(best.map_or(acc, |b: f64| b.min(acc)));
            return;
        }
        for next in 0..adj.len() {
            if adj[at][next] && !seen[next] {
                seen[next] = true;
                dfs(next, acc + cost(at, next), seen, adj, cost, best);
                seen[next] = false;
            }
        }
    }
    let mut seen = vec![false; n];
    seen[INIT] = true;
    let mut best = None;
    dfs(INIT, 0.0, &mut seen, &adj, &cost, &mut best);
    best
}
