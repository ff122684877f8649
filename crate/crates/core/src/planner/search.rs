//! Endpoint connection and shortest-path search over a built roadmap.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::belief::{self, Chain};
use crate::error::{Error, Result};

use super::roadmap::{Edge, Roadmap, GOAL, INIT};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PlanStats {
    pub nodes: usize,
    pub edges: usize,
    pub collision_checks: u64,
    pub build_ms: f64,
    pub search_ms: f64,
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub chain: Chain,
    /// Chain cost of `chain`.
    pub cost: f64,
    /// Cost found by the search, before any refinement.
    pub search_cost: f64,
    /// Roadmap indices of the chain nodes.
    pub path: Vec<usize>,
    pub stats: PlanStats,
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    cost: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on cost, ties broken by node index
        other.cost.total_cmp(&self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `src` to `dst`; `neighbours(i, visit)` must call `visit(j, w)`
/// for every out-edge `i → j` with weight `w ≥ 0`.
pub fn dijkstra<F>(n: usize, src: usize, dst: usize, mut neighbours: F) -> Option<(f64, Vec<usize>)>
where
    F: FnMut(usize, &mut dyn FnMut(usize, f64)),
{
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Entry { cost: 0.0, node: src });
    while let Some(Entry { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        if node == dst {
            break;
        }
        neighbours(node, &mut |j, w| {
            let next = cost + w;
            if next < dist[j] {
                dist[j] = next;
                prev[j] = node;
                heap.push(Entry { cost: next, node: j });
            }
        });
    }
    if !dist[dst].is_finite() {
        return None;
    }
    let mut path = vec![dst];
    let mut cur = dst;
    while cur != src {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    Some((dist[dst], path))
}

/// Shortest path on a plain adjacency list.
pub fn shortest_path(adj: &[Vec<Edge>], src: usize, dst: usize) -> Option<(f64, Vec<usize>)> {
    dijkstra(adj.len(), src, dst, |i, visit| {
        for e in &adj[i] {
            visit(e.to, e.cost);
        }
    })
}

fn by_distance(roadmap: &Roadmap, anchor: usize) -> Vec<usize> {
    let x = roadmap.node(anchor).mean();
    let mut order: Vec<(f64, usize)> = (0..roadmap.nodes().len())
        .filter(|&j| j != anchor)
        .map(|j| ((roadmap.node(j).mean() - x).norm(), j))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    order.into_iter().map(|(_, j)| j).collect()
}

/// The `k` nearest nodes that `b_init` can transition to.
pub fn near_from(roadmap: &Roadmap, k: usize) -> Result<(Vec<Edge>, u64)> {
    let mut out = Vec::new();
    let mut checks = 0;
    for j in by_distance(roadmap, INIT) {
        if out.len() == k {
            break;
        }
        checks += 1;
        if roadmap.qualifies(INIT, j)? {
            let cost = belief::edge_cost(roadmap.node(INIT), roadmap.node(j), roadmap.noise())?;
            out.push(Edge { to: j, cost });
        }
    }
    Ok((out, checks))
}

/// The `k` nearest nodes that can transition to `b_final`; `Edge::to` holds the source.
pub fn near_to(roadmap: &Roadmap, k: usize) -> Result<(Vec<Edge>, u64)> {
    let mut out = Vec::new();
    let mut checks = 0;
    for j in by_distance(roadmap, GOAL) {
        if out.len() == k {
            break;
        }
        checks += 1;
        if roadmap.qualifies(j, GOAL)? {
            let cost = belief::edge_cost(roadmap.node(j), roadmap.node(GOAL), roadmap.noise())?;
            out.push(Edge { to: j, cost });
        }
    }
    Ok((out, checks))
}

/// Connects the endpoints to their `k_near` nearest qualifying nodes and
/// returns the cheapest chain from node 0 to node 1.
pub fn search(roadmap: &Roadmap) -> Result<PlanResult> {
    let start = Instant::now();
    let k = roadmap.params().k_near;
    let (from_init, c1) = near_from(roadmap, k)?;
    let (to_goal, c2) = near_to(roadmap, k)?;
    let into_goal: HashMap<usize, f64> = to_goal.iter().map(|e| (e.to, e.cost)).collect();

    let found = dijkstra(roadmap.nodes().len(), INIT, GOAL, |i, visit| {
        for e in roadmap.out_edges(i) {
            visit(e.to, e.cost);
        }
        if i == INIT {
            for e in &from_init {
                visit(e.to, e.cost);
            }
        }
        if let Some(&w) = into_goal.get(&i) {
            visit(GOAL, w);
        }
    });
    let (search_cost, path) = found.ok_or(Error::NoPath)?;
    let chain = Chain::new_unchecked(path.iter().map(|&i| roadmap.node(i).clone()).collect());
    let cost = belief::chain_cost(&chain, roadmap.noise())?;
    Ok(PlanResult {
        chain,
        cost,
        search_cost,
        path,
        stats: PlanStats {
            nodes: roadmap.nodes().len(),
            edges: roadmap.edge_count(),
            collision_checks: roadmap.collision_checks() + c1 + c2,
            build_ms: 0.0,
            search_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}
