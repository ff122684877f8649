//! Exhaustive checks of the endpoint-connected search on tiny roadmaps.

mod common;

use common::search::{brute_force, overlay, random_roadmap};
use igprm::planner::{self, GOAL, INIT};
use igprm::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn search_matches_exhaustive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut found = 0;
    for case in 0..200 {
        let r = random_roadmap(&mut rng);
        let expect = brute_force(&r);
        match (planner::search(&r), expect) {
            (Ok(res), Some(c)) => {
                found += 1;
                assert!((res.search_cost - c).abs() <= 1e-9 * c.max(1.0), "case {case}: {} vs {c}", res.search_cost);
                assert!((res.cost - c).abs() <= 1e-9 * c.max(1.0), "case {case}");
                assert_eq!(res.path.first(), Some(&INIT));
                assert_eq!(res.path.last(), Some(&GOAL));
            }
            (Err(Error::NoPath), None) => {}
            (got, want) => panic!("case {case}: search {got:?}, oracle {want:?}"),
        }
    }
    assert!(found > 50, "only {found} cases had a path");
}

#[test]
fn overlay_matches_independent_selection() {
    let mut rng = ChaCha8Rng::seed_from_u64(78);
    for _ in 0..100 {
        let r = random_roadmap(&mut rng);
        let k = r.params().k_near;
        let (from, _) = planner::near_from(&r, k).unwrap();
        let (to, _) = planner::near_to(&r, k).unwrap();
        assert_eq!(from.iter().map(|e| e.to).collect::<Vec<_>>(), overlay(&r, INIT, true));
        assert_eq!(to.iter().map(|e| e.to).collect::<Vec<_>>(), overlay(&r, GOAL, false));
    }
}

#[test]
fn dijkstra_agrees_with_floyd_warshall() {
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    for _ in 0..200 {
        let n = rng.random_range(2..12);
        let mut adj = vec![Vec::new(); n];
        let mut dist = vec![vec![f64::INFINITY; n]; n];
        for (i, row) in dist.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.random_bool(0.25) {
                    let w = rng.random_range(0.0..3.0);
                    adj[i].push(planner::Edge { to: j, cost: w });
                    dist[i][j] = dist[i][j].min(w);
                }
            }
        }
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    dist[i][j] = dist[i][j].min(dist[i][m] + dist[m][j]);
                }
            }
        }
        let got = planner::shortest_path(&adj, 0, n - 1);
        match got {
            Some((c, path)) => {
                assert!((c - dist[0][n - 1]).abs() <= 1e-12);
                let walked: f64 = path
                    .windows(2)
                    .map(|w| adj[w[0]].iter().find(|e| e.to == w[1]).unwrap().cost)
                    .sum();
                assert!((walked - c).abs() <= 1e-12);
            }
            None => assert!(dist[0][n - 1].is_infinite()),
        }
    }
}
