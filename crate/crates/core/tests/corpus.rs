//! Runs the parsers over the checked-in fuzz seeds and deterministic
//! mutations of them; none may panic.

use std::path::PathBuf;

use igprm::{config, persist};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seeds(kind: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(kind);
    let mut out: Vec<Vec<u8>> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

fn mutate(seed: &[u8], rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut v = seed.to_vec();
    for _ in 0..rng.random_range(1..6) {
        if v.is_empty() {
            break;
        }
        let i = rng.random_range(0..v.len());
        match rng.random_range(0..5) {
            0 => v[i] = rng.random(),
            1 => v.truncate(i),
            2 => {
                v.remove(i);
            }
            3 => v.insert(i, b"-0e123456789,[]{}\"".as_slice()[rng.random_range(0..18)]),
            _ => {
                // duplicate a chunk
                let j = rng.random_range(i..v.len());
                let chunk = v[i..j].to_vec();
                v.splice(j..j, chunk);
            }
        }
    }
    v
}

fn exercise(kind: &str, parse: impl Fn(&str)) {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for seed in seeds(kind) {
        parse(std::str::from_utf8(&seed).unwrap());
        for _ in 0..300 {
            if let Ok(text) = String::from_utf8(mutate(&seed, &mut rng)) {
                parse(&text);
            }
        }
    }
}

#[test]
fn config_seeds_parse_and_mutations_do_not_panic() {
    for seed in seeds("config") {
        config::parse_config(std::str::from_utf8(&seed).unwrap()).unwrap();
    }
    exercise("config", |t| {
        let _ = config::parse_config(t);
    });
}

#[test]
fn roadmap_seeds_load_and_mutations_do_not_panic() {
    for seed in seeds("roadmap") {
        persist::parse_roadmap(std::str::from_utf8(&seed).unwrap(), None).unwrap();
    }
    exercise("roadmap", |t| {
        if let Ok(r) = persist::parse_roadmap(t, None) {
            let _ = igprm::planner::search(&r);
        }
    });
}

#[test]
fn result_seeds_roundtrip_and_mutations_do_not_panic() {
    exercise("result", |t| {
        if let Ok(r) = persist::parse_result(t) {
            assert_eq!(persist::parse_result(&r.to_json()).unwrap(), r);
        }
    });
}

#[test]
fn oversized_polytopes_are_refused() {
    let normals: Vec<String> = (0..60)
        .map(|k| {
            let a = k as f64 * 0.1;
            format!("[{}, {}, {}, 0.1, 0.1, 0.1, 0.1, 0.1]", a.cos(), a.sin(), (2.0 * a).cos())
        })
        .collect();
    let json = format!(
        r#"{{"bounds": {{"lo": [0,0,0,0,0,0,0,0], "hi": [1,1,1,1,1,1,1,1]}}, "chi_sq": 1.0,
            "obstacles": [{{"kind": "polytope", "normals": [{}], "offsets": [{}]}}]}}"#,
        normals.join(","),
        vec!["0.5"; 60].join(",")
    );
    let started = std::time::Instant::now();
    assert!(serde_json::from_str::<igprm::Environment>(&json).is_err());
    assert!(started.elapsed().as_secs() < 5);
}
