mod common;

use common::PAPER_TOML;
use igprm::harness;
use igprm::persist::{self, RunStatus};
use igprm::planner::{self, PlannerParams};
use igprm::{config, Error};

fn small_config() -> config::ExperimentConfig {
    let mut cfg = config::parse_config(PAPER_TOML).unwrap();
    cfg.planner = PlannerParams { n: 1200, ..cfg.planner };
    cfg
}

#[test]
fn roadmap_roundtrip_gives_identical_search() {
    let cfg = small_config();
    let roadmap = planner::build_roadmap(&cfg.environment, &cfg.init, &cfg.goal, &cfg.noise, &cfg.planner).unwrap();
    let mut buf = Vec::new();
    persist::write_roadmap(&roadmap, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let loaded = persist::parse_roadmap(&text, Some(&cfg.environment.hash())).unwrap();
    assert_eq!(loaded.nodes(), roadmap.nodes());
    for i in 0..roadmap.nodes().len() {
        assert_eq!(loaded.out_edges(i), roadmap.out_edges(i));
    }
    let a = planner::plan_on(&roadmap).unwrap();
    let b = planner::plan_on(&loaded).unwrap();
    assert_eq!(a.path, b.path);
    assert_eq!(a.cost.to_bits(), b.cost.to_bits());
    assert_eq!(a.chain, b.chain);
}

#[test]
fn tampering_is_detected() {
    let cfg = small_config();
    let roadmap = planner::build_roadmap(&cfg.environment, &cfg.init, &cfg.goal, &cfg.noise, &cfg.planner).unwrap();
    let mut buf = Vec::new();
    persist::write_roadmap(&roadmap, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();

    let mut scaled = json.clone();
    for e in scaled["edges"].as_array_mut().unwrap() {
        let c = e[2].as_f64().unwrap();
        e[2] = serde_json::json!(c * 1.001);
    }
    assert!(matches!(persist::parse_roadmap(&scaled.to_string(), None), Err(Error::Persist(_))));

    let mut moved = json.clone();
    moved["environment"]["chi_sq"] = serde_json::json!(4.0);
    assert!(matches!(persist::parse_roadmap(&moved.to_string(), None), Err(Error::Persist(_))));

    let mut dangling = json.clone();
    dangling["edges"].as_array_mut().unwrap().push(serde_json::json!([0, 999_999, 1.0]));
    assert!(matches!(persist::parse_roadmap(&dangling.to_string(), None), Err(Error::Persist(_))));

    let other = igprm::Environment::unit_box(2, 4.0).unwrap().hash();
    assert!(matches!(persist::parse_roadmap(&text, Some(&other)), Err(Error::Persist(_))));

    json["format"] = serde_json::json!("something-else");
    assert!(persist::parse_roadmap(&json.to_string(), None).is_err());
}

#[test]
fn reruns_write_byte_identical_results() {
    let cfg = small_config();
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    harness::run_plan(&cfg, Some(&a)).unwrap();
    harness::run_plan(&cfg, Some(&b)).unwrap();
    for f in ["result.json", "roadmap.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let loaded = persist::load_roadmap(&a.join("roadmap.json"), None).unwrap();
    let from_disk = harness::result_file(&cfg.planner, &loaded, 0.6, planner::plan_on(&loaded).ok().as_ref()).unwrap();
    let written = persist::load_result(&a.join("result.json")).unwrap();
    assert_eq!(from_disk.path, written.path);
    assert_eq!(from_disk.cost, written.cost);
}

#[test]
fn stored_total_matches_recomputed_chain_cost() {
    let mut cfg = config::parse_config(PAPER_TOML).unwrap();
    cfg.planner.n = 2000;
    let dir = tempfile::tempdir().unwrap();
    let out = harness::run_plan(&cfg, Some(dir.path())).unwrap();
    let r = persist::load_result(&dir.path().join("result.json")).unwrap();
    assert_eq!(r, out.result);
    assert_eq!(r.status, RunStatus::Ok);
    let total = r.recomputed_cost(&cfg.noise).unwrap();
    assert!((total - r.cost.unwrap()).abs() <= 1e-9);
    assert!((r.edge_costs.iter().sum::<f64>() - total).abs() <= 1e-9);
    assert!((r.baseline_cost - 0.6).abs() < 1e-12);
}

#[test]
fn failed_runs_are_recorded() {
    let mut cfg = small_config();
    cfg.environment = common::walled_box();
    cfg.planner.n = 300;
    let dir = tempfile::tempdir().unwrap();
    let out = harness::run_plan(&cfg, Some(dir.path())).unwrap();
    assert!(out.plan.is_none());
    let r = persist::load_result(&dir.path().join("result.json")).unwrap();
    assert_eq!(r.status, RunStatus::Failure);
    assert!(r.chain.is_empty() && r.cost.is_none());
}

#[test]
fn inconsistent_result_files_are_rejected() {
    let cfg = small_config();
    let out = harness::run_plan(&cfg, None).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&out.result.to_json()).unwrap();
    assert!(persist::parse_result(&v.to_string()).is_ok());
    v["edge_costs"].as_array_mut().unwrap().push(serde_json::json!(0.0));
    assert!(persist::parse_result(&v.to_string()).is_err());
    v["extra"] = serde_json::json!(1);
    assert!(persist::parse_result(&v.to_string()).is_err());
}
