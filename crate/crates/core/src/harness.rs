//! Experiment orchestration: single plans, convergence studies and self-checks.

use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline::{self, BaselineResult};
use crate::belief::{self, Belief, Chain, NoiseModel};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::geometry::{self, Aabb, ConvexObstacle, Environment};
use crate::oracle;
use crate::persist::{self, ResultFile, RunStatus};
use crate::planner::{self, PlanResult, PlannerParams, Roadmap};
use crate::rng::{derive_seed, RngState};
use crate::spd;
use crate::stats;
use crate::volume::{self, TraceBand};

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

/// Result record for a run that may have failed.
pub fn result_file(
    params: &PlannerParams,
    roadmap: &Roadmap,
    baseline_cost: f64,
    plan: Option<&PlanResult>,
) -> Result<ResultFile> {
    let (format, version) = persist::result_format();
    let mut r = ResultFile {
        format,
        version,
        status: RunStatus::Failure,
        mode: params.mode,
        n: params.n,
        seed: params.seed,
        gamma: params.gamma,
        d_min: roadmap.d_min(),
        env_hash: roadmap.env().hash(),
        baseline_cost,
        cost: None,
        search_cost: None,
        path: Vec::new(),
        chain: Vec::new(),
        edge_costs: Vec::new(),
    };
    if let Some(p) = plan {
        r.status = RunStatus::Ok;
        r.cost = Some(p.cost);
        r.search_cost = Some(p.search_cost);
        r.path = p.path.clone();
        r.chain = p.chain.nodes().to_vec();
        r.edge_costs = p
            .chain
            .nodes()
            .windows(2)
            .map(|w| belief::edge_cost(&w[0], &w[1], roadmap.noise()))
            .collect::<Result<_>>()?;
    }
    Ok(r)
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a ExperimentConfig,
    seed: u64,
    d_min: f64,
    n_star: Option<u64>,
    baseline: &'a BaselineResult,
    status: RunStatus,
    nodes: usize,
    edges: usize,
    collision_checks: u64,
    build_ms: f64,
    search_ms: f64,
}

pub struct PlanOutcome {
    pub roadmap: Roadmap,
    pub result: ResultFile,
    /// `None` when no path was found.
    pub plan: Option<PlanResult>,
    pub baseline: BaselineResult,
}

/// Builds, searches and (optionally) writes `result.json`, `roadmap.json` and
/// `manifest.json` into `out`.
pub fn run_plan(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<PlanOutcome> {
    let baseline = baseline::move_and_sense_cost(&cfg.init, &cfg.goal, &cfg.noise)?;
    let start = Instant::now();
    let roadmap = planner::build_roadmap(&cfg.environment, &cfg.init, &cfg.goal, &cfg.noise, &cfg.planner)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let plan = match planner::plan_on(&roadmap) {
        Ok(mut p) => {
            p.stats.build_ms = build_ms;
            Some(p)
        }
        Err(Error::NoPath) => None,
        Err(e) => return Err(e),
    };
    let result = result_file(&cfg.planner, &roadmap, baseline.cost, plan.as_ref())?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        write_text(&dir.join("result.json"), &result.to_json())?;
        persist::save_roadmap(&roadmap, &dir.join("roadmap.json"))?;
        let stats = plan.as_ref().map(|p| p.stats.clone()).unwrap_or_default();
        let manifest = Manifest {
            tool: "igprm",
            version: env!("CARGO_PKG_VERSION"),
            config: cfg,
            seed: cfg.planner.seed,
            d_min: roadmap.d_min(),
            n_star: planner::n_star(cfg.environment.dim(), cfg.planner.gamma),
            baseline: &baseline,
            status: result.status,
            nodes: roadmap.nodes().len(),
            edges: roadmap.edge_count(),
            collision_checks: stats.collision_checks.max(roadmap.collision_checks()),
            build_ms,
            search_ms: stats.search_ms,
        };
        write_text(&dir.join("manifest.json"), &to_json(&manifest))?;
    }
    Ok(PlanOutcome { roadmap, result, plan, baseline })
}

/// One row of the convergence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub n: usize,
    pub seed: u64,
    pub cost: Option<f64>,
    pub failed: u8,
    pub nodes: usize,
    pub edges: usize,
    pub build_ms: f64,
    pub search_ms: f64,
    pub baseline_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub mean_cost: f64,
    pub std_cost: f64,
    pub min_cost: f64,
    pub max_cost: f64,
    pub fail_rate: f64,
}

pub struct StudyRun {
    pub record: ConvergenceRecord,
    pub repeat: usize,
    /// Returned chain, kept for audits.
    pub chain: Option<Chain>,
}

pub struct Study {
    pub runs: Vec<StudyRun>,
    pub summary: Vec<SummaryRow>,
}

fn one_run(cfg: &ExperimentConfig, n: usize, seed: u64, baseline_cost: f64) -> (ConvergenceRecord, Option<Chain>) {
    let params = PlannerParams { n, seed, ..cfg.planner.clone() };
    let mut record = ConvergenceRecord {
        n,
        seed,
        cost: None,
        failed: 1,
        nodes: 0,
        edges: 0,
        build_ms: 0.0,
        search_ms: 0.0,
        baseline_cost,
    };
    let start = Instant::now();
    let roadmap = match planner::build_roadmap(&cfg.environment, &cfg.init, &cfg.goal, &cfg.noise, &params) {
        Ok(r) => r,
        Err(e) => {
            log::warn!("n={n} seed={seed}: roadmap construction failed: {e}");
            return (record, None);
        }
    };
    record.build_ms = start.elapsed().as_secs_f64() * 1e3;
    record.nodes = roadmap.nodes().len();
    record.edges = roadmap.edge_count();
    match planner::plan_on(&roadmap) {
        Ok(p) => {
            record.cost = Some(p.cost);
            record.failed = 0;
            record.search_ms = p.stats.search_ms;
            (record, Some(p.chain))
        }
        Err(e) => {
            if !matches!(e, Error::NoPath) {
                log::warn!("n={n} seed={seed}: search failed: {e}");
            }
            (record, None)
        }
    }
}

pub fn summarize(records: &[ConvergenceRecord]) -> Vec<SummaryRow> {
    let mut ns: Vec<usize> = records.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .map(|n| {
            let rows: Vec<&ConvergenceRecord> = records.iter().filter(|r| r.n == n).collect();
            let costs: Vec<f64> = rows.iter().filter_map(|r| r.cost).collect();
            let k = costs.len() as f64;
            let mean = costs.iter().sum::<f64>() / k;
            let std = if costs.len() > 1 {
                (costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
            } else {
                0.0
            };
            SummaryRow {
                n,
                mean_cost: mean,
                std_cost: if costs.is_empty() { f64::NAN } else { std },
                min_cost: costs.iter().cloned().fold(f64::NAN, f64::min),
                max_cost: costs.iter().cloned().fold(f64::NAN, f64::max),
                fail_rate: 1.0 - k / rows.len() as f64,
            }
        })
        .collect()
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Persist(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::Persist(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_convergence_csv(path: &Path) -> Result<Vec<ConvergenceRecord>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Persist(e.to_string()))?;
    r.deserialize().map(|row| row.map_err(|e| Error::Persist(e.to_string()))).collect()
}

/// Runs every `(n, repeat)` of the study with `jobs` workers and writes
/// `convergence.csv`, `summary.csv` and per-run result files under `out`.
pub fn run_convergence(cfg: &ExperimentConfig, out: Option<&Path>, jobs: usize) -> Result<Study> {
    let study = cfg
        .study
        .as_ref()
        .ok_or_else(|| Error::Config { field: "study".into(), message: "a [study] section is required".into() })?;
    let baseline_cost = baseline::move_and_sense_cost(&cfg.init, &cfg.goal, &cfg.noise)?.cost;
    let tasks: Vec<(usize, usize, u64)> = study
        .n_values
        .iter()
        .flat_map(|&n| (0..study.repeats).map(move |r| (n, r, derive_seed(study.base_seed, n as u64, r as u64))))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let runs: Vec<StudyRun> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(n, repeat, seed)| {
                let (record, chain) = one_run(cfg, n, seed, baseline_cost);
                log::info!("n={n} repeat={repeat} cost={:?}", record.cost);
                StudyRun { record, repeat, chain }
            })
            .collect()
    });
    let records: Vec<ConvergenceRecord> = runs.iter().map(|r| r.record.clone()).collect();
    let summary = summarize(&records);
    if let Some(dir) = out {
        write_csv(&dir.join("convergence.csv"), &records)?;
        write_csv(&dir.join("summary.csv"), &summary)?;
        for run in &runs {
            let chain = run.chain.as_ref().map(|c| c.nodes().to_vec()).unwrap_or_default();
            let path = dir.join("runs").join(format!("n{}-r{}.json", run.record.n, run.repeat));
            write_text(&path, &to_json(&RunChain { record: &run.record, chain }))?;
        }
    }
    Ok(Study { runs, summary })
}

#[derive(Serialize)]
struct RunChain<'a> {
    #[serde(flatten)]
    record: &'a ConvergenceRecord,
    chain: Vec<Belief>,
}

/// Uniform covariance sampler used by the statistical suites; swappable for mutation tests.
pub type Sampler = dyn Fn(&TraceBand, &mut RngState) -> Result<DMatrix<f64>> + Sync;

pub fn default_sampler() -> Box<Sampler> {
    Box::new(|band, rng| spd::sample_uniform_spd(band, rng))
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl SuiteReport {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        SuiteReport { name: name.into(), passed, detail }
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}] {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

const ALPHA: f64 = 0.001;

fn suite_rng(seed: u64, suite: u64) -> RngState {
    RngState::from_seed(derive_seed(seed, suite, 0))
}

/// Trace of uniform draws on `(0, 1]` against `F(t) = t^m`.
pub fn trace_law_suite(d: usize, samples: usize, seed: u64, sampler: &Sampler) -> Result<SuiteReport> {
    let band = TraceBand::new(d, 0.0, 1.0)?;
    let m = band.free_entries() as i32;
    let mut rng = suite_rng(seed, 1);
    let traces: Vec<f64> = (0..samples).map(|_| sampler(&band, &mut rng).map(|p| p.trace())).collect::<Result<_>>()?;
    let ks = stats::ks_one_sample(&traces, |t| t.clamp(0.0, 1.0).powi(m))?;
    let crit = ks.critical(ALPHA);
    Ok(SuiteReport::new(
        "sampler trace law",
        ks.statistic < crit,
        format!("d={d} n={samples} KS D={:.5} (0.1% critical {:.5}, p={:.3})", ks.statistic, crit, ks.p_value),
    ))
}

/// Distribution of `P₁₁` against that of `(V P Vᵀ)₁₁` for a fixed rotation `V`.
pub fn rotation_suite(d: usize, samples: usize, seed: u64, sampler: &Sampler) -> Result<SuiteReport> {
    let band = TraceBand::new(d, 0.0, 1.0)?;
    let mut rng = suite_rng(seed, 2);
    let v = spd::haar_orthogonal(d, &mut rng);
    let half = samples / 2;
    let plain: Vec<f64> = (0..half).map(|_| sampler(&band, &mut rng).map(|p| p[(0, 0)])).collect::<Result<_>>()?;
    let rotated: Vec<f64> = (0..half)
        .map(|_| sampler(&band, &mut rng).map(|p| (&v * p * v.transpose())[(0, 0)]))
        .collect::<Result<_>>()?;
    let ks = stats::ks_two_sample(&plain, &rotated)?;
    Ok(SuiteReport::new(
        "sampler rotation invariance",
        ks.p_value > ALPHA,
        format!("d={d} two-sample KS D={:.5} p={:.3}", ks.statistic, ks.p_value),
    ))
}

/// Membership frequency of a nested band against the volume ratio.
pub fn membership_suite(d: usize, samples: usize, seed: u64, sampler: &Sampler) -> Result<SuiteReport> {
    let band = TraceBand::new(d, 0.2, 1.0)?;
    let inner = TraceBand::new(d, 0.2, 0.7)?;
    let expect = volume::volume_trace_band(&inner)? / volume::volume_trace_band(&band)?;
    let mut rng = suite_rng(seed, 3);
    let mut hits = 0usize;
    for _ in 0..samples {
        if sampler(&band, &mut rng)?.trace() <= 0.7 {
            hits += 1;
        }
    }
    let freq = hits as f64 / samples as f64;
    let se = (expect * (1.0 - expect) / samples as f64).sqrt();
    Ok(SuiteReport::new(
        "sampler membership ratio",
        (freq - expect).abs() <= 3.0 * se,
        format!("d={d} frequency {freq:.5} vs volume ratio {expect:.5} (3σ = {:.5})", 3.0 * se),
    ))
}

/// First-column angle of 2×2 Haar draws over 36 bins.
pub fn haar_suite(samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, 4);
    let mut counts = [0u64; 36];
    for _ in 0..samples {
        let u = spd::haar_orthogonal(2, &mut rng);
        let angle = u[(1, 0)].atan2(u[(0, 0)]) + std::f64::consts::PI;
        let bin = ((angle / (2.0 * std::f64::consts::PI)) * 36.0) as usize;
        counts[bin.min(35)] += 1;
    }
    let chi = stats::chi_square_uniform(&counts)?;
    Ok(SuiteReport::new(
        "Haar angle uniformity",
        chi.p_value > ALPHA,
        format!("n={samples} χ²={:.2} dof={} p={:.3}", chi.statistic, chi.dof, chi.p_value),
    ))
}

pub fn selberg_suite(samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, 5);
    let exact2 = volume::selberg(2, 1.0, 1.0, 0.5)?;
    let mut ok = (exact2 - 1.0 / 3.0).abs() < 1e-12;
    let mut detail = format!("S₂={exact2:.15}");
    for d in [2, 3] {
        let exact = volume::selberg(d, 1.0, 1.0, 0.5)?;
        let (est, se) = oracle::mc_selberg_half(d, samples, &mut rng);
        ok &= (est - exact).abs() <= 3.0 * se;
        detail.push_str(&format!("; d={d} MC {est:.5}±{se:.5} vs {exact:.5}"));
    }
    Ok(SuiteReport::new("Selberg integral", ok, detail))
}

pub fn volume_suite(samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut ok = true;
    let mut detail = String::new();
    for d in 1..=4 {
        let whole = volume::volume_trace_band(&TraceBand::new(d, 0.1, 2.0)?)?;
        let parts = volume::volume_trace_band(&TraceBand::new(d, 0.1, 0.7)?)?
            + volume::volume_trace_band(&TraceBand::new(d, 0.7, 2.0)?)?;
        let rel = (whole - parts).abs() / whole;
        ok &= rel <= 1e-12;
        detail.push_str(&format!("d={d} additivity {rel:.1e}; "));
    }
    let mut rng = suite_rng(seed, 6);
    // equality holds for A = I, so the comparison allows sampling error
    let bound = volume::vol_lower_bound_dominated(&[1.0, 1.0])?;
    let (mc, se) = oracle::mc_dominated_volume(&[1.0, 1.0], samples, &mut rng)?;
    ok &= bound <= mc + 3.0 * se;
    detail.push_str(&format!("A=I bound {bound:.5} vs MC {mc:.5}±{se:.5}; "));
    let bound = volume::vol_lower_bound_dominated(&[1.0, 2.0])?;
    let (mc, se) = oracle::mc_dominated_volume(&[1.0, 2.0], samples, &mut rng)?;
    ok &= bound < mc - 3.0 * se;
    detail.push_str(&format!("A=diag(1,2) bound {bound:.5} vs MC {mc:.5}±{se:.5}"));
    Ok(SuiteReport::new("volume formulas", ok, detail))
}

/// Random SPD matrix `G Gᵀ + εI` with Gaussian `G`.
pub fn random_spd<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    crate::linalg::symmetrize(&(&g * g.transpose() + DMatrix::identity(d, d) * 0.05))
}

/// Closed-form information cost and minimizer against the barrier solver.
pub fn lemma3_suite(pairs: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, 7);
    let mut worst_gap: f64 = 0.0;
    let mut worst_constraint: f64 = 0.0;
    for d in 1..=3 {
        for _ in 0..pairs {
            let p_hat = random_spd(d, &mut rng);
            let p_next = random_spd(d, &mut rng);
            let closed = belief::info_cost(&p_hat, &p_next)?;
            let (numeric, _) = oracle::info_cost_numeric(&p_hat, &p_next)?;
            worst_gap = worst_gap.max((closed - numeric).abs());
            let q = belief::info_cost_minimizer(&p_hat, &p_next)?;
            let slack = crate::linalg::min_eigenvalue(&(&p_hat - &q))?
                .min(crate::linalg::min_eigenvalue(&(&p_next - &q))?);
            worst_constraint = worst_constraint.min(slack);
        }
    }
    Ok(SuiteReport::new(
        "information-cost minimizer",
        worst_gap <= 1e-6 && worst_constraint >= -1e-9,
        format!("{pairs} pairs for d=1,2,3: max |closed − numeric| {worst_gap:.2e}, worst constraint slack {worst_constraint:.2e}"),
    ))
}

fn random_scenario<R: Rng + ?Sized>(rng: &mut R) -> Result<(Environment, Belief, DVector<f64>, NoiseModel)> {
    let mut obstacles = Vec::new();
    for _ in 0..rng.random_range(1..4) {
        let c = DVector::from_fn(2, |_, _| rng.random_range(0.2..0.8));
        if rng.random_bool(0.5) {
            obstacles.push(ConvexObstacle::ball(c, rng.random_range(0.03..0.12))?);
        } else {
            let h = rng.random_range(0.03..0.1);
            obstacles.push(ConvexObstacle::Polytope(geometry::Polytope::axis_box(
                &[c[0] - h, c[1] - h],
                &[c[0] + h, c[1] + h * 0.5],
            )?));
        }
    }
    let env = Environment::new(Aabb::new(vec![0.0, 0.0], vec![1.0, 1.0])?, obstacles, rng.random_range(1.0..9.0))?;
    let x1 = DVector::from_fn(2, |_, _| rng.random_range(0.05..0.95));
    let x2 = &x1 + DVector::from_fn(2, |_, _| rng.random_range(-0.4..0.4));
    let scale = rng.random_range(1e-5..4e-4);
    let cov = random_spd(2, rng) * scale;
    let noise = NoiseModel::isotropic(2, rng.random_range(0.0..3e-3), 1.0)?;
    Ok((env, Belief::new(x1, cov)?, x2, noise))
}

/// Sweep verdicts on random 2-D transitions against the dense audit.
pub fn collision_suite(scenarios: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, 8);
    let (mut unsafe_accepts, mut conservative, mut accepted) = (0, 0, 0);
    for _ in 0..scenarios {
        let (env, b1, x2, noise) = random_scenario(&mut rng)?;
        let sweep = geometry::collision_free_transition(&b1, &x2, &noise, &env)?;
        let dense = oracle::dense_transition_audit(&b1, &x2, &noise, &env)?;
        match (sweep, dense) {
            (true, false) => unsafe_accepts += 1,
            (false, true) => conservative += 1,
            (true, true) => accepted += 1,
            _ => {}
        }
    }
    Ok(SuiteReport::new(
        "collision sweep vs dense audit",
        unsafe_accepts == 0,
        format!("{scenarios} scenarios: {accepted} accepted, {conservative} conservative rejections, {unsafe_accepts} unsafe accepts"),
    ))
}

pub struct SelfcheckOptions {
    pub samples: usize,
    pub seed: u64,
    pub sampler: Box<Sampler>,
}

impl Default for SelfcheckOptions {
    fn default() -> Self {
        SelfcheckOptions { samples: 100_000, seed: 20_240_601, sampler: default_sampler() }
    }
}

/// Runs all statistical and oracle suites.
pub fn run_selfcheck(opts: &SelfcheckOptions) -> Result<Vec<SuiteReport>> {
    let s = opts.samples;
    Ok(vec![
        trace_law_suite(2, s, opts.seed, &*opts.sampler)?,
        rotation_suite(2, s, opts.seed, &*opts.sampler)?,
        membership_suite(2, s, opts.seed, &*opts.sampler)?,
        haar_suite(s, opts.seed)?,
        selberg_suite(10 * s, opts.seed)?,
        volume_suite(10 * s, opts.seed)?,
        lemma3_suite(100, opts.seed)?,
        collision_suite(200, opts.seed)?,
    ])
}

/// Sampler suites for a given dimension.
pub fn run_sample_test(d: usize, samples: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    let sampler = default_sampler();
    let mut out = vec![
        trace_law_suite(d, samples, seed, &*sampler)?,
        rotation_suite(d, samples, seed, &*sampler)?,
        membership_suite(d, samples, seed, &*sampler)?,
    ];
    if d == 2 {
        out.push(haar_suite(samples, seed)?);
    }
    Ok(out)
}

/// Analytic volume constants for `volumes`.
#[derive(Debug, Serialize)]
pub struct VolumeReport {
    pub dim: usize,
    pub lo: f64,
    pub hi: f64,
    pub free_entries: usize,
    pub band_volume: f64,
    pub unit_trace_volume: f64,
    pub dominated_constant: f64,
    pub selberg_half: f64,
    pub unit_ball_volume: f64,
}

pub fn volume_report(dim: usize, lo: f64, hi: f64) -> Result<VolumeReport> {
    let band = TraceBand::new(dim, lo, hi)?;
    Ok(VolumeReport {
        dim,
        lo,
        hi,
        free_entries: band.free_entries(),
        band_volume: volume::volume_trace_band(&band)?,
        unit_trace_volume: volume::unit_trace_volume(dim)?,
        dominated_constant: volume::dominated_volume_constant(dim)?,
        selberg_half: volume::selberg(dim, 1.0, 1.0, 0.5)?,
        unit_ball_volume: volume::unit_ball_volume(dim),
    })
}

/// Output directory: the override if given, else the config's.
pub fn output_dir(cfg: &ExperimentConfig, over: Option<&Path>) -> PathBuf {
    over.map(Path::to_path_buf).unwrap_or_else(|| cfg.output_dir.clone())
}
