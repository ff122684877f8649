//! Experiment configuration files (TOML).

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::belief::{self, Belief, NoiseModel};
use crate::error::{Error, Result};
use crate::geometry::{Environment, EnvironmentRepr};
use crate::linalg;
use crate::planner::{self, Mode, PlannerParams, DEFAULT_K_NEAR};

/// Factor applied to the schedule floor when `gamma = "auto"`.
pub const AUTO_GAMMA_FACTOR: f64 = 1.1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    output_dir: Option<String>,
    environment: Spanned<EnvironmentRepr>,
    init: RawBelief,
    goal: RawBelief,
    noise: RawNoise,
    planner: RawPlanner,
    #[serde(default)]
    study: Option<RawStudy>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBelief {
    mean: Spanned<Vec<f64>>,
    cov: Spanned<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    w: Spanned<Vec<Vec<f64>>>,
    alpha: Spanned<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawGamma {
    Value(f64),
    Keyword(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlanner {
    rho: Spanned<f64>,
    r_max: Spanned<f64>,
    gamma: Spanned<RawGamma>,
    #[serde(default)]
    k_near: Option<Spanned<usize>>,
    #[serde(default)]
    mode: Option<Mode>,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStudy {
    n_values: Spanned<Vec<usize>>,
    repeats: Spanned<usize>,
    #[serde(default)]
    base_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudySpec {
    pub n_values: Vec<usize>,
    pub repeats: usize,
    pub base_seed: u64,
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub environment: Environment,
    pub init: Belief,
    pub goal: Belief,
    pub noise: NoiseModel,
    pub planner: PlannerParams,
    /// Whether γ was resolved from the schedule floor.
    pub gamma_auto: bool,
    pub gamma_floor: Option<f64>,
    pub study: Option<StudySpec>,
    pub output_dir: PathBuf,
}

struct Source<'a>(&'a str);

impl Source<'_> {
    fn line(&self, span: std::ops::Range<usize>) -> usize {
        self.0[..span.start.min(self.0.len())].matches('\n').count() + 1
    }

    fn err<T>(&self, field: &str, span: std::ops::Range<usize>, message: impl std::fmt::Display) -> Result<T> {
        Err(Error::Config { field: field.to_string(), message: format!("line {}: {message}", self.line(span)) })
    }
}

fn matrix(src: &Source, field: &str, raw: &Spanned<Vec<Vec<f64>>>, dim: usize) -> Result<DMatrix<f64>> {
    match belief::matrix_from_rows(raw.get_ref(), dim) {
        Ok(m) => Ok(m),
        Err(e) => src.err(field, raw.span(), e),
    }
}

fn parse_belief(src: &Source, name: &str, raw: &RawBelief, dim: usize) -> Result<Belief> {
    let mean = raw.mean.get_ref();
    if mean.len() != dim {
        return src.err(
            &format!("{name}.mean"),
            raw.mean.span(),
            format!("expected {dim} entries, got {}", mean.len()),
        );
    }
    let field = format!("{name}.cov");
    let cov = matrix(src, &field, &raw.cov, dim)?;
    match Belief::new(DVector::from_column_slice(mean), cov) {
        Ok(b) => Ok(b),
        Err(e) => src.err(&field, raw.cov.span(), e),
    }
}

/// Parses and validates a config; `gamma = "auto"` is resolved here.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let src = Source(text);
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let field = e.span().map(|s| format!("line {}", src.line(s))).unwrap_or_else(|| "document".into());
        Error::Config { field, message: e.message().to_string() }
    })?;

    let env_span = raw.environment.span();
    let environment = match Environment::try_from(raw.environment.into_inner()) {
        Ok(env) => env,
        Err(e) => return src.err("environment", env_span, e),
    };
    let dim = environment.dim();
    let init = parse_belief(&src, "init", &raw.init, dim)?;
    let goal = parse_belief(&src, "goal", &raw.goal, dim)?;

    let w = matrix(&src, "noise.w", &raw.noise.w, dim)?;
    if linalg::max_asymmetry(&w) > linalg::SYMMETRY_TOL {
        return src.err("noise.w", raw.noise.w.span(), "matrix is not symmetric");
    }
    let noise = match NoiseModel::new(w, *raw.noise.alpha.get_ref()) {
        Ok(n) => n,
        Err(e) => return src.err("noise", raw.noise.alpha.span(), e),
    };

    let p = &raw.planner;
    let rho = *p.rho.get_ref();
    let r_max = *p.r_max.get_ref();
    if !(rho > 0.0) || !rho.is_finite() {
        return src.err("planner.rho", p.rho.span(), format!("must be > 0, got {rho}"));
    }
    if !(r_max > rho * dim as f64) || !r_max.is_finite() {
        return src.err("planner.r_max", p.r_max.span(), format!("must exceed rho·d = {}", rho * dim as f64));
    }
    let k_near = match &p.k_near {
        Some(k) if *k.get_ref() == 0 => return src.err("planner.k_near", k.span(), "must be ≥ 1"),
        Some(k) => *k.get_ref(),
        None => DEFAULT_K_NEAR,
    };
    let mut planner = PlannerParams {
        rho,
        r_max,
        gamma: 1.0,
        k_near,
        mode: p.mode.unwrap_or(Mode::Standard),
        n: p.n.unwrap_or(2000),
        seed: p.seed.unwrap_or(0),
    };
    let (gamma_auto, gamma_floor) = match p.gamma.get_ref() {
        RawGamma::Value(g) if *g > 0.0 && g.is_finite() => {
            planner.gamma = *g;
            (false, planner::compute_gamma_floor(&environment, &planner, &noise).ok())
        }
        RawGamma::Value(g) => return src.err("planner.gamma", p.gamma.span(), format!("must be > 0, got {g}")),
        RawGamma::Keyword(k) if k == "auto" => {
            let floor = match planner::compute_gamma_floor(&environment, &planner, &noise) {
                Ok(f) => f,
                Err(e) => return src.err("planner.gamma", p.gamma.span(), e),
            };
            planner.gamma = AUTO_GAMMA_FACTOR * floor;
            (true, Some(floor))
        }
        RawGamma::Keyword(k) => {
            return src.err("planner.gamma", p.gamma.span(), format!("expected a number or \"auto\", got \"{k}\""))
        }
    };

    let study = match raw.study {
        None => None,
        Some(s) => {
            let n_values = s.n_values.get_ref().clone();
            if n_values.is_empty() || n_values.windows(2).any(|w| w[0] >= w[1]) {
                return src.err("study.n_values", s.n_values.span(), "must be nonempty and strictly increasing");
            }
            if *s.repeats.get_ref() == 0 {
                return src.err("study.repeats", s.repeats.span(), "must be ≥ 1");
            }
            Some(StudySpec { n_values, repeats: *s.repeats.get_ref(), base_seed: s.base_seed })
        }
    };

    Ok(ExperimentConfig {
        environment,
        init,
        goal,
        noise,
        planner,
        gamma_auto,
        gamma_floor,
        study,
        output_dir: PathBuf::from(raw.output_dir.unwrap_or_else(|| "out".into())),
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}
