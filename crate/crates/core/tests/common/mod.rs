#![allow(dead_code)]

pub mod search;

use igprm::geometry::{Aabb, ConvexObstacle, Environment};
use igprm::{Belief, NoiseModel};
use nalgebra::{DMatrix, DVector};

pub fn spd_from(entries: &[f64], d: usize, floor: f64) -> DMatrix<f64> {
    let g = DMatrix::from_column_slice(d, d, &entries[..d * d]);
    let m = &g * g.transpose() + DMatrix::identity(d, d) * floor;
    (&m + m.transpose()) * 0.5
}

pub fn belief(mean: &[f64], cov: DMatrix<f64>) -> Belief {
    Belief::new(DVector::from_column_slice(mean), cov).unwrap()
}

pub fn iso(mean: &[f64], c: f64) -> Belief {
    let d = mean.len();
    belief(mean, DMatrix::identity(d, d) * c)
}

pub fn paper_instance() -> (Environment, Belief, Belief, NoiseModel) {
    (
        Environment::unit_box(2, 9.0).unwrap(),
        iso(&[0.2, 0.5], 1e-4),
        iso(&[0.8, 0.5], 1e-3),
        NoiseModel::isotropic(2, 0.0015, 1.0).unwrap(),
    )
}

/// A full-height wall at x ∈ [0.45, 0.55].
pub fn walled_box() -> Environment {
    let wall = ConvexObstacle::Polytope(igprm::Polytope::axis_box(&[0.45, 0.0], &[0.55, 1.0]).unwrap());
    Environment::new(Aabb::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap(), vec![wall], 9.0).unwrap()
}

pub const PAPER_TOML: &str = include_str!("../../../../configs/paper.toml");
