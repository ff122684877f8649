//! Workspace, convex obstacles and χ²-confidence-ellipse collision checks.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::belief::{Belief, NoiseModel};
use crate::error::{Error, Result};
use crate::linalg;
use crate::volume::unit_ball_volume;

/// Intervals used when sweeping a transition against obstacles.
pub const SWEEP_STEPS: usize = 64;
/// Cap on the `C(faces, d)` subsets examined when enumerating polytope vertices.
pub const MAX_FACE_SUBSETS: f64 = 200_000.0;

const FEAS_TOL: f64 = 1e-10;

/// Axis-aligned workspace box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Aabb {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(h > l) || !l.is_finite() || !h.is_finite()) {
            return Err(Error::InvalidArgument("workspace bounds must satisfy lo < hi on every axis".into()));
        }
        Ok(Aabb { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).product()
    }

    pub fn diameter(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l).powi(2)).sum::<f64>().sqrt()
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| *v >= *l && *v <= *h)
    }
}

/// Bounded polytope `{z : a_i · z ≤ b_i}` with unit normals.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    normals: Vec<DVector<f64>>,
    offsets: Vec<f64>,
    /// Only populated for d ≤ 3.
    vertices: Vec<DVector<f64>>,
}

impl Polytope {
    /// Normalizes each `(a_i, b_i)` pair to a unit normal and checks that the
    /// set is nonempty and bounded.
    pub fn new(normals: Vec<DVector<f64>>, offsets: Vec<f64>) -> Result<Self> {
        if normals.is_empty() || normals.len() != offsets.len() {
            return Err(Error::InvalidArgument("polytope needs one offset per normal".into()));
        }
        let d = normals[0].len();
        if d == 0 {
            return Err(Error::InvalidArgument("polytope dimension must be ≥ 1".into()));
        }
        let subsets = (0..d).fold(1.0, |acc, i| acc * (normals.len() - i.min(normals.len())) as f64 / (i + 1) as f64);
        if subsets > MAX_FACE_SUBSETS {
            return Err(Error::InvalidArgument(format!(
                "polytope with {} faces in d = {d} is too large to enumerate",
                normals.len()
            )));
        }
        let mut unit = Vec::with_capacity(normals.len());
        let mut scaled = Vec::with_capacity(offsets.len());
        for (a, b) in normals.iter().zip(&offsets) {
            if a.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: a.len() });
            }
            let n = a.norm();
            if !(n > 0.0) || !b.is_finite() {
                return Err(Error::InvalidArgument("polytope normals must be nonzero and finite".into()));
            }
            unit.push(a / n);
            scaled.push(b / n);
        }
        if !is_bounded(&unit) {
            return Err(Error::UnboundedPolytope);
        }
        let vertices = enumerate_vertices(&unit, &scaled);
        if vertices.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let vertices = if d <= 3 { vertices } else { Vec::new() };
        Ok(Polytope { normals: unit, offsets: scaled, vertices })
    }

    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let d = lo.len();
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for k in 0..d {
            let mut e = DVector::zeros(d);
            e[k] = 1.0;
            normals.push(e.clone());
            offsets.push(hi[k]);
            normals.push(-e);
            offsets.push(-lo[k]);
        }
        Polytope::new(normals, offsets)
    }

    pub fn dim(&self) -> usize {
        self.normals[0].len()
    }

    pub fn normals(&self) -> &[DVector<f64>] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        self.normals.iter().zip(&self.offsets).all(|(a, b)| a.dot(x) <= *b)
    }

    /// Exact volume for d ≤ 3.
    pub fn volume(&self) -> Result<f64> {
        match self.dim() {
            1 => {
                let xs: Vec<f64> = self.vertices.iter().map(|v| v[0]).collect();
                let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                Ok(hi - lo)
            }
            2 => Ok(polygon_area(&self.vertices)),
            3 => Ok(self.polyhedron_volume()),
            d => Err(Error::DegenerateEnvironment(format!("polytope volume not supported in d = {d}"))),
        }
    }

    fn polyhedron_volume(&self) -> f64 {
        let n = self.vertices.len() as f64;
        let centroid = self.vertices.iter().fold(DVector::zeros(3), |acc, v| acc + v) / n;
        let mut total = 0.0;
        for (a, b) in self.normals.iter().zip(&self.offsets) {
            let face: Vec<DVector<f64>> =
                self.vertices.iter().filter(|v| (a.dot(v) - b).abs() <= 1e-9).cloned().collect();
            if face.len() < 3 {
                continue;
            }
            let area = planar_polygon_area_3d(&face, a);
            total += area * (b - a.dot(&centroid)) / 3.0;
        }
        total
    }

    fn bounding_sphere(&self) -> (DVector<f64>, f64) {
        if self.vertices.is_empty() {
            return (DVector::zeros(self.dim()), f64::INFINITY);
        }
        let n = self.vertices.len() as f64;
        let c = self.vertices.iter().fold(DVector::zeros(self.dim()), |acc, v| acc + v) / n;
        let r = self.vertices.iter().map(|v| (v - &c).norm()).fold(0.0, f64::max);
        (c, r)
    }
}

fn is_bounded(normals: &[DVector<f64>]) -> bool {
    let d = normals[0].len();
    let a = DMatrix::from_fn(normals.len(), d, |i, j| normals[i][j]);
    if a.clone().svd(false, false).rank(1e-10) < d {
        return false;
    }
    // A pointed recession cone {v : A v ≤ 0} is trivial iff it has no extreme
    // ray; every extreme ray is cut out by d − 1 independent tight rows.
    for subset in combinations(normals.len(), d - 1) {
        let dir = if d == 1 {
            DVector::from_element(1, 1.0)
        } else {
            let rows = DMatrix::from_fn(d - 1, d, |i, j| normals[subset[i]][j]);
            let svd = rows.svd(false, true);
            if svd.rank(1e-10) < d - 1 {
                continue;
            }
            let vt = svd.v_t.expect("requested v_t");
            // full SVD of a (d−1)×d matrix only returns d−1 rows; complete the basis
            null_vector(&vt, d)
        };
        for sign in [1.0, -1.0] {
            let r = &dir * sign;
            if normals.iter().all(|n| n.dot(&r) <= 1e-12) {
                return false;
            }
        }
    }
    true
}

fn null_vector(row_basis: &DMatrix<f64>, d: usize) -> DVector<f64> {
    // Gram-Schmidt a coordinate vector against the row space.
    let mut best = DVector::zeros(d);
    let mut best_norm = 0.0;
    for k in 0..d {
        let mut v = DVector::zeros(d);
        v[k] = 1.0;
        for i in 0..row_basis.nrows() {
            let r = row_basis.row(i).transpose();
            let proj = r.dot(&v) / r.dot(&r);
            v -= r * proj;
        }
        let n = v.norm();
        if n > best_norm {
            best_norm = n;
            best = v / n;
        }
    }
    best
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

fn enumerate_vertices(normals: &[DVector<f64>], offsets: &[f64]) -> Vec<DVector<f64>> {
    let d = normals[0].len();
    let mut vertices: Vec<DVector<f64>> = Vec::new();
    for subset in combinations(normals.len(), d) {
        let a = DMatrix::from_fn(d, d, |i, j| normals[subset[i]][j]);
        let b = DVector::from_iterator(d, subset.iter().map(|&i| offsets[i]));
        let Some(v) = a.lu().solve(&b) else { continue };
        if !v.iter().all(|x| x.is_finite()) {
            continue;
        }
        let feasible = normals.iter().zip(offsets).all(|(n, o)| n.dot(&v) <= o + 1e-9);
        if feasible && !vertices.iter().any(|w| (w - &v).norm() <= 1e-9) {
            vertices.push(v);
        }
    }
    vertices
}

fn polygon_area(vertices: &[DVector<f64>]) -> f64 {
    let n = vertices.len() as f64;
    let cx = vertices.iter().map(|v| v[0]).sum::<f64>() / n;
    let cy = vertices.iter().map(|v| v[1]).sum::<f64>() / n;
    let mut pts: Vec<(f64, f64)> = vertices.iter().map(|v| (v[0], v[1])).collect();
    pts.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).total_cmp(&(b.1 - cy).atan2(b.0 - cx)));
    let mut area = 0.0;
    for i in 0..pts.len() {
        let (x0, y0) = pts[i];
        let (x1, y1) = pts[(i + 1) % pts.len()];
        area += x0 * y1 - x1 * y0;
    }
    area.abs() / 2.0
}

fn planar_polygon_area_3d(face: &[DVector<f64>], normal: &DVector<f64>) -> f64 {
    let n = face.len() as f64;
    let c = face.iter().fold(DVector::zeros(3), |acc, v| acc + v) / n;
    let u = (&face[0] - &c).normalize();
    let w = normal.cross(&u);
    let mut pts: Vec<(f64, f64)> = face.iter().map(|v| ((v - &c).dot(&u), (v - &c).dot(&w))).collect();
    pts.sort_by(|a, b| a.1.atan2(a.0).total_cmp(&b.1.atan2(b.0)));
    let mut area = 0.0;
    for i in 0..pts.len() {
        let (x0, y0) = pts[i];
        let (x1, y1) = pts[(i + 1) % pts.len()];
        area += x0 * y1 - x1 * y0;
    }
    area.abs() / 2.0
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexObstacle {
    Polytope(Polytope),
    Ball { center: DVector<f64>, radius: f64 },
}

impl ConvexObstacle {
    pub fn ball(center: DVector<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("ball radius must be > 0, got {radius}")));
        }
        Ok(ConvexObstacle::Ball { center, radius })
    }

    pub fn polytope(normals: Vec<DVector<f64>>, offsets: Vec<f64>) -> Result<Self> {
        Ok(ConvexObstacle::Polytope(Polytope::new(normals, offsets)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexObstacle::Polytope(p) => p.dim(),
            ConvexObstacle::Ball { center, .. } => center.len(),
        }
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        match self {
            ConvexObstacle::Polytope(p) => p.contains(x),
            ConvexObstacle::Ball { center, radius } => (x - center).norm() <= *radius,
        }
    }

    pub fn volume(&self) -> Result<f64> {
        match self {
            ConvexObstacle::Polytope(p) => p.volume(),
            ConvexObstacle::Ball { center, radius } => Ok(unit_ball_volume(center.len()) * radius.powi(center.len() as i32)),
        }
    }

    fn bounding_sphere(&self) -> (DVector<f64>, f64) {
        match self {
            ConvexObstacle::Polytope(p) => p.bounding_sphere(),
            ConvexObstacle::Ball { center, radius } => (center.clone(), *radius),
        }
    }

    fn inside_bounds(&self, bounds: &Aabb) -> bool {
        match self {
            ConvexObstacle::Ball { center, radius } => (0..center.len())
                .all(|k| center[k] - radius >= bounds.lo[k] - FEAS_TOL && center[k] + radius <= bounds.hi[k] + FEAS_TOL),
            ConvexObstacle::Polytope(p) => p.vertices().iter().all(|v| {
                (0..v.len()).all(|k| v[k] >= bounds.lo[k] - FEAS_TOL && v[k] <= bounds.hi[k] + FEAS_TOL)
            }),
        }
    }
}

/// Eigen-factored covariance used to whiten obstacle geometry.
pub(crate) struct Whitening {
    values: DVector<f64>,
    vectors: DMatrix<f64>,
    sqrt: DMatrix<f64>,
}

impl Whitening {
    pub(crate) fn new(p: &DMatrix<f64>) -> Result<Self> {
        let eig = linalg::sym_eigen(p)?;
        let sqrt = linalg::eigen_map(&eig, |l| l.max(linalg::EIGEN_CLAMP).sqrt());
        let values = eig.eigenvalues.map(|l| l.max(linalg::EIGEN_CLAMP));
        Ok(Whitening { values, vectors: eig.eigenvectors, sqrt })
    }

    fn min_eigenvalue(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Minimum over the obstacle of the squared Mahalanobis distance from `x` under `P`.
pub fn mahalanobis_min_sq(x: &DVector<f64>, p: &DMatrix<f64>, obs: &ConvexObstacle) -> Result<f64> {
    if x.len() != obs.dim() {
        return Err(Error::DimensionMismatch { expected: obs.dim(), got: x.len() });
    }
    linalg::check_square(p, x.len())?;
    linalg::check_pd(p)?;
    let wh = Whitening::new(p)?;
    Ok(min_sq_whitened(x, &wh, obs, 0.0))
}

/// Same as [`mahalanobis_min_sq`] against the obstacle grown outward by `inflate`.
/// Polytopes are grown by shifting every face, which contains the true
/// Minkowski sum with a ball.
pub(crate) fn min_sq_whitened(x: &DVector<f64>, wh: &Whitening, obs: &ConvexObstacle, inflate: f64) -> f64 {
    match obs {
        ConvexObstacle::Ball { center, radius } => ball_min_sq(x, wh, center, radius + inflate),
        ConvexObstacle::Polytope(poly) => polytope_min_sq(x, wh, poly, inflate),
    }
}

fn ball_min_sq(x: &DVector<f64>, wh: &Whitening, center: &DVector<f64>, radius: f64) -> f64 {
    let delta = x - center;
    let dist = delta.norm();
    if dist <= radius {
        return 0.0;
    }
    let rotated = wh.vectors.transpose() * &delta;
    let p = &wh.values;
    let excess = |mu: f64| -> f64 {
        rotated.iter().zip(p.iter()).map(|(di, pi)| (di / (1.0 + mu * pi)).powi(2)).sum::<f64>() - radius * radius
    };
    let mut lo = 0.0;
    let mut hi = (dist / radius - 1.0) / wh.min_eigenvalue();
    while excess(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let mu = 0.5 * (lo + hi);
    rotated.iter().zip(p.iter()).map(|(di, pi)| mu * mu * pi * di * di / (1.0 + mu * pi).powi(2)).sum()
}

fn polytope_min_sq(x: &DVector<f64>, wh: &Whitening, poly: &Polytope, inflate: f64) -> f64 {
    // whitened constraints: (S a_i) · y ≤ b_i + inflate − a_i · x
    let h: Vec<f64> = poly.normals.iter().zip(&poly.offsets).map(|(a, b)| b + inflate - a.dot(x)).collect();
    if h.iter().all(|&hi| hi >= 0.0) {
        return 0.0;
    }
    let g: Vec<DVector<f64>> = poly.normals.iter().map(|a| &wh.sqrt * a).collect();
    if x.len() <= 3 {
        min_norm_enumerate(&g, &h)
    } else {
        min_norm_dual(&g, &h)
    }
}

/// Minimum-norm point of `{y : g_i · y ≤ h_i}` by projecting the origin onto
/// every affine hull cut out by up to `d` constraints.
fn min_norm_enumerate(g: &[DVector<f64>], h: &[f64]) -> f64 {
    let d = g[0].len();
    let scale = 1.0 + h.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut best = f64::INFINITY;
    for k in 1..=d.min(g.len()) {
        for subset in combinations(g.len(), k) {
            let gs = DMatrix::from_fn(k, d, |i, j| g[subset[i]][j]);
            let hs = DVector::from_iterator(k, subset.iter().map(|&i| h[i]));
            let gram = &gs * gs.transpose();
            let Some(coef) = gram.lu().solve(&hs) else { continue };
            let y = gs.transpose() * coef;
            if !y.iter().all(|v| v.is_finite()) {
                continue;
            }
            let nsq = y.norm_squared();
            if nsq >= best {
                continue;
            }
            if g.iter().zip(h).all(|(gi, hi)| gi.dot(&y) <= hi + 1e-10 * scale) {
                best = nsq;
            }
        }
    }
    best
}

/// Dual coordinate descent on `min_{μ≥0} ½ μᵀ G Gᵀ μ + hᵀ μ`, with `y = −Gᵀ μ`.
fn min_norm_dual(g: &[DVector<f64>], h: &[f64]) -> f64 {
    let m = g.len();
    let gram = DMatrix::from_fn(m, m, |i, j| g[i].dot(&g[j]));
    let mut mu: DVector<f64> = DVector::zeros(m);
    let mut grad = DVector::from_column_slice(h);
    for _ in 0..100_000 {
        let mut change = 0.0_f64;
        for i in 0..m {
            let next = (mu[i] - grad[i] / gram[(i, i)]).max(0.0);
            let step = next - mu[i];
            if step != 0.0 {
                mu[i] = next;
                for j in 0..m {
                    grad[j] += gram[(j, i)] * step;
                }
                change = change.max(step.abs());
            }
        }
        if change < 1e-15 {
            break;
        }
    }
    let y = g.iter().zip(mu.iter()).fold(DVector::zeros(g[0].len()), |acc, (gi, mi)| acc - gi * *mi);
    y.norm_squared()
}

/// Workspace box, convex obstacles and the confidence level χ².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnvironmentRepr", into = "EnvironmentRepr")]
pub struct Environment {
    bounds: Aabb,
    obstacles: Vec<ConvexObstacle>,
    chi_sq: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub(crate) enum ObstacleRepr {
    Ball { center: Vec<f64>, radius: f64 },
    Polytope { normals: Vec<Vec<f64>>, offsets: Vec<f64> },
    /// Input shorthand for an axis-aligned polytope; never written back.
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct EnvironmentRepr {
    pub bounds: Aabb,
    #[serde(default)]
    pub obstacles: Vec<ObstacleRepr>,
    pub chi_sq: f64,
}

impl TryFrom<ObstacleRepr> for ConvexObstacle {
    type Error = Error;

    fn try_from(repr: ObstacleRepr) -> Result<Self> {
        match repr {
            ObstacleRepr::Ball { center, radius } => ConvexObstacle::ball(DVector::from_vec(center), radius),
            ObstacleRepr::Polytope { normals, offsets } => {
                ConvexObstacle::polytope(normals.into_iter().map(DVector::from_vec).collect(), offsets)
            }
            ObstacleRepr::Box { lo, hi } => Ok(ConvexObstacle::Polytope(Polytope::axis_box(&lo, &hi)?)),
        }
    }
}

impl From<&ConvexObstacle> for ObstacleRepr {
    fn from(o: &ConvexObstacle) -> Self {
        match o {
            ConvexObstacle::Ball { center, radius } => {
                ObstacleRepr::Ball { center: center.iter().cloned().collect(), radius: *radius }
            }
            ConvexObstacle::Polytope(p) => ObstacleRepr::Polytope {
                normals: p.normals.iter().map(|n| n.iter().cloned().collect()).collect(),
                offsets: p.offsets.clone(),
            },
        }
    }
}

impl TryFrom<EnvironmentRepr> for Environment {
    type Error = Error;

    fn try_from(repr: EnvironmentRepr) -> Result<Self> {
        let bounds = Aabb::new(repr.bounds.lo, repr.bounds.hi)?;
        let obstacles = repr.obstacles.into_iter().map(ConvexObstacle::try_from).collect::<Result<Vec<_>>>()?;
        Environment::new(bounds, obstacles, repr.chi_sq)
    }
}

impl From<Environment> for EnvironmentRepr {
    fn from(env: Environment) -> Self {
        EnvironmentRepr {
            obstacles: env.obstacles.iter().map(ObstacleRepr::from).collect(),
            bounds: env.bounds,
            chi_sq: env.chi_sq,
        }
    }
}

impl Environment {
    pub fn new(bounds: Aabb, obstacles: Vec<ConvexObstacle>, chi_sq: f64) -> Result<Self> {
        if !(chi_sq > 0.0) || !chi_sq.is_finite() {
            return Err(Error::InvalidArgument(format!("chi_sq must be > 0, got {chi_sq}")));
        }
        let d = bounds.dim();
        for obs in &obstacles {
            if obs.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: obs.dim() });
            }
            if !obs.inside_bounds(&bounds) {
                return Err(Error::InvalidArgument("obstacle extends outside the workspace bounds".into()));
            }
        }
        Ok(Environment { bounds, obstacles, chi_sq })
    }

    /// Obstacle-free unit box `[0, 1]^d`.
    pub fn unit_box(dim: usize, chi_sq: f64) -> Result<Self> {
        Environment::new(Aabb::new(vec![0.0; dim], vec![1.0; dim])?, Vec::new(), chi_sq)
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &Aabb {
        &self.bounds
    }

    pub fn obstacles(&self) -> &[ConvexObstacle] {
        &self.obstacles
    }

    pub fn chi_sq(&self) -> f64 {
        self.chi_sq
    }

    /// Copy with a different confidence level.
    pub fn with_chi_sq(&self, chi_sq: f64) -> Result<Self> {
        Environment::new(self.bounds.clone(), self.obstacles.clone(), chi_sq)
    }

    /// Free volume: box volume minus obstacle volumes (obstacles assumed disjoint).
    pub fn free_volume(&self) -> Result<f64> {
        let mut v = self.bounds.volume();
        for obs in &self.obstacles {
            v -= obs.volume()?;
        }
        if !(v > 0.0) {
            return Err(Error::DegenerateEnvironment(format!("free volume is {v}")));
        }
        Ok(v)
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("environment serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn point_in_obstacle(&self, x: &DVector<f64>) -> bool {
        self.obstacles.iter().any(|o| o.contains(x))
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got });
        }
        Ok(())
    }

    fn ellipse_in_bounds(&self, x: &DVector<f64>, p: &DMatrix<f64>) -> bool {
        let chi = self.chi_sq.sqrt();
        (0..self.dim()).all(|k| {
            let reach = chi * p[(k, k)].max(0.0).sqrt();
            x[k] - reach >= self.bounds.lo[k] && x[k] + reach <= self.bounds.hi[k]
        })
    }
}

/// Whether the χ²-ellipse of `b` avoids every obstacle and stays inside the bounds.
pub fn collision_free_belief(b: &Belief, env: &Environment) -> Result<bool> {
    env.check_dim(b.dim())?;
    if !env.ellipse_in_bounds(b.mean(), b.cov()) {
        return Ok(false);
    }
    if env.obstacles.is_empty() {
        return Ok(true);
    }
    let wh = Whitening::new(b.cov())?;
    Ok(env.obstacles.iter().all(|o| min_sq_whitened(b.mean(), &wh, o, 0.0) >= env.chi_sq))
}

/// Largest value of `x0 + c λ + χ √(a + g λ)` over `λ ∈ [0, 1]` (concave in λ).
fn max_support(x0: f64, c: f64, a: f64, g: f64, chi: f64) -> f64 {
    let f = |l: f64| x0 + c * l + chi * (a + g * l).max(0.0).sqrt();
    let mut best = f(0.0).max(f(1.0));
    if g > 0.0 && c < 0.0 {
        let root = chi * g / (2.0 * c);
        let l = (root * root - a) / g;
        if l > 0.0 && l < 1.0 {
            best = best.max(f(l));
        }
    }
    best
}

/// Sweeps the transition from `b1` toward mean `x2` with covariance
/// `P(λ) = P₁ + λ‖x2 − x1‖W`.
///
/// Bounds are checked exactly over the continuous sweep. Obstacles are checked
/// on [`SWEEP_STEPS`] intervals: each interval is tested at its midpoint with
/// the covariance at its far end, against obstacles grown by half the
/// interval's travel, so a passing sweep is collision-free for every λ.
pub fn collision_free_transition(
    b1: &Belief,
    x2: &DVector<f64>,
    noise: &NoiseModel,
    env: &Environment,
) -> Result<bool> {
    env.check_dim(b1.dim())?;
    env.check_dim(x2.len())?;
    env.check_dim(noise.dim())?;
    let x1 = b1.mean();
    let len = (x2 - x1).norm();
    if len == 0.0 {
        return collision_free_belief(b1, env);
    }
    let p1 = b1.cov();
    let w = noise.w();
    let chi = env.chi_sq.sqrt();
    for k in 0..env.dim() {
        let a = p1[(k, k)];
        let g = len * w[(k, k)];
        let c = x2[k] - x1[k];
        if max_support(x1[k], c, a, g, chi) > env.bounds.hi[k] {
            return Ok(false);
        }
        if -max_support(-x1[k], -c, a, g, chi) < env.bounds.lo[k] {
            return Ok(false);
        }
    }
    if env.obstacles.is_empty() {
        return Ok(true);
    }
    let p_end = p1 + w * len;
    let reach = chi * p_end.trace().sqrt();
    let relevant: Vec<&ConvexObstacle> = env
        .obstacles
        .iter()
        .filter(|o| {
            let (c, r) = o.bounding_sphere();
            segment_point_distance(x1, x2, &c) - r <= reach + len
        })
        .collect();
    if relevant.is_empty() {
        return Ok(true);
    }
    let half_step = len / (2.0 * SWEEP_STEPS as f64);
    for i in 0..SWEEP_STEPS {
        let mid = (i as f64 + 0.5) / SWEEP_STEPS as f64;
        let far = (i + 1) as f64 / SWEEP_STEPS as f64;
        let x = x1 + (x2 - x1) * mid;
        let wh = Whitening::new(&(p1 + w * (far * len)))?;
        if relevant.iter().any(|o| min_sq_whitened(&x, &wh, o, half_step) < env.chi_sq) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn segment_point_distance(a: &DVector<f64>, b: &DVector<f64>, p: &DVector<f64>) -> f64 {
    let ab = b - a;
    let denom = ab.norm_squared();
    let t = if denom > 0.0 { ((p - a).dot(&ab) / denom).clamp(0.0, 1.0) } else { 0.0 };
    (a + ab * t - p).norm()
}
