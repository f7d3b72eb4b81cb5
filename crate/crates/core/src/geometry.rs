//! Points, distances and model conversions for the spaces kernels live on:
//! the hyperboloid model of ℍⁿ (with its Poincaré-ball chart), spheres,
//! SPD matrices with the affine-invariant metric, flat tori and ℝⁿ.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{KreinError, Result};
use crate::linalg::sym_eigvals;

/// Tolerance for arccosh/arccos domain clamping and unit-norm checks.
pub const DOMAIN_TOL: f64 = 1e-9;

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(KreinError::Dimension { expected, got });
    }
    Ok(())
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm_sq(x: &[f64]) -> f64 {
    dot(x, x)
}

/// Minkowski form `x₀y₀ − Σ_{i≥1} xᵢyᵢ`.
pub fn minkowski_inner(x: &[f64], y: &[f64]) -> Result<f64> {
    check_len(x.len(), y.len())?;
    if x.len() < 2 {
        return Err(KreinError::Dimension { expected: 2, got: x.len() });
    }
    Ok(x[0] * y[0] - dot(&x[1..], &y[1..]))
}

/// A point on the upper sheet `{(x,x) = 1, x₀ > 0}` of the hyperboloid.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperboloidPoint {
    coords: Vec<f64>,
}

impl HyperboloidPoint {
    /// Validates the hyperboloid constraint. The tolerance on `(x,x) = 1`
    /// is `1e-9` scaled by `x₀²`, the size of the terms that cancel.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(KreinError::Dimension { expected: 2, got: coords.len() });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(KreinError::InvalidPoint("non-finite hyperboloid coordinate".into()));
        }
        if coords[0] <= 0.0 {
            return Err(KreinError::InvalidPoint(format!(
                "hyperboloid point must have x0 > 0, got {}",
                coords[0]
            )));
        }
        let q = coords[0] * coords[0] - norm_sq(&coords[1..]);
        if (q - 1.0).abs() > DOMAIN_TOL * coords[0].powi(2).max(1.0) {
            return Err(KreinError::InvalidPoint(format!("(x,x) = {q}, expected 1")));
        }
        Ok(Self { coords })
    }

    /// The apex `(1, 0, …, 0)` of ℍⁿ.
    pub fn origin(n: usize) -> Self {
        let mut coords = vec![0.0; n + 1];
        coords[0] = 1.0;
        Self { coords }
    }

    /// Lifts spatial coordinates `(x₁, …, xₙ)` to the hyperboloid.
    pub fn from_spatial(spatial: &[f64]) -> Self {
        let mut coords = Vec::with_capacity(spatial.len() + 1);
        coords.push((1.0 + norm_sq(spatial)).sqrt());
        coords.extend_from_slice(spatial);
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Dimension `n` of ℍⁿ.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// A point of the open unit ball (Poincaré model).
#[derive(Debug, Clone, PartialEq)]
pub struct PoincarePoint {
    coords: Vec<f64>,
}

impl PoincarePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(KreinError::Dimension { expected: 1, got: 0 });
        }
        let s = norm_sq(&coords);
        if !(s < 1.0) {
            return Err(KreinError::InvalidPoint(format!(
                "Poincaré point must satisfy |p| < 1, got |p|^2 = {s}"
            )));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(KreinError::Dimension { expected: 2, got: coords.len() });
        }
        let norm = norm_sq(&coords).sqrt();
        if !((norm - 1.0).abs() <= DOMAIN_TOL) {
            return Err(KreinError::InvalidPoint(format!("sphere point has norm {norm}")));
        }
        Ok(Self { coords })
    }

    /// Projects a nonzero vector onto the unit sphere.
    pub fn normalize(v: &[f64]) -> Result<Self> {
        let norm = norm_sq(v).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(KreinError::InvalidPoint("cannot normalize a zero vector".into()));
        }
        Self::new(v.iter().map(|x| x / norm).collect())
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// A symmetric positive definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdPoint {
    mat: DMatrix<f64>,
}

impl SpdPoint {
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        let n = mat.nrows();
        if n == 0 || mat.ncols() != n {
            return Err(KreinError::InvalidPoint(format!(
                "SPD point must be square and nonempty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|v| !v.is_finite()) {
            return Err(KreinError::InvalidPoint("non-finite SPD entry".into()));
        }
        let asym = (&mat - mat.transpose()).amax();
        if asym > 1e-12 * mat.norm() {
            return Err(KreinError::InvalidPoint(format!("matrix is not symmetric ({asym:e})")));
        }
        let mut mat = mat;
        crate::linalg::symmetrize(&mut mat);
        if mat.clone().cholesky().is_none() {
            return Err(KreinError::InvalidPoint("matrix is not positive definite".into()));
        }
        Ok(Self { mat })
    }

    pub fn identity(n: usize) -> Self {
        Self { mat: DMatrix::identity(n, n) }
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn log_det(&self) -> f64 {
        let l = self.mat.clone().cholesky().expect("validated SPD").unpack();
        2.0 * l.diagonal().iter().map(|d| d.ln()).sum::<f64>()
    }
}

/// A point of the flat torus `(S¹)^m`, angles in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    angles: Vec<f64>,
}

impl TorusPoint {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(KreinError::Dimension { expected: 1, got: 0 });
        }
        if let Some(a) = angles.iter().find(|a| !(**a >= 0.0 && **a < TAU)) {
            return Err(KreinError::InvalidPoint(format!("torus angle {a} outside [0, 2pi)")));
        }
        Ok(Self { angles })
    }

    /// Reduces arbitrary real angles modulo 2π.
    pub fn wrap(angles: &[f64]) -> Result<Self> {
        let wrapped = angles
            .iter()
            .map(|a| {
                let w = a.rem_euclid(TAU);
                if w >= TAU {
                    0.0
                } else {
                    w
                }
            })
            .collect();
        Self::new(wrapped)
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn dim(&self) -> usize {
        self.angles.len()
    }
}

/// A geodesic hyperplane `{x ∈ ℍⁿ : (normal, x) = offset}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicBoundary {
    normal: Vec<f64>,
    offset: f64,
}

impl GeodesicBoundary {
    /// The hyperplane is nonempty only for spacelike normals, `(y,y) < 0`.
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let q = minkowski_inner(&normal, &normal)?;
        if !(q < 0.0) || !offset.is_finite() {
            return Err(KreinError::Parameter(format!(
                "geodesic boundary needs (y,y) < 0 and finite offset, got (y,y) = {q}, b = {offset}"
            )));
        }
        Ok(Self { normal, offset })
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }
}

/// `sign((normal, x) − offset)` with `sign(0) = +1`.
pub fn geodesic_label(x: &HyperboloidPoint, boundary: &GeodesicBoundary) -> Result<i8> {
    let v = minkowski_inner(&boundary.normal, &x.coords)? - boundary.offset;
    Ok(if v >= 0.0 { 1 } else { -1 })
}

/// Majority vote of [`geodesic_label`] over several boundaries; ties give +1.
pub fn majority_label(x: &HyperboloidPoint, boundaries: &[GeodesicBoundary]) -> Result<i8> {
    let mut votes = 0i64;
    for b in boundaries {
        votes += geodesic_label(x, b)? as i64;
    }
    Ok(if votes >= 0 { 1 } else { -1 })
}

/// Geodesic distance on the hyperboloid, `arccosh((x,y))`.
///
/// For nearby points, where arccosh is ill-conditioned, the equivalent form
/// `2·asinh(√(−(x−y, x−y))/2)` is used.
pub fn hyperbolic_distance(x: &HyperboloidPoint, y: &HyperboloidPoint) -> Result<f64> {
    let z = minkowski_inner(&x.coords, &y.coords)?;
    if z < 1.0 - DOMAIN_TOL * (x.coords[0] * y.coords[0]).max(1.0) || !z.is_finite() {
        return Err(KreinError::InvalidPoint(format!("(x,y) = {z} < 1 on the hyperboloid")));
    }
    if z < 2.0 {
        let d0 = x.coords[0] - y.coords[0];
        let spatial: f64 = x.coords[1..]
            .iter()
            .zip(&y.coords[1..])
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let chord_sq = (spatial - d0 * d0).max(0.0);
        Ok(2.0 * (0.5 * chord_sq.sqrt()).asinh())
    } else {
        Ok(z.acosh())
    }
}

/// Stereographic projection `p = (x₁, …, xₙ)/(1 + x₀)`.
pub fn hyperboloid_to_poincare(x: &HyperboloidPoint) -> PoincarePoint {
    let denom = 1.0 + x.coords[0];
    PoincarePoint { coords: x.coords[1..].iter().map(|c| c / denom).collect() }
}

/// Inverse of [`hyperboloid_to_poincare`].
pub fn poincare_to_hyperboloid(p: &PoincarePoint) -> HyperboloidPoint {
    let s = norm_sq(&p.coords);
    let denom = 1.0 - s;
    let mut coords = Vec::with_capacity(p.coords.len() + 1);
    coords.push((1.0 + s) / denom);
    coords.extend(p.coords.iter().map(|c| 2.0 * c / denom));
    HyperboloidPoint { coords }
}

/// Closed-form distance in the Poincaré ball.
pub fn poincare_distance(p: &PoincarePoint, q: &PoincarePoint) -> Result<f64> {
    check_len(p.coords.len(), q.coords.len())?;
    let diff: f64 = p.coords.iter().zip(&q.coords).map(|(a, b)| (a - b) * (a - b)).sum();
    let z = 1.0 + 2.0 * diff / ((1.0 - norm_sq(&p.coords)) * (1.0 - norm_sq(&q.coords)));
    Ok(z.acosh())
}

/// Great-circle distance `arccos(⟨x,y⟩)`, evaluated as
/// `2·atan2(‖x−y‖, ‖x+y‖)` to stay accurate near 0 and π.
pub fn sphere_distance(x: &SpherePoint, y: &SpherePoint) -> Result<f64> {
    check_len(x.coords.len(), y.coords.len())?;
    let mut minus = 0.0;
    let mut plus = 0.0;
    for (a, b) in x.coords.iter().zip(&y.coords) {
        minus += (a - b) * (a - b);
        plus += (a + b) * (a + b);
    }
    Ok(2.0 * minus.sqrt().atan2(plus.sqrt()))
}

/// Affine-invariant distance `√Σ log² λᵢ`, `λᵢ` the eigenvalues of
/// `L⁻¹ Y L⁻ᵀ` where `X = LLᵀ`.
pub fn spd_distance(x: &SpdPoint, y: &SpdPoint) -> Result<f64> {
    check_len(x.dim(), y.dim())?;
    let l = x
        .mat
        .clone()
        .cholesky()
        .ok_or_else(|| KreinError::InvalidPoint("matrix is not positive definite".into()))?
        .unpack();
    // M = L⁻¹ Y L⁻ᵀ via two triangular solves.
    let a = l
        .solve_lower_triangular(&y.mat)
        .ok_or_else(|| KreinError::Numerical("singular Cholesky factor".into()))?;
    let mut m = l
        .solve_lower_triangular(&a.transpose())
        .ok_or_else(|| KreinError::Numerical("singular Cholesky factor".into()))?;
    crate::linalg::symmetrize(&mut m);
    let mut sum = 0.0;
    for &ev in sym_eigvals(&m)?.iter() {
        if !(ev > 0.0) {
            return Err(KreinError::InvalidPoint(format!(
                "generalized eigenvalue {ev} is not positive"
            )));
        }
        sum += ev.ln().powi(2);
    }
    Ok(sum.sqrt())
}

/// Splits `X` into its unit-determinant part `X / det(X)^{1/n}` and `log det X`.
pub fn spd_split(x: &SpdPoint) -> (SpdPoint, f64) {
    let log_det = x.log_det();
    let n = x.dim() as f64;
    let unit = x.mat.scale((-log_det / n).exp());
    (SpdPoint { mat: unit }, log_det)
}

/// Flat-torus distance with each coordinate difference wrapped to `[0, π]`.
pub fn torus_distance(x: &TorusPoint, y: &TorusPoint) -> Result<f64> {
    check_len(x.angles.len(), y.angles.len())?;
    let sum: f64 = x
        .angles
        .iter()
        .zip(&y.angles)
        .map(|(a, b)| {
            let d = (a - b).abs();
            let d = d.min(TAU - d);
            d * d
        })
        .sum();
    Ok(sum.sqrt())
}

/// Linear map of ℝⁿ⁺¹ preserving the Minkowski form and the upper sheet.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzTransform {
    mat: DMatrix<f64>,
}

impl LorentzTransform {
    /// The boost along the geodesic from the apex to `center`.
    pub fn boost_to(center: &HyperboloidPoint) -> Self {
        let n = center.dim();
        let c0 = center.coords[0];
        let v = &center.coords[1..];
        let mut mat = DMatrix::zeros(n + 1, n + 1);
        mat[(0, 0)] = c0;
        for i in 0..n {
            mat[(0, i + 1)] = v[i];
            mat[(i + 1, 0)] = v[i];
            for j in 0..n {
                mat[(i + 1, j + 1)] = v[i] * v[j] / (1.0 + c0) + if i == j { 1.0 } else { 0.0 };
            }
        }
        Self { mat }
    }

    /// Rotation by `angle` in the spatial `(x₁, x₂)` plane; fixes the apex.
    pub fn rotation(n: usize, angle: f64) -> Self {
        let mut mat = DMatrix::identity(n + 1, n + 1);
        if n >= 2 {
            let (s, c) = angle.sin_cos();
            mat[(1, 1)] = c;
            mat[(1, 2)] = -s;
            mat[(2, 1)] = s;
            mat[(2, 2)] = c;
        }
        Self { mat }
    }

    pub fn compose(&self, other: &LorentzTransform) -> Self {
        Self { mat: &self.mat * &other.mat }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// Applies the map to any vector of ℝⁿ⁺¹ (e.g. a boundary normal).
    pub fn apply_vector(&self, v: &[f64]) -> Vec<f64> {
        let n = self.mat.nrows();
        (0..n).map(|i| (0..n).map(|j| self.mat[(i, j)] * v[j]).sum()).collect()
    }

    pub fn apply(&self, x: &HyperboloidPoint) -> HyperboloidPoint {
        HyperboloidPoint { coords: self.apply_vector(&x.coords) }
    }
}

/// Number of tabulation nodes for the radial inverse CDF.
pub const RADIAL_NODES: usize = 4096;

/// Upper end of the tabulated radial range, `max(10σ, 10)`.
pub fn radial_cutoff(sigma: f64) -> f64 {
    (10.0 * sigma).max(10.0)
}

/// Log of the unnormalized radial density `exp(−r²/2σ²)·sinh(r)` on ℍ².
pub fn radial_log_density(r: f64, sigma: f64) -> f64 {
    if r <= 0.0 {
        return f64::NEG_INFINITY;
    }
    // sinh r = e^r (1 − e^{−2r}) / 2
    r - r * r / (2.0 * sigma * sigma) + (-(-2.0 * r).exp_m1() / 2.0).ln()
}

/// Tabulated inverse CDF of the ℍ² radial density.
#[derive(Debug, Clone)]
pub struct RadialSampler {
    radii: Vec<f64>,
    cdf: Vec<f64>,
}

impl RadialSampler {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(KreinError::Parameter(format!("sigma must be positive, got {sigma}")));
        }
        let r_max = radial_cutoff(sigma);
        let h = r_max / (RADIAL_NODES - 1) as f64;
        let radii: Vec<f64> = (0..RADIAL_NODES).map(|i| i as f64 * h).collect();
        let logs: Vec<f64> = radii.iter().map(|&r| radial_log_density(r, sigma)).collect();
        let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let dens: Vec<f64> = logs.iter().map(|l| (l - peak).exp()).collect();
        let mut cdf = Vec::with_capacity(RADIAL_NODES);
        let mut acc = 0.0;
        cdf.push(0.0);
        for w in dens.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            cdf.push(acc);
        }
        for c in cdf.iter_mut() {
            *c /= acc;
        }
        Ok(Self { radii, cdf })
    }

    /// Maps `u ∈ [0, 1)` to a radius by linear interpolation of the table.
    pub fn radius(&self, u: f64) -> f64 {
        let idx = self.cdf.partition_point(|&c| c <= u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[idx - 1], self.cdf[idx]);
        let (r0, r1) = (self.radii[idx - 1], self.radii[idx]);
        if c1 > c0 {
            r0 + (u - c0) / (c1 - c0) * (r1 - r0)
        } else {
            r0
        }
    }
}

/// Draws `count` points on ℍ² from the Riemannian Gaussian with density
/// proportional to `exp(−d(center, x)²/2σ²)`.
pub fn riemannian_gaussian_sample(
    center: &HyperboloidPoint,
    sigma: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<HyperboloidPoint>> {
    if center.dim() != 2 {
        return Err(KreinError::Dimension { expected: 3, got: center.coords.len() });
    }
    let radial = RadialSampler::new(sigma)?;
    let boost = LorentzTransform::boost_to(center);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let r = radial.radius(rng.gen::<f64>());
        let theta = rng.gen::<f64>() * TAU;
        let (s, c) = theta.sin_cos();
        let local = HyperboloidPoint { coords: vec![r.cosh(), r.sinh() * c, r.sinh() * s] };
        out.push(boost.apply(&local));
    }
    Ok(out)
}

/// The space a point or kernel lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    /// ℍⁿ in the hyperboloid model.
    Hyperbolic(usize),
    /// Sⁿ ⊂ ℝⁿ⁺¹.
    Sphere(usize),
    /// n×n SPD matrices.
    Spd(usize),
    /// `(S¹)^m`; `Torus(1)` is the circle.
    Torus(usize),
    Euclidean(usize),
}

impl Space {
    /// Number of stored coordinates per point.
    pub fn coord_len(&self) -> usize {
        match *self {
            Space::Hyperbolic(n) | Space::Sphere(n) => n + 1,
            Space::Spd(n) => n * n,
            Space::Torus(n) | Space::Euclidean(n) => n,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Hyperbolic(n) => write!(f, "hyperbolic-{n}"),
            Space::Sphere(n) => write!(f, "sphere-{n}"),
            Space::Spd(n) => write!(f, "spd-{n}"),
            Space::Torus(n) => write!(f, "torus-{n}"),
            Space::Euclidean(n) => write!(f, "euclidean-{n}"),
        }
    }
}

impl FromStr for Space {
    type Err = KreinError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || KreinError::Parse(format!("unknown space {s:?}"));
        let (name, dim) = s.rsplit_once('-').ok_or_else(bad)?;
        let dim: usize = dim.parse().map_err(|_| bad())?;
        if dim == 0 {
            return Err(bad());
        }
        match name {
            "hyperbolic" => Ok(Space::Hyperbolic(dim)),
            "sphere" => Ok(Space::Sphere(dim)),
            "spd" => Ok(Space::Spd(dim)),
            "torus" => Ok(Space::Torus(dim)),
            "circle" if dim == 1 => Ok(Space::Torus(1)),
            "euclidean" => Ok(Space::Euclidean(dim)),
            _ => Err(bad()),
        }
    }
}

impl serde::Serialize for Space {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Space {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A validated point of any supported space.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Hyperboloid(HyperboloidPoint),
    Sphere(SpherePoint),
    Spd(SpdPoint),
    Torus(TorusPoint),
    Euclidean(Vec<f64>),
}

impl Point {
    pub fn space(&self) -> Space {
        match self {
            Point::Hyperboloid(p) => Space::Hyperbolic(p.dim()),
            Point::Sphere(p) => Space::Sphere(p.dim()),
            Point::Spd(p) => Space::Spd(p.dim()),
            Point::Torus(p) => Space::Torus(p.dim()),
            Point::Euclidean(v) => Space::Euclidean(v.len()),
        }
    }

    /// Flat coordinates (SPD matrices row-major).
    pub fn coords(&self) -> Vec<f64> {
        match self {
            Point::Hyperboloid(p) => p.coords.clone(),
            Point::Sphere(p) => p.coords.clone(),
            Point::Spd(p) => p.mat.transpose().as_slice().to_vec(),
            Point::Torus(p) => p.angles.clone(),
            Point::Euclidean(v) => v.clone(),
        }
    }

    /// Inverse of [`Point::coords`], validating the space's invariants.
    pub fn from_coords(space: Space, coords: &[f64]) -> Result<Self> {
        check_len(space.coord_len(), coords.len())?;
        let v = coords.to_vec();
        Ok(match space {
            Space::Hyperbolic(_) => Point::Hyperboloid(HyperboloidPoint::new(v)?),
            Space::Sphere(_) => Point::Sphere(SpherePoint::new(v)?),
            Space::Spd(n) => Point::Spd(SpdPoint::new(DMatrix::from_row_slice(n, n, coords))?),
            Space::Torus(_) => Point::Torus(TorusPoint::new(v)?),
            Space::Euclidean(_) => {
                if v.iter().any(|c| !c.is_finite()) {
                    return Err(KreinError::InvalidPoint("non-finite coordinate".into()));
                }
                Point::Euclidean(v)
            }
        })
    }

    /// Geodesic distance to `other`; both points must share a space.
    pub fn distance(&self, other: &Point) -> Result<f64> {
        match (self, other) {
            (Point::Hyperboloid(a), Point::Hyperboloid(b)) => hyperbolic_distance(a, b),
            (Point::Sphere(a), Point::Sphere(b)) => sphere_distance(a, b),
            (Point::Spd(a), Point::Spd(b)) => {
                // fixed argument order keeps k(x, y) == k(y, x) bit for bit
                let swap = a.mat.iter().partial_cmp(b.mat.iter()) == Some(std::cmp::Ordering::Greater);
                if swap {
                    spd_distance(b, a)
                } else {
                    spd_distance(a, b)
                }
            }
            (Point::Torus(a), Point::Torus(b)) => torus_distance(a, b),
            (Point::Euclidean(a), Point::Euclidean(b)) => {
                check_len(a.len(), b.len())?;
                Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
            }
            _ => Err(KreinError::SpaceMismatch {
                expected: self.space().to_string(),
                got: other.space().to_string(),
            }),
        }
    }
}

impl From<HyperboloidPoint> for Point {
    fn from(p: HyperboloidPoint) -> Self {
        Point::Hyperboloid(p)
    }
}

impl From<SpherePoint> for Point {
    fn from(p: SpherePoint) -> Self {
        Point::Sphere(p)
    }
}

impl From<SpdPoint> for Point {
    fn from(p: SpdPoint) -> Self {
        Point::Spd(p)
    }
}

impl From<TorusPoint> for Point {
    fn from(p: TorusPoint) -> Self {
        Point::Torus(p)
    }
}
