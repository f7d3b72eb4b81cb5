//! Symbolic kernel expressions and Gram matrices.
//!
//! A [`KernelExpr`] is a tree of atoms (geodesic Gaussian, Minkowski
//! inner product, hyperbolic tangent on the sphere, Euclidean Gaussian,
//! and invariant kernels given by a profile function) combined through
//! real linear combinations and pointwise products. Both combinators keep
//! positive decomposability, so a kernel built only from decomposable
//! leaves is flagged decomposable by construction.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{KreinError, Result};
use crate::geometry::{minkowski_inner, Point, Space};
use crate::harmonic::{CosineSeries, LegendreSeries, Series};

/// Gram entries smaller in magnitude than this are stored as zero.
pub const GRAM_FLUSH: f64 = 1e-300;

/// A real function of the invariant statistic of a pair of points: the
/// geodesic distance, or the inner product on spheres.
#[derive(Clone)]
pub enum Profile {
    /// `θ ↦ Σ a_k cos(kθ)` on the circle.
    Cosine(CosineSeries),
    /// `t ↦ Σ c_k P_k(t)` on S².
    Legendre(LegendreSeries),
    /// Arbitrary function; not serializable and not flagged decomposable.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Cosine(s) => f.debug_tuple("Cosine").field(&s.coefficients).finish(),
            Profile::Legendre(s) => f.debug_tuple("Legendre").field(&s.coefficients).finish(),
            Profile::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Profile {
    fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Profile::Cosine(s) => s.eval(x),
            Profile::Legendre(s) => s.eval(x),
            Profile::Custom(f) => Ok(f(x)),
        }
    }
}

/// Node of a kernel expression tree.
#[derive(Debug, Clone)]
pub enum Node {
    GeodesicGaussian { lambda: f64 },
    MinkowskiLinear,
    TanhSphere { a: f64, b: f64 },
    EuclideanGaussian { lambda: f64 },
    Profile(Profile),
    LinComb { children: Vec<KernelExpr>, coeffs: Vec<f64> },
    Product { children: Vec<KernelExpr> },
}

/// Immutable kernel expression over a single [`Space`].
#[derive(Debug, Clone)]
pub struct KernelExpr {
    node: Node,
    space: Space,
    decomposable: bool,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(KreinError::Parameter(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

impl KernelExpr {
    /// `exp(−λ·d(x,y)²)` with the geodesic distance of `space`.
    ///
    /// Flagged decomposable on ℝⁿ, tori, hyperbolic spaces and SPD
    /// matrices; on spheres it is not flagged, since `arccos(t)²` is not
    /// smooth at `t = −1`.
    pub fn geodesic_gaussian(space: Space, lambda: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        let decomposable = !matches!(space, Space::Sphere(_));
        Ok(Self { node: Node::GeodesicGaussian { lambda }, space, decomposable })
    }

    /// The Minkowski form `(x, y)` on ℍⁿ.
    pub fn minkowski_linear(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(KreinError::Parameter("hyperbolic dimension must be positive".into()));
        }
        Ok(Self { node: Node::MinkowskiLinear, space: Space::Hyperbolic(n), decomposable: true })
    }

    /// `tanh(a⟨x,y⟩ + b)` on Sⁿ.
    pub fn tanh_sphere(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 || !a.is_finite() || !b.is_finite() {
            return Err(KreinError::Parameter("tanh kernel needs n > 0 and finite a, b".into()));
        }
        Ok(Self { node: Node::TanhSphere { a, b }, space: Space::Sphere(n), decomposable: true })
    }

    /// `exp(−λ‖x − y‖²)` on ℝⁿ.
    pub fn euclidean_gaussian(n: usize, lambda: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        if n == 0 {
            return Err(KreinError::Parameter("Euclidean dimension must be positive".into()));
        }
        Ok(Self { node: Node::EuclideanGaussian { lambda }, space: Space::Euclidean(n), decomposable: true })
    }

    /// Invariant kernel `k(x, y) = profile(s(x, y))` with `s` the inner
    /// product on spheres and the geodesic distance elsewhere. Cosine
    /// profiles require the circle and Legendre profiles require S².
    pub fn profile(space: Space, profile: Profile) -> Result<Self> {
        let decomposable = match (&profile, space) {
            (Profile::Cosine(_), Space::Torus(1)) => true,
            (Profile::Legendre(_), Space::Sphere(2)) => true,
            (Profile::Custom(_), _) => false,
            (Profile::Cosine(_), _) => {
                return Err(KreinError::Parameter(format!("cosine profiles live on torus-1, not {space}")))
            }
            (Profile::Legendre(_), _) => {
                return Err(KreinError::Parameter(format!("Legendre profiles live on sphere-2, not {space}")))
            }
        };
        Ok(Self { node: Node::Profile(profile), space, decomposable })
    }

    fn shared_space(children: &[KernelExpr]) -> Result<Space> {
        let first = children
            .first()
            .ok_or_else(|| KreinError::Empty("combinator needs at least one child".into()))?;
        for c in &children[1..] {
            if c.space != first.space {
                return Err(KreinError::SpaceMismatch {
                    expected: first.space.to_string(),
                    got: c.space.to_string(),
                });
            }
        }
        Ok(first.space)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    /// Whether every leaf carries a known positive decomposition.
    pub fn is_decomposable(&self) -> bool {
        self.decomposable
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        if p.space() != self.space {
            return Err(KreinError::SpaceMismatch {
                expected: self.space.to_string(),
                got: p.space().to_string(),
            });
        }
        Ok(())
    }

    fn eval_unchecked(&self, x: &Point, y: &Point) -> Result<f64> {
        match &self.node {
            Node::GeodesicGaussian { lambda } | Node::EuclideanGaussian { lambda } => {
                let d = x.distance(y)?;
                Ok((-lambda * d * d).exp())
            }
            Node::MinkowskiLinear => match (x, y) {
                (Point::Hyperboloid(a), Point::Hyperboloid(b)) => minkowski_inner(a.coords(), b.coords()),
                _ => unreachable!("space checked"),
            },
            Node::TanhSphere { a, b } => match (x, y) {
                (Point::Sphere(p), Point::Sphere(q)) => {
                    let t: f64 = p.coords().iter().zip(q.coords()).map(|(u, v)| u * v).sum();
                    Ok((a * t + b).tanh())
                }
                _ => unreachable!("space checked"),
            },
            Node::Profile(profile) => {
                let s = match (x, y) {
                    (Point::Sphere(p), Point::Sphere(q)) => p
                        .coords()
                        .iter()
                        .zip(q.coords())
                        .map(|(u, v)| u * v)
                        .sum::<f64>()
                        .clamp(-1.0, 1.0),
                    _ => x.distance(y)?,
                };
                profile.eval(s)
            }
            Node::LinComb { children, coeffs } => {
                let mut acc = 0.0;
                for (c, w) in children.iter().zip(coeffs) {
                    acc += w * c.eval_unchecked(x, y)?;
                }
                Ok(acc)
            }
            Node::Product { children } => {
                let mut acc = 1.0;
                for c in children {
                    acc *= c.eval_unchecked(x, y)?;
                }
                Ok(acc)
            }
        }
    }

    /// `k(x, y)`.
    pub fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        self.eval_unchecked(x, y)
    }

    /// Gram matrix over `points`, each unordered pair evaluated once.
    pub fn gram(&self, points: &[Point]) -> Result<DMatrix<f64>> {
        if points.is_empty() {
            return Err(KreinError::Empty("Gram matrix of an empty point list".into()));
        }
        for p in points {
            self.check_point(p)?;
        }
        let n = points.len();
        let mut k = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let mut v = self.eval_unchecked(&points[i], &points[j])?;
                if v.abs() < GRAM_FLUSH {
                    v = 0.0;
                }
                k[(i, j)] = v;
                k[(j, i)] = v;
            }
        }
        Ok(k)
    }

    /// Cross-kernel matrix `(k(xᵢ, zⱼ))` for prediction.
    pub fn cross(&self, rows: &[Point], cols: &[Point]) -> Result<DMatrix<f64>> {
        for p in rows.iter().chain(cols) {
            self.check_point(p)?;
        }
        let mut out = DMatrix::zeros(rows.len(), cols.len());
        for (i, x) in rows.iter().enumerate() {
            for (j, z) in cols.iter().enumerate() {
                out[(i, j)] = self.eval_unchecked(x, z)?;
            }
        }
        Ok(out)
    }
}

/// Real linear combination `Σ cᵢ kᵢ`.
pub fn lin_comb(kernels: Vec<KernelExpr>, coeffs: Vec<f64>) -> Result<KernelExpr> {
    if kernels.len() != coeffs.len() {
        return Err(KreinError::Dimension { expected: kernels.len(), got: coeffs.len() });
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(KreinError::Parameter("linear combination coefficients must be finite".into()));
    }
    let space = KernelExpr::shared_space(&kernels)?;
    let decomposable = kernels.iter().all(|k| k.decomposable);
    Ok(KernelExpr { node: Node::LinComb { children: kernels, coeffs }, space, decomposable })
}

/// Pointwise product `Π kᵢ`.
pub fn product(kernels: Vec<KernelExpr>) -> Result<KernelExpr> {
    let space = KernelExpr::shared_space(&kernels)?;
    let decomposable = kernels.iter().all(|k| k.decomposable);
    Ok(KernelExpr { node: Node::Product { children: kernels }, space, decomposable })
}

/// Convenience wrapper for [`KernelExpr::eval`].
pub fn eval_kernel(expr: &KernelExpr, x: &Point, y: &Point) -> Result<f64> {
    expr.eval(x, y)
}

/// Convenience wrapper for [`KernelExpr::gram`].
pub fn gram(expr: &KernelExpr, points: &[Point]) -> Result<DMatrix<f64>> {
    expr.gram(points)
}

// JSON form: {"type": ..., "params": {...}, "children": [...]}.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelDoc {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    params: Map<String, Value>,
    #[serde(default)]
    children: Vec<KernelDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ProfileDoc {
    Cosine { coefficients: Vec<f64> },
    Legendre { coefficients: Vec<f64> },
}

fn param<T: serde::de::DeserializeOwned>(params: &Map<String, Value>, key: &str, kind: &str) -> Result<T> {
    let v = params
        .get(key)
        .ok_or_else(|| KreinError::Parse(format!("kernel {kind:?} is missing parameter {key:?}")))?;
    serde_json::from_value(v.clone())
        .map_err(|e| KreinError::Parse(format!("kernel {kind:?} parameter {key:?}: {e}")))
}

fn check_keys(params: &Map<String, Value>, allowed: &[&str], kind: &str) -> Result<()> {
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(KreinError::Parse(format!("kernel {kind:?} has unknown parameter {k:?}")));
    }
    Ok(())
}

impl KernelDoc {
    fn from_expr(expr: &KernelExpr) -> Result<Self> {
        let space = expr.space.to_string();
        let leaf = |kind: &str, params: Value| KernelDoc {
            kind: kind.into(),
            params: params.as_object().cloned().unwrap_or_default(),
            children: Vec::new(),
        };
        Ok(match &expr.node {
            Node::GeodesicGaussian { lambda } => {
                leaf("geodesic_gaussian", json!({"space": space, "lambda": lambda}))
            }
            Node::MinkowskiLinear => {
                let Space::Hyperbolic(n) = expr.space else { unreachable!() };
                leaf("minkowski_linear", json!({"n": n}))
            }
            Node::TanhSphere { a, b } => leaf("tanh_sphere", json!({"space": space, "a": a, "b": b})),
            Node::EuclideanGaussian { lambda } => {
                leaf("euclidean_gaussian", json!({"space": space, "lambda": lambda}))
            }
            Node::Profile(p) => {
                let doc = match p {
                    Profile::Cosine(s) => ProfileDoc::Cosine { coefficients: s.coefficients.clone() },
                    Profile::Legendre(s) => ProfileDoc::Legendre { coefficients: s.coefficients.clone() },
                    Profile::Custom(_) => {
                        return Err(KreinError::Parameter("custom profiles cannot be serialized".into()))
                    }
                };
                leaf("profile", json!({"space": space, "profile": serde_json::to_value(doc)?}))
            }
            Node::LinComb { children, coeffs } => KernelDoc {
                kind: "lin_comb".into(),
                params: json!({ "coeffs": coeffs }).as_object().cloned().unwrap_or_default(),
                children: children.iter().map(KernelDoc::from_expr).collect::<Result<_>>()?,
            },
            Node::Product { children } => KernelDoc {
                kind: "product".into(),
                params: Map::new(),
                children: children.iter().map(KernelDoc::from_expr).collect::<Result<_>>()?,
            },
        })
    }

    fn into_expr(self) -> Result<KernelExpr> {
        let kind = self.kind.as_str();
        let p = &self.params;
        let no_children = || -> Result<()> {
            if !self.children.is_empty() {
                return Err(KreinError::Parse(format!("kernel {kind:?} takes no children")));
            }
            Ok(())
        };
        match kind {
            "geodesic_gaussian" => {
                no_children()?;
                check_keys(p, &["space", "lambda"], kind)?;
                KernelExpr::geodesic_gaussian(param(p, "space", kind)?, param(p, "lambda", kind)?)
            }
            "minkowski_linear" => {
                no_children()?;
                check_keys(p, &["n"], kind)?;
                KernelExpr::minkowski_linear(param(p, "n", kind)?)
            }
            "tanh_sphere" => {
                no_children()?;
                check_keys(p, &["space", "a", "b"], kind)?;
                let Space::Sphere(n) = param(p, "space", kind)? else {
                    return Err(KreinError::Parse("tanh_sphere needs a sphere space".into()));
                };
                KernelExpr::tanh_sphere(n, param(p, "a", kind)?, param(p, "b", kind)?)
            }
            "euclidean_gaussian" => {
                no_children()?;
                check_keys(p, &["space", "lambda"], kind)?;
                let Space::Euclidean(n) = param(p, "space", kind)? else {
                    return Err(KreinError::Parse("euclidean_gaussian needs a euclidean space".into()));
                };
                KernelExpr::euclidean_gaussian(n, param(p, "lambda", kind)?)
            }
            "profile" => {
                no_children()?;
                check_keys(p, &["space", "profile"], kind)?;
                let profile = match param::<ProfileDoc>(p, "profile", kind)? {
                    ProfileDoc::Cosine { coefficients } => Profile::Cosine(CosineSeries::new(coefficients)?),
                    ProfileDoc::Legendre { coefficients } => {
                        Profile::Legendre(LegendreSeries::new(coefficients)?)
                    }
                };
                KernelExpr::profile(param(p, "space", kind)?, profile)
            }
            "lin_comb" => {
                check_keys(p, &["coeffs"], kind)?;
                let coeffs: Vec<f64> = param(p, "coeffs", kind)?;
                let children = self.children.into_iter().map(KernelDoc::into_expr).collect::<Result<_>>()?;
                lin_comb(children, coeffs)
            }
            "product" => {
                check_keys(p, &[], kind)?;
                let children = self.children.into_iter().map(KernelDoc::into_expr).collect::<Result<_>>()?;
                product(children)
            }
            other => Err(KreinError::Parse(format!("unknown kernel type {other:?}"))),
        }
    }
}

impl KernelExpr {
    pub fn to_json_value(&self) -> Result<Value> {
        Ok(serde_json::to_value(KernelDoc::from_expr(self)?)?)
    }

    pub fn from_json_value(v: Value) -> Result<Self> {
        let doc: KernelDoc =
            serde_json::from_value(v).map_err(|e| KreinError::Parse(format!("kernel document: {e}")))?;
        doc.into_expr()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_json_value()?)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| KreinError::Parse(format!("kernel JSON: {e}")))?;
        Self::from_json_value(v)
    }
}

impl Serialize for KernelExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        KernelDoc::from_expr(self).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KernelExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        KernelDoc::deserialize(d)?.into_expr().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{HyperboloidPoint, SpherePoint, TorusPoint};

    fn hyp(x: f64, y: f64) -> Point {
        HyperboloidPoint::from_spatial(&[x, y]).into()
    }

    #[test]
    fn atom_examples() {
        let k = KernelExpr::geodesic_gaussian(Space::Hyperbolic(2), 1.0).unwrap();
        let x = hyp(0.3, -0.2);
        assert_eq!(k.eval(&x, &x).unwrap(), 1.0);
        let m = KernelExpr::minkowski_linear(2).unwrap();
        let o: Point = HyperboloidPoint::origin(2).into();
        assert_eq!(m.eval(&o, &o).unwrap(), 1.0);
        let t = KernelExpr::tanh_sphere(2, 2.0, -1.0).unwrap();
        let e1: Point = SpherePoint::new(vec![1.0, 0.0, 0.0]).unwrap().into();
        assert!((t.eval(&e1, &e1).unwrap() - 1f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        assert!(KernelExpr::geodesic_gaussian(Space::Torus(1), 0.0).is_err());
        assert!(KernelExpr::euclidean_gaussian(2, -1.0).is_err());
        assert!(KernelExpr::minkowski_linear(0).is_err());
        let c = CosineSeries::new(vec![1.0]).unwrap();
        assert!(KernelExpr::profile(Space::Sphere(2), Profile::Cosine(c)).is_err());
    }

    #[test]
    fn space_mismatch() {
        let k = KernelExpr::geodesic_gaussian(Space::Hyperbolic(2), 1.0).unwrap();
        let s: Point = SpherePoint::new(vec![1.0, 0.0, 0.0]).unwrap().into();
        assert!(matches!(k.eval(&s, &s), Err(KreinError::SpaceMismatch { .. })));
        let other = KernelExpr::geodesic_gaussian(Space::Torus(1), 1.0).unwrap();
        assert!(lin_comb(vec![k.clone(), other.clone()], vec![1.0, 1.0]).is_err());
        assert!(product(vec![k, other]).is_err());
        assert!(product(vec![]).is_err());
    }

    #[test]
    fn combinator_examples() {
        let k1 = KernelExpr::geodesic_gaussian(Space::Hyperbolic(2), 0.7).unwrap();
        let k2 = KernelExpr::minkowski_linear(2).unwrap();
        let (x, y) = (hyp(0.4, 0.1), hyp(-1.2, 0.5));
        let same = lin_comb(vec![k1.clone()], vec![1.0]).unwrap();
        assert_eq!(same.eval(&x, &y).unwrap(), k1.eval(&x, &y).unwrap());
        let zero = lin_comb(vec![k1.clone(), k1.clone()], vec![1.0, -1.0]).unwrap();
        assert_eq!(zero.eval(&x, &y).unwrap(), 0.0);
        let lc = lin_comb(vec![k1.clone(), k2.clone()], vec![2.0, -3.0]).unwrap();
        let want = 2.0 * k1.eval(&x, &y).unwrap() - 3.0 * k2.eval(&x, &y).unwrap();
        assert!((lc.eval(&x, &y).unwrap() - want).abs() <= 1e-14);
        assert!(lin_comb(vec![k1.clone()], vec![1.0, 2.0]).is_err());
        assert!(lin_comb(vec![k1.clone()], vec![f64::NAN]).is_err());
        let p = product(vec![k1.clone()]).unwrap();
        assert_eq!(p.eval(&x, &y).unwrap(), k1.eval(&x, &y).unwrap());
    }

    #[test]
    fn euclidean_gaussian_product_adds_exponents() {
        let a = KernelExpr::euclidean_gaussian(2, 0.3).unwrap();
        let b = KernelExpr::euclidean_gaussian(2, 1.1).unwrap();
        let ab = product(vec![a, b]).unwrap();
        let c = KernelExpr::euclidean_gaussian(2, 1.4).unwrap();
        let x = Point::Euclidean(vec![0.2, -0.7]);
        let y = Point::Euclidean(vec![1.0, 0.4]);
        assert!((ab.eval(&x, &y).unwrap() - c.eval(&x, &y).unwrap()).abs() <= 1e-14);
    }

    #[test]
    fn decomposable_flag_propagates() {
        let g = KernelExpr::geodesic_gaussian(Space::Torus(1), 1.0).unwrap();
        assert!(g.is_decomposable());
        let s = KernelExpr::geodesic_gaussian(Space::Sphere(2), 1.0).unwrap();
        assert!(!s.is_decomposable());
        let custom = KernelExpr::profile(Space::Torus(1), Profile::Custom(Arc::new(|t: f64| t.cos()))).unwrap();
        assert!(!custom.is_decomposable());
        assert!(!lin_comb(vec![g.clone(), custom.clone()], vec![1.0, 1.0]).unwrap().is_decomposable());
        assert!(product(vec![g.clone(), g.clone()]).unwrap().is_decomposable());
    }

    #[test]
    fn gram_basics() {
        let k = KernelExpr::geodesic_gaussian(Space::Hyperbolic(2), 1.0).unwrap();
        assert!(k.gram(&[]).is_err());
        let g = k.gram(&[hyp(0.1, 0.2)]).unwrap();
        assert_eq!(g.as_slice(), &[1.0]);
        let pts: Vec<Point> = (0..6).map(|i| hyp(0.3 * i as f64, -0.1 * i as f64)).collect();
        let g = k.gram(&pts).unwrap();
        assert_eq!(g, g.transpose());
        // far-apart points underflow and are flushed to an exact zero
        let far = k.gram(&[hyp(0.0, 0.0), hyp(1e13, 0.0)]).unwrap();
        assert_eq!(far[(0, 1)], 0.0);
    }

    #[test]
    fn json_round_trip() {
        let c = CosineSeries::new(vec![0.5, 0.25]).unwrap();
        let k = lin_comb(
            vec![
                KernelExpr::geodesic_gaussian(Space::Torus(1), 2.0).unwrap(),
                product(vec![
                    KernelExpr::profile(Space::Torus(1), Profile::Cosine(c)).unwrap(),
                    KernelExpr::geodesic_gaussian(Space::Torus(1), 0.5).unwrap(),
                ])
                .unwrap(),
            ],
            vec![1.5, -0.5],
        )
        .unwrap();
        let s = k.to_json().unwrap();
        let back = KernelExpr::from_json(&s).unwrap();
        assert_eq!(back.to_json().unwrap(), s);
        let x: Point = TorusPoint::new(vec![0.4]).unwrap().into();
        let y: Point = TorusPoint::new(vec![5.0]).unwrap().into();
        assert_eq!(back.eval(&x, &y).unwrap(), k.eval(&x, &y).unwrap());

        assert!(KernelExpr::from_json(r#"{"type": "nope"}"#).is_err());
        assert!(KernelExpr::from_json(r#"{"type": "geodesic_gaussian", "params": {"space": "torus-1"}}"#).is_err());
        assert!(KernelExpr::from_json(
            r#"{"type": "minkowski_linear", "params": {"n": 2, "extra": 1}}"#
        )
        .is_err());
        let custom = KernelExpr::profile(Space::Torus(1), Profile::Custom(Arc::new(|t: f64| t))).unwrap();
        assert!(custom.to_json().is_err());
    }
}
