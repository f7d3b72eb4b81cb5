//! Truncated harmonic expansions of invariant kernel profiles.
//!
//! On the circle an even profile `f(θ)` expands as `Σ a_k cos(kθ)`; on S²
//! a profile of the inner product expands as `Σ c_k P_k(t)`. Both families
//! of basis functions are positive definite, so splitting the coefficients
//! by sign yields two positive definite profiles whose difference is the
//! truncated expansion. The minimum coefficient tells whether the profile
//! itself is positive definite at this resolution, and the Wiener-type
//! tail fraction `Σ_{k≥k0}|a_k| / Σ|a_k|` tells how much the truncation
//! throws away.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{KreinError, Result};
use crate::quadrature::{legendre_all, CompositeRule};

/// Coefficients `a[k]` of `cos(kθ)`, `k = 0..=k_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosineSeries {
    pub coefficients: Vec<f64>,
    pub quadrature_nodes: usize,
}

/// Coefficients `c[k]` of the Legendre polynomial `P_k(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegendreSeries {
    pub coefficients: Vec<f64>,
    pub quadrature_nodes: usize,
}

/// Operations shared by both expansion families.
pub trait Series: Clone {
    fn coefficients(&self) -> &[f64];
    fn with_coefficients(&self, coefficients: Vec<f64>) -> Self;
    /// Evaluates the truncated expansion. The argument is an angle for
    /// cosine series and an inner product in `[-1, 1]` for Legendre series.
    fn eval(&self, x: f64) -> Result<f64>;

    fn k_max(&self) -> usize {
        self.coefficients().len().saturating_sub(1)
    }

    /// Smallest coefficient and its index.
    fn min_coefficient(&self) -> (f64, usize) {
        self.coefficients()
            .iter()
            .enumerate()
            .fold((f64::INFINITY, 0), |best, (k, &a)| if a < best.0 { (a, k) } else { best })
    }
}

impl CosineSeries {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        check_coefficients(&coefficients)?;
        Ok(Self { coefficients, quadrature_nodes: 0 })
    }
}

impl LegendreSeries {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        check_coefficients(&coefficients)?;
        Ok(Self { coefficients, quadrature_nodes: 0 })
    }
}

fn check_coefficients(c: &[f64]) -> Result<()> {
    if c.is_empty() {
        return Err(KreinError::Empty("series needs at least one coefficient".into()));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(KreinError::Parameter("series coefficients must be finite".into()));
    }
    Ok(())
}

impl Series for CosineSeries {
    fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    fn with_coefficients(&self, coefficients: Vec<f64>) -> Self {
        Self { coefficients, quadrature_nodes: self.quadrature_nodes }
    }

    fn eval(&self, theta: f64) -> Result<f64> {
        if !theta.is_finite() {
            return Err(KreinError::Parameter(format!("angle {theta} is not finite")));
        }
        Ok(self
            .coefficients
            .iter()
            .enumerate()
            .map(|(k, a)| a * (k as f64 * theta).cos())
            .sum())
    }
}

impl Series for LegendreSeries {
    fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    fn with_coefficients(&self, coefficients: Vec<f64>) -> Self {
        Self { coefficients, quadrature_nodes: self.quadrature_nodes }
    }

    fn eval(&self, t: f64) -> Result<f64> {
        if !(t.abs() <= 1.0 + 1e-9) {
            return Err(KreinError::Parameter(format!("Legendre argument {t} outside [-1, 1]")));
        }
        let t = t.clamp(-1.0, 1.0);
        let p = legendre_all(self.k_max(), t);
        Ok(self.coefficients.iter().zip(&p).map(|(c, p)| c * p).sum())
    }
}

/// `f = plus − minus` with both parts having nonnegative coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSignSplit<S> {
    pub plus: S,
    pub minus: S,
}

/// Splits coefficients by sign: `plus[k] = max(a_k, 0)`, `minus[k] = max(−a_k, 0)`.
pub fn sign_split<S: Series>(series: &S) -> SeriesSignSplit<S> {
    let plus = series.coefficients().iter().map(|&a| if a > 0.0 { a } else { 0.0 }).collect();
    let minus = series.coefficients().iter().map(|&a| if a < 0.0 { -a } else { 0.0 }).collect();
    SeriesSignSplit { plus: series.with_coefficients(plus), minus: series.with_coefficients(minus) }
}

/// `(Σ_k |a_k|, Σ_{k≥k0} |a_k| / Σ_k |a_k|)`; the fraction is 0 for a zero series.
pub fn wiener_tail<S: Series>(series: &S, k0: usize) -> Result<(f64, f64)> {
    let c = series.coefficients();
    if k0 > series.k_max() {
        return Err(KreinError::Parameter(format!(
            "tail index {k0} exceeds K_max = {}",
            series.k_max()
        )));
    }
    let abs_sum: f64 = c.iter().map(|a| a.abs()).sum();
    let tail: f64 = c[k0..].iter().map(|a| a.abs()).sum();
    let frac = if abs_sum > 0.0 { tail / abs_sum } else { 0.0 };
    Ok((abs_sum, frac))
}

fn check_resolution(k_max: usize, nodes: usize) -> Result<()> {
    if nodes < 4 * (k_max + 1) {
        return Err(KreinError::Parameter(format!(
            "need at least 4*(K_max+1) = {} quadrature nodes, got {nodes}",
            4 * (k_max + 1)
        )));
    }
    Ok(())
}

/// Default node count used by the CLI: 20 per retained coefficient.
pub fn default_nodes(k_max: usize) -> usize {
    20 * (k_max + 1)
}

/// Cosine coefficients of an even profile on `[-π, π]` by composite
/// Gauss–Legendre quadrature: `a₀ = (1/2π)∫f`, `a_k = (1/π)∫f(θ)cos(kθ)dθ`.
pub fn circle_cosine_coeffs(
    profile: impl Fn(f64) -> f64,
    k_max: usize,
    nodes: usize,
) -> Result<CosineSeries> {
    check_resolution(k_max, nodes)?;
    let rule = CompositeRule::with_nodes(-PI, PI, nodes)?;
    let weighted: Vec<f64> = rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| w * profile(x)).collect();
    if weighted.iter().any(|v| !v.is_finite()) {
        return Err(KreinError::Numerical("profile returned a non-finite value".into()));
    }
    let coefficients = (0..=k_max)
        .map(|k| {
            let s: f64 = rule
                .nodes
                .iter()
                .zip(&weighted)
                .map(|(&x, &wf)| wf * (k as f64 * x).cos())
                .sum();
            if k == 0 {
                s / TAU
            } else {
                s / PI
            }
        })
        .collect();
    Ok(CosineSeries { coefficients, quadrature_nodes: rule.len() })
}

/// Legendre coefficients `c_k = ((2k+1)/2)∫_{-1}^{1} f(t)P_k(t)dt`.
pub fn legendre_coeffs(
    profile: impl Fn(f64) -> f64,
    k_max: usize,
    nodes: usize,
) -> Result<LegendreSeries> {
    check_resolution(k_max, nodes)?;
    let rule = CompositeRule::with_nodes(-1.0, 1.0, nodes)?;
    let mut coefficients = vec![0.0; k_max + 1];
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let wf = w * profile(t);
        if !wf.is_finite() {
            return Err(KreinError::Numerical("profile returned a non-finite value".into()));
        }
        for (c, p) in coefficients.iter_mut().zip(legendre_all(k_max, t)) {
            *c += wf * p;
        }
    }
    for (k, c) in coefficients.iter_mut().enumerate() {
        *c *= (2 * k + 1) as f64 / 2.0;
    }
    Ok(LegendreSeries { coefficients, quadrature_nodes: rule.len() })
}

/// Wrapped Gaussian `θ ↦ exp(−λ·m(θ)²)` with `m(θ) = min(|θ| mod 2π, 2π − |θ| mod 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianCircleProfile {
    lambda: f64,
}

impl GaussianCircleProfile {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let t = theta.rem_euclid(TAU);
        let m = t.min(TAU - t);
        (-self.lambda * m * m).exp()
    }
}

pub fn gaussian_circle_profile(lambda: f64) -> Result<GaussianCircleProfile> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(KreinError::Parameter(format!("lambda must be positive, got {lambda}")));
    }
    Ok(GaussianCircleProfile { lambda })
}

/// Cosine coefficients of the wrapped Gaussian, resolved to full relative
/// precision even when they are far below `f64` epsilon times `a₀`.
///
/// Writes `∫_{-π}^{π} = ∫_ℝ − 2∫_π^∞`: the full-line part is
/// `√(π/λ)·exp(−k²/4λ)` exactly, and the part beyond `π` equals
/// `(−1)^k e^{−λπ²} J_k` with
/// `J_k = ∫_0^∞ exp(−2λπs − λs²) cos(ks) ds`, integrated by composite
/// Gauss–Legendre on a range where the integrand has decayed below `e^{−60}`.
pub fn gaussian_circle_coeffs(lambda: f64, k_max: usize, nodes: usize) -> Result<CosineSeries> {
    gaussian_circle_profile(lambda)?;
    check_resolution(k_max, nodes)?;
    let s_max = -PI + (PI * PI + 60.0 / lambda).sqrt();
    // at most one wavelength of cos(k_max s) per 20-point panel
    let panels = (nodes.div_ceil(20)).max((k_max as f64 * s_max / TAU).ceil() as usize + 1);
    let rule = CompositeRule::new(0.0, s_max, panels, 20)?;
    let envelope: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| w * (-2.0 * lambda * PI * s - lambda * s * s).exp())
        .collect();
    let boundary = (-lambda * PI * PI).exp();
    let full_line = (PI / lambda).sqrt();
    let coefficients = (0..=k_max)
        .map(|k| {
            let kf = k as f64;
            let j: f64 = rule.nodes.iter().zip(&envelope).map(|(&s, &e)| e * (kf * s).cos()).sum();
            let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
            let integral = full_line * (-kf * kf / (4.0 * lambda)).exp() - 2.0 * parity * boundary * j;
            if k == 0 {
                integral / TAU
            } else {
                integral / PI
            }
        })
        .collect();
    Ok(CosineSeries { coefficients, quadrature_nodes: rule.len() })
}

/// Coefficients `a[k][l]` of `cos(kθ₁)cos(lθ₂)` for a profile on the 2-torus
/// that is even in each coordinate.
pub fn torus2_cosine_coeffs(
    profile: impl Fn(f64, f64) -> f64,
    k_max: usize,
    nodes: usize,
) -> Result<Vec<Vec<f64>>> {
    check_resolution(k_max, nodes)?;
    let rule = CompositeRule::with_nodes(-PI, PI, nodes)?;
    let n = rule.len();
    let basis: Vec<Vec<f64>> = (0..=k_max)
        .map(|k| {
            let norm = if k == 0 { 1.0 / TAU } else { 1.0 / PI };
            rule.nodes.iter().zip(&rule.weights).map(|(&x, &w)| norm * w * (k as f64 * x).cos()).collect()
        })
        .collect();
    // partial[k][j] = Σ_i basis[k][i] f(x_i, x_j)
    let mut partial = vec![vec![0.0; n]; k_max + 1];
    for (i, &xi) in rule.nodes.iter().enumerate() {
        for (j, &xj) in rule.nodes.iter().enumerate() {
            let f = profile(xi, xj);
            for (row, b) in partial.iter_mut().zip(&basis) {
                row[j] += b[i] * f;
            }
        }
    }
    Ok((0..=k_max)
        .map(|k| (0..=k_max).map(|l| (0..n).map(|j| partial[k][j] * basis[l][j]).sum()).collect())
        .collect())
}

/// Number of evaluation points for reconstruction errors.
pub const RECONSTRUCTION_GRID: usize = 1000;

/// Periodic grid `θ_i = −π + 2πi/1000`.
pub fn circle_grid() -> Vec<f64> {
    (0..RECONSTRUCTION_GRID).map(|i| -PI + TAU * i as f64 / RECONSTRUCTION_GRID as f64).collect()
}

/// Closed grid `t_i = −1 + 2i/999`.
pub fn interval_grid() -> Vec<f64> {
    let n = RECONSTRUCTION_GRID;
    (0..n).map(|i| (-1.0 + 2.0 * i as f64 / (n - 1) as f64).clamp(-1.0, 1.0)).collect()
}

/// `max_i |series(x_i) − profile(x_i)|` over `grid`.
pub fn reconstruction_error<S: Series>(
    series: &S,
    profile: impl Fn(f64) -> f64,
    grid: &[f64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &x in grid {
        worst = worst.max((series.eval(x)? - profile(x)).abs());
    }
    Ok(worst)
}

/// JSON report emitted by the `diagnose` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub profile: String,
    #[serde(rename = "K_max")]
    pub k_max: usize,
    pub nodes: usize,
    pub coefficients: Vec<f64>,
    pub min_coefficient: f64,
    pub min_index: usize,
    pub abs_sum: f64,
    pub k0: usize,
    pub tail_fraction: f64,
    pub reconstruction_max_error: f64,
    /// True when every retained coefficient is nonnegative.
    pub pd_certificate: bool,
}

impl DiagnosticReport {
    pub fn build<S: Series>(
        profile: String,
        series: &S,
        nodes: usize,
        k0: usize,
        reconstruction_max_error: f64,
    ) -> Result<Self> {
        let (min_coefficient, min_index) = series.min_coefficient();
        let (abs_sum, tail_fraction) = wiener_tail(series, k0)?;
        Ok(Self {
            profile,
            k_max: series.k_max(),
            nodes,
            coefficients: series.coefficients().to_vec(),
            min_coefficient,
            min_index,
            abs_sum,
            k0,
            tail_fraction,
            reconstruction_max_error,
            pd_certificate: min_coefficient >= 0.0,
        })
    }
}

/// Diagnostic for the wrapped Gaussian on the circle.
pub fn diagnose_gaussian_circle(lambda: f64, k_max: usize, nodes: usize, k0: usize) -> Result<DiagnosticReport> {
    let profile = gaussian_circle_profile(lambda)?;
    let series = gaussian_circle_coeffs(lambda, k_max, nodes)?;
    let err = reconstruction_error(&series, |t| profile.eval(t), &circle_grid())?;
    DiagnosticReport::build(format!("gaussian-circle(lambda={lambda})"), &series, nodes, k0, err)
}

/// Diagnostic for `t ↦ tanh(a·t + b)` on S².
pub fn diagnose_tanh_sphere(a: f64, b: f64, k_max: usize, nodes: usize, k0: usize) -> Result<DiagnosticReport> {
    if !a.is_finite() || !b.is_finite() {
        return Err(KreinError::Parameter("tanh parameters must be finite".into()));
    }
    let f = move |t: f64| (a * t + b).tanh();
    let series = legendre_coeffs(f, k_max, nodes)?;
    let err = reconstruction_error(&series, f, &interval_grid())?;
    DiagnosticReport::build(format!("tanh-sphere(a={a},b={b})"), &series, nodes, k0, err)
}

/// Diagnostic for a user-supplied cosine series (reconstruction is exact).
pub fn diagnose_series(coefficients: Vec<f64>, k0: usize) -> Result<DiagnosticReport> {
    let series = CosineSeries::new(coefficients)?;
    DiagnosticReport::build("series".into(), &series, 0, k0, 0.0)
}
