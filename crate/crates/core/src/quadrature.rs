//! Gauss–Legendre quadrature and Legendre polynomial evaluation.

use std::f64::consts::PI;

use crate::error::{KreinError, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let dp = if (1.0 - x * x).abs() > 0.0 {
        nf * (x * p - p_prev) / (x * x - 1.0)
    } else {
        // P_n'(±1) = (±1)^{n+1} n(n+1)/2
        let s = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        s * nf * (nf + 1.0) / 2.0
    };
    (p, dp)
}

/// All of `P_0(x), …, P_kmax(x)`.
pub fn legendre_all(k_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(1.0);
    if k_max >= 1 {
        out.push(x);
    }
    for k in 2..=k_max {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
        out.push(next);
    }
    out
}

impl GaussLegendre {
    /// `n`-point rule; roots of `P_n` found by Newton iteration from the
    /// Chebyshev-like initial guesses `cos(π(i − 1/4)/(n + 1/2))`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(KreinError::Parameter("quadrature needs at least one node".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d.is_finite() { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    /// `∫_a^b f` with this rule mapped onto `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// Composite Gauss–Legendre rule: `panels` equal subintervals with an
/// `order`-point rule on each. Nodes and weights are stored flat.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Points per panel in composite rules built by [`CompositeRule::with_nodes`].
pub const PANEL_ORDER: usize = 20;

impl CompositeRule {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Result<Self> {
        if panels == 0 || !(b > a) {
            return Err(KreinError::Parameter(format!(
                "composite rule needs panels > 0 and a < b (got {panels}, [{a}, {b}])"
            )));
        }
        let base = GaussLegendre::new(order)?;
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            for (&x, &w) in base.nodes.iter().zip(&base.weights) {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * w);
            }
        }
        Ok(Self { nodes, weights })
    }

    /// Roughly `total` nodes split into panels of [`PANEL_ORDER`] points.
    pub fn with_nodes(a: f64, b: f64, total: usize) -> Result<Self> {
        let order = PANEL_ORDER.min(total.max(1));
        let panels = total.div_ceil(order).max(1);
        Self::new(a, b, panels, order)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        for n in 1..12 {
            let rule = GaussLegendre::new(n).unwrap();
            for deg in 0..(2 * n) {
                let got = rule.integrate(-1.0, 1.0, |x| x.powi(deg as i32));
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-14, "n={n} deg={deg}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn weights_sum_to_two_for_large_rules() {
        for n in [50, 200, 1000] {
            let rule = GaussLegendre::new(n).unwrap();
            let s: f64 = rule.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "{n}: {s}");
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn composite_rule_integrates_smooth_functions() {
        let rule = CompositeRule::with_nodes(0.0, PI, 400).unwrap();
        assert!((rule.integrate(|x| x.sin()) - 2.0).abs() < 1e-14);
        assert!(CompositeRule::new(1.0, 0.0, 3, 4).is_err());
    }

    #[test]
    fn legendre_values() {
        let p = legendre_all(3, 0.5);
        assert_eq!(p[0], 1.0);
        assert_eq!(p[1], 0.5);
        assert!((p[2] - (-0.125)).abs() < 1e-15);
        assert!((p[3] - (-0.4375)).abs() < 1e-15);
        assert!(legendre_all(40, 1.0).iter().all(|v| (v - 1.0).abs() < 1e-13));
    }
}
