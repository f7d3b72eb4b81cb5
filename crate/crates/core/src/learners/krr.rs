use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{support_coords, support_points, LabeledDataset, Predictor};
use crate::error::{KreinError, Result};
use crate::geometry::Point;
use crate::kernels::KernelExpr;
use crate::linalg::{default_tol, inertia_of, solve_shifted_with, sym_eigvals, Inertia};

/// Kernel ridge regression in a Krein space: `f = Σ αᵢ k(xᵢ, ·)`.
#[derive(Debug, Clone)]
pub struct KreinKrrModel {
    pub kernel: KernelExpr,
    pub support: Vec<Point>,
    pub alpha: Vec<f64>,
    pub c: f64,
    /// Signature of the training Gram matrix.
    pub gram_inertia: Inertia,
}

/// `α = (K + NcI)⁻¹y`. Any nonzero real `c` is accepted as long as `−Nc`
/// stays away from the Gram spectrum.
pub fn krr_fit(kernel: &KernelExpr, data: &LabeledDataset, c: f64) -> Result<KreinKrrModel> {
    if c == 0.0 || !c.is_finite() {
        return Err(KreinError::Parameter(format!("regularization c must be finite and nonzero, got {c}")));
    }
    let n = data.len();
    let k = kernel.gram(&data.points)?;
    let eigenvalues = sym_eigvals(&k)?;
    let y = DVector::from_column_slice(&data.targets);
    let alpha = solve_shifted_with(&k, &eigenvalues, n as f64 * c, &y)?;
    let model = KreinKrrModel {
        kernel: kernel.clone(),
        support: data.points.clone(),
        alpha: alpha.iter().copied().collect(),
        c,
        gram_inertia: inertia_of(&eigenvalues, default_tol(&k)),
    };
    let residual = residual_with_gram(&model, &k, &data.targets);
    let bound = 1e-8 * y.amax().max(1.0);
    if !(residual <= bound) {
        return Err(KreinError::Numerical(format!(
            "stationarity residual {residual:e} exceeds {bound:e} after fit"
        )));
    }
    Ok(model)
}

/// `Σᵢ αᵢ k(xᵢ, x)`.
pub fn krr_predict(model: &KreinKrrModel, x: &Point) -> Result<f64> {
    let mut acc = 0.0;
    for (s, a) in model.support.iter().zip(&model.alpha) {
        acc += a * model.kernel.eval(s, x)?;
    }
    Ok(acc)
}

fn residual_with_gram(model: &KreinKrrModel, k: &nalgebra::DMatrix<f64>, y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let alpha = DVector::from_column_slice(&model.alpha);
    let ka = k * &alpha;
    ka.iter()
        .zip(y)
        .zip(alpha.iter())
        .map(|((kai, yi), ai)| ((kai - yi) / n + model.c * ai).abs())
        .fold(0.0, f64::max)
}

/// `‖(1/N)(Kα − y) + cα‖_∞`, the gradient of the regularized squared loss
/// with respect to the representer coefficients (up to a factor of `K`).
pub fn stationarity_residual(model: &KreinKrrModel, data: &LabeledDataset) -> Result<f64> {
    if model.alpha.len() != data.len() {
        return Err(KreinError::Dimension { expected: model.alpha.len(), got: data.len() });
    }
    let k = model.kernel.gram(&data.points)?;
    Ok(residual_with_gram(model, &k, &data.targets))
}

impl Predictor for KreinKrrModel {
    fn score(&self, x: &Point) -> Result<f64> {
        krr_predict(self, x)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KrrDoc {
    kind: String,
    kernel: KernelExpr,
    support: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    c: f64,
    gram_inertia: Inertia,
}

impl KreinKrrModel {
    pub fn to_json(&self) -> Result<String> {
        let doc = KrrDoc {
            kind: "krr".into(),
            kernel: self.kernel.clone(),
            support: support_coords(&self.support),
            alpha: self.alpha.clone(),
            c: self.c,
            gram_inertia: self.gram_inertia,
        };
        Ok(serde_json::to_string_pretty(&serde_json::to_value(doc)?)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: KrrDoc = serde_json::from_str(s).map_err(|e| KreinError::Parse(format!("model JSON: {e}")))?;
        if doc.kind != "krr" {
            return Err(KreinError::Parse(format!("expected a krr model, got {:?}", doc.kind)));
        }
        let support = support_points(doc.kernel.space(), &doc.support)?;
        if support.len() != doc.alpha.len() {
            return Err(KreinError::Dimension { expected: support.len(), got: doc.alpha.len() });
        }
        Ok(Self { kernel: doc.kernel, support, alpha: doc.alpha, c: doc.c, gram_inertia: doc.gram_inertia })
    }
}
