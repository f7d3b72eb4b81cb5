use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::smo::{self, SvmDual, KKT_TOL, MAX_ITER};
use super::{label_of, support_coords, support_points, LabeledDataset, Predictor};
use crate::error::{KreinError, Result};
use crate::geometry::Point;
use crate::kernels::KernelExpr;
use crate::linalg::{default_tol, inertia, inertia_of, sym_eigh, sym_eigvals, Inertia, SymmetricSpectrum};

/// Spectral sign flip of a Gram matrix: `K̃ = U·S·D·Uᵀ` with
/// `S = diag(sign(d))` and `sign(d) = +1` for `d ≥ −tol`.
#[derive(Debug, Clone)]
pub struct SpectralFlip {
    pub spectrum: SymmetricSpectrum,
    pub signs: Vec<f64>,
    pub tol: f64,
    /// `K̃`; the input Gram itself when nothing is flipped.
    pub flipped: DMatrix<f64>,
}

impl SpectralFlip {
    pub fn n_flipped(&self) -> usize {
        self.signs.iter().filter(|s| **s < 0.0).count()
    }

    /// `U·S·Uᵀ·v`, or `v` unchanged when no eigenvalue was flipped.
    pub fn unflip(&self, v: &DVector<f64>) -> DVector<f64> {
        if self.n_flipped() == 0 {
            return v.clone();
        }
        let u = &self.spectrum.eigenvectors;
        let mut coeffs = u.transpose() * v;
        for (c, s) in coeffs.iter_mut().zip(&self.signs) {
            *c *= s;
        }
        u * coeffs
    }
}

/// Builds `K̃ = U|D|Uᵀ` from the spectrum of `k`.
pub fn flipped_gram(k: &DMatrix<f64>, spectrum: SymmetricSpectrum, tol: f64) -> SpectralFlip {
    let signs: Vec<f64> = spectrum.eigenvalues.iter().map(|&d| if d < -tol { -1.0 } else { 1.0 }).collect();
    let flipped = if signs.iter().all(|s| *s > 0.0) {
        k.clone()
    } else {
        spectrum.reconstruct_with(|d| if d < -tol { -d } else { d })
    };
    SpectralFlip { spectrum, signs, tol, flipped }
}

/// Krein SVM: `f(x) = Σ αᵢ k(xᵢ, x) + bias`.
#[derive(Debug, Clone)]
pub struct KsvmModel {
    pub kernel: KernelExpr,
    pub support: Vec<Point>,
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub box_c: f64,
    /// Dual variables of the soft-margin problem on the flipped Gram.
    pub beta: Vec<f64>,
    pub gram_inertia: Inertia,
    /// Number of strictly positive dual variables.
    pub n_support: usize,
}

pub fn ksvm_fit(kernel: &KernelExpr, data: &LabeledDataset, box_c: f64) -> Result<KsvmModel> {
    check_box(box_c)?;
    ksvm_fit_with_bounds(kernel, data, &vec![box_c; data.len()])
}

/// Krein SVM with a separate box bound per training point. The model's
/// `box_c` is the largest bound.
pub fn ksvm_fit_with_bounds(kernel: &KernelExpr, data: &LabeledDataset, bounds: &[f64]) -> Result<KsvmModel> {
    ksvm_fit_with_tolerance(kernel, data, bounds, KKT_TOL)
}

/// [`ksvm_fit_with_bounds`] with an explicit KKT stopping tolerance.
pub fn ksvm_fit_with_tolerance(
    kernel: &KernelExpr,
    data: &LabeledDataset,
    bounds: &[f64],
    kkt_tol: f64,
) -> Result<KsvmModel> {
    if !(kkt_tol > 0.0) {
        return Err(KreinError::Parameter(format!("KKT tolerance must be positive, got {kkt_tol}")));
    }
    data.check_labels()?;
    let k = kernel.gram(&data.points)?;
    let spectrum = sym_eigh(&k)?;
    let tol = default_tol(&k);
    let gram_inertia = inertia(&spectrum, tol);
    let flip = flipped_gram(&k, spectrum, tol);
    let dual = smo::solve(&flip.flipped, &data.targets, bounds, kkt_tol, MAX_ITER)?;
    let alpha = flip.unflip(&signed(&dual, &data.targets));
    Ok(assemble(kernel, data, bounds, dual, alpha, gram_inertia))
}

/// Classical soft-margin SVM on the Gram matrix as is, with the same solver.
/// On an indefinite Gram this is the plain SMO iteration without any flip.
pub fn svm_fit_unflipped(kernel: &KernelExpr, data: &LabeledDataset, box_c: f64) -> Result<KsvmModel> {
    check_box(box_c)?;
    data.check_labels()?;
    let bounds = vec![box_c; data.len()];
    let k = kernel.gram(&data.points)?;
    let gram_inertia = inertia_of(&sym_eigvals(&k)?, default_tol(&k));
    let dual = smo::solve(&k, &data.targets, &bounds, KKT_TOL, MAX_ITER)?;
    let alpha = signed(&dual, &data.targets);
    Ok(assemble(kernel, data, &bounds, dual, alpha, gram_inertia))
}

fn check_box(box_c: f64) -> Result<()> {
    if !(box_c > 0.0) || !box_c.is_finite() {
        return Err(KreinError::Parameter(format!("box must be positive and finite, got {box_c}")));
    }
    Ok(())
}

fn signed(dual: &SvmDual, y: &[f64]) -> DVector<f64> {
    DVector::from_iterator(y.len(), dual.beta.iter().zip(y).map(|(b, y)| b * y))
}

fn assemble(
    kernel: &KernelExpr,
    data: &LabeledDataset,
    bounds: &[f64],
    dual: SvmDual,
    alpha: DVector<f64>,
    gram_inertia: Inertia,
) -> KsvmModel {
    KsvmModel {
        kernel: kernel.clone(),
        support: data.points.clone(),
        alpha: alpha.iter().copied().collect(),
        bias: dual.bias,
        box_c: bounds.iter().copied().fold(0.0, f64::max),
        n_support: dual.beta.iter().filter(|b| **b > 0.0).count(),
        beta: dual.beta,
        gram_inertia,
    }
}

/// `(Σ αᵢ k(xᵢ, x) + bias, sign)` with `sign(0) = +1`.
pub fn ksvm_predict(model: &KsvmModel, x: &Point) -> Result<(f64, i8)> {
    let mut score = model.bias;
    for (s, a) in model.support.iter().zip(&model.alpha) {
        score += a * model.kernel.eval(s, x)?;
    }
    Ok((score, label_of(score)))
}

impl Predictor for KsvmModel {
    fn score(&self, x: &Point) -> Result<f64> {
        Ok(ksvm_predict(self, x)?.0)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KsvmDoc {
    kind: String,
    kernel: KernelExpr,
    support: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    bias: f64,
    #[serde(rename = "box")]
    box_c: f64,
    beta: Vec<f64>,
    gram_inertia: Inertia,
    n_support: usize,
}

impl KsvmModel {
    pub fn to_json(&self) -> Result<String> {
        let doc = KsvmDoc {
            kind: "ksvm".into(),
            kernel: self.kernel.clone(),
            support: support_coords(&self.support),
            alpha: self.alpha.clone(),
            bias: self.bias,
            box_c: self.box_c,
            beta: self.beta.clone(),
            gram_inertia: self.gram_inertia,
            n_support: self.n_support,
        };
        Ok(serde_json::to_string_pretty(&serde_json::to_value(doc)?)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: KsvmDoc = serde_json::from_str(s).map_err(|e| KreinError::Parse(format!("model JSON: {e}")))?;
        if doc.kind != "ksvm" {
            return Err(KreinError::Parse(format!("expected a ksvm model, got {:?}", doc.kind)));
        }
        let support = support_points(doc.kernel.space(), &doc.support)?;
        if support.len() != doc.alpha.len() || support.len() != doc.beta.len() {
            return Err(KreinError::Dimension { expected: support.len(), got: doc.alpha.len() });
        }
        Ok(Self {
            kernel: doc.kernel,
            support,
            alpha: doc.alpha,
            bias: doc.bias,
            box_c: doc.box_c,
            beta: doc.beta,
            gram_inertia: doc.gram_inertia,
            n_support: doc.n_support,
        })
    }
}
