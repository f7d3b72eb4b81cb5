//! Representer-form learners for (possibly indefinite) kernels.
//!
//! Both learners return `f = Σ αᵢ k(xᵢ, ·)` (plus a bias for the SVM).
//! Kernel ridge regression uses the closed form `α = (K + NcI)⁻¹y`, a
//! critical point of the regularized loss for any real `c` whose shift
//! avoids the spectrum. The Krein SVM flips the negative part of the Gram
//! spectrum, solves an ordinary soft-margin dual on `U|D|Uᵀ`, and maps the
//! dual solution back through `U·sign(D)·Uᵀ`.

mod krr;
mod ksvm;
pub mod smo;

pub use krr::{krr_fit, krr_predict, stationarity_residual, KreinKrrModel};
pub use ksvm::{
    flipped_gram, ksvm_fit, ksvm_fit_with_bounds, ksvm_fit_with_tolerance, ksvm_predict, svm_fit_unflipped, KsvmModel,
    SpectralFlip,
};

use crate::error::{KreinError, Result};
use crate::geometry::Point;

/// Training data: points with real targets or ±1 labels.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub points: Vec<Point>,
    pub targets: Vec<f64>,
}

impl LabeledDataset {
    pub fn new(points: Vec<Point>, targets: Vec<f64>) -> Result<Self> {
        if points.len() != targets.len() {
            return Err(KreinError::Dimension { expected: points.len(), got: targets.len() });
        }
        if points.is_empty() {
            return Err(KreinError::Empty("dataset has no points".into()));
        }
        if targets.iter().any(|t| !t.is_finite()) {
            return Err(KreinError::Parameter("targets must be finite".into()));
        }
        Ok(Self { points, targets })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Checks that every target is exactly ±1.
    pub fn check_labels(&self) -> Result<()> {
        if let Some(t) = self.targets.iter().find(|t| **t != 1.0 && **t != -1.0) {
            return Err(KreinError::Parameter(format!("classification labels must be +-1, got {t}")));
        }
        Ok(())
    }
}

/// `sign` with `sign(0) = +1`.
pub fn label_of(score: f64) -> i8 {
    if score >= 0.0 {
        1
    } else {
        -1
    }
}

/// Anything that scores points; the label is the sign of the score.
pub trait Predictor {
    fn score(&self, x: &Point) -> Result<f64>;

    fn predict_label(&self, x: &Point) -> Result<i8> {
        Ok(label_of(self.score(x)?))
    }
}

/// Fraction of points whose predicted label equals the target.
pub fn accuracy(model: &impl Predictor, data: &LabeledDataset) -> Result<f64> {
    if data.is_empty() {
        return Err(KreinError::Empty("accuracy of an empty dataset".into()));
    }
    let mut hits = 0usize;
    for (x, &t) in data.points.iter().zip(&data.targets) {
        if model.predict_label(x)? as f64 == t {
            hits += 1;
        }
    }
    Ok(hits as f64 / data.len() as f64)
}

fn support_coords(points: &[Point]) -> Vec<Vec<f64>> {
    points.iter().map(Point::coords).collect()
}

fn support_points(space: crate::geometry::Space, coords: &[Vec<f64>]) -> Result<Vec<Point>> {
    coords.iter().map(|c| Point::from_coords(space, c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Constant(f64);

    impl Predictor for Constant {
        fn score(&self, _: &Point) -> Result<f64> {
            Ok(self.0)
        }
    }

    fn data(labels: Vec<f64>) -> LabeledDataset {
        let pts = labels.iter().map(|_| Point::Euclidean(vec![0.0])).collect();
        LabeledDataset::new(pts, labels).unwrap()
    }

    #[test]
    fn accuracy_examples() {
        assert_eq!(accuracy(&Constant(1.0), &data(vec![1.0, 1.0, 1.0])).unwrap(), 1.0);
        assert_eq!(accuracy(&Constant(1.0), &data(vec![-1.0, -1.0])).unwrap(), 0.0);
        assert_eq!(accuracy(&Constant(0.0), &data(vec![1.0, -1.0])).unwrap(), 0.5);
        let empty = LabeledDataset { points: vec![], targets: vec![] };
        assert!(accuracy(&Constant(1.0), &empty).is_err());
    }

    #[test]
    fn coin_labels_against_constant_model() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let labels = (0..10_000).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
        let acc = accuracy(&Constant(1.0), &data(labels)).unwrap();
        assert!((acc - 0.5).abs() <= 0.02, "{acc}");
    }

    #[test]
    fn dataset_validation() {
        assert!(LabeledDataset::new(vec![Point::Euclidean(vec![0.0])], vec![]).is_err());
        assert!(LabeledDataset::new(vec![], vec![]).is_err());
        assert!(data(vec![1.0, 0.5]).check_labels().is_err());
        assert_eq!(label_of(0.0), 1);
        assert_eq!(label_of(-1e-300), -1);
    }
}
