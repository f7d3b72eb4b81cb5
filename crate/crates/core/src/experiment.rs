//! Hyperbolic-plane classification experiments and the file-level commands
//! behind the `krein` binary.
//!
//! An experiment samples labeled points on ℍ² (one Riemannian Gaussian
//! cloud per configured class, labeled by geodesic boundaries), fits a
//! Krein learner and scores a polar grid over the Poincaré disc.

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{KreinError, Result};
use crate::geometry::{
    hyperboloid_to_poincare, majority_label, poincare_to_hyperboloid, riemannian_gaussian_sample, GeodesicBoundary,
    HyperboloidPoint, Point, PoincarePoint, Space,
};
use crate::harmonic::{
    default_nodes, diagnose_gaussian_circle, diagnose_series, diagnose_tanh_sphere, DiagnosticReport,
};
use crate::io::{dataset_csv, grid_csv, read_matrix_csv, write_json, write_matrix_csv};
use crate::kernels::KernelExpr;
use crate::learners::{
    accuracy, krr_fit, ksvm_fit, KreinKrrModel, KsvmModel, LabeledDataset, Predictor,
};
use crate::linalg::{default_tol, pd_decompose_spectrum, sym_eigh, sym_eigvals, Inertia};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassConfig {
    /// Center in Poincaré-disc coordinates.
    pub center: [f64; 2],
    pub sigma: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    pub normal: [f64; 3],
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum LearnerConfig {
    Krr {
        c: f64,
    },
    Ksvm {
        #[serde(rename = "box")]
        box_c: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub resolution: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub space: String,
    pub classes: Vec<ClassConfig>,
    pub boundaries: Vec<BoundaryConfig>,
    pub kernel: KernelExpr,
    pub learner: LearnerConfig,
    pub seed: u64,
    pub grid: GridConfig,
}

const PRESETS: &[(&str, &str)] = &[
    ("default", include_str!("../presets/default.json")),
    ("panel-200", include_str!("../presets/panel-200.json")),
    ("panel-500", include_str!("../presets/panel-500.json")),
    ("euclidean-control", include_str!("../presets/euclidean-control.json")),
];

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| KreinError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| KreinError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn preset_names() -> Vec<&'static str> {
        PRESETS.iter().map(|(n, _)| *n).collect()
    }

    pub fn preset(name: &str) -> Result<Self> {
        let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
            KreinError::Config(format!(
                "unknown preset {name:?}; available: {}",
                Self::preset_names().join(", ")
            ))
        })?;
        Self::from_json(text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(KreinError::Config(m));
        if self.version != CONFIG_VERSION {
            return bad(format!("unsupported config version {}, expected {CONFIG_VERSION}", self.version));
        }
        if self.space != "hyperbolic-2" {
            return bad(format!("space must be \"hyperbolic-2\", got {:?}", self.space));
        }
        if self.classes.is_empty() {
            return bad("at least one class is required".into());
        }
        for (i, c) in self.classes.iter().enumerate() {
            if c.count == 0 {
                return bad(format!("class {i}: count must be at least 1"));
            }
            if !(c.sigma > 0.0) || !c.sigma.is_finite() {
                return bad(format!("class {i}: sigma must be positive, got {}", c.sigma));
            }
            PoincarePoint::new(c.center.to_vec()).map_err(|e| KreinError::Config(format!("class {i}: {e}")))?;
        }
        if self.boundaries.is_empty() {
            return bad("at least one boundary is required".into());
        }
        self.geodesic_boundaries()?;
        match self.learner {
            LearnerConfig::Krr { c } if c == 0.0 || !c.is_finite() => {
                return bad(format!("krr c must be finite and nonzero, got {c}"))
            }
            LearnerConfig::Ksvm { box_c } if !(box_c > 0.0) || !box_c.is_finite() => {
                return bad(format!("ksvm box must be positive, got {box_c}"))
            }
            _ => {}
        }
        if self.grid.resolution == 0 {
            return bad("grid resolution must be at least 1".into());
        }
        if !(self.grid.radius > 0.0 && self.grid.radius < 1.0) {
            return bad(format!("grid radius must lie in (0, 1), got {}", self.grid.radius));
        }
        match self.kernel.space() {
            Space::Hyperbolic(2) | Space::Euclidean(2) => Ok(()),
            other => bad(format!("kernel space must be hyperbolic-2 or euclidean-2, got {other}")),
        }
    }

    pub fn geodesic_boundaries(&self) -> Result<Vec<GeodesicBoundary>> {
        self.boundaries
            .iter()
            .enumerate()
            .map(|(i, b)| {
                GeodesicBoundary::new(b.normal.to_vec(), b.offset)
                    .map_err(|e| KreinError::Config(format!("boundary {i}: {e}")))
            })
            .collect()
    }

    pub fn total_count(&self) -> usize {
        self.classes.iter().map(|c| c.count).sum()
    }
}

/// Sampled points in both models of ℍ², with their labels.
#[derive(Debug, Clone)]
pub struct GeneratedData {
    pub hyperboloid: Vec<HyperboloidPoint>,
    pub poincare: Vec<[f64; 2]>,
    pub labels: Vec<i8>,
}

impl GeneratedData {
    /// Points as seen by a kernel on `space`: hyperboloid points for
    /// `hyperbolic-2`, raw Poincaré coordinates for `euclidean-2`.
    pub fn labeled(&self, space: Space) -> Result<LabeledDataset> {
        let points = embed(space, &self.hyperboloid, &self.poincare)?;
        LabeledDataset::new(points, self.labels.iter().map(|l| *l as f64).collect())
    }

    pub fn label_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|l| **l > 0).count();
        (pos, self.labels.len() - pos)
    }

    pub fn to_csv(&self) -> String {
        dataset_csv(&self.poincare, &self.labels)
    }
}

fn embed(space: Space, hyp: &[HyperboloidPoint], disc: &[[f64; 2]]) -> Result<Vec<Point>> {
    match space {
        Space::Hyperbolic(2) => Ok(hyp.iter().cloned().map(Point::from).collect()),
        Space::Euclidean(2) => Ok(disc.iter().map(|p| Point::Euclidean(p.to_vec())).collect()),
        other => Err(KreinError::Config(format!("experiments cannot run a kernel on {other}"))),
    }
}

fn disc_coords(x: &HyperboloidPoint) -> [f64; 2] {
    let p = hyperboloid_to_poincare(x);
    [p.coords()[0], p.coords()[1]]
}

/// Samples every class (class `i` uses seed `seed + i`) and labels the
/// points by majority vote over the configured boundaries.
pub fn gen_dataset(cfg: &ExperimentConfig) -> Result<GeneratedData> {
    cfg.validate()?;
    let boundaries = cfg.geodesic_boundaries()?;
    let mut out = GeneratedData { hyperboloid: Vec::new(), poincare: Vec::new(), labels: Vec::new() };
    for (i, class) in cfg.classes.iter().enumerate() {
        let center = poincare_to_hyperboloid(&PoincarePoint::new(class.center.to_vec())?);
        let seed = cfg.seed.wrapping_add(i as u64);
        for x in riemannian_gaussian_sample(&center, class.sigma, class.count, seed)? {
            out.labels.push(majority_label(&x, &boundaries)?);
            out.poincare.push(disc_coords(&x));
            out.hyperboloid.push(x);
        }
    }
    Ok(out)
}

/// A fitted experiment learner.
#[derive(Debug, Clone)]
pub enum TrainedModel {
    Krr(KreinKrrModel),
    Ksvm(KsvmModel),
}

impl TrainedModel {
    pub fn gram_inertia(&self) -> Inertia {
        match self {
            TrainedModel::Krr(m) => m.gram_inertia,
            TrainedModel::Ksvm(m) => m.gram_inertia,
        }
    }

    /// Training points with a nonzero coefficient.
    pub fn n_support(&self) -> usize {
        match self {
            TrainedModel::Krr(m) => m.alpha.iter().filter(|a| **a != 0.0).count(),
            TrainedModel::Ksvm(m) => m.n_support,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let s = match self {
            TrainedModel::Krr(m) => m.to_json()?,
            TrainedModel::Ksvm(m) => m.to_json()?,
        };
        Ok(s + "\n")
    }
}

impl Predictor for TrainedModel {
    fn score(&self, x: &Point) -> Result<f64> {
        match self {
            TrainedModel::Krr(m) => m.score(x),
            TrainedModel::Ksvm(m) => m.score(x),
        }
    }
}

pub fn train(cfg: &ExperimentConfig, data: &LabeledDataset) -> Result<TrainedModel> {
    Ok(match cfg.learner {
        LearnerConfig::Krr { c } => TrainedModel::Krr(krr_fit(&cfg.kernel, data, c)?),
        LearnerConfig::Ksvm { box_c } => TrainedModel::Ksvm(ksvm_fit(&cfg.kernel, data, box_c)?),
    })
}

/// Polar grid over the disc: radii `radius·(i+1)/res`, angles `2πj/res`.
pub fn polar_grid(grid: &GridConfig) -> Vec<[f64; 2]> {
    let res = grid.resolution;
    let mut out = Vec::with_capacity(res * res);
    for i in 0..res {
        let r = grid.radius * (i + 1) as f64 / res as f64;
        for j in 0..res {
            let (s, c) = (TAU * j as f64 / res as f64).sin_cos();
            out.push([r * c, r * s]);
        }
    }
    out
}

pub const DATASET_FILE: &str = "dataset.csv";
pub const GRID_FILE: &str = "grid.csv";
pub const MODEL_FILE: &str = "model.json";
pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub learner: String,
    pub n_train: usize,
    pub train_accuracy: f64,
    pub n_support: usize,
    pub gram_inertia: Inertia,
    pub seed: u64,
    pub wall_time_ms: u64,
    /// File names relative to the output directory.
    pub output_paths: Vec<String>,
}

impl RunReport {
    /// The report as written to `report.json`: everything except the wall
    /// time, so that repeated runs produce identical files.
    pub fn file_value(&self) -> Result<serde_json::Value> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("wall_time_ms");
        }
        Ok(v)
    }
}

/// Everything a run computes, before anything is written.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub data: GeneratedData,
    pub model: TrainedModel,
    pub grid: Vec<[f64; 2]>,
    pub scores: Vec<f64>,
    pub report: RunReport,
}

/// Generates the data, trains, scores the grid. No files are touched.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let start = Instant::now();
    let data = gen_dataset(cfg)?;
    let space = cfg.kernel.space();
    let train_set = data.labeled(space)?;
    let model = train(cfg, &train_set)?;
    let train_accuracy = accuracy(&model, &train_set)?;

    let grid = polar_grid(&cfg.grid);
    let hyp = grid
        .iter()
        .map(|p| Ok(poincare_to_hyperboloid(&PoincarePoint::new(p.to_vec())?)))
        .collect::<Result<Vec<HyperboloidPoint>>>()?;
    let scores =
        embed(space, &hyp, &grid)?.iter().map(|x| model.score(x)).collect::<Result<Vec<f64>>>()?;

    let report = RunReport {
        learner: match cfg.learner {
            LearnerConfig::Krr { .. } => "krr".into(),
            LearnerConfig::Ksvm { .. } => "ksvm".into(),
        },
        n_train: train_set.len(),
        train_accuracy,
        n_support: model.n_support(),
        gram_inertia: model.gram_inertia(),
        seed: cfg.seed,
        wall_time_ms: start.elapsed().as_millis() as u64,
        output_paths: [DATASET_FILE, GRID_FILE, MODEL_FILE, REPORT_FILE].iter().map(|s| s.to_string()).collect(),
    };
    Ok(RunOutcome { data, model, grid, scores, report })
}

/// Runs the experiment and writes `dataset.csv`, `grid.csv`, `model.json`
/// and `report.json` into `out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunReport> {
    let outcome = execute(cfg)?;
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join(DATASET_FILE), outcome.data.to_csv())?;
    fs::write(out_dir.join(GRID_FILE), grid_csv(&outcome.grid, &outcome.scores))?;
    fs::write(out_dir.join(MODEL_FILE), outcome.model.to_json()?)?;
    write_json(&out_dir.join(REPORT_FILE), &outcome.report.file_value()?)?;
    Ok(outcome.report)
}

/// Samples and labels the dataset and writes `dataset.csv`.
pub fn gen_to_dir(cfg: &ExperimentConfig, out_dir: &Path) -> Result<(GeneratedData, PathBuf)> {
    let data = gen_dataset(cfg)?;
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(DATASET_FILE);
    fs::write(&path, data.to_csv())?;
    Ok((data, path))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub n: usize,
    pub inertia: Inertia,
    pub reconstruction_error: f64,
    pub min_eig_plus: f64,
    pub min_eig_minus: f64,
}

/// Reads a symmetric matrix from CSV, writes `k_plus.csv`, `k_minus.csv`
/// and `decompose.json` into `out_dir`.
pub fn decompose_cmd(matrix: &Path, tol: Option<f64>, out_dir: &Path) -> Result<DecomposeReport> {
    let k = read_matrix_csv(matrix)?;
    if let Some(t) = tol {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(KreinError::Parameter(format!("tolerance must be nonnegative, got {t}")));
        }
    }
    let (report, parts) = decompose_matrix(&k, tol)?;
    fs::create_dir_all(out_dir)?;
    write_matrix_csv(&out_dir.join("k_plus.csv"), &parts.0)?;
    write_matrix_csv(&out_dir.join("k_minus.csv"), &parts.1)?;
    write_json(&out_dir.join("decompose.json"), &report)?;
    Ok(report)
}

type Parts = (DMatrix<f64>, DMatrix<f64>);

pub fn decompose_matrix(k: &DMatrix<f64>, tol: Option<f64>) -> Result<(DecomposeReport, Parts)> {
    let spectrum = sym_eigh(k)?;
    let tol = tol.unwrap_or_else(|| default_tol(k));
    let dec = pd_decompose_spectrum(&spectrum, tol);
    let report = DecomposeReport {
        n: k.nrows(),
        inertia: dec.inertia,
        reconstruction_error: dec.reconstruction_error(k),
        min_eig_plus: sym_eigvals(&dec.k_plus)?.min(),
        min_eig_minus: sym_eigvals(&dec.k_minus)?.min(),
    };
    Ok((report, (dec.k_plus, dec.k_minus)))
}

/// Profiles understood by the `diagnose` command.
#[derive(Debug, Clone, PartialEq)]
pub enum DiagnoseProfile {
    GaussianCircle { lambda: f64 },
    TanhSphere { a: f64, b: f64 },
    Series { coefficients: Vec<f64> },
}

impl DiagnoseProfile {
    pub const NAMES: [&'static str; 3] = ["gaussian-circle", "tanh-sphere", "series"];
}

/// Tail index used when none is given, clamped to the series length.
pub const DEFAULT_TAIL_INDEX: usize = 100;

pub fn diagnose_cmd(
    profile: &DiagnoseProfile,
    k_max: usize,
    nodes: Option<usize>,
    k0: Option<usize>,
) -> Result<DiagnosticReport> {
    let nodes = nodes.unwrap_or_else(|| default_nodes(k_max));
    let effective_k_max = match profile {
        DiagnoseProfile::Series { coefficients } => coefficients.len().saturating_sub(1),
        _ => k_max,
    };
    let k0 = k0.unwrap_or(DEFAULT_TAIL_INDEX.min(effective_k_max));
    match profile {
        DiagnoseProfile::GaussianCircle { lambda } => diagnose_gaussian_circle(*lambda, k_max, nodes, k0),
        DiagnoseProfile::TanhSphere { a, b } => diagnose_tanh_sphere(*a, *b, k_max, nodes, k0),
        DiagnoseProfile::Series { coefficients } => diagnose_series(coefficients.clone(), k0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::preset("default").unwrap();
        cfg.classes.iter_mut().for_each(|c| c.count = 20);
        cfg.grid.resolution = 5;
        cfg.seed = seed;
        cfg
    }

    #[test]
    fn presets_parse() {
        for name in ExperimentConfig::preset_names() {
            ExperimentConfig::preset(name).unwrap();
        }
        assert!(ExperimentConfig::preset("nope").is_err());
        let d = ExperimentConfig::preset("default").unwrap();
        assert_eq!(d.total_count(), 400);
        assert_eq!(d.seed, 7);
        assert_eq!(d.learner, LearnerConfig::Ksvm { box_c: 10.0 });
    }

    #[test]
    fn config_rejects_bad_input() {
        let text = include_str!("../presets/default.json");
        let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(matches!(ExperimentConfig::from_json(&v.to_string()), Err(KreinError::Config(_))));

        let cases: Vec<(&str, serde_json::Value)> = vec![
            ("/version", serde_json::json!(2)),
            ("/space", serde_json::json!("sphere-2")),
            ("/grid/radius", serde_json::json!(1.0)),
            ("/grid/resolution", serde_json::json!(0)),
            ("/classes/0/sigma", serde_json::json!(0.0)),
            ("/classes/0/count", serde_json::json!(0)),
            ("/boundaries/0/normal", serde_json::json!([1.0, 0.0, 0.0])),
            ("/learner/box", serde_json::json!(-1.0)),
        ];
        for (ptr, val) in cases {
            let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
            *v.pointer_mut(ptr).unwrap() = val;
            let err = ExperimentConfig::from_json(&v.to_string());
            assert!(matches!(err, Err(KreinError::Config(_))), "{ptr}: {err:?}");
        }
    }

    #[test]
    fn dataset_is_deterministic_and_in_disc() {
        let a = gen_dataset(&small(3)).unwrap();
        let b = gen_dataset(&small(3)).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_ne!(a.to_csv(), gen_dataset(&small(4)).unwrap().to_csv());
        assert!(a.poincare.iter().all(|p| p[0].hypot(p[1]) < 1.0));
        assert_eq!(a.labels.len(), 40);
    }

    #[test]
    fn polar_grid_shape() {
        let g = polar_grid(&GridConfig { resolution: 7, radius: 0.9 });
        assert_eq!(g.len(), 49);
        assert!(g.iter().all(|p| p[0].hypot(p[1]) <= 0.9 + 1e-15));
    }

    #[test]
    fn small_run_report() {
        let out = execute(&small(1)).unwrap();
        assert_eq!(out.scores.len(), 25);
        assert_eq!(out.report.n_train, 40);
        assert!((0.0..=1.0).contains(&out.report.train_accuracy));
        assert!(out.report.file_value().unwrap().get("wall_time_ms").is_none());
    }

    #[test]
    fn decompose_diag() {
        let k = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -2.0]);
        let (r, (kp, km)) = decompose_matrix(&k, None).unwrap();
        assert_eq!(r.inertia.counts(), (1, 1, 0));
        assert!(r.reconstruction_error <= 1e-15);
        assert!((kp[(0, 0)] - 1.0).abs() < 1e-15 && (km[(1, 1)] - 2.0).abs() < 1e-15);
        let (r, (_, km)) = decompose_matrix(&DMatrix::identity(3, 3), None).unwrap();
        assert!(km.iter().all(|v| *v == 0.0));
        assert_eq!(r.min_eig_minus, 0.0);
    }

    #[test]
    fn diagnose_profiles() {
        let r = diagnose_cmd(&DiagnoseProfile::Series { coefficients: vec![1.0, 0.5] }, 0, None, Some(1)).unwrap();
        assert!(r.pd_certificate);
        let r = diagnose_cmd(&DiagnoseProfile::Series { coefficients: vec![1.0, 0.5, 0.25] }, 0, None, None).unwrap();
        assert_eq!(r.k0, 2);
        let r = diagnose_cmd(&DiagnoseProfile::GaussianCircle { lambda: 1.0 }, 40, None, Some(20)).unwrap();
        assert!(!r.pd_certificate);
        assert!(r.min_coefficient < 0.0);
    }
}
