//! Dense symmetric linear algebra for Gram matrices.
//!
//! A cyclic Jacobi eigensolver is the base of everything here: inertia
//! (signature) counting, the spectral split `K = K₊ − K₋` into two positive
//! semidefinite parts, and shifted solves `(K + sI)α = y` that must refuse
//! shifts colliding with the spectrum.

use nalgebra::{DMatrix, DVector};

use crate::error::{KreinError, Result};

/// Maximum number of Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius norm, relative to `‖K‖_F`, at which Jacobi stops.
pub const JACOBI_TOL: f64 = 1e-13;

/// Sweep threshold as a fraction of the off-diagonal norm divided by `n`.
pub const JACOBI_THRESHOLD: f64 = 0.3;

/// Relative symmetry tolerance accepted by [`sym_eigh`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Eigendecomposition `K = U·diag(d)·Uᵀ` with eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct SymmetricSpectrum {
    pub eigenvalues: DVector<f64>,
    /// Orthonormal eigenvectors, one per column.
    pub eigenvectors: DMatrix<f64>,
}

impl SymmetricSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U·diag(f(d))·Uᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &d) in self.eigenvalues.iter().enumerate() {
            let fd = f(d);
            scaled.column_mut(j).scale_mut(fd);
        }
        let mut out = &scaled * u.transpose();
        symmetrize(&mut out);
        out
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.reconstruct_with(|d| d)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Signature `(N₊, N₋, M)` of a symmetric matrix at tolerance `tol`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
    pub tol: f64,
}

impl Inertia {
    pub fn total(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.n_plus, self.n_minus, self.n_zero)
    }
}

/// `K = k_plus − k_minus` with both parts positive semidefinite.
#[derive(Debug, Clone)]
pub struct GramPdDecomposition {
    pub k_plus: DMatrix<f64>,
    pub k_minus: DMatrix<f64>,
    pub inertia: Inertia,
}

impl GramPdDecomposition {
    /// `‖K − (K₊ − K₋)‖_F / ‖K‖_F`, or the absolute error when `K = 0`.
    pub fn reconstruction_error(&self, k: &DMatrix<f64>) -> f64 {
        let diff = (k - (&self.k_plus - &self.k_minus)).norm();
        let scale = k.norm();
        if scale > 0.0 {
            diff / scale
        } else {
            diff
        }
    }
}

/// Scale-relative zero threshold `1e-10·max(1, ‖K‖_F)`.
pub fn default_tol(k: &DMatrix<f64>) -> f64 {
    1e-10 * k.norm().max(1.0)
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

fn check_symmetric(k: &DMatrix<f64>) -> Result<()> {
    if k.nrows() != k.ncols() {
        return Err(KreinError::NotSymmetric(format!(
            "matrix is {}x{}, not square",
            k.nrows(),
            k.ncols()
        )));
    }
    if k.iter().any(|v| !v.is_finite()) {
        return Err(KreinError::Numerical("matrix has non-finite entries".into()));
    }
    let n = k.nrows();
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            asym = asym.max((k[(i, j)] - k[(j, i)]).abs());
        }
    }
    let bound = SYMMETRY_TOL * k.norm();
    if asym > bound {
        return Err(KreinError::NotSymmetric(format!(
            "max |K_ij - K_ji| = {asym:e} exceeds {bound:e}"
        )));
    }
    Ok(())
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for (j, col) in a.chunks_exact(n).enumerate() {
        for (i, x) in col.iter().enumerate() {
            if i != j {
                s += x * x;
            }
        }
    }
    s.sqrt()
}

struct Rotation {
    p: usize,
    q: usize,
    s: f64,
    tau: f64,
    t: f64,
    apq: f64,
    app: f64,
    aqq: f64,
}

/// Round-robin pairing: `n − 1` rounds (`n` when `n` is odd) of disjoint
/// pairs `(p, q)`, `p < q`, together covering every pair exactly once.
fn round_robin(n: usize) -> Vec<Vec<(usize, usize)>> {
    let m = n + n % 2;
    let mut players: Vec<usize> = (0..m).collect();
    let mut rounds = Vec::with_capacity(m - 1);
    for _ in 0..m.saturating_sub(1) {
        let mut round = Vec::with_capacity(m / 2);
        for i in 0..m / 2 {
            let (x, y) = (players[i], players[m - 1 - i]);
            if x < n && y < n {
                round.push((x.min(y), x.max(y)));
            }
        }
        round.sort_unstable();
        rounds.push(round);
        // keep the first player fixed, rotate the rest
        players[1..].rotate_right(1);
    }
    rounds
}

/// Applies the rotation `(p, q)` to columns `p < q` of a column-major
/// `n×n` buffer.
fn rotate_columns(m: &mut [f64], n: usize, p: usize, q: usize, s: f64, tau: f64) {
    let (left, right) = m.split_at_mut(q * n);
    let cp = &mut left[p * n..(p + 1) * n];
    let cq = &mut right[..n];
    for (xp, xq) in cp.iter_mut().zip(cq.iter_mut()) {
        let (ap, aq) = (*xp, *xq);
        *xp = ap - s * (aq + ap * tau);
        *xq = aq + s * (ap - aq * tau);
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Each sweep visits every pair `(p, q)` once, in a fixed round-robin
/// order whose rounds consist of disjoint pairs; the rotations of a round
/// commute and are applied together. Every sweep skips elements below
/// [`JACOBI_THRESHOLD`]`·off/n`, where `off` is the off-diagonal Frobenius
/// norm at the start of the sweep; from the fifth sweep on, elements that
/// are negligible against both diagonal entries they couple are zeroed.
pub fn sym_eigh(k: &DMatrix<f64>) -> Result<SymmetricSpectrum> {
    let (eigenvalues, eigenvectors) = jacobi(k, true)?;
    let eigenvectors = eigenvectors.expect("eigenvectors were requested");
    Ok(SymmetricSpectrum { eigenvalues, eigenvectors })
}

/// Eigenvalues only, in descending order; the same iteration as
/// [`sym_eigh`] without accumulating the rotations.
pub fn sym_eigvals(k: &DMatrix<f64>) -> Result<DVector<f64>> {
    Ok(jacobi(k, false)?.0)
}

fn jacobi(k: &DMatrix<f64>, vectors: bool) -> Result<(DVector<f64>, Option<DMatrix<f64>>)> {
    let n = k.nrows();
    if n == 0 {
        return Err(KreinError::Empty("eigendecomposition of a 0x0 matrix".into()));
    }
    check_symmetric(k)?;

    let mut sym = k.clone();
    symmetrize(&mut sym);
    let fro = sym.norm();
    let mut a: Vec<f64> = sym.as_slice().to_vec();
    let mut v: Option<Vec<f64>> = vectors.then(|| DMatrix::<f64>::identity(n, n).as_slice().to_vec());
    let schedule = round_robin(n);
    let mut rotations: Vec<Rotation> = Vec::with_capacity(n / 2);

    let mut converged = fro == 0.0 || n == 1;
    let mut sweep = 0;
    while !converged {
        let off = off_diagonal_norm(&a, n);
        if off <= JACOBI_TOL * fro {
            converged = true;
            break;
        }
        if sweep == MAX_SWEEPS {
            break;
        }
        // some |a_pq| always exceeds off/n, so every sweep makes progress
        let thresh = JACOBI_THRESHOLD * off / n as f64;
        for round in &schedule {
            rotations.clear();
            for &(p, q) in round {
                let apq = a[q * n + p];
                let g = 100.0 * apq.abs();
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[q * n + p] = 0.0;
                    a[p * n + q] = 0.0;
                    continue;
                }
                if apq.abs() <= thresh || apq == 0.0 {
                    continue;
                }
                let h = aqq - app;
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotations.push(Rotation { p, q, s, tau: s / (1.0 + c), t, apq, app, aqq });
            }
            if rotations.is_empty() {
                continue;
            }
            // A ← JᵀAJ: the pairs are disjoint, so columns then rows
            for r in &rotations {
                rotate_columns(&mut a, n, r.p, r.q, r.s, r.tau);
                if let Some(v) = v.as_mut() {
                    rotate_columns(v, n, r.p, r.q, r.s, r.tau);
                }
            }
            for col in a.chunks_exact_mut(n) {
                for r in &rotations {
                    let (x, y) = (col[r.p], col[r.q]);
                    col[r.p] = x - r.s * (y + x * r.tau);
                    col[r.q] = y + r.s * (x - y * r.tau);
                }
            }
            for r in &rotations {
                a[r.p * n + r.p] = r.app - r.t * r.apq;
                a[r.q * n + r.q] = r.aqq + r.t * r.apq;
                a[r.q * n + r.p] = 0.0;
                a[r.p * n + r.q] = 0.0;
            }
        }
        sweep += 1;
    }
    if !converged {
        return Err(KreinError::NoConvergence(format!(
            "Jacobi did not converge in {MAX_SWEEPS} sweeps (n = {n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| a[i * n + i]));
    let eigenvectors = v.map(|v| DMatrix::from_fn(n, n, |r, c| v[order[c] * n + r]));
    Ok((eigenvalues, eigenvectors))
}

/// Counts eigenvalues above `tol`, below `-tol`, and inside `[-tol, tol]`.
pub fn inertia(spectrum: &SymmetricSpectrum, tol: f64) -> Inertia {
    inertia_of(&spectrum.eigenvalues, tol)
}

pub fn inertia_of(eigenvalues: &DVector<f64>, tol: f64) -> Inertia {
    let tol = tol.max(0.0);
    let mut out = Inertia { n_plus: 0, n_minus: 0, n_zero: 0, tol };
    for &d in eigenvalues.iter() {
        if d > tol {
            out.n_plus += 1;
        } else if d < -tol {
            out.n_minus += 1;
        } else {
            out.n_zero += 1;
        }
    }
    out
}

/// Spectral positive decomposition `K₊ = U·max(D, 0)·Uᵀ`,
/// `K₋ = U·max(−D, 0)·Uᵀ`, with eigenvalues inside `[-tol, tol]` dropped
/// from both parts. `tol = None` uses [`default_tol`].
pub fn finite_pd_decompose(k: &DMatrix<f64>, tol: Option<f64>) -> Result<GramPdDecomposition> {
    let spectrum = sym_eigh(k)?;
    let tol = tol.unwrap_or_else(|| default_tol(k));
    Ok(pd_decompose_spectrum(&spectrum, tol))
}

pub fn pd_decompose_spectrum(spectrum: &SymmetricSpectrum, tol: f64) -> GramPdDecomposition {
    let k_plus = spectrum.reconstruct_with(|d| if d > tol { d } else { 0.0 });
    let k_minus = spectrum.reconstruct_with(|d| if d < -tol { -d } else { 0.0 });
    GramPdDecomposition { k_plus, k_minus, inertia: inertia(spectrum, tol) }
}

/// Smallest `|λᵢ + shift|` over the spectrum, with the eigenvalue attaining it.
fn nearest_collision(eigenvalues: &DVector<f64>, shift: f64) -> (f64, f64) {
    eigenvalues
        .iter()
        .map(|&d| ((d + shift).abs(), d))
        .fold((f64::INFINITY, f64::NAN), |best, cur| if cur.0 < best.0 { cur } else { best })
}

/// Rejects shifts with `min |λᵢ + shift| ≤ 1e-10·max(1, ‖K‖_F)`.
pub fn check_shift(eigenvalues: &DVector<f64>, k_norm: f64, shift: f64) -> Result<()> {
    let (gap, eigenvalue) = nearest_collision(eigenvalues, shift);
    if gap <= 1e-10 * k_norm.max(1.0) {
        return Err(KreinError::SingularShift { shift, eigenvalue, gap });
    }
    Ok(())
}

/// `α = U·diag(1/(d + shift))·Uᵀ·y`.
pub fn spectral_solve(spectrum: &SymmetricSpectrum, shift: f64, y: &DVector<f64>) -> DVector<f64> {
    let u = &spectrum.eigenvectors;
    let mut coeffs = u.transpose() * y;
    for (c, &d) in coeffs.iter_mut().zip(spectrum.eigenvalues.iter()) {
        *c /= d + shift;
    }
    u * coeffs
}

/// Solves `(K + shift·I)α = y`.
///
/// The spectrum is checked for a collision with `-shift` first; the solve
/// itself is a pivoted LU factorization followed by two rounds of
/// iterative refinement.
pub fn solve_shifted(k: &DMatrix<f64>, shift: f64, y: &DVector<f64>) -> Result<DVector<f64>> {
    solve_shifted_with(k, &sym_eigvals(k)?, shift, y)
}

/// [`solve_shifted`] with precomputed eigenvalues of `k`.
pub fn solve_shifted_with(
    k: &DMatrix<f64>,
    eigenvalues: &DVector<f64>,
    shift: f64,
    y: &DVector<f64>,
) -> Result<DVector<f64>> {
    let n = k.nrows();
    if y.len() != n {
        return Err(KreinError::Dimension { expected: n, got: y.len() });
    }
    if !shift.is_finite() || y.iter().any(|v| !v.is_finite()) {
        return Err(KreinError::Parameter("shift and right-hand side must be finite".into()));
    }
    check_shift(eigenvalues, k.norm(), shift)?;

    let mut shifted = k.clone();
    for i in 0..n {
        shifted[(i, i)] += shift;
    }
    let lu = shifted.clone().lu();
    let mut alpha = lu
        .solve(y)
        .ok_or_else(|| KreinError::Numerical("LU factorization is singular".into()))?;
    for _ in 0..2 {
        let r = y - &shifted * &alpha;
        if let Some(delta) = lu.solve(&r) {
            alpha += delta;
        }
    }

    let residual = (&shifted * &alpha - y).amax();
    let bound = 1e-8 * y.amax().max(1.0);
    if !(residual <= bound) {
        return Err(KreinError::Numerical(format!(
            "shifted solve residual {residual:e} exceeds {bound:e}; system is too ill-conditioned"
        )));
    }
    Ok(alpha)
}
