//! Dense eigenvalue studies of flipped and preconditioned Toeplitz matrices.
//!
//! `Y T_n(f)` is symmetric for every PSF, and every circulant used here is
//! Hermitian positive definite with a real square root `S`, so each spectrum
//! is computed from the symmetric matrix `S (Y T_n(f)) S` with a symmetric
//! eigensolver.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linear::LinearMap;
use crate::operators::{bccb_eigenvalues, materialize_dense, BlurOperator, BoundaryCondition, Flipped, Psf};
use crate::preconditioners::{circulant_abs_tikhonov, circulant_sqrt, circulant_threshold, CirculantOperator};

/// Grid size of the midpoint rule used for symbol integrals.
pub const SZEGO_GRID: usize = 1024;

/// Dense `Y T_n(f)` (zero boundary conditions).
pub fn flipped_toeplitz(psf: &Psf, n: usize) -> Result<DMatrix<f64>> {
    let op = BlurOperator::new(psf.clone(), BoundaryCondition::Zero, n)?;
    let t = materialize_dense(&op)?;
    let mut yt = t.clone();
    let m = t.nrows();
    for i in 0..m {
        yt.row_mut(i).copy_from(&t.row(m - 1 - i));
    }
    debug_assert!(Flipped(op).dim() == m);
    Ok(yt)
}

/// Eigenvalues of `S M S`, symmetrized before the solve, sorted ascending.
fn sandwich_spectrum(m: DMatrix<f64>, s: Option<&CirculantOperator>) -> Vec<f64> {
    let mut a = match s {
        Some(s) => {
            let left = apply_columns(s, &m);
            apply_columns(s, &left.transpose()).transpose()
        }
        None => m,
    };
    let at = a.transpose();
    a += at;
    a *= 0.5;
    let mut eigs: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

fn apply_columns(s: &CirculantOperator, m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        let col: Vec<f64> = m.column(j).iter().copied().collect();
        out.column_mut(j).copy_from_slice(&s.apply(&col));
    }
    out
}

/// Spectrum of `C_n(g)^{-1} Y T_n(f)` for the threshold circulant with cut `eps`.
pub fn preconditioned_spectrum(psf: &Psf, n: usize, eps: f64) -> Result<Vec<f64>> {
    let yt = flipped_toeplitz(psf, n)?;
    let c = circulant_threshold(&bccb_eigenvalues(psf, n)?, eps)?;
    let s = circulant_sqrt(&c.inverse()?)?;
    Ok(sandwich_spectrum(yt, Some(&s)))
}

/// Spectrum of `C_n(|p_alpha|) Y T_n(f)` (absolute-value Tikhonov).
pub fn abs_tikhonov_spectrum(psf: &Psf, n: usize, alpha: f64) -> Result<Vec<f64>> {
    let yt = flipped_toeplitz(psf, n)?;
    let c = circulant_abs_tikhonov(&bccb_eigenvalues(psf, n)?, alpha)?;
    let s = circulant_sqrt(&c)?;
    Ok(sandwich_spectrum(yt, Some(&s)))
}

/// Spectrum of `Y T_n(f)`.
pub fn unpreconditioned_spectrum(psf: &Psf, n: usize) -> Result<Vec<f64>> {
    Ok(sandwich_spectrum(flipped_toeplitz(psf, n)?, None))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub eps: f64,
    pub delta: f64,
    pub near_plus_one: usize,
    pub near_minus_one: usize,
    pub in_noise_band: usize,
    pub outliers: usize,
    pub eigenvalues: Vec<f64>,
}

impl ClusterReport {
    pub fn total(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn outlier_fraction(&self) -> f64 {
        if self.eigenvalues.is_empty() {
            0.0
        } else {
            self.outliers as f64 / self.eigenvalues.len() as f64
        }
    }
}

/// Sorts eigenvalues into the bands `|l - 1| <= delta`, `|l + 1| <= delta`,
/// `|l| <= eps` (first match wins) and the remaining outliers.
pub fn cluster_report(eigs: &[f64], eps: f64, delta: f64) -> Result<ClusterReport> {
    if !(delta > 0.0) || !(eps >= 0.0) || !delta.is_finite() || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need delta > 0 and eps >= 0, got delta = {delta}, eps = {eps}"
        )));
    }
    if delta + eps >= 1.0 {
        return Err(Error::OverlappingBands(delta + eps));
    }
    let mut report = ClusterReport {
        eps,
        delta,
        near_plus_one: 0,
        near_minus_one: 0,
        in_noise_band: 0,
        outliers: 0,
        eigenvalues: eigs.to_vec(),
    };
    for &l in eigs {
        if (l - 1.0).abs() <= delta {
            report.near_plus_one += 1;
        } else if (l + 1.0).abs() <= delta {
            report.near_minus_one += 1;
        } else if l.abs() <= eps {
            report.in_noise_band += 1;
        } else {
            report.outliers += 1;
        }
    }
    Ok(report)
}

/// Largest discrepancy, over `F(t) = t, ..., t^moments`, between the
/// eigenvalue average `n^-2 sum F(l_j(T_n(f)))` and the symbol average
/// `(2 pi)^-2 int F(f)`.
///
/// The PSF must be centrosymmetric so that `T_n(f)` is symmetric and `f` real.
pub fn szego_distribution_check(psf: &Psf, n: usize, moments: usize) -> Result<f64> {
    if moments == 0 {
        return Err(Error::InvalidParameter("need at least one moment".into()));
    }
    let symmetric = psf
        .offsets()
        .all(|(k, l, h)| (h - psf.get(-k, -l)).abs() <= 1e-12 * h.abs().max(1.0));
    if !symmetric {
        return Err(Error::Domain("the PSF must satisfy h(k, l) = h(-k, -l)".into()));
    }
    let op = BlurOperator::new(psf.clone(), BoundaryCondition::Zero, n)?;
    let t = materialize_dense(&op)?;
    let eigs = sandwich_spectrum(t, None);
    let samples = symbol_midpoints(psf, SZEGO_GRID);

    let mut worst: f64 = 0.0;
    for m in 1..=moments {
        let p = m as i32;
        let lhs = eigs.iter().map(|l| l.powi(p)).sum::<f64>() / eigs.len() as f64;
        let rhs = samples.iter().map(|f| f.powi(p)).sum::<f64>() / samples.len() as f64;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Real symbol values at the midpoints `2 pi (i + 1/2) / grid`.
fn symbol_midpoints(psf: &Psf, grid: usize) -> Vec<f64> {
    let step = 2.0 * std::f64::consts::PI / grid as f64;
    let theta: Vec<f64> = (0..grid).map(|i| (i as f64 + 0.5) * step).collect();
    let offsets: Vec<(i64, i64, f64)> = psf.offsets().filter(|o| o.2 != 0.0).collect();
    let mut out = vec![0.0; grid * grid];
    for (i, &t1) in theta.iter().enumerate() {
        let row = &mut out[i * grid..(i + 1) * grid];
        for &(k, l, h) in &offsets {
            let a = k as f64 * t1;
            for (v, &t2) in row.iter_mut().zip(&theta) {
                *v += h * (a + l as f64 * t2).cos();
            }
        }
    }
    out
}
