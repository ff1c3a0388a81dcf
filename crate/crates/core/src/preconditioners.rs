//! Regularizing circulant preconditioners, their parameter schedules, and the
//! diagonal sparsity weights used by the flexible solvers.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Fft2;
use crate::linear::LinearMap;
use crate::operators::SymbolGrid;

/// Stationary regularization parameter used when none is configured.
pub const DEFAULT_STATIONARY_ALPHA: f64 = 1e-2;
/// Initial value of the geometric parameter sequence.
pub const DEFAULT_ALPHA0: f64 = 0.1;
/// Ratio of the geometric parameter sequence.
pub const DEFAULT_Q: f64 = 0.8;

/// A map diagonalized by the 2-D Fourier basis: `C u = lambda u` for
/// `u[r, c] = exp(-2 pi i (r i + c j) / n)` with `lambda = eigs[i * n + j]`.
#[derive(Clone)]
pub struct CirculantOperator {
    n: usize,
    eigs: Vec<Complex64>,
    fft: Fft2,
}

impl fmt::Debug for CirculantOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CirculantOperator").field("n", &self.n).finish_non_exhaustive()
    }
}

impl CirculantOperator {
    pub fn new(n: usize, eigs: Vec<Complex64>) -> Result<Self> {
        if eigs.len() != n * n {
            return Err(Error::Dimension { expected: n * n, found: eigs.len() });
        }
        if eigs.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::Domain("non-finite circulant eigenvalue".into()));
        }
        Ok(Self { n, eigs, fft: Fft2::new(n, n) })
    }

    /// The BCCB matrix `C_n(f)` whose eigenvalues are the symbol samples.
    pub fn from_symbol(symbol: &SymbolGrid) -> Self {
        Self::with_eigs(symbol.n(), symbol.values().to_vec())
    }

    pub fn identity(n: usize) -> Self {
        Self::with_eigs(n, vec![Complex64::new(1.0, 0.0); n * n])
    }

    fn with_eigs(n: usize, eigs: Vec<Complex64>) -> Self {
        Self { n, eigs, fft: Fft2::new(n, n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigs
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.eigs.iter().all(|e| e.im.abs() <= tol)
    }

    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.eigs.iter().all(|e| e.re >= -tol)
    }

    /// True when real vectors are mapped to real vectors, i.e. the
    /// eigenvalue grid is conjugate symmetric.
    pub fn is_real(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let mirror = self.eigs[((n - i) % n) * n + (n - j) % n].conj();
                (self.eigs[i * n + j] - mirror).norm() <= tol
            })
        })
    }

    /// Applies the operator to a complex vector.
    pub fn apply_complex(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n * self.n, "circulant applied to a vector of the wrong size");
        let mut buf = x.to_vec();
        self.fft.inverse(&mut buf);
        for (b, e) in buf.iter_mut().zip(&self.eigs) {
            *b *= e;
        }
        self.fft.forward(&mut buf);
        let scale = 1.0 / (self.n * self.n) as f64;
        for b in &mut buf {
            *b *= scale;
        }
        buf
    }

    fn apply_real(&self, x: &[f64], conjugate: bool) -> Vec<f64> {
        assert_eq!(x.len(), self.n * self.n, "circulant applied to a vector of the wrong size");
        let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft.inverse(&mut buf);
        for (b, e) in buf.iter_mut().zip(&self.eigs) {
            *b *= if conjugate { e.conj() } else { *e };
        }
        self.fft.forward(&mut buf);
        let scale = 1.0 / (self.n * self.n) as f64;
        buf.iter().map(|b| b.re * scale).collect()
    }

    /// The inverse, by elementwise reciprocal of the eigenvalues.
    pub fn inverse(&self) -> Result<Self> {
        if let Some(pos) = self.eigs.iter().position(|e| e.norm() == 0.0) {
            return Err(Error::Singular(format!("zero eigenvalue at index {pos}")));
        }
        Ok(Self::with_eigs(self.n, self.eigs.iter().map(|e| e.inv()).collect()))
    }
}

/// Real vectors map to the real part of the complex product; this is exact
/// when [`CirculantOperator::is_real`] holds, which every constructor in this
/// module guarantees for symbols of real PSFs.
impl LinearMap for CirculantOperator {
    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.apply_real(x, false)
    }

    fn apply_adjoint(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(self.apply_real(x, true))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be nonnegative, got {alpha}")));
    }
    Ok(())
}

/// Circulant Tikhonov filter `C_n(p_alpha)`: eigenvalues `conj(l) / (|l|^2 + alpha)`.
///
/// Applied to `b` under periodic boundary conditions this is the Tikhonov
/// solution `(A^T A + alpha I)^{-1} A^T b`. `alpha = 0` is accepted only when
/// no eigenvalue vanishes.
pub fn circulant_tikhonov(symbol: &SymbolGrid, alpha: f64) -> Result<CirculantOperator> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        if let Some(pos) = symbol.values().iter().position(|l| l.norm() == 0.0) {
            return Err(Error::Singular(format!(
                "alpha = 0 with a vanishing symbol sample at index {pos}"
            )));
        }
    }
    let eigs = symbol
        .values()
        .iter()
        .map(|l| l.conj() / (l.norm_sqr() + alpha))
        .collect();
    Ok(CirculantOperator::with_eigs(symbol.n(), eigs))
}

/// Absolute-value Tikhonov filter `C_n(|p_alpha|)`: eigenvalues
/// `|l| / (|l|^2 + alpha)`, all real, nonnegative and at most `1 / (2 sqrt(alpha))`.
pub fn circulant_abs_tikhonov(symbol: &SymbolGrid, alpha: f64) -> Result<CirculantOperator> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Err(Error::InvalidParameter("abs-Tikhonov requires alpha > 0".into()));
    }
    let eigs = symbol
        .values()
        .iter()
        .map(|l| Complex64::new(l.norm() / (l.norm_sqr() + alpha), 0.0))
        .collect();
    Ok(CirculantOperator::with_eigs(symbol.n(), eigs))
}

/// Threshold circulant `C_n(g_tau)`: keeps `|l|` where `|l| > eps`, sets the
/// remaining eigenvalues (including `|l| == eps`) to one. Invert it with
/// [`CirculantOperator::inverse`] to precondition.
pub fn circulant_threshold(symbol: &SymbolGrid, eps: f64) -> Result<CirculantOperator> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("threshold must lie in (0, 1), got {eps}")));
    }
    let eigs = symbol
        .values()
        .iter()
        .map(|l| {
            let a = l.norm();
            Complex64::new(if a > eps { a } else { 1.0 }, 0.0)
        })
        .collect();
    Ok(CirculantOperator::with_eigs(symbol.n(), eigs))
}

const SQRT_TOL: f64 = 1e-12;

/// Elementwise nonnegative square root of a Hermitian PSD circulant.
pub fn circulant_sqrt(c: &CirculantOperator) -> Result<CirculantOperator> {
    let mut eigs = Vec::with_capacity(c.eigs.len());
    for (idx, e) in c.eigs.iter().enumerate() {
        if e.im.abs() > SQRT_TOL || e.re < -SQRT_TOL {
            return Err(Error::Domain(format!(
                "eigenvalue {e} at index {idx} is not real and nonnegative"
            )));
        }
        eigs.push(Complex64::new(e.re.max(0.0).sqrt(), 0.0));
    }
    Ok(CirculantOperator::with_eigs(c.n, eigs))
}

/// Which circulant a [`PreconditionerSchedule`] builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreconditionerVariant {
    Tikhonov,
    AbsTikhonov,
    /// The parameter plays the role of the threshold `eps`; the operator
    /// returned by [`PreconditionerSchedule::build`] is the inverse of the
    /// threshold circulant.
    Threshold,
    Identity,
}

/// Parameter schedule: `alpha_k = alpha0` when stationary, `alpha0 * q^k` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreconditionerSchedule {
    pub variant: PreconditionerVariant,
    pub alpha0: f64,
    pub q: f64,
    pub stationary: bool,
}

impl PreconditionerSchedule {
    pub fn stationary(variant: PreconditionerVariant, alpha: f64) -> Result<Self> {
        Self::new(variant, alpha, 1.0, true)
    }

    pub fn geometric(variant: PreconditionerVariant, alpha0: f64, q: f64) -> Result<Self> {
        Self::new(variant, alpha0, q, false)
    }

    pub fn new(variant: PreconditionerVariant, alpha0: f64, q: f64, stationary: bool) -> Result<Self> {
        if !(alpha0.is_finite() && alpha0 > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha0 must be positive, got {alpha0}")));
        }
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidParameter(format!("q must lie in (0, 1], got {q}")));
        }
        Ok(Self { variant, alpha0, q, stationary })
    }

    pub fn alpha_at(&self, k: usize) -> f64 {
        if self.stationary {
            self.alpha0
        } else {
            self.alpha0 * self.q.powi(k as i32)
        }
    }

    /// The preconditioner for iteration `k`.
    pub fn build(&self, symbol: &SymbolGrid, k: usize) -> Result<CirculantOperator> {
        let alpha = self.alpha_at(k);
        match self.variant {
            PreconditionerVariant::Tikhonov => circulant_tikhonov(symbol, alpha),
            PreconditionerVariant::AbsTikhonov => circulant_abs_tikhonov(symbol, alpha),
            PreconditionerVariant::Threshold => circulant_threshold(symbol, alpha)?.inverse(),
            PreconditionerVariant::Identity => Ok(CirculantOperator::identity(symbol.n())),
        }
    }
}

/// `alpha_k` of a schedule.
pub fn alpha_at(sched: &PreconditionerSchedule, k: usize) -> f64 {
    sched.alpha_at(k)
}

/// The diagonal map `diag(|x|^{1/2})`. Zero entries stay zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalWeights {
    weights: Vec<f64>,
}

impl DiagonalWeights {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_invertible(&self) -> bool {
        self.weights.iter().all(|&w| w > 0.0)
    }
}

pub fn sparsity_weights(x_prev: &[f64]) -> DiagonalWeights {
    DiagonalWeights { weights: x_prev.iter().map(|v| v.abs().sqrt()).collect() }
}

impl LinearMap for DiagonalWeights {
    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.weights.len(), "weights applied to a vector of the wrong size");
        x.iter().zip(&self.weights).map(|(a, w)| a * w).collect()
    }

    fn apply_adjoint(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(self.apply(x))
    }
}

/// Applies `first`, then `second`.
#[derive(Debug, Clone)]
pub struct Compose<F, S> {
    first: F,
    second: S,
}

pub fn compose<F: LinearMap, S: LinearMap>(first: F, second: S) -> Result<Compose<F, S>> {
    if first.dim() != second.dim() {
        return Err(Error::Dimension { expected: first.dim(), found: second.dim() });
    }
    Ok(Compose { first, second })
}

impl<F: LinearMap, S: LinearMap> LinearMap for Compose<F, S> {
    fn dim(&self) -> usize {
        self.first.dim()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.second.apply(&self.first.apply(x))
    }

    fn apply_adjoint(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.first.apply_adjoint(&self.second.apply_adjoint(x)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{to_dense, Identity};
    use crate::operators::{bccb_eigenvalues, materialize_dense, BlurOperator, BoundaryCondition, Psf};
    use crate::problems::{make_gaussian_psf, make_motion_psf};
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gaussian_symbol() -> SymbolGrid {
        bccb_eigenvalues(&make_gaussian_psf(9, 2.0).unwrap(), 8).unwrap()
    }

    fn random_vec(seed: u64, len: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn fourier_vectors_are_eigenvectors() {
        let n = 6;
        let symbol = bccb_eigenvalues(&make_motion_psf(4, 60.0).unwrap(), n).unwrap();
        let c = CirculantOperator::from_symbol(&symbol);
        for (i, j) in [(0, 0), (1, 2), (5, 3), (3, 0)] {
            let u: Vec<Complex64> = (0..n * n)
                .map(|idx| {
                    let (r, cc) = (idx / n, idx % n);
                    let ph = -2.0 * std::f64::consts::PI * ((r * i + cc * j) as f64) / n as f64;
                    Complex64::from_polar(1.0, ph)
                })
                .collect();
            let cu = c.apply_complex(&u);
            let lambda = symbol.get(i, j);
            let defect: f64 = cu.iter().zip(&u).map(|(a, b)| (a - lambda * b).norm_sqr()).sum();
            assert!(defect.sqrt() <= 1e-10);
        }
    }

    #[test]
    fn periodic_blur_equals_circulant() {
        let psf = make_motion_psf(5, 30.0).unwrap();
        let n = 8;
        let op = BlurOperator::new(psf.clone(), BoundaryCondition::Periodic, n).unwrap();
        let c = CirculantOperator::from_symbol(&bccb_eigenvalues(&psf, n).unwrap());
        let x = random_vec(1, n * n);
        for (a, b) in op.apply(&x).iter().zip(&c.apply(&x)) {
            assert!((a - b).abs() < 1e-10);
        }
        let ad = c.apply_adjoint(&x).unwrap();
        for (a, b) in op.apply_adjoint(&x).unwrap().iter().zip(&ad) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn tikhonov_delta_alpha_zero_is_identity() {
        let symbol = bccb_eigenvalues(&Psf::delta(), 4).unwrap();
        let c = circulant_tikhonov(&symbol, 0.0).unwrap();
        assert!(c.eigenvalues().iter().all(|e| (e - 1.0).norm() < 1e-15));
    }

    #[test]
    fn tikhonov_alpha_zero_with_vanishing_symbol_is_singular() {
        // (1 + e^{i theta}) / 2 vanishes at theta = pi
        let psf = Psf::from_offsets(&[((0, 0), 0.5), ((0, 1), 0.5)]).unwrap();
        let symbol = bccb_eigenvalues(&psf, 4).unwrap();
        assert!(matches!(circulant_tikhonov(&symbol, 0.0), Err(Error::Singular(_))));
        assert!(circulant_tikhonov(&symbol, 1e-3).is_ok());
        assert!(circulant_tikhonov(&symbol, -1.0).is_err());
    }

    #[test]
    fn tikhonov_eigs_follow_the_filter_formula() {
        let symbol = gaussian_symbol();
        let c = circulant_tikhonov(&symbol, 0.01).unwrap();
        for (e, l) in c.eigenvalues().iter().zip(symbol.values()) {
            let want = l.conj() / (l.norm_sqr() + 0.01);
            assert!((e - want).norm() < 1e-13);
        }
    }

    #[test]
    fn tikhonov_solves_the_periodic_regularized_problem() {
        let n = 8;
        let alpha = 0.01;
        let psf = make_motion_psf(5, 30.0).unwrap();
        let op = BlurOperator::new(psf.clone(), BoundaryCondition::Periodic, n).unwrap();
        let a = materialize_dense(&op).unwrap();
        let b = random_vec(7, n * n);
        let normal = a.transpose() * &a + DMatrix::identity(n * n, n * n) * alpha;
        let rhs = a.transpose() * DVector::from_column_slice(&b);
        let want = normal.cholesky().unwrap().solve(&rhs);
        let c = circulant_tikhonov(&bccb_eigenvalues(&psf, n).unwrap(), alpha).unwrap();
        let got = c.apply(&b);
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).abs() < 1e-8);
        }
    }

    #[test]
    fn abs_tikhonov_bounds() {
        let symbol = bccb_eigenvalues(&Psf::delta(), 4).unwrap();
        let c = circulant_abs_tikhonov(&symbol, 1.0).unwrap();
        assert!(c.eigenvalues().iter().all(|e| (e - 0.5).norm() < 1e-15));

        let symbol = gaussian_symbol();
        for alpha in [1e-1, 1e-2, 1e-4] {
            let c = circulant_abs_tikhonov(&symbol, alpha).unwrap();
            assert!(c.is_positive_semidefinite(0.0));
            let bound = 1.0 / (2.0 * alpha.sqrt());
            assert!(c.eigenvalues().iter().all(|e| e.re <= bound));
        }
        let c = circulant_abs_tikhonov(&symbol, 0.01).unwrap();
        for (e, l) in c.eigenvalues().iter().zip(symbol.values()) {
            assert!((e.re - l.norm() / (l.norm_sqr() + 0.01)).abs() < 1e-13);
        }
        assert!(circulant_abs_tikhonov(&symbol, 0.0).is_err());
    }

    #[test]
    fn abs_tikhonov_does_not_amplify_small_eigenvalues() {
        let symbol = gaussian_symbol();
        let eps = 0.05;
        let c = circulant_abs_tikhonov(&symbol, eps).unwrap();
        for (e, l) in c.eigenvalues().iter().zip(symbol.values()) {
            let v = e.re * l.norm();
            assert!(v < 1.0);
            if l.norm() <= eps {
                assert!(v <= eps);
            }
        }
    }

    #[test]
    fn threshold_keeps_large_and_resets_small() {
        let symbol = bccb_eigenvalues(&Psf::delta(), 4).unwrap();
        let c = circulant_threshold(&symbol, 0.5).unwrap();
        assert!(c.eigenvalues().iter().all(|e| (e - 1.0).norm() < 1e-15));

        let symbol = gaussian_symbol();
        let eps = 0.1;
        let c = circulant_threshold(&symbol, eps).unwrap();
        let max_abs = symbol.max_abs();
        let mut kept = 0;
        for (e, l) in c.eigenvalues().iter().zip(symbol.values()) {
            assert_eq!(e.im, 0.0);
            if l.norm() > eps {
                kept += 1;
                assert!(e.re > eps && e.re <= max_abs);
            } else {
                assert_eq!(e.re, 1.0);
            }
        }
        let expected = symbol.values().iter().filter(|l| l.norm() > eps).count();
        assert_eq!(kept, expected);
        assert!(kept > 0 && kept < 64);
        assert!(c.eigenvalues().iter().all(|e| e.re > 0.0));
        assert!(c.inverse().is_ok());
        assert!(circulant_threshold(&symbol, 1.0).is_err());
    }

    #[test]
    fn threshold_boundary_value_is_reset() {
        let symbol = SymbolGrid::new(1, vec![Complex64::new(0.25, 0.0)]).unwrap();
        let c = circulant_threshold(&symbol, 0.25).unwrap();
        assert_eq!(c.eigenvalues()[0].re, 1.0);
    }

    #[test]
    fn sqrt_examples() {
        let id = CirculantOperator::identity(3);
        assert_eq!(circulant_sqrt(&id).unwrap().eigenvalues(), id.eigenvalues());
        let four = CirculantOperator::new(2, vec![Complex64::new(4.0, 0.0); 4]).unwrap();
        assert!(circulant_sqrt(&four).unwrap().eigenvalues().iter().all(|e| *e == Complex64::new(2.0, 0.0)));

        let c = circulant_abs_tikhonov(&gaussian_symbol(), 0.01).unwrap();
        let s = circulant_sqrt(&c).unwrap();
        for (r, e) in s.eigenvalues().iter().zip(c.eigenvalues()) {
            assert!((r * r - e).norm() < 1e-12);
        }
        let x = random_vec(3, 64);
        for (a, b) in s.apply(&s.apply(&x)).iter().zip(&c.apply(&x)) {
            assert!((a - b).abs() < 1e-10);
        }
        let q = circulant_sqrt(&circulant_sqrt(&c).unwrap()).unwrap();
        for (r, e) in q.eigenvalues().iter().zip(c.eigenvalues()) {
            assert!((r.powi(4) - e).norm() < 1e-9);
        }
    }

    #[test]
    fn sqrt_rejects_complex_or_negative() {
        let tik = circulant_tikhonov(&bccb_eigenvalues(&make_motion_psf(5, 30.0).unwrap(), 8).unwrap(), 0.1)
            .unwrap();
        assert!(matches!(circulant_sqrt(&tik), Err(Error::Domain(_))));
        let neg = CirculantOperator::new(1, vec![Complex64::new(-0.5, 0.0)]).unwrap();
        assert!(circulant_sqrt(&neg).is_err());
    }

    #[test]
    fn alpha_schedule() {
        let geo = PreconditionerSchedule::geometric(PreconditionerVariant::AbsTikhonov, DEFAULT_ALPHA0, DEFAULT_Q)
            .unwrap();
        assert_eq!(alpha_at(&geo, 0), 0.1);
        assert!((alpha_at(&geo, 1) - 0.08).abs() < 1e-15);
        for k in 0..50 {
            assert!(geo.alpha_at(k + 1) < geo.alpha_at(k));
            assert!(geo.alpha_at(k + 1) > 0.0);
        }
        let st = PreconditionerSchedule::stationary(PreconditionerVariant::Tikhonov, 0.01).unwrap();
        assert!((0..20).all(|k| st.alpha_at(k) == 0.01));
        assert!(PreconditionerSchedule::geometric(PreconditionerVariant::Tikhonov, 0.1, 1.5).is_err());
        assert!(PreconditionerSchedule::geometric(PreconditionerVariant::Tikhonov, 0.0, 0.5).is_err());
    }

    #[test]
    fn schedule_builds_deterministically() {
        let symbol = gaussian_symbol();
        let sched = PreconditionerSchedule::geometric(PreconditionerVariant::Tikhonov, 0.1, 0.8).unwrap();
        let a = sched.build(&symbol, 3).unwrap();
        let b = sched.build(&symbol, 3).unwrap();
        assert_eq!(a.eigenvalues(), b.eigenvalues());
        let thr = PreconditionerSchedule::stationary(PreconditionerVariant::Threshold, 0.1).unwrap();
        let inv = thr.build(&symbol, 0).unwrap();
        let direct = circulant_threshold(&symbol, 0.1).unwrap();
        for (i, d) in inv.eigenvalues().iter().zip(direct.eigenvalues()) {
            assert!((i * d - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn weights_examples() {
        assert_eq!(sparsity_weights(&[0.0, 1.0, 4.0]).weights(), &[0.0, 1.0, 2.0]);
        assert_eq!(sparsity_weights(&[-4.0]).weights(), &[2.0]);
        let z = sparsity_weights(&[0.0; 5]);
        assert!(z.weights().iter().all(|&w| w == 0.0));
        assert!(!z.is_invertible());
    }

    #[test]
    fn compose_order() {
        let symbol = gaussian_symbol();
        let p = circulant_abs_tikhonov(&symbol, 0.01).unwrap();
        let w = sparsity_weights(&random_vec(11, 64));
        let x = random_vec(12, 64);

        let ip = compose(Identity(64), p.clone()).unwrap();
        for (a, b) in ip.apply(&x).iter().zip(&p.apply(&x)) {
            assert!((a - b).abs() < 1e-14);
        }
        let wi = compose(w.clone(), Identity(64)).unwrap();
        assert_eq!(wi.apply(&x), w.apply(&x));

        let wp = compose(w.clone(), p.clone()).unwrap();
        let dense = to_dense(&p) * to_dense(&w);
        let want = &dense * DVector::from_column_slice(&x);
        for (a, b) in wp.apply(&x).iter().zip(want.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        let adj = wp.apply_adjoint(&x).unwrap();
        let want = dense.transpose() * DVector::from_column_slice(&x);
        for (a, b) in adj.iter().zip(want.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(compose(Identity(3), Identity(4)).is_err());
    }

    proptest! {
        #[test]
        fn constructors_yield_real_operators(alpha in 1e-5f64..1.0, eps in 0.01f64..0.99) {
            let symbol = bccb_eigenvalues(&make_motion_psf(5, 30.0).unwrap(), 8).unwrap();
            prop_assert!(circulant_tikhonov(&symbol, alpha).unwrap().is_real(1e-14));
            let abs = circulant_abs_tikhonov(&symbol, alpha).unwrap();
            prop_assert!(abs.is_real(1e-14));
            prop_assert!(abs.is_positive_semidefinite(0.0));
            let thr = circulant_threshold(&symbol, eps).unwrap();
            prop_assert!(thr.is_real(1e-14));
            prop_assert!(thr.eigenvalues().iter().all(|e| e.re > 0.0));
        }
    }
}
