//! Krylov subspace methods used as iterative regularization.
//!
//! Every solver starts from the zero vector and records, per iteration, the
//! true residual `||b - A x_k||` of the system it was handed, the residual
//! norm its own recurrences produce, and (when a reference image is supplied)
//! RRE and PSNR. Stopping is by the discrepancy principle or an iteration cap.

mod gmres;
mod lsq;
mod lsqr;
mod minres;

pub use gmres::{fgmres, gmres};
pub use lsqr::{flsqr, lsqr};
pub use minres::{minres, minres_sym_prec};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linear::{self, LinearMap};
use crate::problems::{psnr, rre};

/// Discrepancy-principle tolerance used when none is configured.
pub const DEFAULT_ETA: f64 = 1.01;
/// Iteration cap used when none is configured.
pub const DEFAULT_MAX_ITER: usize = 100;

/// Relative size below which a new basis candidate counts as zero.
pub(crate) const BREAKDOWN_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy {
    /// Safety factor, at least one.
    pub eta: f64,
    /// Norm of the noise in the right-hand side.
    pub noise_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingRule {
    pub max_iter: usize,
    pub discrepancy: Option<Discrepancy>,
    /// When false the solver keeps iterating after the discrepancy principle
    /// is met (the first such iterate is still recorded).
    pub halt_at_discrepancy: bool,
}

impl StoppingRule {
    pub fn new(max_iter: usize) -> Result<Self> {
        if max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        Ok(Self { max_iter, discrepancy: None, halt_at_discrepancy: true })
    }

    pub fn with_discrepancy(mut self, eta: f64, noise_norm: f64) -> Result<Self> {
        if !(eta.is_finite() && eta >= 1.0) {
            return Err(Error::InvalidParameter(format!("eta must be at least 1, got {eta}")));
        }
        if !(noise_norm.is_finite() && noise_norm >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise norm must be nonnegative, got {noise_norm}"
            )));
        }
        self.discrepancy = Some(Discrepancy { eta, noise_norm });
        Ok(self)
    }

    pub fn run_past_discrepancy(mut self) -> Self {
        self.halt_at_discrepancy = false;
        self
    }
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self { max_iter: DEFAULT_MAX_ITER, discrepancy: None, halt_at_discrepancy: true }
    }
}

/// True iff the discrepancy principle is enabled and
/// `residual_norm <= eta * noise_norm`.
pub fn discrepancy_stop(residual_norm: f64, stop: &StoppingRule) -> bool {
    stop.discrepancy
        .is_some_and(|d| residual_norm <= d.eta * d.noise_norm)
}

/// Stopping rule plus an optional reference image for error tracking.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions<'a> {
    pub stop: StoppingRule,
    pub truth: Option<&'a [f64]>,
}

impl<'a> SolveOptions<'a> {
    pub fn new(stop: StoppingRule) -> Self {
        Self { stop, truth: None }
    }

    pub fn with_truth(mut self, truth: &'a [f64]) -> Self {
        self.truth = Some(truth);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Discrepancy,
    MaxIter,
    Breakdown,
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Discrepancy => "discrepancy",
            Self::MaxIter => "max_iter",
            Self::Breakdown => "breakdown",
        })
    }
}

/// One row of a solver history. Iterations are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// `||b - A x_k||`, computed directly.
    pub residual_norm: f64,
    /// Residual norm maintained by the solver's recurrences.
    pub projected_residual_norm: f64,
    pub rre: Option<f64>,
    /// Infinite when the iterate reproduces the reference exactly.
    pub psnr: Option<f64>,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveRecord {
    pub history: Vec<IterationRecord>,
    pub stop_reason: StopReason,
    /// Iterate at the stopping iteration.
    pub solution: Vec<f64>,
    /// First iteration meeting the discrepancy principle.
    pub discrepancy_iteration: Option<usize>,
    pub discrepancy_solution: Option<Vec<f64>>,
    /// Iteration with the smallest RRE (needs a reference image).
    pub best_iteration: Option<usize>,
    pub best_solution: Option<Vec<f64>>,
    /// Products with the system operator or its adjoint made by the solver
    /// itself (monitoring products are not counted).
    pub operator_applications: usize,
    pub preconditioner_applications: usize,
    /// Iterations (0-based) whose preconditioned candidate direction vanished.
    pub skipped_directions: Vec<usize>,
}

impl SolveRecord {
    pub fn iterations(&self) -> usize {
        self.history.len()
    }

    pub fn residual_norms(&self) -> Vec<f64> {
        self.history.iter().map(|h| h.residual_norm).collect()
    }

    pub fn projected_residual_norms(&self) -> Vec<f64> {
        self.history.iter().map(|h| h.projected_residual_norm).collect()
    }

    pub fn rre_series(&self) -> Option<Vec<f64>> {
        self.history.iter().map(|h| h.rre).collect()
    }

    pub fn best_rre(&self) -> Option<f64> {
        self.best_iteration.and_then(|k| self.history[k - 1].rre)
    }

    pub fn discrepancy_rre(&self) -> Option<f64> {
        self.discrepancy_iteration.and_then(|k| self.history[k - 1].rre)
    }
}

/// Iteration-dependent preconditioner for the flexible solvers.
pub trait FlexiblePreconditioner {
    /// Preconditioner for iteration `k` (0-based), given the current iterate.
    fn at(&mut self, k: usize, x_current: &[f64]) -> Result<Box<dyn LinearMap>>;

    /// Regularization parameter in force at iteration `k`, if any.
    fn alpha(&self, k: usize) -> Option<f64> {
        let _ = k;
        None
    }
}

impl<F> FlexiblePreconditioner for F
where
    F: FnMut(usize, &[f64]) -> Box<dyn LinearMap>,
{
    fn at(&mut self, k: usize, x_current: &[f64]) -> Result<Box<dyn LinearMap>> {
        Ok(self(k, x_current))
    }
}

/// The same preconditioner at every iteration.
#[derive(Clone)]
pub struct FixedPreconditioner(pub Arc<dyn LinearMap + Send + Sync>);

impl FixedPreconditioner {
    pub fn new<M: LinearMap + Send + Sync + 'static>(map: M) -> Self {
        Self(Arc::new(map))
    }
}

impl FlexiblePreconditioner for FixedPreconditioner {
    fn at(&mut self, _k: usize, _x: &[f64]) -> Result<Box<dyn LinearMap>> {
        Ok(Box::new(self.0.clone()))
    }
}

pub(crate) fn check_system(a: &dyn LinearMap, b: &[f64]) -> Result<()> {
    if b.len() != a.dim() {
        return Err(Error::Dimension { expected: a.dim(), found: b.len() });
    }
    Ok(())
}

pub(crate) fn check_map(map: &dyn LinearMap, n: usize) -> Result<()> {
    if map.dim() != n {
        return Err(Error::Dimension { expected: n, found: map.dim() });
    }
    Ok(())
}

pub(crate) fn adjoint(map: &dyn LinearMap, x: &[f64]) -> Result<Vec<f64>> {
    map.apply_adjoint(x).ok_or(Error::MissingAdjoint)
}

/// Tracks the history of a run against the original system.
pub(crate) struct Monitor<'a> {
    a: &'a dyn LinearMap,
    b: &'a [f64],
    opts: SolveOptions<'a>,
    history: Vec<IterationRecord>,
    best: Option<(usize, f64, Vec<f64>)>,
    dp: Option<(usize, Vec<f64>)>,
    pub operator_applications: usize,
    pub preconditioner_applications: usize,
    pub skipped: Vec<usize>,
}

impl<'a> Monitor<'a> {
    pub(crate) fn new(a: &'a dyn LinearMap, b: &'a [f64], opts: &SolveOptions<'a>) -> Result<Self> {
        if let Some(t) = opts.truth {
            if t.len() != b.len() {
                return Err(Error::Dimension { expected: b.len(), found: t.len() });
            }
        }
        Ok(Self {
            a,
            b,
            opts: *opts,
            history: Vec::new(),
            best: None,
            dp: None,
            operator_applications: 0,
            preconditioner_applications: 0,
            skipped: Vec::new(),
        })
    }

    pub(crate) fn max_iter(&self) -> usize {
        self.opts.stop.max_iter
    }

    /// Records iterate `x`; returns true when the solver should halt on the
    /// discrepancy principle.
    pub(crate) fn observe(&mut self, x: &[f64], projected: f64, alpha: Option<f64>) -> bool {
        let k = self.history.len() + 1;
        let residual = linear::norm(&linear::sub(self.b, &self.a.apply(x)));
        let (rre_k, psnr_k) = match self.opts.truth {
            Some(t) => {
                let e = rre(x, t).ok();
                let p = match psnr(x, t) {
                    Ok(p) => Some(p),
                    Err(Error::InfinitePsnr) => Some(f64::INFINITY),
                    Err(_) => None,
                };
                (e, p)
            }
            None => (None, None),
        };
        if let Some(e) = rre_k {
            if self.best.as_ref().is_none_or(|b| e < b.1) {
                self.best = Some((k, e, x.to_vec()));
            }
        }
        self.history.push(IterationRecord {
            iteration: k,
            residual_norm: residual,
            projected_residual_norm: projected,
            rre: rre_k,
            psnr: psnr_k,
            alpha,
        });
        let met = discrepancy_stop(residual, &self.opts.stop);
        if met && self.dp.is_none() {
            self.dp = Some((k, x.to_vec()));
        }
        met && self.opts.stop.halt_at_discrepancy
    }

    /// Outcome when the right-hand side vanishes: the zero vector solves the system.
    pub(crate) fn zero_rhs(self) -> SolveRecord {
        let reason = if self.opts.stop.discrepancy.is_some() {
            StopReason::Discrepancy
        } else {
            StopReason::Breakdown
        };
        let n = self.b.len();
        self.finish(vec![0.0; n], reason)
    }

    pub(crate) fn finish(self, solution: Vec<f64>, stop_reason: StopReason) -> SolveRecord {
        let (best_iteration, best_solution) = match self.best {
            Some((k, _, x)) => (Some(k), Some(x)),
            None => (None, None),
        };
        let (discrepancy_iteration, discrepancy_solution) = match self.dp {
            Some((k, x)) => (Some(k), Some(x)),
            None => (None, None),
        };
        SolveRecord {
            history: self.history,
            stop_reason,
            solution,
            discrepancy_iteration,
            discrepancy_solution,
            best_iteration,
            best_solution,
            operator_applications: self.operator_applications,
            preconditioner_applications: self.preconditioner_applications,
            skipped_directions: self.skipped,
        }
    }
}

/// Two passes of modified Gram-Schmidt of `w` against `basis`; returns the
/// accumulated coefficients.
pub(crate) fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) -> Vec<f64> {
    let mut h = vec![0.0; basis.len()];
    for _ in 0..2 {
        for (hi, v) in h.iter_mut().zip(basis) {
            let c = linear::dot(v, w);
            linear::axpy(-c, v, w);
            *hi += c;
        }
    }
    h
}

/// `sum_i y_i * vectors_i`
pub(crate) fn combine(vectors: &[Vec<f64>], y: &[f64], n: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for (v, &c) in vectors.iter().zip(y) {
        linear::axpy(c, v, &mut x);
    }
    x
}
