//! Method labels such as `YAPW FGMRES` and the solver stacks they denote.
//!
//! A label is an operator part and a solver name. The operator part is
//! `[Y]A[P][W]`: `Y` flips the system to `(YA, Yb)`, `P` adds a circulant
//! regularizing preconditioner (Tikhonov on `A`, absolute-value Tikhonov on
//! `YA`) and `W` adds the sparsity weights `diag(|x_k|^{1/2})`, applied before
//! `P`. Flexible solvers use the geometric schedule `alpha_k = alpha0 q^k`,
//! the others the stationary parameter.

use std::fmt;
use std::str::FromStr;

use super::NoisyProblem;
use crate::error::{Error, Result};
use crate::linear::{Identity, LinearMap};
use crate::operators::{apply_flip, bccb_eigenvalues, BoundaryCondition, Flipped, SymbolGrid};
use crate::preconditioners::{
    circulant_sqrt, compose, sparsity_weights, PreconditionerSchedule, PreconditionerVariant,
    DEFAULT_ALPHA0, DEFAULT_Q, DEFAULT_STATIONARY_ALPHA,
};
use crate::solvers::{
    fgmres, flsqr, gmres, lsqr, minres, minres_sym_prec, FlexiblePreconditioner, SolveOptions,
    SolveRecord, StoppingRule, DEFAULT_ETA, DEFAULT_MAX_ITER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Minres,
    Gmres,
    Lsqr,
    Fgmres,
    Flsqr,
}

impl SolverKind {
    pub fn is_flexible(self) -> bool {
        matches!(self, Self::Fgmres | Self::Flsqr)
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Minres => "MINRES",
            Self::Gmres => "GMRES",
            Self::Lsqr => "LSQR",
            Self::Fgmres => "FGMRES",
            Self::Flsqr => "FLSQR",
        })
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "MINRES" => Ok(Self::Minres),
            "GMRES" => Ok(Self::Gmres),
            "LSQR" => Ok(Self::Lsqr),
            "FGMRES" => Ok(Self::Fgmres),
            "FLSQR" => Ok(Self::Flsqr),
            _ => Err(Error::InvalidParameter(format!("unknown solver '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MethodSpec {
    pub flip: bool,
    pub prec: bool,
    pub weights: bool,
    pub solver: SolverKind,
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}A{}{} {}",
            if self.flip { "Y" } else { "" },
            if self.prec { "P" } else { "" },
            if self.weights { "W" } else { "" },
            self.solver
        )
    }
}

impl FromStr for MethodSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown method label '{s}'"));
        let mut parts = s.split_whitespace();
        let (Some(op), Some(solver), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        let solver: SolverKind = solver.parse().map_err(|_| bad())?;
        let rest = op.strip_prefix('Y');
        let flip = rest.is_some();
        let rest = rest.unwrap_or(op).strip_prefix('A').ok_or_else(bad)?;
        let (prec, rest) = match rest.strip_prefix('P') {
            Some(r) => (true, r),
            None => (false, rest),
        };
        let weights = match rest {
            "" => false,
            "W" => true,
            _ => return Err(bad()),
        };
        let spec = Self { flip, prec, weights, solver };
        if weights && !solver.is_flexible() {
            return Err(Error::InvalidParameter(format!(
                "'{s}': sparsity weights change every iteration and need FGMRES or FLSQR"
            )));
        }
        if solver == SolverKind::Minres && (!flip || weights) {
            return Err(Error::InvalidParameter(format!(
                "'{s}': MINRES needs the symmetric flipped system YA and no weights"
            )));
        }
        Ok(spec)
    }
}

impl MethodSpec {
    /// Rejects combinations that do not make sense for the given problem.
    pub fn check_problem(&self, problem: &NoisyProblem) -> Result<()> {
        let op = &problem.operator;
        if self.solver == SolverKind::Minres
            && op.boundary() == BoundaryCondition::Reflective
            && !op.psf().is_quadrantally_symmetric(1e-12)
        {
            return Err(Error::InvalidParameter(format!(
                "{self}: with reflective boundary conditions and a nonsymmetric PSF, YA is \
                 only nearly symmetric; use GMRES instead"
            )));
        }
        Ok(())
    }

    fn variant(&self) -> PreconditionerVariant {
        if !self.prec {
            PreconditionerVariant::Identity
        } else if self.flip {
            PreconditionerVariant::AbsTikhonov
        } else {
            PreconditionerVariant::Tikhonov
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodParams {
    pub alpha0: f64,
    pub q: f64,
    pub stationary_alpha: f64,
    pub eta: f64,
    pub max_iter: usize,
    /// Stop at the discrepancy principle instead of running to `max_iter`.
    pub halt_at_discrepancy: bool,
}

impl Default for MethodParams {
    fn default() -> Self {
        Self {
            alpha0: DEFAULT_ALPHA0,
            q: DEFAULT_Q,
            stationary_alpha: DEFAULT_STATIONARY_ALPHA,
            eta: DEFAULT_ETA,
            max_iter: DEFAULT_MAX_ITER,
            halt_at_discrepancy: false,
        }
    }
}

struct FlexibleStack {
    n2: usize,
    circulant: Option<(SymbolGrid, PreconditionerSchedule)>,
    weights: bool,
}

impl FlexiblePreconditioner for FlexibleStack {
    fn at(&mut self, k: usize, x: &[f64]) -> Result<Box<dyn LinearMap>> {
        let p = match &self.circulant {
            Some((symbol, sched)) => Some(sched.build(symbol, k)?),
            None => None,
        };
        // at the first iteration the iterate is zero and carries no support information
        let w = (self.weights && x.iter().any(|v| *v != 0.0)).then(|| sparsity_weights(x));
        Ok(match (w, p) {
            (Some(w), Some(p)) => Box::new(compose(w, p)?),
            (Some(w), None) => Box::new(w),
            (None, Some(p)) => Box::new(p),
            (None, None) => Box::new(Identity(self.n2)),
        })
    }

    fn alpha(&self, k: usize) -> Option<f64> {
        self.circulant.as_ref().map(|(_, s)| s.alpha_at(k))
    }
}

/// Builds the stack named by `method` for `problem` and runs it.
pub fn run_method(problem: &NoisyProblem, method: &MethodSpec, params: &MethodParams) -> Result<SolveRecord> {
    method.check_problem(problem)?;
    let op = &problem.operator;
    let n2 = op.n() * op.n();
    let mut stop = StoppingRule::new(params.max_iter)?.with_discrepancy(params.eta, problem.noise_norm)?;
    if !params.halt_at_discrepancy {
        stop = stop.run_past_discrepancy();
    }
    let mut opts = SolveOptions::new(stop);
    if let Some(t) = &problem.x_true {
        opts = opts.with_truth(t.pixels());
    }

    let flipped = Flipped(op);
    let (a, b): (&dyn LinearMap, Vec<f64>) = if method.flip {
        (&flipped, apply_flip(problem.b.pixels()))
    } else {
        (op, problem.b.pixels().to_vec())
    };
    let symbol = if method.prec { Some(bccb_eigenvalues(op.psf(), op.n())?) } else { None };
    let variant = method.variant();

    if method.solver.is_flexible() {
        let mut stack = FlexibleStack {
            n2,
            circulant: match symbol {
                Some(s) => Some((s, PreconditionerSchedule::geometric(variant, params.alpha0, params.q)?)),
                None => None,
            },
            weights: method.weights,
        };
        return match method.solver {
            SolverKind::Fgmres => fgmres(a, &b, &mut stack, &opts),
            _ => flsqr(a, &b, &mut stack, &opts),
        };
    }

    let p = match &symbol {
        Some(s) => Some(PreconditionerSchedule::stationary(variant, params.stationary_alpha)?.build(s, 0)?),
        None => None,
    };
    match (method.solver, p) {
        (SolverKind::Minres, Some(p)) => minres_sym_prec(a, &b, &circulant_sqrt(&p)?, &opts),
        (SolverKind::Minres, None) => minres(a, &b, &opts),
        (SolverKind::Gmres, p) => gmres(a, &b, p.as_ref().map(|p| p as &dyn LinearMap), &opts),
        (_, p) => lsqr(a, &b, p.as_ref().map(|p| p as &dyn LinearMap), &opts),
    }
}
