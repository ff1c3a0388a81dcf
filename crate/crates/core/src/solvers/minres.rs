use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{check_map, check_system, Monitor, SolveOptions, SolveRecord, StopReason, BREAKDOWN_TOL};
use crate::error::{Error, Result};
use crate::linear::{self, LinearMap};
use crate::preconditioners::CirculantOperator;

const SYMMETRY_TOL: f64 = 1e-8;
const SYMMETRY_PROBES: usize = 3;
const PROBE_SEED: u64 = 0x5EED_0F_5E7;

/// Checks `|<Ax, y> - <x, Ay>| <= 1e-8 ||x|| ||y||` on random pairs.
fn probe_symmetry(a: &dyn LinearMap) -> Result<()> {
    let n = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    for _ in 0..SYMMETRY_PROBES {
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let y: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let ax = a.apply(&x);
        let ay = a.apply(&y);
        let (nx, ny) = (linear::norm(&x), linear::norm(&y));
        // scaled by the operator size so that large-norm maps are judged fairly
        let scale = (linear::norm(&ax) / nx).max(linear::norm(&ay) / ny).max(1.0);
        let defect = (linear::dot(&ax, &y) - linear::dot(&x, &ay)).abs();
        let tolerance = SYMMETRY_TOL * nx * ny * scale;
        if !(defect <= tolerance) {
            return Err(Error::NotSymmetric { defect, tolerance });
        }
    }
    Ok(())
}

/// MINRES for a symmetric (possibly indefinite) map.
pub fn minres(a_sym: &dyn LinearMap, b: &[f64], opts: &SolveOptions) -> Result<SolveRecord> {
    check_system(a_sym, b)?;
    probe_symmetry(a_sym)?;
    let monitor = Monitor::new(a_sym, b, opts)?;
    Ok(minres_core(a_sym, b, None, monitor))
}

/// MINRES on `P^{1/2} A P^{1/2} z = P^{1/2} b` with `x = P^{1/2} z`.
///
/// The recorded true residual and the discrepancy test refer to the original
/// system `A x = b`.
pub fn minres_sym_prec(
    a_sym: &dyn LinearMap,
    b: &[f64],
    p_half: &CirculantOperator,
    opts: &SolveOptions,
) -> Result<SolveRecord> {
    check_system(a_sym, b)?;
    check_map(p_half, b.len())?;
    if !p_half.is_hermitian(1e-12) || !p_half.is_positive_semidefinite(1e-12) {
        return Err(Error::Domain(
            "symmetric preconditioning needs a Hermitian positive semidefinite square root".into(),
        ));
    }
    probe_symmetry(a_sym)?;
    let sandwich = Sandwich { a: a_sym, p: p_half };
    let rhs = p_half.apply(b);
    let mut monitor = Monitor::new(a_sym, b, opts)?;
    monitor.preconditioner_applications += 1;
    Ok(minres_core(&sandwich, &rhs, Some(p_half), monitor))
}

struct Sandwich<'a> {
    a: &'a dyn LinearMap,
    p: &'a CirculantOperator,
}

impl LinearMap for Sandwich<'_> {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.p.apply(&self.a.apply(&self.p.apply(x)))
    }
}

/// Lanczos-based MINRES recurrences; `lift` maps the inner iterate to the
/// solution of the original system.
fn minres_core(
    op: &dyn LinearMap,
    rhs: &[f64],
    lift: Option<&dyn LinearMap>,
    mut monitor: Monitor,
) -> SolveRecord {
    let n = rhs.len();
    let beta1 = linear::norm(rhs);
    if beta1 == 0.0 {
        return monitor.zero_rhs();
    }
    let sandwich_cost = if lift.is_some() { 2 } else { 0 };

    let mut v_prev = vec![0.0; n];
    let mut v = linear::scale(1.0 / beta1, rhs);
    let mut beta = 0.0;
    let (mut cs, mut sn) = (-1.0, 0.0);
    let (mut dbar, mut epsln) = (0.0, 0.0);
    let mut phibar = beta1;
    let mut anorm = 0.0_f64;
    let mut w_prev = vec![0.0; n];
    let mut w_prev2 = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut x = vec![0.0; n];

    for _ in 0..monitor.max_iter() {
        let mut p = op.apply(&v);
        monitor.operator_applications += 1;
        monitor.preconditioner_applications += sandwich_cost;
        let alpha = linear::dot(&v, &p);
        for i in 0..n {
            p[i] -= alpha * v[i] + beta * v_prev[i];
        }
        let beta_next = linear::norm(&p);
        anorm = anorm.max(alpha.hypot(beta).hypot(beta_next));

        let old_eps = epsln;
        let delta = cs * dbar + sn * alpha;
        let gbar = sn * dbar - cs * alpha;
        epsln = sn * beta_next;
        dbar = -cs * beta_next;
        let gamma = gbar.hypot(beta_next);
        let gamma_safe = if gamma == 0.0 { f64::MIN_POSITIVE } else { gamma };
        cs = gbar / gamma_safe;
        sn = beta_next / gamma_safe;
        let phi = cs * phibar;
        phibar *= sn;

        let w: Vec<f64> = (0..n)
            .map(|i| (v[i] - old_eps * w_prev2[i] - delta * w_prev[i]) / gamma_safe)
            .collect();
        linear::axpy(phi, &w, &mut z);
        w_prev2 = std::mem::replace(&mut w_prev, w);

        x = match lift {
            Some(l) => {
                monitor.preconditioner_applications += 1;
                l.apply(&z)
            }
            None => z.clone(),
        };
        if monitor.observe(&x, phibar.abs(), None) {
            return monitor.finish(x, StopReason::Discrepancy);
        }
        // Lanczos breakdown: the Krylov space is invariant and the solve is exact
        if beta_next <= BREAKDOWN_TOL * anorm {
            return monitor.finish(x, StopReason::Breakdown);
        }
        v_prev = std::mem::replace(&mut v, linear::scale(1.0 / beta_next, &p));
        beta = beta_next;
    }
    monitor.finish(x, StopReason::MaxIter)
}
