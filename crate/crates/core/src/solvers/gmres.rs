use super::lsq::HessenbergLsq;
use super::{
    check_map, check_system, combine, orthogonalize, FlexiblePreconditioner, Monitor,
    SolveOptions, SolveRecord, StopReason, BREAKDOWN_TOL,
};
use crate::error::Result;
use crate::linear::{self, LinearMap};

/// Full GMRES, optionally right-preconditioned (`A P z = b`, `x = P z`).
pub fn gmres(
    a: &dyn LinearMap,
    b: &[f64],
    right: Option<&dyn LinearMap>,
    opts: &SolveOptions,
) -> Result<SolveRecord> {
    check_system(a, b)?;
    if let Some(p) = right {
        check_map(p, b.len())?;
    }
    let n = b.len();
    let mut monitor = Monitor::new(a, b, opts)?;
    let beta = linear::norm(b);
    if beta == 0.0 {
        return Ok(monitor.zero_rhs());
    }
    let mut basis = vec![linear::scale(1.0 / beta, b)];
    let mut lsq = HessenbergLsq::new(beta);
    let mut x = vec![0.0; n];

    for k in 0..monitor.max_iter() {
        let z = match right {
            Some(p) => {
                monitor.preconditioner_applications += 1;
                p.apply(&basis[k])
            }
            None => basis[k].clone(),
        };
        let mut w = a.apply(&z);
        monitor.operator_applications += 1;
        let scale = linear::norm(&w);
        let mut h = orthogonalize(&basis, &mut w);
        let h_next = linear::norm(&w);
        h.push(h_next);
        let projected = lsq.push(h);

        let y = lsq.solve();
        let u = combine(&basis, &y, n);
        x = match right {
            Some(p) => {
                monitor.preconditioner_applications += 1;
                p.apply(&u)
            }
            None => u,
        };
        if monitor.observe(&x, projected, None) {
            return Ok(monitor.finish(x, StopReason::Discrepancy));
        }
        if h_next <= BREAKDOWN_TOL * scale {
            return Ok(monitor.finish(x, StopReason::Breakdown));
        }
        basis.push(linear::scale(1.0 / h_next, &w));
    }
    Ok(monitor.finish(x, StopReason::MaxIter))
}

/// Flexible GMRES: the preconditioner may change at every iteration and the
/// preconditioned directions `z_k = P_k v_k` span the solution space.
pub fn fgmres(
    a: &dyn LinearMap,
    b: &[f64],
    prec: &mut dyn FlexiblePreconditioner,
    opts: &SolveOptions,
) -> Result<SolveRecord> {
    check_system(a, b)?;
    let n = b.len();
    let mut monitor = Monitor::new(a, b, opts)?;
    let beta = linear::norm(b);
    if beta == 0.0 {
        return Ok(monitor.zero_rhs());
    }
    let mut basis = vec![linear::scale(1.0 / beta, b)];
    let mut directions: Vec<Vec<f64>> = Vec::new();
    let mut lsq = HessenbergLsq::new(beta);
    let mut x = vec![0.0; n];

    for k in 0..monitor.max_iter() {
        let p = prec.at(k, &x)?;
        check_map(p.as_ref(), n)?;
        let z = p.apply(&basis[k]);
        monitor.preconditioner_applications += 1;
        if linear::norm(&z) <= BREAKDOWN_TOL {
            monitor.skipped.push(k);
            return Ok(monitor.finish(x, StopReason::Breakdown));
        }
        let mut w = a.apply(&z);
        monitor.operator_applications += 1;
        directions.push(z);
        let scale = linear::norm(&w);
        let mut h = orthogonalize(&basis, &mut w);
        let h_next = linear::norm(&w);
        h.push(h_next);
        let projected = lsq.push(h);

        x = combine(&directions, &lsq.solve(), n);
        if monitor.observe(&x, projected, prec.alpha(k)) {
            return Ok(monitor.finish(x, StopReason::Discrepancy));
        }
        if h_next <= BREAKDOWN_TOL * scale {
            return Ok(monitor.finish(x, StopReason::Breakdown));
        }
        basis.push(linear::scale(1.0 / h_next, &w));
    }
    Ok(monitor.finish(x, StopReason::MaxIter))
}
