use super::lsq::HessenbergLsq;
use super::{
    adjoint, check_map, check_system, combine, orthogonalize, FlexiblePreconditioner, Monitor,
    SolveOptions, SolveRecord, StopReason, BREAKDOWN_TOL,
};
use crate::error::Result;
use crate::linear::{self, LinearMap};

/// LSQR on `min ||b - A P z||`, `x = P z`, without reorthogonalization.
///
/// `A` must provide its adjoint, and so must `P` when given.
pub fn lsqr(
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
    let beta1 = linear::norm(b);
    if beta1 == 0.0 {
        return Ok(monitor.zero_rhs());
    }

    // products with A P and (A P)^T
    let forward = |v: &[f64], m: &mut Monitor| -> Vec<f64> {
        m.operator_applications += 1;
        match right {
            Some(p) => {
                m.preconditioner_applications += 1;
                a.apply(&p.apply(v))
            }
            None => a.apply(v),
        }
    };
    let backward = |u: &[f64], m: &mut Monitor| -> Result<Vec<f64>> {
        m.operator_applications += 1;
        let t = adjoint(a, u)?;
        match right {
            Some(p) => {
                m.preconditioner_applications += 1;
                adjoint(p, &t)
            }
            None => Ok(t),
        }
    };

    let mut u = linear::scale(1.0 / beta1, b);
    let mut v = backward(&u, &mut monitor)?;
    let mut alpha = linear::norm(&v);
    if alpha == 0.0 {
        return Ok(monitor.finish(vec![0.0; n], StopReason::Breakdown));
    }
    v = linear::scale(1.0 / alpha, &v);
    let mut w = v.clone();
    let mut z = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut phibar = beta1;
    let mut rhobar = alpha;

    for _ in 0..monitor.max_iter() {
        let mut t = forward(&v, &mut monitor);
        let scale_u = linear::norm(&t);
        linear::axpy(-alpha, &u, &mut t);
        let beta = linear::norm(&t);
        let solved = beta <= BREAKDOWN_TOL * scale_u;
        if !solved {
            u = linear::scale(1.0 / beta, &t);
        }

        let rho = rhobar.hypot(beta);
        let c = rhobar / rho;
        let s = beta / rho;
        let phi = c * phibar;
        phibar *= s;

        let mut stalled = solved;
        let mut theta = 0.0;
        let mut v_next = v.clone();
        if !solved {
            let mut s_vec = backward(&u, &mut monitor)?;
            let scale_v = linear::norm(&s_vec);
            linear::axpy(-beta, &v, &mut s_vec);
            alpha = linear::norm(&s_vec);
            if alpha <= BREAKDOWN_TOL * scale_v {
                stalled = true;
            } else {
                v_next = linear::scale(1.0 / alpha, &s_vec);
                theta = s * alpha;
                rhobar = -c * alpha;
            }
        }

        linear::axpy(phi / rho, &w, &mut z);
        x = match right {
            Some(p) => {
                monitor.preconditioner_applications += 1;
                p.apply(&z)
            }
            None => z.clone(),
        };
        if monitor.observe(&x, phibar.abs(), None) {
            return Ok(monitor.finish(x, StopReason::Discrepancy));
        }
        if stalled {
            return Ok(monitor.finish(x, StopReason::Breakdown));
        }
        for (wi, vi) in w.iter_mut().zip(&v_next) {
            *wi = vi - (theta / rho) * *wi;
        }
        v = v_next;
    }
    Ok(monitor.finish(x, StopReason::MaxIter))
}

/// Flexible LSQR built on the flexible Golub-Kahan decomposition
/// `A Z_k = U_{k+1} M_k`, `A^T U_k = V_k T_k`, with `z_k = P_k v_k`.
///
/// Both bases are fully orthogonalized.
pub fn flsqr(
    a: &dyn LinearMap,
    b: &[f64],
    prec: &mut dyn FlexiblePreconditioner,
    opts: &SolveOptions,
) -> Result<SolveRecord> {
    check_system(a, b)?;
    let n = b.len();
    let mut monitor = Monitor::new(a, b, opts)?;
    let beta1 = linear::norm(b);
    if beta1 == 0.0 {
        return Ok(monitor.zero_rhs());
    }

    let mut us = vec![linear::scale(1.0 / beta1, b)];
    let s = adjoint(a, &us[0])?;
    monitor.operator_applications += 1;
    let s_norm = linear::norm(&s);
    if s_norm == 0.0 {
        return Ok(monitor.finish(vec![0.0; n], StopReason::Breakdown));
    }
    let mut vs = vec![linear::scale(1.0 / s_norm, &s)];
    let mut directions: Vec<Vec<f64>> = Vec::new();
    let mut lsq = HessenbergLsq::new(beta1);
    let mut x = vec![0.0; n];

    for k in 0..monitor.max_iter() {
        let p = prec.at(k, &x)?;
        check_map(p.as_ref(), n)?;
        let z = p.apply(&vs[k]);
        monitor.preconditioner_applications += 1;
        if linear::norm(&z) <= BREAKDOWN_TOL {
            monitor.skipped.push(k);
            return Ok(monitor.finish(x, StopReason::Breakdown));
        }
        let mut w = a.apply(&z);
        monitor.operator_applications += 1;
        directions.push(z);
        let scale_u = linear::norm(&w);
        let mut m = orthogonalize(&us, &mut w);
        let m_next = linear::norm(&w);
        m.push(m_next);
        let projected = lsq.push(m);

        x = combine(&directions, &lsq.solve(), n);
        if monitor.observe(&x, projected, prec.alpha(k)) {
            return Ok(monitor.finish(x, StopReason::Discrepancy));
        }
        if m_next <= BREAKDOWN_TOL * scale_u {
            return Ok(monitor.finish(x, StopReason::Breakdown));
        }
        us.push(linear::scale(1.0 / m_next, &w));

        if k + 1 == monitor.max_iter() {
            break;
        }
        let mut s = adjoint(a, &us[k + 1])?;
        monitor.operator_applications += 1;
        let scale_v = linear::norm(&s);
        orthogonalize(&vs, &mut s);
        let t = linear::norm(&s);
        if t <= BREAKDOWN_TOL * scale_v {
            return Ok(monitor.finish(x, StopReason::Breakdown));
        }
        vs.push(linear::scale(1.0 / t, &s));
    }
    Ok(monitor.finish(x, StopReason::MaxIter))
}
