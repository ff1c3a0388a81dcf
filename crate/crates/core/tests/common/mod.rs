//! Reference implementations used as test oracles.
#![allow(dead_code)]

use deblur_core::linear::to_dense;
use deblur_core::LinearMap;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let s = 1.0 / (n as f64).sqrt();
    DMatrix::from_fn(n, n, |_, _| { let z: f64 = StandardNormal.sample(rng); s * z })
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = random_matrix(rng, n);
    (&m + m.transpose()) * 0.5
}

pub fn dense<M: LinearMap + ?Sized>(m: &M) -> DMatrix<f64> {
    to_dense(m)
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Orthonormal bases of `K_k(op, start)` for `k = 1..=steps`, by classical
/// Gram-Schmidt applied twice. Stops early when the space becomes invariant.
pub fn krylov_basis(op: &DMatrix<f64>, start: &DVector<f64>, steps: usize) -> Vec<DVector<f64>> {
    let mut basis: Vec<DVector<f64>> = vec![start / start.norm()];
    while basis.len() < steps {
        let mut w = op * basis.last().unwrap();
        let scale = w.norm();
        for _ in 0..2 {
            let coeffs: Vec<f64> = basis.iter().map(|q| q.dot(&w)).collect();
            for (q, c) in basis.iter().zip(coeffs) {
                w -= q * c;
            }
        }
        if w.norm() <= 1e-13 * scale {
            break;
        }
        let nw = w.norm();
        basis.push(w / nw);
    }
    basis
}

/// Least-squares `min || b - M Q y ||`; returns `Q y`.
fn project_solve(m: &DMatrix<f64>, q: &[DVector<f64>], b: &DVector<f64>) -> DVector<f64> {
    let qm = DMatrix::from_columns(q);
    let mq = m * &qm;
    let y = mq.svd(true, true).solve(b, 1e-300).unwrap();
    qm * y
}

/// Iterates minimizing `||b - A x||` over `x in P K_k(A P, b)`; exact-arithmetic
/// GMRES (and MINRES for symmetric `A`, `P = I`).
pub fn residual_minimizing_iterates(
    a: &DMatrix<f64>,
    b: &[f64],
    p: Option<&DMatrix<f64>>,
    steps: usize,
) -> Vec<Vec<f64>> {
    let n = b.len();
    let p = p.cloned().unwrap_or_else(|| DMatrix::identity(n, n));
    let ap = a * &p;
    let bv = DVector::from_column_slice(b);
    let basis = krylov_basis(&ap, &bv, steps);
    (1..=basis.len())
        .map(|k| (&p * project_solve(&ap, &basis[..k], &bv)).as_slice().to_vec())
        .collect()
}

/// Iterates of exact-arithmetic LSQR with right preconditioner `L`:
/// `x = L z`, `z` minimizing `||b - A L z||` over `K_k((AL)^T AL, (AL)^T b)`.
pub fn lsqr_iterates(a: &DMatrix<f64>, b: &[f64], l: Option<&DMatrix<f64>>, steps: usize) -> Vec<Vec<f64>> {
    let n = b.len();
    let l = l.cloned().unwrap_or_else(|| DMatrix::identity(n, n));
    let al = a * &l;
    let normal = al.transpose() * &al;
    let bv = DVector::from_column_slice(b);
    let start = al.transpose() * &bv;
    let basis = krylov_basis(&normal, &start, steps);
    (1..=basis.len())
        .map(|k| (&l * project_solve(&al, &basis[..k], &bv)).as_slice().to_vec())
        .collect()
}

/// Iterates minimizing `||b - A x||` over `K_k(P A^T A, P A^T b)`.
pub fn flexible_lsqr_iterates(a: &DMatrix<f64>, b: &[f64], p: &DMatrix<f64>, steps: usize) -> Vec<Vec<f64>> {
    let bv = DVector::from_column_slice(b);
    let op = p * a.transpose() * a;
    let start = p * a.transpose() * &bv;
    let basis = krylov_basis(&op, &start, steps);
    (1..=basis.len())
        .map(|k| project_solve(a, &basis[..k], &bv).as_slice().to_vec())
        .collect()
}

/// Textbook CGLS (conjugate gradients on the normal equations).
pub fn cgls_iterates(a: &DMatrix<f64>, b: &[f64], steps: usize) -> Vec<Vec<f64>> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut r = DVector::from_column_slice(b);
    let mut s = a.transpose() * &r;
    let mut p = s.clone();
    let mut gamma = s.norm_squared();
    let mut out = Vec::new();
    for _ in 0..steps {
        let q = a * &p;
        let alpha = gamma / q.norm_squared();
        x += &p * alpha;
        r -= &q * alpha;
        s = a.transpose() * &r;
        let gamma_new = s.norm_squared();
        out.push(x.as_slice().to_vec());
        if gamma_new == 0.0 {
            break;
        }
        p = &s + &p * (gamma_new / gamma);
        gamma = gamma_new;
    }
    out
}

pub fn residual(a: &DMatrix<f64>, b: &[f64], x: &[f64]) -> f64 {
    (DVector::from_column_slice(b) - a * DVector::from_column_slice(x)).norm()
}

/// Symmetric square root of a symmetric PSD matrix.
pub fn sqrtm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let e = m.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|l| l.max(0.0).sqrt()));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}
