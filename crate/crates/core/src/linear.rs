//! The `LinearMap` abstraction shared by operators, preconditioners and solvers.
//!
//! Vectors are plain `f64` slices of length `dim()`; images are stacked row by
//! row (see [`crate::problems::ImageGrid`]).

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

/// A real linear map on `R^dim`, optionally with an adjoint.
///
/// For blur operators under reflective boundary conditions the "adjoint" is
/// the rotated-PSF operator `A'`, which is not the exact transpose.
pub trait LinearMap {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[f64]) -> Vec<f64>;

    /// Returns `None` when the map has no adjoint.
    fn apply_adjoint(&self, x: &[f64]) -> Option<Vec<f64>> {
        let _ = x;
        None
    }
}

impl<T: LinearMap + ?Sized> LinearMap for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (**self).apply(x)
    }
    fn apply_adjoint(&self, x: &[f64]) -> Option<Vec<f64>> {
        (**self).apply_adjoint(x)
    }
}

impl<T: LinearMap + ?Sized> LinearMap for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (**self).apply(x)
    }
    fn apply_adjoint(&self, x: &[f64]) -> Option<Vec<f64>> {
        (**self).apply_adjoint(x)
    }
}

impl<T: LinearMap + ?Sized> LinearMap for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (**self).apply(x)
    }
    fn apply_adjoint(&self, x: &[f64]) -> Option<Vec<f64>> {
        (**self).apply_adjoint(x)
    }
}

/// Dense square matrices act as linear maps with the exact transpose as adjoint.
impl LinearMap for DMatrix<f64> {
    fn dim(&self) -> usize {
        assert_eq!(self.nrows(), self.ncols(), "dense linear map must be square");
        self.nrows()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (self * DVector::from_column_slice(x)).data.into()
    }
    fn apply_adjoint(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some((self.tr_mul(&DVector::from_column_slice(x))).data.into())
    }
}

/// The identity map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Identity(pub usize);

impl LinearMap for Identity {
    fn dim(&self) -> usize {
        self.0
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }
    fn apply_adjoint(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(x.to_vec())
    }
}

/// Materializes `map` column by column.
pub fn to_dense<M: LinearMap + ?Sized>(map: &M) -> DMatrix<f64> {
    let n = map.dim();
    let mut out = DMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = map.apply(&e);
        out.column_mut(j).copy_from_slice(&col);
        e[j] = 0.0;
    }
    out
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn scale(alpha: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|xi| alpha * xi).collect()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
