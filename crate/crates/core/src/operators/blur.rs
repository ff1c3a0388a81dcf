use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Psf;
use crate::error::{Error, Result};
use crate::fft::{fast_len, Fft2};
use crate::grid::ImageGrid;
use crate::linear::{self, LinearMap};

/// Largest image side accepted by [`materialize_dense`].
pub const DEFAULT_DENSE_CAP: usize = 64;

/// How pixel values outside the field of view are defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    /// Pixels outside the field of view are zero (BTTB matrix).
    Zero,
    /// The image repeats with period `n` (BCCB matrix).
    Periodic,
    /// Half-sample symmetric reflection: `x[-1] = x[0]`, `x[n] = x[n-1]`.
    Reflective,
}

impl BoundaryCondition {
    /// Maps an out-of-range index to a pixel index, or `None` for a zero pad.
    fn source(self, i: isize, n: usize) -> Option<usize> {
        let n = n as isize;
        match self {
            Self::Zero => (0..n).contains(&i).then_some(i as usize),
            Self::Periodic => Some(i.rem_euclid(n) as usize),
            Self::Reflective => {
                let m = i.rem_euclid(2 * n);
                Some(if m < n { m } else { 2 * n - 1 - m } as usize)
            }
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Zero => "zero",
            Self::Periodic => "periodic",
            Self::Reflective => "reflective",
        })
    }
}

impl std::str::FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zero" => Ok(Self::Zero),
            "periodic" => Ok(Self::Periodic),
            "reflective" | "reflexive" => Ok(Self::Reflective),
            other => Err(Error::InvalidParameter(format!("unknown boundary condition `{other}`"))),
        }
    }
}

/// Padded FFT convolution for one kernel under one boundary condition.
#[derive(Clone)]
struct ConvPlan {
    n: usize,
    bc: BoundaryCondition,
    top: usize,
    left: usize,
    ext_rows: usize,
    ext_cols: usize,
    padded_cols: usize,
    fft: Fft2,
    kernel_hat: Vec<Complex64>,
}

impl ConvPlan {
    fn new(psf: &Psf, bc: BoundaryCondition, n: usize) -> Self {
        let (cr, cc) = psf.center();
        let ext_rows = n + psf.rows() - 1;
        let ext_cols = n + psf.cols() - 1;
        let (mr, mc) = (fast_len(ext_rows), fast_len(ext_cols));
        let fft = Fft2::new(mr, mc);
        let mut kernel_hat = vec![Complex64::new(0.0, 0.0); mr * mc];
        for (k, l, h) in psf.offsets() {
            let r = k.rem_euclid(mr as i64) as usize;
            let c = l.rem_euclid(mc as i64) as usize;
            kernel_hat[r * mc + c] += h;
        }
        fft.forward(&mut kernel_hat);
        let scale = 1.0 / (mr * mc) as f64;
        for v in &mut kernel_hat {
            *v *= scale;
        }
        Self {
            n,
            bc,
            top: psf.rows() - 1 - cr,
            left: psf.cols() - 1 - cc,
            ext_rows,
            ext_cols,
            padded_cols: mc,
            fft,
            kernel_hat,
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mc = self.padded_cols;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.kernel_hat.len()];
        let cols: Vec<Option<usize>> = (0..self.ext_cols)
            .map(|v| self.bc.source(v as isize - self.left as isize, n))
            .collect();
        for u in 0..self.ext_rows {
            let Some(r) = self.bc.source(u as isize - self.top as isize, n) else {
                continue;
            };
            let row = &x[r * n..(r + 1) * n];
            let dst = &mut buf[u * mc..u * mc + self.ext_cols];
            for (d, src) in dst.iter_mut().zip(&cols) {
                if let Some(c) = src {
                    d.re = row[*c];
                }
            }
        }
        self.fft.forward(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *b *= k;
        }
        self.fft.inverse(&mut buf);

        let mut out = Vec::with_capacity(n * n);
        let mut residue = 0.0f64;
        for r in 0..n {
            let base = (self.top + r) * mc + self.left;
            for v in &buf[base..base + n] {
                residue = residue.max(v.im.abs());
                out.push(v.re);
            }
        }
        debug_assert!(
            residue <= 1e-10 * linear::norm(x).max(f64::MIN_POSITIVE),
            "imaginary residue {residue:e} after FFT convolution"
        );
        out
    }
}

/// Spatially invariant blur with boundary conditions.
///
/// `apply` computes `b[r,c] = sum_{k,l} h_{k,l} x[r-k, c-l]` on the field of
/// view, with `x` extended by the boundary condition. `apply_adjoint` uses the
/// PSF rotated by 180 degrees under the same boundary condition (the operator
/// `A'`); it coincides with `A^T` for zero and periodic boundary conditions
/// only.
#[derive(Clone)]
pub struct BlurOperator {
    psf: Psf,
    bc: BoundaryCondition,
    n: usize,
    forward: ConvPlan,
    adjoint: ConvPlan,
}

impl fmt::Debug for BlurOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlurOperator")
            .field("psf", &(self.psf.rows(), self.psf.cols(), self.psf.center()))
            .field("bc", &self.bc)
            .field("n", &self.n)
            .finish()
    }
}

impl BlurOperator {
    pub fn new(psf: Psf, bc: BoundaryCondition, n: usize) -> Result<Self> {
        psf.check_fits(n)?;
        let forward = ConvPlan::new(&psf, bc, n);
        let adjoint = ConvPlan::new(&psf.rotated(), bc, n);
        Ok(Self { psf, bc, n, forward, adjoint })
    }

    pub fn psf(&self) -> &Psf {
        &self.psf
    }

    pub fn boundary(&self) -> BoundaryCondition {
        self.bc
    }

    /// Image side length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply_blur(&self, x: &ImageGrid) -> Result<ImageGrid> {
        self.check(x.n())?;
        ImageGrid::new(self.n, self.forward.apply(x.pixels()))
    }

    pub fn apply_adjoint_image(&self, y: &ImageGrid) -> Result<ImageGrid> {
        self.check(y.n())?;
        ImageGrid::new(self.n, self.adjoint.apply(y.pixels()))
    }

    /// Forward product on a stacked vector.
    pub fn blur(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        Ok(self.forward.apply(x))
    }

    /// Rotated-PSF product on a stacked vector.
    pub fn reblur(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(y.len())?;
        Ok(self.adjoint.apply(y))
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::Dimension { expected: self.n, found: n });
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n * self.n {
            return Err(Error::Dimension { expected: self.n * self.n, found: len });
        }
        Ok(())
    }
}

impl LinearMap for BlurOperator {
    fn dim(&self) -> usize {
        self.n * self.n
    }

    /// # Panics
    /// If `x.len() != n^2`.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.blur(x).expect("blur operator applied to a vector of the wrong size")
    }

    fn apply_adjoint(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(self.reblur(x).expect("blur operator applied to a vector of the wrong size"))
    }
}

/// Reverses the entry order: the anti-identity `Y` applied to `x`.
pub fn apply_flip(x: &[f64]) -> Vec<f64> {
    x.iter().rev().copied().collect()
}

/// The map `Y M`. Its adjoint is `M^T Y`.
#[derive(Debug, Clone)]
pub struct Flipped<M>(pub M);

impl<M: LinearMap> LinearMap for Flipped<M> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.0.apply(x);
        y.reverse();
        y
    }

    fn apply_adjoint(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.0.apply_adjoint(&apply_flip(x))
    }
}

/// Dense `n^2 x n^2` matrix of the operator, refusing `n > DEFAULT_DENSE_CAP`.
pub fn materialize_dense(op: &BlurOperator) -> Result<DMatrix<f64>> {
    materialize_dense_with_cap(op, DEFAULT_DENSE_CAP)
}

pub fn materialize_dense_with_cap(op: &BlurOperator, cap: usize) -> Result<DMatrix<f64>> {
    if op.n() > cap {
        return Err(Error::DenseCapExceeded { n: op.n(), cap });
    }
    Ok(linear::to_dense(op))
}
