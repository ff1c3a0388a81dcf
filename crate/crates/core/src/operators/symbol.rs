use std::f64::consts::PI;

use num_complex::Complex64;

use super::Psf;
use crate::error::{Error, Result};
use crate::fft::Fft2;

/// Samples of the generating function on the uniform `n x n` frequency grid.
///
/// Entry `(i, j)` is `f(2 pi i / n, 2 pi j / n)`, which is also the eigenvalue
/// of the BCCB matrix `C_n(f)` belonging to the Fourier vector
/// `u[r, c] = exp(-2 pi i (r i + c j) / n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    n: usize,
    values: Vec<Complex64>,
}

impl SymbolGrid {
    pub fn new(n: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Dimension { expected: n * n, found: values.len() });
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.n + j]
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Evaluates the generating function by direct summation over the PSF support.
pub fn sample_symbol(psf: &Psf, n: usize) -> Result<SymbolGrid> {
    check_size(psf, n)?;
    // Phases are looked up by exact integer residues, so no argument reduction
    // error accumulates for large offsets.
    let roots: Vec<Complex64> = (0..n)
        .map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64))
        .collect();
    let terms: Vec<(usize, usize, f64)> = psf
        .offsets()
        .filter(|t| t.2 != 0.0)
        .map(|(k, l, h)| (k.rem_euclid(n as i64) as usize, l.rem_euclid(n as i64) as usize, h))
        .collect();
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(k, l, h) in &terms {
                acc += roots[(k * i + l * j) % n] * h;
            }
            values.push(acc);
        }
    }
    SymbolGrid::new(n, values)
}

/// Eigenvalues of `C_n(f)` from a 2-D DFT of its first column, i.e. of the
/// PSF wrapped circularly onto the `n x n` grid.
pub fn bccb_eigenvalues(psf: &Psf, n: usize) -> Result<SymbolGrid> {
    check_size(psf, n)?;
    let mut col = vec![Complex64::new(0.0, 0.0); n * n];
    for (k, l, h) in psf.offsets() {
        let r = k.rem_euclid(n as i64) as usize;
        let c = l.rem_euclid(n as i64) as usize;
        col[r * n + c] += h;
    }
    Fft2::new(n, n).inverse(&mut col);
    SymbolGrid::new(n, col)
}

fn check_size(psf: &Psf, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("grid size must be positive".into()));
    }
    psf.check_fits(n)
}
