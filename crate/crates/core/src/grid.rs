use crate::error::{Error, Result};

/// An `n x n` real image stored row-major.
///
/// The stacked vector of length `n^2` is the row-major pixel buffer, which is
/// the ordering every operator and the anti-identity flip act on.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageGrid {
    n: usize,
    pixels: Vec<f64>,
}

impl ImageGrid {
    pub fn new(n: usize, pixels: Vec<f64>) -> Result<Self> {
        if pixels.len() != n * n {
            return Err(Error::Dimension { expected: n * n, found: pixels.len() });
        }
        if pixels.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter("image contains non-finite pixels".into()));
        }
        Ok(Self { n, pixels })
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, pixels: vec![0.0; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut pixels = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                pixels.push(f(r, c));
            }
        }
        Self { n, pixels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.pixels[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.pixels[r * self.n + c] = v;
    }

    pub fn max(&self) -> f64 {
        self.pixels.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.pixels.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn norm(&self) -> f64 {
        crate::linear::norm(&self.pixels)
    }
}
