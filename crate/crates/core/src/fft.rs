//! Two-dimensional complex FFTs on row-major grids.
//!
//! Plans come from a process-wide planner guarded by a mutex, so building
//! operators repeatedly (one circulant per iteration in the flexible
//! solvers) reuses cached plans.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

/// Unnormalized 2-D transform pair for a `rows x cols` grid.
#[derive(Clone)]
pub(crate) struct Fft2 {
    rows: usize,
    cols: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .finish()
    }
}

impl Fft2 {
    pub(crate) fn new(rows: usize, cols: usize) -> Self {
        let mut p = planner().lock().unwrap_or_else(|e| e.into_inner());
        Self {
            rows,
            cols,
            row_fwd: p.plan_fft_forward(cols),
            row_inv: p.plan_fft_inverse(cols),
            col_fwd: p.plan_fft_forward(rows),
            col_inv: p.plan_fft_inverse(rows),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.rows * self.cols
    }

    /// `X[i,j] = sum x[r,c] exp(-2 pi i (r i / rows + c j / cols))`.
    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.row_fwd, &self.col_fwd);
    }

    /// Same as [`Fft2::forward`] with the opposite exponent sign, unscaled.
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.row_inv, &self.col_inv);
    }

    fn run(&self, data: &mut [Complex64], rows: &Arc<dyn Fft<f64>>, cols: &Arc<dyn Fft<f64>>) {
        assert_eq!(data.len(), self.len());
        rows.process(data);
        let mut t = transpose(data, self.rows, self.cols);
        cols.process(&mut t);
        let back = transpose(&t, self.cols, self.rows);
        data.copy_from_slice(&back);
    }
}

fn transpose(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = data[r * cols + c];
        }
    }
    out
}

/// Smallest integer `>= m` whose only prime factors are 2, 3 and 5.
pub(crate) fn fast_len(m: usize) -> usize {
    let mut k = m.max(1);
    loop {
        let mut r = k;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return k;
        }
        k += 1;
    }
}
