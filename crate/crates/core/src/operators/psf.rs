use crate::error::{Error, Result};

/// A compactly supported 2-D blur kernel.
///
/// `kernel[r * cols + c]` holds `h_{k,l}` with `k = r - center.0` and
/// `l = c - center.1`; the first offset runs along image rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Psf {
    kernel: Vec<f64>,
    rows: usize,
    cols: usize,
    center: (usize, usize),
    normalized: bool,
}

const NORMALIZATION_TOL: f64 = 1e-12;

impl Psf {
    pub fn new(kernel: Vec<f64>, rows: usize, cols: usize, center: (usize, usize)) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidPsf("empty kernel".into()));
        }
        if kernel.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, found: kernel.len() });
        }
        if center.0 >= rows || center.1 >= cols {
            return Err(Error::InvalidPsf(format!(
                "center {center:?} outside a {rows}x{cols} kernel"
            )));
        }
        if kernel.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPsf("non-finite kernel entry".into()));
        }
        let normalized = (kernel.iter().sum::<f64>() - 1.0).abs() <= NORMALIZATION_TOL;
        Ok(Self { kernel, rows, cols, center, normalized })
    }

    /// The identity kernel `h_{0,0} = 1`.
    pub fn delta() -> Self {
        Self { kernel: vec![1.0], rows: 1, cols: 1, center: (0, 0), normalized: true }
    }

    /// Builds a kernel from `((k, l), h_{k,l})` pairs; repeated offsets add up.
    pub fn from_offsets(entries: &[((i64, i64), f64)]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidPsf("no entries".into()));
        }
        let kmin = entries.iter().map(|e| e.0 .0).min().unwrap().min(0);
        let kmax = entries.iter().map(|e| e.0 .0).max().unwrap().max(0);
        let lmin = entries.iter().map(|e| e.0 .1).min().unwrap().min(0);
        let lmax = entries.iter().map(|e| e.0 .1).max().unwrap().max(0);
        let rows = (kmax - kmin + 1) as usize;
        let cols = (lmax - lmin + 1) as usize;
        let mut kernel = vec![0.0; rows * cols];
        for &((k, l), h) in entries {
            kernel[(k - kmin) as usize * cols + (l - lmin) as usize] += h;
        }
        Self::new(kernel, rows, cols, ((-kmin) as usize, (-lmin) as usize))
    }

    /// Rescales the entries to sum to one.
    pub fn normalize(mut self) -> Result<Self> {
        let s: f64 = self.kernel.iter().sum();
        if s.abs() < f64::MIN_POSITIVE || !s.is_finite() {
            return Err(Error::InvalidPsf("kernel sums to zero".into()));
        }
        for v in &mut self.kernel {
            *v /= s;
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn center(&self) -> (usize, usize) {
        self.center
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `h_{k,l}`, zero outside the stored support.
    pub fn get(&self, k: i64, l: i64) -> f64 {
        let r = k + self.center.0 as i64;
        let c = l + self.center.1 as i64;
        if r < 0 || c < 0 || r >= self.rows as i64 || c >= self.cols as i64 {
            0.0
        } else {
            self.kernel[r as usize * self.cols + c as usize]
        }
    }

    /// Iterates over `(k, l, h_{k,l})` for every stored entry, zeros included.
    pub fn offsets(&self) -> impl Iterator<Item = (i64, i64, f64)> + '_ {
        let (cr, cc) = (self.center.0 as i64, self.center.1 as i64);
        self.kernel.iter().enumerate().map(move |(idx, &h)| {
            let r = (idx / self.cols) as i64;
            let c = (idx % self.cols) as i64;
            (r - cr, c - cc, h)
        })
    }

    /// The PSF rotated by 180 degrees: `h'_{k,l} = h_{-k,-l}`.
    pub fn rotated(&self) -> Self {
        let mut kernel = self.kernel.clone();
        kernel.reverse();
        Self {
            kernel,
            rows: self.rows,
            cols: self.cols,
            center: (self.rows - 1 - self.center.0, self.cols - 1 - self.center.1),
            normalized: self.normalized,
        }
    }

    /// Symmetric in both the horizontal and the vertical direction.
    pub fn is_quadrantally_symmetric(&self, tol: f64) -> bool {
        self.offsets().all(|(k, l, h)| {
            (h - self.get(-k, l)).abs() <= tol && (h - self.get(k, -l)).abs() <= tol
        })
    }

    /// Every offset must satisfy `|k|, |l| <= n - 1`.
    pub fn check_fits(&self, n: usize) -> Result<()> {
        let (cr, cc) = self.center;
        let reach = cr.max(self.rows - 1 - cr).max(cc).max(self.cols - 1 - cc);
        if n == 0 || reach > n - 1 {
            Err(Error::SupportTooLarge { rows: self.rows, cols: self.cols, n })
        } else {
            Ok(())
        }
    }
}
