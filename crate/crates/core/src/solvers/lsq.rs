/// Incremental QR of an upper Hessenberg least-squares problem
/// `min || beta e_1 - H y ||` by Givens rotations.
#[derive(Debug, Default)]
pub(crate) struct HessenbergLsq {
    cs: Vec<f64>,
    sn: Vec<f64>,
    /// Columns of the triangular factor.
    r: Vec<Vec<f64>>,
    g: Vec<f64>,
}

impl HessenbergLsq {
    pub(crate) fn new(beta: f64) -> Self {
        Self { g: vec![beta], ..Default::default() }
    }

    /// Appends column `k` (length `k + 2`) and returns the new residual norm.
    pub(crate) fn push(&mut self, mut h: Vec<f64>) -> f64 {
        let k = self.r.len();
        debug_assert_eq!(h.len(), k + 2);
        for i in 0..k {
            let (a, b) = (h[i], h[i + 1]);
            h[i] = self.cs[i] * a + self.sn[i] * b;
            h[i + 1] = -self.sn[i] * a + self.cs[i] * b;
        }
        let (a, b) = (h[k], h[k + 1]);
        let rho = a.hypot(b);
        let (c, s) = if rho == 0.0 { (1.0, 0.0) } else { (a / rho, b / rho) };
        h[k] = rho;
        h.truncate(k + 1);
        self.cs.push(c);
        self.sn.push(s);
        self.r.push(h);
        let gk = self.g[k];
        self.g[k] = c * gk;
        self.g.push(-s * gk);
        self.g[k + 1].abs()
    }

    /// Back substitution for the current coefficients.
    pub(crate) fn solve(&self) -> Vec<f64> {
        let k = self.r.len();
        let mut y = self.g[..k].to_vec();
        for j in (0..k).rev() {
            let d = self.r[j][j];
            y[j] = if d.abs() > f64::MIN_POSITIVE { y[j] / d } else { 0.0 };
            let yj = y[j];
            for (i, yi) in y.iter_mut().enumerate().take(j) {
                *yi -= self.r[j][i] * yj;
            }
        }
        y
    }
}
