//! Test-problem construction: PSF generators, synthetic images, the noise
//! model and reconstruction quality metrics.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linear;
use crate::operators::{BlurOperator, BoundaryCondition, Psf};

mod experiment;

pub use experiment::{run_method, MethodParams, MethodSpec, SolverKind};

pub use crate::grid::ImageGrid;

/// Normalized truncated Gaussian on a `support x support` grid, centered.
pub fn make_gaussian_psf(support: usize, std: f64) -> Result<Psf> {
    if support == 0 || support % 2 == 0 {
        return Err(Error::InvalidParameter(format!("Gaussian support must be odd, got {support}")));
    }
    if !(std.is_finite() && std > 0.0) {
        return Err(Error::InvalidParameter(format!("Gaussian std must be positive, got {std}")));
    }
    let half = (support / 2) as f64;
    let mut kernel = Vec::with_capacity(support * support);
    for r in 0..support {
        for c in 0..support {
            let (y, x) = (r as f64 - half, c as f64 - half);
            kernel.push((-(x * x + y * y) / (2.0 * std * std)).exp());
        }
    }
    Psf::new(kernel, support, support, (support / 2, support / 2))?.normalize()
}

fn motion_offsets(length: usize, angle_deg: f64) -> Vec<((i64, i64), f64)> {
    let (s, c) = angle_deg.to_radians().sin_cos();
    (0..length)
        .map(|t| {
            let t = t as f64;
            // Rows grow downwards, so a positive angle moves up the image.
            (((-t * s).round() as i64, (t * c).round() as i64), 1.0)
        })
        .collect()
}

/// Unidirectional motion blur: `length` samples along a ray from the center
/// pixel at `angle_deg` (counter-clockwise from the column axis), rasterized
/// to the nearest pixel centers. The ray is one-sided, so the PSF is not
/// centrally symmetric for `length > 1`.
pub fn make_motion_psf(length: usize, angle_deg: f64) -> Result<Psf> {
    if length == 0 {
        return Err(Error::InvalidParameter("motion length must be at least 1".into()));
    }
    Psf::from_offsets(&motion_offsets(length, angle_deg))?.normalize()
}

/// Motion in two directions: normalized sum of two unidirectional kernels.
pub fn make_two_direction_motion_psf(length: usize, angle1: f64, angle2: f64) -> Result<Psf> {
    if length == 0 {
        return Err(Error::InvalidParameter("motion length must be at least 1".into()));
    }
    let mut offsets = motion_offsets(length, angle1);
    offsets.extend(motion_offsets(length, angle2));
    Psf::from_offsets(&offsets)?.normalize()
}

/// A blurred, noisy observation `b = A x + xi / ||xi|| * sigma * ||A x||`.
#[derive(Debug, Clone)]
pub struct NoisyProblem {
    pub operator: BlurOperator,
    pub b: ImageGrid,
    pub sigma: f64,
    /// `sigma * ||A x_true||`, the exact norm of the added noise.
    pub noise_norm: f64,
    pub x_true: Option<ImageGrid>,
    pub seed: u64,
}

pub fn make_problem(
    x_true: &ImageGrid,
    psf: Psf,
    bc: BoundaryCondition,
    sigma: f64,
    seed: u64,
) -> Result<NoisyProblem> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!("noise level must be nonnegative, got {sigma}")));
    }
    let n = x_true.n();
    let operator = BlurOperator::new(psf, bc, n)?;
    let ax = operator.blur(x_true.pixels())?;
    let ax_norm = linear::norm(&ax);
    let noise_norm = sigma * ax_norm;
    let b = if sigma == 0.0 {
        ax
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xi: Vec<f64> = (0..n * n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let scale = noise_norm / linear::norm(&xi);
        ax.iter().zip(&xi).map(|(a, e)| a + e * scale).collect()
    };
    Ok(NoisyProblem {
        operator,
        b: ImageGrid::new(n, b)?,
        sigma,
        noise_norm,
        x_true: Some(x_true.clone()),
        seed,
    })
}

fn check_sizes(x: &[f64], x_true: &[f64]) -> Result<()> {
    if x.len() != x_true.len() {
        return Err(Error::Dimension { expected: x_true.len(), found: x.len() });
    }
    Ok(())
}

/// Relative restoration error `||x - x_true|| / ||x_true||`.
pub fn rre(x: &[f64], x_true: &[f64]) -> Result<f64> {
    check_sizes(x, x_true)?;
    let t = linear::norm(x_true);
    if t == 0.0 {
        return Err(Error::ZeroTruth);
    }
    Ok(linear::norm(&linear::sub(x, x_true)) / t)
}

/// Peak signal-to-noise ratio in dB with the peak taken as `max(x_true)`.
pub fn psnr(x: &[f64], x_true: &[f64]) -> Result<f64> {
    check_sizes(x, x_true)?;
    let err2: f64 = x.iter().zip(x_true).map(|(a, b)| (a - b) * (a - b)).sum();
    if err2 == 0.0 {
        return Err(Error::InfinitePsnr);
    }
    let peak = x_true.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(10.0 * (peak * peak * x_true.len() as f64 / err2).log10())
}

/// Modified Shepp-Logan phantom with intensities in `[0, 1]`.
pub fn phantom(n: usize) -> ImageGrid {
    // (intensity, semi-axis a, semi-axis b, x0, y0, rotation in degrees)
    const ELLIPSES: [(f64, f64, f64, f64, f64, f64); 10] = [
        (1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
        (-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0),
        (-0.2, 0.11, 0.31, 0.22, 0.0, -18.0),
        (-0.2, 0.16, 0.41, -0.22, 0.0, 18.0),
        (0.1, 0.21, 0.25, 0.0, 0.35, 0.0),
        (0.1, 0.046, 0.046, 0.0, 0.1, 0.0),
        (0.1, 0.046, 0.046, 0.0, -0.1, 0.0),
        (0.1, 0.046, 0.023, -0.08, -0.605, 0.0),
        (0.1, 0.023, 0.023, 0.0, -0.606, 0.0),
        (0.1, 0.023, 0.046, 0.06, -0.605, 0.0),
    ];
    ImageGrid::from_fn(n, |r, c| {
        let x = (2 * c + 1) as f64 / n as f64 - 1.0;
        let y = 1.0 - (2 * r + 1) as f64 / n as f64;
        let v: f64 = ELLIPSES
            .iter()
            .filter(|(_, a, b, x0, y0, phi)| {
                let (s, co) = phi.to_radians().sin_cos();
                let (dx, dy) = (x - x0, y - y0);
                let u = dx * co + dy * s;
                let w = -dx * s + dy * co;
                (u / a).powi(2) + (w / b).powi(2) <= 1.0
            })
            .map(|e| e.0)
            .sum();
        v.clamp(0.0, 1.0)
    })
}

/// Sparse image: one-pixel outlines of a disk, a rectangle and a triangle.
pub fn edges(n: usize) -> ImageGrid {
    let s = n as f64;
    let mut img = ImageGrid::zeros(n);
    let mut plot = |x: f64, y: f64, v: f64| {
        let (r, c) = (y.round(), x.round());
        if r >= 0.0 && c >= 0.0 && (r as usize) < n && (c as usize) < n {
            img.set(r as usize, c as usize, v);
        }
    };
    let segment = |plot: &mut dyn FnMut(f64, f64, f64), a: (f64, f64), b: (f64, f64), v: f64| {
        let steps = ((b.0 - a.0).abs().max((b.1 - a.1).abs()) * 2.0).ceil().max(1.0) as usize;
        for t in 0..=steps {
            let t = t as f64 / steps as f64;
            plot(a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1), v);
        }
    };
    // circle
    let (cx, cy, rad) = (0.3 * s, 0.32 * s, 0.18 * s);
    let steps = (2.0 * std::f64::consts::PI * rad * 2.0).ceil() as usize;
    for t in 0..steps {
        let th = 2.0 * std::f64::consts::PI * t as f64 / steps as f64;
        plot(cx + rad * th.cos(), cy + rad * th.sin(), 1.0);
    }
    // rectangle
    let (x0, y0, x1, y1) = (0.55 * s, 0.15 * s, 0.85 * s, 0.45 * s);
    for (a, b) in [((x0, y0), (x1, y0)), ((x1, y0), (x1, y1)), ((x1, y1), (x0, y1)), ((x0, y1), (x0, y0))] {
        segment(&mut plot, a, b, 0.8);
    }
    // triangle
    let tri = [(0.2 * s, 0.85 * s), (0.5 * s, 0.6 * s), (0.8 * s, 0.88 * s)];
    for i in 0..3 {
        segment(&mut plot, tri[i], tri[(i + 1) % 3], 0.6);
    }
    img
}

/// Black background with Gaussian point sources and a small extended object,
/// positions drawn from `seed`.
pub fn star_field(n: usize, seed: u64) -> ImageGrid {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut img = ImageGrid::zeros(n);
    let s = n as f64;
    let blob = |img: &mut ImageGrid, x0: f64, y0: f64, amp: f64, w: f64| {
        let reach = (3.0 * w).ceil() as i64;
        for dr in -reach..=reach {
            for dc in -reach..=reach {
                let (r, c) = (y0.round() as i64 + dr, x0.round() as i64 + dc);
                if r < 0 || c < 0 || r >= n as i64 || c >= n as i64 {
                    continue;
                }
                let (dy, dx) = (r as f64 - y0, c as f64 - x0);
                let v = amp * (-(dx * dx + dy * dy) / (2.0 * w * w)).exp();
                let old = img.get(r as usize, c as usize);
                img.set(r as usize, c as usize, old + v);
            }
        }
    };
    // extended body with two panels
    for r in 0..n {
        for c in 0..n {
            let (y, x) = (r as f64 / s, c as f64 / s);
            let body = (x - 0.5).abs() < 0.08 && (y - 0.5).abs() < 0.12;
            let panels = (y - 0.5).abs() < 0.04 && (x - 0.5).abs() < 0.3;
            if body {
                img.set(r, c, 0.9);
            } else if panels {
                img.set(r, c, 0.5);
            }
        }
    }
    let stars = (n / 4).max(4);
    for _ in 0..stars {
        let x0 = rng.random_range(0.1 * s..0.9 * s);
        let y0 = rng.random_range(0.1 * s..0.9 * s);
        let amp = rng.random_range(0.3..1.0);
        let w = rng.random_range(0.5..1.2);
        blob(&mut img, x0, y0, amp, w);
    }
    let peak = img.max();
    ImageGrid::from_fn(n, |r, c| img.get(r, c) / peak)
}

/// Natural-looking test scene in `[0, 1]`: shaded background, overlapping
/// objects and fine texture reaching the image borders.
pub fn scene(n: usize) -> ImageGrid {
    let s = n as f64;
    ImageGrid::from_fn(n, |r, c| {
        let (y, x) = (r as f64 / s, c as f64 / s);
        let mut v = 0.35 + 0.25 * x - 0.15 * y + 0.05 * (9.0 * x).sin() * (7.0 * y).cos();
        // sky / ground split
        if y > 0.7 + 0.05 * (6.0 * x).sin() {
            v = 0.2 + 0.1 * ((40.0 * x).sin() * (35.0 * y).sin()).abs();
        }
        // figure: head and coat
        if (x - 0.42).powi(2) + (y - 0.28).powi(2) < 0.07f64.powi(2) {
            v = 0.1;
        }
        if (x - 0.42).abs() < 0.11 + 0.3 * (y - 0.35).max(0.0) && y > 0.35 && y < 0.9 {
            v = 0.05 + 0.05 * (20.0 * y).sin().abs();
        }
        // tripod legs
        for (x0, slope) in [(0.62, -0.3), (0.66, 0.0), (0.7, 0.3)] {
            if y > 0.5 && (x - (x0 + slope * (y - 0.5))).abs() < 0.008 {
                v = 0.0;
            }
        }
        // camera box
        if (x - 0.66).abs() < 0.05 && (y - 0.45).abs() < 0.04 {
            v = 0.15;
        }
        // bright building at the border
        if x > 0.85 && y > 0.1 && y < 0.6 {
            v = 0.9 - 0.2 * ((y * 30.0).floor() % 2.0);
        }
        v.clamp(0.0, 1.0)
    })
}
