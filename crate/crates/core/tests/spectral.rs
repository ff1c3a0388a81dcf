mod common;

use common::dense;
use deblur_core::operators::{bccb_eigenvalues, BlurOperator, BoundaryCondition, Flipped, Psf};
use deblur_core::preconditioners::{circulant_abs_tikhonov, circulant_threshold};
use deblur_core::problems::make_gaussian_psf;
use deblur_core::spectral::*;
use nalgebra::DMatrix;

fn sorted_real_eigs(m: DMatrix<f64>) -> (Vec<f64>, f64) {
    let eigs = m.complex_eigenvalues();
    let max_im = eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let mut re: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    (re, max_im)
}

#[test]
fn threshold_spectrum_matches_nonsymmetric_solve() {
    let n = 16;
    let psf = make_gaussian_psf(9, 2.0).unwrap();
    let sym = preconditioned_spectrum(&psf, n, 0.1).unwrap();
    let c = circulant_threshold(&bccb_eigenvalues(&psf, n).unwrap(), 0.1).unwrap();
    let cinv = dense(&c.inverse().unwrap());
    let yt = flipped_toeplitz(&psf, n).unwrap();
    let (direct, max_im) = sorted_real_eigs(cinv * yt);
    assert!(max_im < 1e-6);
    for (a, b) in sym.iter().zip(&direct) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn abs_tikhonov_spectrum_matches_nonsymmetric_solve() {
    let n = 12;
    let psf = make_gaussian_psf(9, 2.0).unwrap();
    let sym = abs_tikhonov_spectrum(&psf, n, 1e-2).unwrap();
    let c = dense(&circulant_abs_tikhonov(&bccb_eigenvalues(&psf, n).unwrap(), 1e-2).unwrap());
    let (direct, max_im) = sorted_real_eigs(c * flipped_toeplitz(&psf, n).unwrap());
    assert!(max_im < 1e-6);
    for (a, b) in sym.iter().zip(&direct) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn abs_tikhonov_bounded_by_one_for_periodic_matrix() {
    // Y maps Fourier mode j to -j, so with a BCCB matrix the eigenvalues are
    // exactly +-|f|^2 / (|f|^2 + alpha)
    let n = 8;
    let psf = make_gaussian_psf(5, 1.5).unwrap();
    let op = BlurOperator::new(psf.clone(), BoundaryCondition::Periodic, n).unwrap();
    let ya = dense(&Flipped(&op));
    for alpha in [1e-2, 1e-3] {
        let symbol = bccb_eigenvalues(&psf, n).unwrap();
        let c = dense(&circulant_abs_tikhonov(&symbol, alpha).unwrap());
        let (eigs, _) = sorted_real_eigs(c * &ya);
        let mut want: Vec<f64> = eigs.iter().map(|l| l.abs()).collect();
        want.sort_by(f64::total_cmp);
        let mut from_symbol: Vec<f64> = symbol
            .values()
            .iter()
            .map(|l| l.norm_sqr() / (l.norm_sqr() + alpha))
            .collect();
        from_symbol.sort_by(f64::total_cmp);
        for (a, b) in want.iter().zip(&from_symbol) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(want.last().unwrap() <= &(1.0 + 1e-12));
    }
}

#[test]
fn abs_tikhonov_top_eigenvalues_near_one() {
    // measured: 8.79% of |eigenvalues| exceed 0.9 at n = 32, alpha = 1e-3
    let psf = make_gaussian_psf(9, 2.0).unwrap();
    let eigs = abs_tikhonov_spectrum(&psf, 32, 1e-3).unwrap();
    let frac = eigs.iter().filter(|l| l.abs() > 0.9).count() as f64 / eigs.len() as f64;
    assert!(frac >= 0.08, "{frac}");
}

#[test]
fn clustering_improves_with_n() {
    let psf = make_gaussian_psf(9, 2.0).unwrap();
    let mut last = f64::INFINITY;
    for n in [8, 16, 32] {
        let eigs = preconditioned_spectrum(&psf, n, 0.1).unwrap();
        let r = cluster_report(&eigs, 0.1, 0.2).unwrap();
        assert_eq!(r.near_plus_one + r.near_minus_one + r.in_noise_band + r.outliers, n * n);
        assert!(r.outlier_fraction() <= last);
        last = r.outlier_fraction();
    }
}

#[test]
fn threshold_spectrum_within_symbol_bound() {
    let psf = make_gaussian_psf(7, 1.5).unwrap();
    let n = 12;
    let eps = 0.1;
    let eigs = preconditioned_spectrum(&psf, n, eps).unwrap();
    let symbol = bccb_eigenvalues(&psf, n).unwrap();
    let kept_min = symbol.abs().into_iter().filter(|a| *a > eps).fold(f64::INFINITY, f64::min);
    let bound = (symbol.max_abs() / kept_min).max(1.0);
    for l in &eigs {
        assert!(l.abs() <= bound + 1e-12, "{l} vs {bound}");
    }
}

#[test]
fn unpreconditioned_magnitudes_follow_symbol() {
    let psf = make_gaussian_psf(5, 1.0).unwrap();
    let mut last = f64::INFINITY;
    for n in [8, 16, 24] {
        let mut eigs: Vec<f64> = unpreconditioned_spectrum(&psf, n).unwrap().iter().map(|l| l.abs()).collect();
        eigs.sort_by(f64::total_cmp);
        let mut f = bccb_eigenvalues(&psf, n).unwrap().abs();
        f.sort_by(f64::total_cmp);
        let mad = eigs.iter().zip(&f).map(|(a, b)| (a - b).abs()).sum::<f64>() / f.len() as f64;
        assert!(mad < last, "n={n}: {mad}");
        last = mad;
    }
}

#[test]
fn szego_moments() {
    let avg = Psf::new(vec![1.0 / 9.0; 9], 3, 3, (1, 1)).unwrap();
    let small = szego_distribution_check(&avg, 8, 2).unwrap();
    let large = szego_distribution_check(&avg, 16, 2).unwrap();
    assert!(large < small);
    assert!(szego_distribution_check(&Psf::delta(), 6, 4).unwrap() < 1e-12);
}
