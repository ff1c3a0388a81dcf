//! Grayscale image input and 8-bit PGM output.

use std::path::Path;

use deblur_core::ImageGrid;
use image::imageops::FilterType;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, GrayImage, ImageEncoder, Luma};

use crate::error::{CliError, Result};

/// Loads a PGM or PNG image as intensities in `[0, 1]`, resampled to `n x n`
/// when its size differs.
pub fn load_image(path: &Path, n: usize) -> Result<ImageGrid> {
    let img = image::open(path)
        .map_err(|e| CliError::Validation(format!("cannot load image {}: {e}", path.display())))?
        .into_luma16();
    let img = if img.width() as usize == n && img.height() as usize == n {
        img
    } else {
        image::imageops::resize(&img, n as u32, n as u32, FilterType::Triangle)
    };
    let pixels = img.pixels().map(|p| f64::from(p.0[0]) / f64::from(u16::MAX)).collect();
    Ok(ImageGrid::new(n, pixels)?)
}

/// 8-bit rendering with `peak` mapped to white; values outside `[0, peak]` are clamped.
pub fn to_gray(pixels: &[f64], n: usize, peak: f64) -> GrayImage {
    let scale = if peak > 0.0 { 255.0 / peak } else { 0.0 };
    GrayImage::from_fn(n as u32, n as u32, |c, r| {
        let v = pixels[r as usize * n + c as usize] * scale;
        Luma([v.round().clamp(0.0, 255.0) as u8])
    })
}

pub fn write_pgm(path: &Path, pixels: &[f64], n: usize, peak: f64) -> Result<()> {
    let img = to_gray(pixels, n, peak);
    let file = std::fs::File::create(path).map_err(CliError::io(path))?;
    PnmEncoder::new(std::io::BufWriter::new(file))
        .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
        .write_image(img.as_raw(), img.width(), img.height(), ExtendedColorType::L8)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}
