//! PSF descriptions: `gaussian:SUPPORT:STD`, `motion:LENGTH:ANGLE`,
//! `motion2:LENGTH:ANGLE1:ANGLE2`, `delta` and `file:PATH`.
//!
//! A PSF file is plain text: a header line `PSF rows cols center_row
//! center_col` followed by `rows * cols` numbers in row-major order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use deblur_core::operators::Psf;
use deblur_core::problems::{make_gaussian_psf, make_motion_psf, make_two_direction_motion_psf};

use crate::error::{CliError, Result};

pub const DEFAULT_SUPPORT: usize = 9;
pub const DEFAULT_STD: f64 = 2.0;
pub const DEFAULT_MOTION_LENGTH: usize = 9;
pub const DEFAULT_MOTION_ANGLE: f64 = 0.0;
pub const DEFAULT_MOTION_ANGLE2: f64 = 90.0;

#[derive(Debug, Clone, PartialEq)]
pub enum PsfSpec {
    Gaussian { support: Option<usize>, std: Option<f64> },
    Motion { length: Option<usize>, angle: Option<f64> },
    Motion2 { length: Option<usize>, angle1: Option<f64>, angle2: Option<f64> },
    Delta,
    File(PathBuf),
}

fn field<T: FromStr>(spec: &str, value: Option<&str>) -> Result<Option<T>> {
    match value {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| CliError::Validation(format!("bad number '{v}' in PSF '{spec}'"))),
    }
}

impl FromStr for PsfSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err(CliError::Validation("PSF 'file:' needs a path".into()));
            }
            return Ok(Self::File(PathBuf::from(path)));
        }
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        let too_many = |max: usize| {
            (rest.len() > max)
                .then(|| CliError::Validation(format!("PSF '{s}' has too many fields")))
        };
        let spec = match kind {
            "gaussian" => {
                if let Some(e) = too_many(2) {
                    return Err(e);
                }
                Self::Gaussian { support: field(s, rest.first().copied())?, std: field(s, rest.get(1).copied())? }
            }
            "motion" => {
                if let Some(e) = too_many(2) {
                    return Err(e);
                }
                Self::Motion { length: field(s, rest.first().copied())?, angle: field(s, rest.get(1).copied())? }
            }
            "motion2" => {
                if let Some(e) = too_many(3) {
                    return Err(e);
                }
                Self::Motion2 {
                    length: field(s, rest.first().copied())?,
                    angle1: field(s, rest.get(1).copied())?,
                    angle2: field(s, rest.get(2).copied())?,
                }
            }
            "delta" => {
                if let Some(e) = too_many(0) {
                    return Err(e);
                }
                Self::Delta
            }
            _ => {
                return Err(CliError::Validation(format!(
                    "unknown PSF '{s}' (expected gaussian, motion, motion2, delta or file:PATH)"
                )))
            }
        };
        Ok(spec)
    }
}

impl PsfSpec {
    pub fn build(&self) -> Result<Psf> {
        Ok(match self {
            Self::Gaussian { support, std } => {
                make_gaussian_psf(support.unwrap_or(DEFAULT_SUPPORT), std.unwrap_or(DEFAULT_STD))?
            }
            Self::Motion { length, angle } => {
                make_motion_psf(length.unwrap_or(DEFAULT_MOTION_LENGTH), angle.unwrap_or(DEFAULT_MOTION_ANGLE))?
            }
            Self::Motion2 { length, angle1, angle2 } => make_two_direction_motion_psf(
                length.unwrap_or(DEFAULT_MOTION_LENGTH),
                angle1.unwrap_or(DEFAULT_MOTION_ANGLE),
                angle2.unwrap_or(DEFAULT_MOTION_ANGLE2),
            )?,
            Self::Delta => Psf::delta(),
            Self::File(path) => read_psf_file(path)?,
        })
    }
}

pub fn parse_psf_text(text: &str) -> Result<Psf> {
    let bad = |msg: &str| CliError::Validation(format!("malformed PSF file: {msg}"));
    let mut tokens = text.split_whitespace();
    if tokens.next() != Some("PSF") {
        return Err(bad("missing 'PSF' header"));
    }
    let mut header = [0usize; 4];
    for h in &mut header {
        *h = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("header needs rows, cols, center row and center column"))?;
    }
    let [rows, cols, cr, cc] = header;
    let kernel: Vec<f64> = tokens
        .map(|t| t.parse::<f64>().map_err(|_| bad(&format!("'{t}' is not a number"))))
        .collect::<Result<_>>()?;
    if kernel.len() != rows * cols {
        return Err(bad(&format!("expected {} values, found {}", rows * cols, kernel.len())));
    }
    Ok(Psf::new(kernel, rows, cols, (cr, cc))?)
}

pub fn read_psf_file(path: &Path) -> Result<Psf> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read PSF file {}: {e}", path.display())))?;
    parse_psf_text(&text)
}

pub fn format_psf(psf: &Psf) -> String {
    let (cr, cc) = psf.center();
    let mut out = format!("PSF {} {} {cr} {cc}\n", psf.rows(), psf.cols());
    for row in psf.kernel().chunks(psf.cols()) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn write_psf_file(psf: &Psf, path: &Path) -> Result<()> {
    std::fs::write(path, format_psf(psf)).map_err(CliError::io(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_strings() {
        assert_eq!(
            "gaussian:9:2".parse::<PsfSpec>().unwrap(),
            PsfSpec::Gaussian { support: Some(9), std: Some(2.0) }
        );
        assert_eq!("gaussian".parse::<PsfSpec>().unwrap(), PsfSpec::Gaussian { support: None, std: None });
        assert_eq!(
            "motion2:15:10:80".parse::<PsfSpec>().unwrap(),
            PsfSpec::Motion2 { length: Some(15), angle1: Some(10.0), angle2: Some(80.0) }
        );
        assert_eq!("file:a/b.psf".parse::<PsfSpec>().unwrap(), PsfSpec::File("a/b.psf".into()));
        for bad in ["", "gauss", "gaussian:x", "delta:1", "motion:1:2:3", "file:"] {
            assert!(bad.parse::<PsfSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn text_round_trip() {
        let psf = make_motion_psf(5, 30.0).unwrap();
        let back = parse_psf_text(&format_psf(&psf)).unwrap();
        assert_eq!(back.kernel(), psf.kernel());
        assert_eq!(back.center(), psf.center());
        assert!(parse_psf_text("PSF 2 2 0 0\n1 2 3").is_err());
        assert!(parse_psf_text("2 2 0 0\n1 2 3 4").is_err());
    }
}
