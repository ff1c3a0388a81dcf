//! Experiment configuration: a flat `key = value` file, `#` starts a comment.
//!
//! Required keys: `image`, `n`, `psf`, `bc`, `sigma`, `methods`, `outdir`.
//! Optional: `seed`, the PSF parameters `psf_support`, `psf_std`,
//! `motion_length`, `motion_angle`, `motion_angle2`, and the solver settings
//! `alpha0`, `q`, `stationary_alpha`, `eta`, `max_iter`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use deblur_core::operators::BoundaryCondition;
use deblur_core::problems::{MethodParams, MethodSpec};

use crate::error::{CliError, Result};
use crate::psf::PsfSpec;

const REQUIRED: [&str; 7] = ["image", "n", "psf", "bc", "sigma", "methods", "outdir"];
const OPTIONAL: [&str; 11] = [
    "seed",
    "psf_support",
    "psf_std",
    "motion_length",
    "motion_angle",
    "motion_angle2",
    "alpha0",
    "q",
    "stationary_alpha",
    "eta",
    "max_iter",
];

#[derive(Debug, Clone, PartialEq)]
pub enum ImageSource {
    Phantom,
    Edges,
    Stars,
    Scene,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub image: ImageSource,
    pub n: usize,
    pub psf: PsfSpec,
    pub bc: BoundaryCondition,
    pub sigma: f64,
    pub seed: u64,
    pub methods: Vec<MethodSpec>,
    pub params: MethodParams,
    pub outdir: PathBuf,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| CliError::Validation(format!("invalid value '{value}' for key '{key}'")))
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base)
    }

    /// Parses config text; relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("line {}: expected 'key = value', found '{line}'", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !REQUIRED.contains(&key) && !OPTIONAL.contains(&key) {
                return Err(CliError::Validation(format!("line {}: unknown key '{key}'", lineno + 1)));
            }
            if map.insert(key.to_string(), value.to_string()).is_some() {
                return Err(CliError::Validation(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
        }
        if let Some(missing) = REQUIRED.iter().find(|k| !map.contains_key(**k)) {
            return Err(CliError::Validation(format!("missing required key '{missing}'")));
        }
        let get = |k: &str| map.get(k).map(String::as_str);
        let resolve = |p: &str| {
            let p = PathBuf::from(p);
            if p.is_absolute() { p } else { base.join(p) }
        };

        let image = match get("image").unwrap() {
            "phantom" => ImageSource::Phantom,
            "edges" => ImageSource::Edges,
            "stars" => ImageSource::Stars,
            "scene" => ImageSource::Scene,
            path => ImageSource::File(resolve(path)),
        };
        let n: usize = parse_value("n", get("n").unwrap())?;
        if n == 0 {
            return Err(CliError::Validation("'n' must be positive".into()));
        }

        let mut psf: PsfSpec = get("psf").unwrap().parse()?;
        match &mut psf {
            PsfSpec::Gaussian { support, std } => {
                if let Some(v) = get("psf_support") {
                    *support = Some(parse_value("psf_support", v)?);
                }
                if let Some(v) = get("psf_std") {
                    *std = Some(parse_value("psf_std", v)?);
                }
            }
            PsfSpec::Motion { length, angle } => {
                if let Some(v) = get("motion_length") {
                    *length = Some(parse_value("motion_length", v)?);
                }
                if let Some(v) = get("motion_angle") {
                    *angle = Some(parse_value("motion_angle", v)?);
                }
            }
            PsfSpec::Motion2 { length, angle1, angle2 } => {
                if let Some(v) = get("motion_length") {
                    *length = Some(parse_value("motion_length", v)?);
                }
                if let Some(v) = get("motion_angle") {
                    *angle1 = Some(parse_value("motion_angle", v)?);
                }
                if let Some(v) = get("motion_angle2") {
                    *angle2 = Some(parse_value("motion_angle2", v)?);
                }
            }
            PsfSpec::File(path) => *path = resolve(&path.to_string_lossy()),
            PsfSpec::Delta => {}
        }

        let bc: BoundaryCondition = get("bc")
            .unwrap()
            .parse()
            .map_err(|_| CliError::Validation(format!("invalid value '{}' for key 'bc'", get("bc").unwrap())))?;
        let sigma: f64 = parse_value("sigma", get("sigma").unwrap())?;
        let seed = get("seed").map(|v| parse_value("seed", v)).transpose()?.unwrap_or(0);

        let methods: Vec<MethodSpec> = get("methods")
            .unwrap()
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(CliError::from))
            .collect::<Result<_>>()?;
        if methods.is_empty() {
            return Err(CliError::Validation("'methods' lists no method".into()));
        }

        let mut params = MethodParams::default();
        if let Some(v) = get("alpha0") {
            params.alpha0 = parse_value("alpha0", v)?;
        }
        if let Some(v) = get("q") {
            params.q = parse_value("q", v)?;
        }
        if let Some(v) = get("stationary_alpha") {
            params.stationary_alpha = parse_value("stationary_alpha", v)?;
        }
        if let Some(v) = get("eta") {
            params.eta = parse_value("eta", v)?;
        }
        if let Some(v) = get("max_iter") {
            params.max_iter = parse_value("max_iter", v)?;
        }

        Ok(Self {
            image,
            n,
            psf,
            bc,
            sigma,
            seed,
            methods,
            params,
            outdir: resolve(get("outdir").unwrap()),
        })
    }
}
