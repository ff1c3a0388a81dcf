use thiserror::Error;

/// Errors produced by the deblurring core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("PSF support {rows}x{cols} does not fit in a {n}x{n} field of view")]
    SupportTooLarge { rows: usize, cols: usize, n: usize },

    #[error("invalid PSF: {0}")]
    InvalidPsf(String),

    #[error("dense materialization refused: n = {n} exceeds the cap of {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("singular circulant: {0}")]
    Singular(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator failed the symmetry probe (defect {defect:.3e}, tolerance {tolerance:.3e})")]
    NotSymmetric { defect: f64, tolerance: f64 },

    #[error("operator does not provide an adjoint")]
    MissingAdjoint,

    #[error("cluster bands overlap: eps + delta = {0} >= 1")]
    OverlappingBands(f64),

    #[error("reference image has zero norm")]
    ZeroTruth,

    #[error("reconstruction equals the reference image; PSNR is infinite")]
    InfinitePsnr,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
