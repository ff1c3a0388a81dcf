use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input: unknown flags or keys, malformed values, missing files.
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) => 1,
            Self::Runtime(_) | Self::Io { .. } => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| Self::Io { path, source }
    }
}

impl From<deblur_core::Error> for CliError {
    fn from(e: deblur_core::Error) -> Self {
        use deblur_core::Error as E;
        match e {
            E::Dimension { .. }
            | E::SupportTooLarge { .. }
            | E::InvalidPsf(_)
            | E::DenseCapExceeded { .. }
            | E::Domain(_)
            | E::InvalidParameter(_)
            | E::OverlappingBands(_)
            | E::ZeroTruth => Self::Validation(e.to_string()),
            _ => Self::Runtime(e.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
