use sdw_core::SdwError;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("cannot parse {path}: {source}")]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invariant breach: {0}")]
    Invariant(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Solver(#[from] SdwError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Toml { .. } | CliError::Io { .. } => 2,
            CliError::Invariant(_) => 3,
            CliError::Precondition(_) => 4,
            CliError::Solver(e) => match e {
                SdwError::Invariant(_) | SdwError::NotAdjacent(_) | SdwError::Inadmissible(_) => 3,
                SdwError::NonPositiveEpsilon(_)
                | SdwError::EmptyWindow { .. }
                | SdwError::BadSpacingConstant(_)
                | SdwError::EpsilonTooLarge { .. }
                | SdwError::SpacingBounds { .. }
                | SdwError::NonPositiveDensity { .. }
                | SdwError::InvalidState(_)
                | SdwError::InvalidProfile(_)
                | SdwError::EnergyMissing => 2,
                _ => 4,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
