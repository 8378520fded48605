use std::fmt;
use std::process::ExitCode;

use qitx_core::Error as CoreError;

/// A failed run, classified by who is at fault.
#[derive(Debug)]
pub enum CliError {
    /// The input could not be read or does not match the schema.
    Input(String),
    /// The input parses but describes something unphysical.
    Physics(String),
    /// A numerical routine or the output sink failed.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    /// Wraps a core error raised while validating user-supplied data.
    pub fn validation(context: &str, err: CoreError) -> Self {
        let msg = format!("{context}: {err}");
        match err {
            CoreError::Dimension { .. } | CoreError::DimensionMismatch { .. } => CliError::Input(msg),
            CoreError::NonFinite
            | CoreError::NotHermitian { .. }
            | CoreError::Trace { .. }
            | CoreError::UnphysicalState { .. }
            | CoreError::UnphysicalChannel { .. }
            | CoreError::InvalidCorrelation { .. }
            | CoreError::InvalidParameter { .. }
            | CoreError::UndefinedCollapse { .. } => CliError::Physics(msg),
            CoreError::SingularSystem { .. } | CoreError::RankDeficient(_) | CoreError::Normalization { .. } => {
                CliError::Internal(msg)
            }
        }
    }

    pub fn internal(context: &str, err: impl fmt::Display) -> Self {
        CliError::Internal(format!("{context}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Physics(m) => write!(f, "validation error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
