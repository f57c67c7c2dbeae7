use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {reason}")]
    Usage { flag: String, reason: String },

    #[error(transparent)]
    Numeric(resfluor::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn usage(flag: &str, reason: impl Into<String>) -> Self {
        CliError::Usage {
            flag: flag.to_owned(),
            reason: reason.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 2 for usage errors, 1 for everything that went wrong after validation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage { .. } => 2,
            _ => 1,
        }
    }
}

impl From<resfluor::Error> for CliError {
    fn from(e: resfluor::Error) -> Self {
        match e {
            resfluor::Error::InvalidParameter { name, reason } => {
                let flag = match name {
                    "n_photons" => "photons",
                    other => other,
                };
                CliError::Usage {
                    flag: format!("--{}", flag.replace('_', "-")),
                    reason,
                }
            }
            resfluor::Error::ZeroRabi(what) => CliError::Usage {
                flag: "--omega".into(),
                reason: format!("must be > 0 for {what}"),
            },
            other => CliError::Numeric(other),
        }
    }
}
