use std::fmt;
use std::process::ExitCode;

use gtld::GtldError;

/// A failure, split by who is at fault: the caller (exit 2) or the
/// computation (exit 1).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn compute(message: impl Into<String>) -> Self {
        CliError::Compute(message.into())
    }

    /// Attach context to the message, keeping the classification.
    pub fn context(self, what: impl fmt::Display) -> Self {
        match self {
            CliError::Usage(m) => CliError::Usage(format!("{what}: {m}")),
            CliError::Compute(m) => CliError::Compute(format!("{what}: {m}")),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Compute(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

impl From<GtldError> for CliError {
    fn from(e: GtldError) -> Self {
        match e {
            GtldError::Config { .. }
            | GtldError::UnknownFamily(_)
            | GtldError::UnknownMethod(_)
            | GtldError::InvalidParameter { .. }
            | GtldError::OutOfSupport { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        let usage: CliError = GtldError::UnknownFamily("nosuch".into()).into();
        assert!(matches!(usage, CliError::Usage(_)));
        let compute: CliError = GtldError::Divergent("moment".into()).into();
        assert!(matches!(compute, CliError::Compute(_)));
        let config: CliError = GtldError::Config {
            line: 3,
            message: "x".into(),
        }
        .into();
        assert_eq!(config.to_string(), "config error at line 3: x");
    }

    #[test]
    fn context_keeps_kind() {
        let e = CliError::usage("bad").context("--params");
        assert!(matches!(e, CliError::Usage(ref m) if m == "--params: bad"));
    }
}
