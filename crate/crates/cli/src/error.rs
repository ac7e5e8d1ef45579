use thiserror::Error;

/// Failure of a CLI run, mapped to the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("numerical failure: {0}")]
    Numerical(#[from] pairsim::Error),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl ToString) -> Self {
        CliError::Config { field: field.into(), message: message.to_string() }
    }

    /// Parameter-validation errors from the core library name their field.
    pub fn from_core_validation(section: &str, e: pairsim::Error) -> Self {
        match e {
            pairsim::Error::InvalidParameter { name, reason } => CliError::config(format!("{section}.{name}"), reason),
            pairsim::Error::InvalidDims(msg) => CliError::config("dims", msg),
            other => CliError::Numerical(other),
        }
    }

    pub fn config_from_toml(e: &toml::de::Error) -> Self {
        let message = e.message().to_string();
        // Serde reports missing/unknown keys by name; surface it as the field.
        let field = message
            .split('`')
            .nth(1)
            .map(str::to_string)
            .unwrap_or_else(|| "config".to_string());
        CliError::Config { field, message }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}
