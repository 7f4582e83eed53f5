use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error, key `{key}`{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config {
        key: String,
        line: Option<usize>,
        message: String,
    },

    #[error("{0}")]
    ConfigFile(#[from] ConfigError),

    #[error(transparent)]
    Compute(#[from] softdeco::Error),

    #[error("cannot write {0}: {1}")]
    Io(String, #[source] std::io::Error),
}

impl CliError {
    /// Everything here is a problem with the inputs.
    pub fn exit_code(&self) -> u8 {
        1
    }
}
