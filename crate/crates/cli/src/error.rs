use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error at `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("bad rational at `{field}`: {text:?}")]
    BadRational { field: String, text: String },
    #[error("graph at `{field}` is disconnected")]
    DisconnectedGraph { field: String },
    #[error("window {0} is empty")]
    WindowEmpty(String),
    #[error(transparent)]
    Engine(#[from] nobodies::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn schema(field: &str, message: impl Into<String>) -> Self {
        CliError::Schema {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Short machine-readable tag for diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Schema { .. } => "SchemaError",
            CliError::BadRational { .. } => "BadRational",
            CliError::DisconnectedGraph { .. } => "DisconnectedGraph",
            CliError::WindowEmpty(_) => "WindowEmpty",
            CliError::Engine(_) => "EngineError",
            CliError::Io { .. } => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
