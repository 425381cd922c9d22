use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {path}: {reason}")]
    Parse { path: String, reason: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] vallab_core::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn parse(path: &str, reason: impl Into<String>) -> Self {
        CliError::Parse { path: path.to_string(), reason: reason.into() }
    }

    /// 3 for unsupported inputs, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(vallab_core::Error::Unsupported(_)) => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Parse { .. } => "ParseError".into(),
            CliError::Validation(_) => "ValidationError".into(),
            CliError::Io { .. } => "IoError".into(),
            CliError::Core(e) => {
                let debug = format!("{e:?}");
                debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
            }
        }
    }

    /// Extra structured data carried by the error, such as the direction of
    /// non-coercivity.
    pub fn detail(&self) -> Option<serde_json::Value> {
        match self {
            CliError::Parse { path, .. } => Some(serde_json::json!({ "path": path })),
            CliError::Core(vallab_core::Error::NotCoercive { direction }) => {
                Some(crate::json::object([("direction", crate::json::reals(direction))]))
            }
            _ => None,
        }
    }
}
