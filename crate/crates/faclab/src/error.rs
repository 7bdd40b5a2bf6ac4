use std::io;

use thiserror::Error;

/// A config problem, attributed to one field where possible.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{message}", field.as_ref().map(|f| format!("field `{f}`: ")).unwrap_or_default())]
pub struct ConfigError {
    pub field: Option<String>,
    pub message: String,
}

impl ConfigError {
    pub fn field(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: Some(field.to_owned()),
            message: message.into(),
        }
    }

    pub fn general(message: impl Into<String>) -> Self {
        Self {
            field: None,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("budget refusal: {0}")]
    Budget(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("malformed input file {path}: {message}")]
    Format { path: String, message: String },
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Core(faclab_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Format { .. } | CliError::Io(_) | CliError::Core(_) => 1,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<faclab_core::Error> for CliError {
    fn from(e: faclab_core::Error) -> Self {
        use faclab_core::Error as E;
        match e {
            E::BudgetExceeded { what, required, budget } => {
                CliError::Budget(format!("{what} needs {required} operations over `budget` = {budget}"))
            }
            E::CapExceeded { what, p, cap } => CliError::Budget(format!("{what} refused: p = {p} exceeds `cap` = {cap}")),
            E::InvalidParameter { name, reason } => ConfigError::field(config_key(name), reason).into(),
            E::NotPrime(n) => ConfigError::field("p", format!("{n} is not prime")).into(),
            E::WindowCrossesModulus { start, len, p } => ConfigError::field(
                "n",
                format!("window of {len} after {start} reaches p = {p}; set zero_tail = true to allow"),
            )
            .into(),
            E::ZeroElement(what) => ConfigError::general(format!("0 is not allowed in {what}")).into(),
            E::OddWilsonTarget(l) => ConfigError::field("lambda", format!("{l} is odd")).into(),
            E::MalformedCertificate(msg) => CliError::Verification(msg),
            other => CliError::Core(other),
        }
    }
}

/// Config key for a core parameter name.
fn config_key(name: &str) -> &str {
    match name {
        "L" => "start",
        "M" => "m",
        "N" => "n",
        "X/Y" => "x",
        "X" => "x_size",
        "A" | "B" => "b_size",
        other => other,
    }
}
