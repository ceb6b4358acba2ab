use gcslab_core::Error as CoreError;
use serde_json::{json, Value};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Error with its process exit code, reported as JSON on stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub kind: String,
    pub message: String,
    pub details: Option<Value>,
}

impl CliError {
    fn new(code: i32, kind: &str, message: impl Into<String>) -> Self {
        Self {
            code,
            kind: kind.to_string(),
            message: message.into(),
            details: None,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(EXIT_CONFIG, "Config", message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(EXIT_CONFIG, "Io", message)
    }

    pub fn verification(message: impl Into<String>) -> Self {
        Self::new(EXIT_VERIFICATION, "VerificationFailed", message)
    }

    /// Core errors caused by the inputs themselves exit as config errors,
    /// the rest as numeric errors.
    pub fn from_core_input(err: CoreError) -> Self {
        let code = match err {
            CoreError::InvalidParameter { .. }
            | CoreError::SeedConstraint { .. }
            | CoreError::HeisenbergViolation { .. }
            | CoreError::NotMinimal { .. }
            | CoreError::DeceleratingField
            | CoreError::FieldRegime(_)
            | CoreError::InvalidGrid(_) => EXIT_CONFIG,
            _ => EXIT_NUMERIC,
        };
        Self::from_core(err, code)
    }

    pub fn from_core_numeric(err: CoreError) -> Self {
        Self::from_core(err, EXIT_NUMERIC)
    }

    fn from_core(err: CoreError, code: i32) -> Self {
        let debug = format!("{err:?}");
        let kind = debug
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or("Numeric")
            .to_string();
        let details = match err {
            CoreError::HeisenbergViolation { product, bound } | CoreError::NotMinimal { product, bound } => {
                Some(json!({"product": product, "bound": bound}))
            }
            CoreError::InvalidParameter { name, value, .. } => Some(json!({"name": name, "value": value})),
            CoreError::EdgeLeakage { tau, ratio } => Some(json!({"tau": tau, "ratio": ratio})),
            _ => None,
        };
        Self {
            code,
            kind,
            message: err.to_string(),
            details,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut body = json!({"kind": self.kind, "message": self.message, "exit_code": self.code});
        if let Some(d) = &self.details {
            body["details"] = d.clone();
        }
        json!({ "error": body })
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}
