//! The outcome of a command, printed as text or JSON.

use serde::Serialize;
use serde_json::{json, Value};

/// How a command ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    /// The property holds or the command succeeded.
    Holds,
    /// The property fails, with a witness in the details.
    Fails,
    /// An exploration limit was reached before a verdict.
    Truncated,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Holds => 0,
            Outcome::Fails => 1,
            Outcome::Truncated => 3,
        }
    }
}

/// What a command prints.
#[derive(Debug)]
pub struct Report {
    pub outcome: Outcome,
    pub text: String,
    pub details: Value,
}

impl Report {
    pub fn new(outcome: Outcome, text: impl Into<String>, details: Value) -> Self {
        Self {
            outcome,
            text: text.into(),
            details,
        }
    }

    pub fn to_json(&self, command: &str, file: &str) -> Value {
        json!({
            "command": command,
            "file": file,
            "outcome": self.outcome,
            "exit_code": self.outcome.exit_code(),
            "details": self.details,
        })
    }
}

/// The JSON form of a usage or input error.
pub fn error_json(command: &str, file: &str, message: &str) -> Value {
    json!({
        "command": command,
        "file": file,
        "outcome": "error",
        "exit_code": 2,
        "error": message,
    })
}
