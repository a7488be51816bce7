use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warn,
    Error,
}

/// A non-fatal (or, in strict mode, fatal) finding about the input.
///
/// `source_index` is the 0-based physical line of the JSONL file the finding
/// is about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub source_index: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn warn(source_index: usize, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warn,
            source_index,
            message: message.into(),
        }
    }

    pub fn error(source_index: usize, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            source_index,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Warn => "warning",
            Severity::Error => "error",
        };
        write!(f, "{level}: line {}: {}", self.source_index + 1, self.message)
    }
}
