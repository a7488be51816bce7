//! Lowering of an assigned [`Document`](crate::Document) into text views.
//!
//! Every view reads the one line assignment and never changes it. Pointers
//! have the form `(<label>:<ranges>)`, e.g. `(full.txt:19-21,24-34)`, and
//! always address lines of the full view.

mod adaptive;
mod full;
mod slice;
mod summary;
mod ui;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ir::{LineSpan, SpanError};

pub use adaptive::{emit_adaptive, AdaptiveOptions, Modality};
pub use full::{emit_full, emit_full_with_gutter};
pub use slice::{slice, RANGE_MARKER};
pub use summary::{summarize_tool_call, HeadlineRule, HeadlineTable, HEADLINE_MAX_CHARS, NO_ARGS};
pub use ui::{emit_ui, UiOptions};

/// File label used in pointers when none is configured.
pub const DEFAULT_FILE_LABEL: &str = "file.txt";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ViewError {
    #[error("document has no line assignment")]
    NotAssigned,
    #[error("node {section}/{block} has no span")]
    NodeWithoutSpan { section: usize, block: usize },
    #[error("range {range} is outside the full view (1-{total_lines})")]
    OutOfRange { range: String, total_lines: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewKind {
    Full,
    Ui,
    AdaptiveDocument,
    AdaptiveIndex,
}

/// Emitted text of one view. Lines are LF-terminated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedView {
    pub view_kind: ViewKind,
    pub text: String,
    /// Every pointer printed in `text`, in order of appearance.
    pub pointers: Vec<(String, LineSpan)>,
    pub source_total_lines: usize,
    /// Fingerprint of the line map the view was lowered from.
    pub source_fingerprint: u64,
}

impl RenderedView {
    pub fn line_count(&self) -> usize {
        self.text.lines().count()
    }
}

/// A reference into the full view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pointer {
    pub file_label: String,
    pub span: LineSpan,
}

impl Pointer {
    pub fn new(file_label: impl Into<String>, span: LineSpan) -> Self {
        Self {
            file_label: file_label.into(),
            span,
        }
    }
}

impl fmt::Display for Pointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.file_label, self.span)
    }
}

impl FromStr for Pointer {
    type Err = SpanError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| SpanError::Malformed(s.to_string()))?;
        let (label, ranges) = inner
            .rsplit_once(':')
            .ok_or_else(|| SpanError::Malformed(s.to_string()))?;
        Ok(Self::new(label, ranges.parse()?))
    }
}

/// Joins lines into LF-terminated text.
fn join_lines<S: AsRef<str>>(lines: &[S]) -> String {
    let mut text = String::with_capacity(lines.iter().map(|l| l.as_ref().len() + 1).sum());
    for line in lines {
        text.push_str(line.as_ref());
        text.push('\n');
    }
    text
}
