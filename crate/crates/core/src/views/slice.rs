use super::ViewError;
use crate::ir::{Document, LineSpan};

/// Line printed between the ranges of a multi-range slice.
pub const RANGE_MARKER: &str = "⋯";

/// Reads the lines of `span` straight out of the full view. Ranges are
/// separated by a [`RANGE_MARKER`] line.
pub fn slice(doc: &Document, span: &LineSpan) -> Result<String, ViewError> {
    let lines = doc.line_map().map_err(|_| ViewError::NotAssigned)?;
    let total_lines = lines.len();
    if let Some(&(start, end)) = span.ranges().iter().find(|&&(_, end)| end > total_lines) {
        let range = if start == end { start.to_string() } else { format!("{start}-{end}") };
        return Err(ViewError::OutOfRange { range, total_lines });
    }
    let mut out = String::new();
    for (i, &(start, end)) in span.ranges().iter().enumerate() {
        if i > 0 {
            out.push_str(RANGE_MARKER);
            out.push('\n');
        }
        for line in &lines[start - 1..end] {
            out.push_str(&line.text);
            out.push('\n');
        }
    }
    Ok(out)
}
