use super::{join_lines, RenderedView, ViewError, ViewKind};
use crate::ir::Document;

/// The identity view: line `i` of the text is line `i` of the line map.
pub fn emit_full(doc: &Document) -> Result<RenderedView, ViewError> {
    let lines = doc.line_map().map_err(|_| ViewError::NotAssigned)?;
    let texts: Vec<&str> = lines.iter().map(|l| l.text.as_str()).collect();
    Ok(RenderedView {
        view_kind: ViewKind::Full,
        text: join_lines(&texts),
        pointers: Vec::new(),
        source_total_lines: doc.total_lines(),
        source_fingerprint: doc.fingerprint().unwrap_or_default(),
    })
}

/// The full view with a right-aligned `<n> | ` gutter, for reading. Pointers
/// never address this rendering.
pub fn emit_full_with_gutter(doc: &Document) -> Result<String, ViewError> {
    let lines = doc.line_map().map_err(|_| ViewError::NotAssigned)?;
    let width = lines.len().to_string().len();
    let numbered: Vec<String> = lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            if l.text.is_empty() {
                format!("{:>width$} |", i + 1)
            } else {
                format!("{:>width$} | {}", i + 1, l.text)
            }
        })
        .collect();
    Ok(join_lines(&numbered))
}
