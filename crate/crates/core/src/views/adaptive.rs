use super::{join_lines, Pointer, RenderedView, ViewError, ViewKind, DEFAULT_FILE_LABEL};
use crate::ir::{section_header, Document, Node};
use crate::predicate::{match_lines, Predicate};

/// Ordering of adaptive output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Modality {
    /// Section by section, under the full view's turn headers.
    #[default]
    Document,
    /// A flat list of matching blocks.
    Index,
}

#[derive(Debug, Clone)]
pub struct AdaptiveOptions {
    pub file_label: String,
    /// Cap on matching lines printed per block; the rest are counted.
    pub max_block_lines: Option<usize>,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            file_label: DEFAULT_FILE_LABEL.to_string(),
            max_block_lines: None,
        }
    }
}

struct Hit<'d> {
    section: usize,
    node: &'d Node,
    lines: Vec<(usize, &'d str)>,
}

/// Projects the document through `predicate`.
///
/// A block appears iff at least one of its lines matches, as a header
/// `[<kind>] <tool>? (<pointer>)` followed by its matching lines written
/// `<line number>: <text>`. Sections without matches are left out. Both
/// modalities print the same blocks; only the grouping differs.
pub fn emit_adaptive(
    doc: &Document,
    predicate: &dyn Predicate,
    modality: Modality,
    opts: &AdaptiveOptions,
) -> Result<RenderedView, ViewError> {
    if !doc.is_assigned() {
        return Err(ViewError::NotAssigned);
    }

    let mut hits = Vec::new();
    for section in doc.sections() {
        for node in &section.nodes {
            let lines = match_lines(node, predicate);
            if !lines.is_empty() {
                hits.push(Hit {
                    section: section.section_index,
                    node,
                    lines,
                });
            }
        }
    }

    let mut out: Vec<String> = Vec::new();
    let mut pointers = Vec::new();
    let mut previous_section = None;
    for hit in &hits {
        let new_section = previous_section != Some(hit.section);
        if !out.is_empty() {
            out.push(String::new());
        }
        if modality == Modality::Document && new_section {
            out.push(section_header(hit.section, doc.sections()[hit.section].role));
        }
        previous_section = Some(hit.section);

        let span = hit.node.span().ok_or(ViewError::NodeWithoutSpan {
            section: hit.node.section_index,
            block: hit.node.block_index,
        })?;
        let pointer = Pointer::new(opts.file_label.as_str(), span.clone());
        out.push(block_header(hit.node, &pointer));
        pointers.push((pointer.to_string(), pointer.span));

        let shown = opts.max_block_lines.unwrap_or(usize::MAX).min(hit.lines.len());
        out.extend(hit.lines[..shown].iter().map(|(n, text)| format!("{n}: {text}")));
        if shown < hit.lines.len() {
            out.push(format!("… {} more matching lines", hit.lines.len() - shown));
        }
    }

    Ok(RenderedView {
        view_kind: match modality {
            Modality::Document => ViewKind::AdaptiveDocument,
            Modality::Index => ViewKind::AdaptiveIndex,
        },
        text: join_lines(&out),
        pointers,
        source_total_lines: doc.total_lines(),
        source_fingerprint: doc.fingerprint().unwrap_or_default(),
    })
}

fn block_header(node: &Node, pointer: &Pointer) -> String {
    match &node.tool_name {
        Some(tool) => format!("{} {tool} {pointer}", node.kind.role_tag()),
        None => format!("{} {pointer}", node.kind.role_tag()),
    }
}
