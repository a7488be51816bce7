use std::collections::BTreeMap;

use super::{join_lines, summarize_tool_call, HeadlineTable, RenderedView, ViewError, ViewKind, DEFAULT_FILE_LABEL};
use crate::ir::{Document, Node, NodeKind, SectionRole};

#[derive(Debug, Clone)]
pub struct UiOptions {
    pub file_label: String,
    pub headlines: HeadlineTable,
}

impl Default for UiOptions {
    fn default() -> Self {
        Self {
            file_label: DEFAULT_FILE_LABEL.to_string(),
            headlines: HeadlineTable::default(),
        }
    }
}

enum Item<'d> {
    Text(&'d [String]),
    Summary(String),
}

/// The session as the user saw it.
///
/// Thinking, tool results and system sections are dropped, each tool call
/// becomes a one-line summary pointing at the call and its result, and
/// assistant turns with no user turn between them share one header.
pub fn emit_ui(doc: &Document, opts: &UiOptions) -> Result<RenderedView, ViewError> {
    if !doc.is_assigned() {
        return Err(ViewError::NotAssigned);
    }

    let mut results: BTreeMap<&str, &Node> = BTreeMap::new();
    for node in doc.nodes().filter(|n| n.kind == NodeKind::ToolResult) {
        if let Some(id) = node.tool_use_id.as_deref() {
            results.entry(id).or_insert(node);
        }
    }

    let mut groups: Vec<(SectionRole, Vec<Item<'_>>)> = Vec::new();
    let mut pointers = Vec::new();
    for section in doc.sections() {
        if section.role == SectionRole::System {
            continue;
        }
        let mut items = Vec::new();
        for node in &section.nodes {
            match node.kind {
                NodeKind::User | NodeKind::Assistant => items.push(Item::Text(&node.content_lines)),
                NodeKind::ToolCall => {
                    let result = node.tool_use_id.as_deref().and_then(|id| results.get(id).copied());
                    let (line, pointer) = summarize_tool_call(node, result, &opts.file_label, &opts.headlines)?;
                    pointers.push((pointer.to_string(), pointer.span));
                    items.push(Item::Summary(line));
                }
                NodeKind::Thinking | NodeKind::ToolResult | NodeKind::System => {}
            }
        }
        if items.is_empty() {
            continue;
        }
        match groups.last_mut() {
            Some((SectionRole::Assistant, group)) if section.role == SectionRole::Assistant => group.extend(items),
            _ => groups.push((section.role, items)),
        }
    }

    let mut lines: Vec<&str> = Vec::new();
    let headers: Vec<String> = groups.iter().map(|(role, _)| format!("=== {role} ===")).collect();
    for (gi, (_, items)) in groups.iter().enumerate() {
        if gi > 0 {
            lines.push("");
        }
        lines.push(&headers[gi]);
        for (ii, item) in items.iter().enumerate() {
            let consecutive_summaries =
                ii > 0 && matches!(item, Item::Summary(_)) && matches!(items[ii - 1], Item::Summary(_));
            if ii > 0 && !consecutive_summaries {
                lines.push("");
            }
            match item {
                Item::Text(content) => lines.extend(content.iter().map(String::as_str)),
                Item::Summary(line) => lines.push(line),
            }
        }
    }

    Ok(RenderedView {
        view_kind: ViewKind::Ui,
        text: join_lines(&lines),
        pointers,
        source_total_lines: doc.total_lines(),
        source_fingerprint: doc.fingerprint().unwrap_or_default(),
    })
}
