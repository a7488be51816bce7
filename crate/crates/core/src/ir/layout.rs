use super::{LineOwner, LineSpan, MappedLine, Node, Section, SectionRole};

/// Placement of structural lines in the full view.
///
/// The default layout:
///
/// ```text
/// === turn 1: user ===
/// --- user ---
/// fix the failing test
///
/// === turn 2: assistant ===
/// --- thinking ---
/// ...
///
/// --- tool_call: Read ---
/// file_path: src/config.py
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutRules {
    /// One blank line before every section header except the first.
    pub blank_before_section: bool,
    /// One blank line after the last block of every section.
    pub blank_after_section: bool,
    /// One blank line between consecutive blocks of a section.
    pub blank_between_blocks: bool,
    /// Emit a `--- user ---` / `--- assistant ---` delimiter before text
    /// blocks. Other kinds always get a delimiter.
    pub delimit_text_blocks: bool,
}

impl Default for LayoutRules {
    fn default() -> Self {
        Self {
            blank_before_section: true,
            blank_after_section: false,
            blank_between_blocks: true,
            delimit_text_blocks: true,
        }
    }
}

/// `=== turn <k>: <role> ===`, with `k` 1-based.
pub fn section_header(section_index: usize, role: SectionRole) -> String {
    format!("=== turn {}: {} ===", section_index + 1, role)
}

/// `--- <kind> ---` or `--- <kind>: <tool name> ---`.
pub fn block_delimiter(node: &Node) -> String {
    match &node.tool_name {
        Some(name) => format!("--- {}: {} ---", node.kind, name),
        None => format!("--- {} ---", node.kind),
    }
}

impl LayoutRules {
    pub(super) fn render(&self, sections: &mut [Section]) -> Vec<MappedLine> {
        let mut lines = Vec::new();
        let push = |lines: &mut Vec<MappedLine>, text: String, owner: LineOwner| {
            lines.push(MappedLine { text, owner });
        };

        for (si, section) in sections.iter_mut().enumerate() {
            if si > 0 && self.blank_before_section {
                push(&mut lines, String::new(), LineOwner::Blank);
            }
            push(
                &mut lines,
                section_header(si, section.role),
                LineOwner::SectionHeader { section: si },
            );
            for (bi, node) in section.nodes.iter_mut().enumerate() {
                if bi > 0 && self.blank_between_blocks {
                    push(&mut lines, String::new(), LineOwner::Blank);
                }
                if self.delimit_text_blocks || !node.kind.is_text() {
                    push(
                        &mut lines,
                        block_delimiter(node),
                        LineOwner::BlockDelimiter { section: si, block: bi },
                    );
                }
                let owner = LineOwner::Node { section: si, block: bi };
                let start = lines.len() + 1;
                for text in &node.content_lines {
                    push(&mut lines, text.clone(), owner);
                }
                node.span = Some(LineSpan::single(start, lines.len()).expect("node has content lines"));
            }
            if self.blank_after_section {
                push(&mut lines, String::new(), LineOwner::Blank);
            }
        }
        lines
    }
}
