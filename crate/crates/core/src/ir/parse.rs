use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::{Document, IrError, Node, NodeKind, Section, SectionRole};
use crate::diag::Diagnostic;
use crate::lexer::{BlockType, ContentBlock, RawRecord, Role};
use crate::normalizer::{
    compile_tool_input, extract_inline_media, strip_ansi_control, strip_harness_markup, strip_read_prefix,
    MediaArtifact, NormalizeConfig,
};

#[derive(Debug, Clone, Default)]
pub struct ParseOptions<'a> {
    pub normalize: NormalizeConfig,
    /// Where decoded inline media is written. `None` decodes without writing;
    /// placeholders are identical either way.
    pub media_dir: Option<&'a Path>,
}

/// Tool whose results carry a line-number gutter.
const READ_TOOL: &str = "Read";

/// Lowers lexed records into an unassigned [`Document`].
///
/// * user records: text blocks become `user` nodes after markup stripping;
///   runs of `tool_result` blocks are split off into sections of role
///   assistant, since results are machine observations;
/// * assistant records: one section, blocks mapped by type;
/// * system and summary records: one section of `system` nodes.
///
/// Blocks that normalize to nothing are dropped, as are internal tool calls
/// and their results. A record with no surviving blocks produces no section.
pub fn parse(records: &[RawRecord], opts: &ParseOptions<'_>) -> Result<Document, IrError> {
    let mut parser = Parser::new(records, opts);
    for record in records {
        parser.record(record)?;
    }
    Ok(Document::from_parts(parser.sections, parser.diagnostics, parser.media))
}

struct Parser<'o, 'a> {
    opts: &'o ParseOptions<'a>,
    tool_names: BTreeMap<String, String>,
    internal_ids: BTreeSet<String>,
    sections: Vec<Section>,
    diagnostics: Vec<Diagnostic>,
    media: Vec<MediaArtifact>,
    media_ordinal: usize,
}

impl<'o, 'a> Parser<'o, 'a> {
    fn new(records: &[RawRecord], opts: &'o ParseOptions<'a>) -> Self {
        let mut tool_names = BTreeMap::new();
        let mut internal_ids = BTreeSet::new();
        for block in records.iter().flat_map(|r| &r.content) {
            if let (BlockType::ToolUse, Some(id), Some(name)) = (block.block_type, &block.tool_use_id, &block.tool_name) {
                tool_names.entry(id.clone()).or_insert_with(|| name.clone());
                if opts.normalize.is_internal_tool(name) {
                    internal_ids.insert(id.clone());
                }
            }
        }
        Self {
            opts,
            tool_names,
            internal_ids,
            sections: Vec::new(),
            diagnostics: Vec::new(),
            media: Vec::new(),
            media_ordinal: 0,
        }
    }

    fn record(&mut self, record: &RawRecord) -> Result<(), IrError> {
        let at = record.source_index;
        match record.role {
            Role::User => {
                // Alternate between user text runs and tool-result runs.
                let mut current: Option<Section> = None;
                for block in &record.content {
                    let Some(node) = self.block_node(block, NodeKind::User, at)? else {
                        continue;
                    };
                    let role = if node.kind == NodeKind::ToolResult {
                        SectionRole::Assistant
                    } else {
                        SectionRole::User
                    };
                    if current.as_ref().is_some_and(|s| s.role != role) {
                        self.push_section(current.take());
                    }
                    let section = current.get_or_insert_with(|| Section::new(role, at));
                    if role == SectionRole::User {
                        section.message_ids = record.message_id.iter().cloned().collect();
                    }
                    attach(section, node, block);
                }
                self.push_section(current);
            }
            Role::Assistant => {
                let mut section = Section::new(SectionRole::Assistant, at);
                section.message_ids = record.message_id.iter().cloned().collect();
                for block in &record.content {
                    if let Some(node) = self.block_node(block, NodeKind::Assistant, at)? {
                        attach(&mut section, node, block);
                    }
                }
                self.push_section(Some(section));
            }
            Role::System | Role::None => {
                let mut section = Section::new(SectionRole::System, at);
                for block in &record.content {
                    if let Some(node) = self.block_node(block, NodeKind::System, at)? {
                        attach(&mut section, node, block);
                    }
                }
                self.push_section(Some(section));
            }
        }
        Ok(())
    }

    fn push_section(&mut self, section: Option<Section>) {
        if let Some(section) = section.filter(|s| !s.nodes.is_empty()) {
            self.sections.push(section);
        }
    }

    /// Normalizes one block into a node; `text_kind` is the kind plain text
    /// takes under the record's role.
    fn block_node(&mut self, block: &ContentBlock, text_kind: NodeKind, at: usize) -> Result<Option<Node>, IrError> {
        let strip_markup = text_kind != NodeKind::Assistant;
        let node = match block.block_type {
            BlockType::Text => self
                .prose(&block.text, strip_markup, at)
                .map(|text| Node::from_text(text_kind, &text)),
            BlockType::Thinking => {
                let text = strip_ansi_control(&block.text);
                (!text.is_empty()).then(|| Node::from_text(NodeKind::Thinking, &text))
            }
            BlockType::Image => {
                self.media_ordinal += 1;
                let extracted = extract_inline_media(block, self.opts.media_dir, self.media_ordinal)?;
                if let Some(warning) = extracted.warning {
                    self.diagnostics.push(Diagnostic::warn(at, warning));
                }
                self.media.extend(extracted.artifact);
                let kind = if block.tool_use_id.is_some() { NodeKind::ToolResult } else { text_kind };
                Some(Node::from_text(kind, &extracted.block.text).with_tool(None, block.tool_use_id.clone()))
            }
            BlockType::ToolUse => {
                let name = sanitize_name(block.tool_name.as_deref().unwrap_or_default());
                if self.opts.normalize.is_internal_tool(&name) {
                    return Ok(None);
                }
                let raw = block.tool_input_json.as_deref().unwrap_or("{}");
                let yaml = match compile_tool_input(raw) {
                    Ok(yaml) => yaml,
                    Err(e) => {
                        self.diagnostics
                            .push(Diagnostic::warn(at, format!("tool input of {name} kept verbatim: {e}")));
                        format!("{}\n", strip_ansi_control(raw))
                    }
                };
                let body = yaml.strip_suffix('\n').unwrap_or(&yaml);
                Some(
                    Node::from_text(NodeKind::ToolCall, body)
                        .with_tool(Some(name), block.tool_use_id.clone())
                        .with_tool_input(raw),
                )
            }
            BlockType::ToolResult => {
                let id = block.tool_use_id.clone().unwrap_or_default();
                if self.internal_ids.contains(&id) {
                    return Ok(None);
                }
                let tool_name = self.tool_names.get(&id).cloned();
                if tool_name.is_none() {
                    self.diagnostics
                        .push(Diagnostic::warn(at, format!("tool_result {id:?} has no matching tool_use")));
                }
                let mut text = strip_ansi_control(&block.text);
                let stripped = strip_harness_markup(&text, &self.opts.normalize.markup_rules);
                self.warn_unbalanced(&stripped.unbalanced, at);
                text = stripped.text;
                if tool_name.as_deref() == Some(READ_TOOL) {
                    text = strip_read_prefix(&text);
                }
                Some(Node::from_text(NodeKind::ToolResult, &text).with_tool(tool_name.map(|n| sanitize_name(&n)), Some(id)))
            }
        };
        Ok(node)
    }

    /// ANSI and, optionally, markup stripping for a text payload. `None` when
    /// nothing is left to show.
    fn prose(&mut self, raw: &str, strip_markup: bool, at: usize) -> Option<String> {
        let mut text = strip_ansi_control(raw);
        if strip_markup {
            let stripped = strip_harness_markup(&text, &self.opts.normalize.markup_rules);
            self.warn_unbalanced(&stripped.unbalanced, at);
            if stripped.hide_turn {
                return None;
            }
            text = stripped.text;
        }
        (!text.is_empty()).then_some(text)
    }

    fn warn_unbalanced(&mut self, tags: &[String], at: usize) {
        for tag in tags {
            self.diagnostics
                .push(Diagnostic::warn(at, format!("unclosed <{tag}> removed through end of text")));
        }
    }
}

/// Adds `node` to `section`. An image nested in a tool result joins the
/// preceding result node as an extra line.
fn attach(section: &mut Section, mut node: Node, block: &ContentBlock) {
    if block.block_type == BlockType::Image && block.tool_use_id.is_some() {
        if let Some(last) = section.nodes.last_mut() {
            if last.kind == NodeKind::ToolResult && last.tool_use_id == block.tool_use_id {
                last.content_lines.append(&mut node.content_lines);
                return;
            }
        }
        node.kind = NodeKind::ToolResult;
    }
    section.nodes.push(node);
}

fn sanitize_name(name: &str) -> String {
    let cleaned: String = strip_ansi_control(name)
        .chars()
        .map(|c| if c.is_whitespace() { ' ' } else { c })
        .collect();
    let trimmed = cleaned.trim();
    if trimmed.is_empty() {
        "unnamed".to_string()
    } else {
        trimmed.to_string()
    }
}
