//! The sectioned intermediate representation and its line-number assignment.
//!
//! A [`Document`] goes through three states: parsed, reassembled, assigned.
//! [`Document::assign_lines`] is the only code that creates line numbers, and
//! it runs once per document; afterwards the document is only handed out by
//! shared reference.

mod layout;
mod parse;
mod reassemble;
mod span;

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io;

use serde::Serialize;
use thiserror::Error;

use crate::diag::Diagnostic;
use crate::normalizer::MediaArtifact;

pub use layout::{block_delimiter, section_header, LayoutRules};
pub use parse::{parse, ParseOptions};
pub use reassemble::reassemble_split_messages;
pub use span::{LineSpan, SpanError};

#[derive(Debug, Error)]
pub enum IrError {
    #[error("line assignment occurs exactly once")]
    AlreadyAssigned,
    #[error("document has no line assignment")]
    NotAssigned,
    #[error("section {section} block {block}: {reason}")]
    InvalidNode {
        section: usize,
        block: usize,
        reason: &'static str,
    },
    #[error("writing media: {0}")]
    Media(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    User,
    Assistant,
    Thinking,
    ToolCall,
    ToolResult,
    System,
}

impl NodeKind {
    pub const ALL: [NodeKind; 6] = [
        NodeKind::User,
        NodeKind::Assistant,
        NodeKind::Thinking,
        NodeKind::ToolCall,
        NodeKind::ToolResult,
        NodeKind::System,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::User => "user",
            NodeKind::Assistant => "assistant",
            NodeKind::Thinking => "thinking",
            NodeKind::ToolCall => "tool_call",
            NodeKind::ToolResult => "tool_result",
            NodeKind::System => "system",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// Conversational text, as opposed to reasoning, tool traffic or
    /// directives.
    pub fn is_text(self) -> bool {
        matches!(self, NodeKind::User | NodeKind::Assistant)
    }

    /// `[tool_call]`, `[assistant]`, ...
    pub fn role_tag(self) -> String {
        format!("[{}]", self.as_str())
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionRole {
    User,
    Assistant,
    System,
}

impl SectionRole {
    pub fn as_str(self) -> &'static str {
        match self {
            SectionRole::User => "user",
            SectionRole::Assistant => "assistant",
            SectionRole::System => "system",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "user" => Some(SectionRole::User),
            "assistant" => Some(SectionRole::Assistant),
            "system" => Some(SectionRole::System),
            _ => None,
        }
    }
}

impl fmt::Display for SectionRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One typed content unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    /// Normalized content, one entry per line, no newlines.
    pub content_lines: Vec<String>,
    pub tool_name: Option<String>,
    pub tool_use_id: Option<String>,
    /// Raw JSON parameters of a tool call, kept for summary headlines.
    pub tool_input: Option<String>,
    pub section_index: usize,
    pub block_index: usize,
    span: Option<LineSpan>,
}

impl Node {
    pub fn new(kind: NodeKind, content_lines: Vec<String>) -> Self {
        Self {
            kind,
            content_lines,
            tool_name: None,
            tool_use_id: None,
            tool_input: None,
            section_index: 0,
            block_index: 0,
            span: None,
        }
    }

    /// Splits `text` on `\n` into content lines.
    pub fn from_text(kind: NodeKind, text: &str) -> Self {
        Self::new(kind, text.split('\n').map(str::to_string).collect())
    }

    pub fn with_tool(mut self, name: Option<String>, tool_use_id: Option<String>) -> Self {
        self.tool_name = name;
        self.tool_use_id = tool_use_id;
        self
    }

    pub fn with_tool_input(mut self, raw_json: impl Into<String>) -> Self {
        self.tool_input = Some(raw_json.into());
        self
    }

    /// Attaches a span to a detached node. Nodes inside a [`Document`] get
    /// theirs from [`Document::assign_lines`] only.
    pub fn with_span(mut self, span: LineSpan) -> Self {
        self.span = Some(span);
        self
    }

    pub fn span(&self) -> Option<&LineSpan> {
        self.span.as_ref()
    }

    fn validate(&self) -> Result<(), &'static str> {
        if self.content_lines.is_empty() {
            return Err("node has no content lines");
        }
        if self.content_lines.iter().any(|l| l.contains('\n')) {
            return Err("content line contains a newline");
        }
        if self.kind == NodeKind::ToolCall && self.tool_name.is_none() {
            return Err("tool_call without tool name");
        }
        if self.kind == NodeKind::ToolResult && self.tool_use_id.is_none() {
            return Err("tool_result without tool_use_id");
        }
        if self.tool_name.as_deref().is_some_and(|n| n.contains('\n')) {
            return Err("tool name contains a newline");
        }
        Ok(())
    }
}

/// One conversational turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub section_index: usize,
    pub role: SectionRole,
    pub message_ids: Vec<String>,
    /// 0-based source line of the first record that contributed to this
    /// section.
    pub source_index: usize,
    pub nodes: Vec<Node>,
}

impl Section {
    pub fn new(role: SectionRole, source_index: usize) -> Self {
        Self {
            section_index: 0,
            role,
            message_ids: Vec::new(),
            source_index,
            nodes: Vec::new(),
        }
    }
}

/// Who a full-view line belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineOwner {
    Node { section: usize, block: usize },
    SectionHeader { section: usize },
    BlockDelimiter { section: usize, block: usize },
    Blank,
}

impl LineOwner {
    pub fn is_structural(self) -> bool {
        !matches!(self, LineOwner::Node { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MappedLine {
    pub text: String,
    pub owner: LineOwner,
}

#[derive(Debug, Clone)]
struct Assignment {
    lines: Vec<MappedLine>,
    fingerprint: u64,
}

/// The IR of one session.
#[derive(Debug, Clone, Default)]
pub struct Document {
    sections: Vec<Section>,
    diagnostics: Vec<Diagnostic>,
    media: Vec<MediaArtifact>,
    assignment: Option<Assignment>,
}

impl Document {
    /// Builds an unassigned document from sections, renumbering section and
    /// block indices.
    pub fn from_sections(sections: Vec<Section>) -> Result<Self, IrError> {
        let mut doc = Self {
            sections,
            ..Self::default()
        };
        doc.renumber();
        for section in &doc.sections {
            for node in &section.nodes {
                node.validate().map_err(|reason| IrError::InvalidNode {
                    section: node.section_index,
                    block: node.block_index,
                    reason,
                })?;
            }
        }
        Ok(doc)
    }

    pub(crate) fn from_parts(sections: Vec<Section>, diagnostics: Vec<Diagnostic>, media: Vec<MediaArtifact>) -> Self {
        let mut doc = Self {
            sections,
            diagnostics,
            media,
            assignment: None,
        };
        doc.renumber();
        doc
    }

    pub(crate) fn into_parts(self) -> (Vec<Section>, Vec<Diagnostic>, Vec<MediaArtifact>, bool) {
        let assigned = self.assignment.is_some();
        (self.sections, self.diagnostics, self.media, assigned)
    }

    fn renumber(&mut self) {
        for (si, section) in self.sections.iter_mut().enumerate() {
            section.section_index = si;
            for (bi, node) in section.nodes.iter_mut().enumerate() {
                node.section_index = si;
                node.block_index = bi;
            }
        }
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> + '_ {
        self.sections.iter().flat_map(|s| s.nodes.iter())
    }

    pub fn node(&self, section: usize, block: usize) -> Option<&Node> {
        self.sections.get(section)?.nodes.get(block)
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub fn media(&self) -> &[MediaArtifact] {
        &self.media
    }

    pub fn is_assigned(&self) -> bool {
        self.assignment.is_some()
    }

    /// Number of full-view lines; 0 before assignment.
    pub fn total_lines(&self) -> usize {
        self.assignment.as_ref().map_or(0, |a| a.lines.len())
    }

    /// The assigned line map, indexed from 0 for line 1.
    pub fn line_map(&self) -> Result<&[MappedLine], IrError> {
        self.assignment
            .as_ref()
            .map(|a| a.lines.as_slice())
            .ok_or(IrError::NotAssigned)
    }

    /// Line `n` (1-based) of the full view.
    pub fn line(&self, n: usize) -> Option<&MappedLine> {
        let lines = &self.assignment.as_ref()?.lines;
        n.checked_sub(1).and_then(|i| lines.get(i))
    }

    /// The node that owns line `n`, if the line is content.
    pub fn owner_node(&self, n: usize) -> Option<&Node> {
        match self.line(n)?.owner {
            LineOwner::Node { section, block } => self.node(section, block),
            _ => None,
        }
    }

    /// Hash of the line map taken when it was assigned.
    pub fn fingerprint(&self) -> Option<u64> {
        self.assignment.as_ref().map(|a| a.fingerprint)
    }

    /// Recomputes the line-map hash from the current contents.
    pub fn recompute_fingerprint(&self) -> Option<u64> {
        self.assignment.as_ref().map(|a| fingerprint(&a.lines))
    }

    /// Renders the full transcript once and fixes every line number.
    ///
    /// Each node's span covers its content lines only; headers, delimiters
    /// and blank separators are owned by the structure. A second call fails
    /// with [`IrError::AlreadyAssigned`].
    pub fn assign_lines(&mut self, layout: &LayoutRules) -> Result<(), IrError> {
        if self.assignment.is_some() {
            return Err(IrError::AlreadyAssigned);
        }
        for section in &self.sections {
            for node in &section.nodes {
                node.validate().map_err(|reason| IrError::InvalidNode {
                    section: node.section_index,
                    block: node.block_index,
                    reason,
                })?;
            }
        }
        let lines = layout.render(&mut self.sections);
        let fingerprint = fingerprint(&lines);
        self.assignment = Some(Assignment { lines, fingerprint });
        Ok(())
    }
}

fn fingerprint(lines: &[MappedLine]) -> u64 {
    let mut hasher = DefaultHasher::new();
    lines.hash(&mut hasher);
    hasher.finish()
}
