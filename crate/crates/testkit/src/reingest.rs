//! Reads a full view back into sections and blocks.
//!
//! Works from the text alone. Assumes every block is delimited and that
//! content never starts with `=== turn ` or `--- `.

use std::collections::BTreeSet;
use std::fmt;

use tracec_core::{LayoutRules, NodeKind, SectionRole};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReingestedBlock {
    pub kind: NodeKind,
    pub tool_name: Option<String>,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReingestedSection {
    pub role: SectionRole,
    pub blocks: Vec<ReingestedBlock>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Reingested {
    pub sections: Vec<ReingestedSection>,
    /// 1-based numbers of header, delimiter and separator lines.
    pub structural: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReingestError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ReingestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ReingestError {}

enum Line<'a> {
    Header(SectionRole),
    Delimiter(NodeKind, Option<&'a str>),
    Text(&'a str),
}

fn classify(text: &str) -> Result<Line<'_>, String> {
    if let Some(rest) = text.strip_prefix("=== turn ").and_then(|r| r.strip_suffix(" ===")) {
        let (_, role) = rest.split_once(": ").ok_or("header without role")?;
        let role = SectionRole::parse(role).ok_or_else(|| format!("unknown role {role:?}"))?;
        return Ok(Line::Header(role));
    }
    if let Some(rest) = text.strip_prefix("--- ").and_then(|r| r.strip_suffix(" ---")) {
        let (kind, tool) = match rest.split_once(": ") {
            Some((kind, tool)) => (kind, Some(tool)),
            None => (rest, None),
        };
        let kind = NodeKind::parse(kind).ok_or_else(|| format!("unknown block kind {kind:?}"))?;
        return Ok(Line::Delimiter(kind, tool));
    }
    Ok(Line::Text(text))
}

/// Parses `full_view_text` laid out under `layout`.
pub fn reingest_full_view(full_view_text: &str, layout: &LayoutRules) -> Result<Reingested, ReingestError> {
    if !layout.delimit_text_blocks {
        return Err(ReingestError {
            line: 0,
            message: "undelimited text blocks cannot be recovered".into(),
        });
    }
    let mut out = Reingested::default();
    // Line numbers of the current block's content, to give back a trailing
    // separator.
    let mut open: Vec<usize> = Vec::new();

    let close = |out: &mut Reingested, open: &mut Vec<usize>, separators: usize| {
        for _ in 0..separators {
            if let Some(block) = out.sections.last_mut().and_then(|s| s.blocks.last_mut()) {
                if block.lines.last().is_some_and(String::is_empty) && !open.is_empty() {
                    block.lines.pop();
                    out.structural.insert(open.pop().unwrap());
                }
            }
        }
        open.clear();
    };

    for (i, text) in full_view_text.split_terminator('\n').enumerate() {
        let n = i + 1;
        let fail = |message: String| ReingestError { line: n, message };
        match classify(text).map_err(fail)? {
            Line::Header(role) => {
                let started = !out.sections.is_empty();
                let separators = usize::from(started && layout.blank_before_section)
                    + usize::from(started && layout.blank_after_section);
                close(&mut out, &mut open, separators);
                out.sections.push(ReingestedSection { role, blocks: Vec::new() });
                out.structural.insert(n);
            }
            Line::Delimiter(kind, tool) => {
                let section = out
                    .sections
                    .last_mut()
                    .ok_or_else(|| fail("block outside any section".into()))?;
                let separated = !section.blocks.is_empty() && layout.blank_between_blocks;
                close(&mut out, &mut open, usize::from(separated));
                out.sections.last_mut().unwrap().blocks.push(ReingestedBlock {
                    kind,
                    tool_name: tool.map(str::to_string),
                    lines: Vec::new(),
                });
                out.structural.insert(n);
            }
            Line::Text(text) => {
                let block = out
                    .sections
                    .last_mut()
                    .and_then(|s| s.blocks.last_mut())
                    .ok_or_else(|| fail("content outside any block".into()))?;
                block.lines.push(text.to_string());
                open.push(n);
            }
        }
    }
    close(&mut out, &mut open, usize::from(layout.blank_after_section));
    Ok(out)
}
