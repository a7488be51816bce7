use serde_json::{Map, Value};

use super::{Pointer, ViewError};
use crate::ir::{Node, NodeKind};

/// Headlines longer than this many characters are cut and marked with `…`.
pub const HEADLINE_MAX_CHARS: usize = 60;

/// Headline for a tool call without scalar parameters.
pub const NO_ARGS: &str = "(no args)";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadlineRule {
    pub tool: String,
    /// Parameter shown in the summary line.
    pub parameter: String,
    pub truncate: bool,
}

/// Which parameter of each tool makes the summary headline. Tools not listed
/// use their first scalar parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeadlineTable {
    pub rules: Vec<HeadlineRule>,
}

impl Default for HeadlineTable {
    fn default() -> Self {
        let rule = |tool: &str, parameter: &str, truncate: bool| HeadlineRule {
            tool: tool.into(),
            parameter: parameter.into(),
            truncate,
        };
        Self {
            rules: vec![
                rule("Read", "file_path", false),
                rule("Edit", "file_path", false),
                rule("Write", "file_path", false),
                rule("NotebookEdit", "file_path", false),
                rule("Bash", "command", true),
                rule("Grep", "pattern", true),
                rule("Glob", "pattern", true),
                rule("WebFetch", "url", true),
            ],
        }
    }
}

impl HeadlineTable {
    fn rule(&self, tool: &str) -> Option<&HeadlineRule> {
        self.rules.iter().find(|r| r.tool == tool)
    }

    /// The headline of a call to `tool` with `input` parameters.
    pub fn headline(&self, tool: &str, input: Option<&Map<String, Value>>) -> String {
        let Some(input) = input else {
            return NO_ARGS.to_string();
        };
        let rule = self.rule(tool);
        let (value, truncate) = match rule.and_then(|r| input.get(&r.parameter).and_then(scalar)) {
            Some(value) => (value, rule.is_some_and(|r| r.truncate)),
            None => match input.values().find_map(scalar) {
                Some(value) => (value, true),
                None => return NO_ARGS.to_string(),
            },
        };
        let one_line: String = value
            .chars()
            .map(|c| if c == '\n' || c == '\r' || c == '\t' { ' ' } else { c })
            .collect();
        let shown = if truncate && one_line.chars().count() > HEADLINE_MAX_CHARS {
            let mut cut: String = one_line.chars().take(HEADLINE_MAX_CHARS).collect();
            cut.push('…');
            cut
        } else {
            one_line
        };
        format!("\"{shown}\"")
    }
}

fn scalar(value: &Value) -> Option<String> {
    match value {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

/// `* <Tool> <headline> (<pointer>)`, where the pointer covers the call and,
/// when given, its result.
pub fn summarize_tool_call(
    node: &Node,
    paired_result: Option<&Node>,
    file_label: &str,
    headlines: &HeadlineTable,
) -> Result<(String, Pointer), ViewError> {
    debug_assert_eq!(node.kind, NodeKind::ToolCall);
    let missing = |n: &Node| ViewError::NodeWithoutSpan {
        section: n.section_index,
        block: n.block_index,
    };
    let mut span = node.span().ok_or_else(|| missing(node))?.clone();
    if let Some(result) = paired_result {
        span = span.union(result.span().ok_or_else(|| missing(result))?);
    }
    let tool = node.tool_name.as_deref().unwrap_or("unnamed");
    let input = node
        .tool_input
        .as_deref()
        .and_then(|raw| serde_json::from_str::<Value>(raw).ok());
    let headline = headlines.headline(tool, input.as_ref().and_then(Value::as_object));
    let pointer = Pointer::new(file_label, span);
    Ok((format!("* {tool} {headline} {pointer}"), pointer))
}
