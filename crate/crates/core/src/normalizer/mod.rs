//! Content transformations applied to record payloads before IR
//! construction.
//!
//! Every function here is a fixed point on its own output, with the caveats
//! noted on [`strip_read_prefix`] and [`strip_harness_markup`].

mod ansi;
mod markup;
mod media;
mod yaml;

use std::collections::BTreeSet;

pub use ansi::strip_ansi_control;
pub use markup::{
    default_markup_rules, strip_harness_markup, InvalidTagName, MarkupAction, MarkupRule, StrippedMarkup,
    DEFAULT_MARKUP_TAGS,
};
pub use media::{
    extract_inline_media, media_extension, placeholder, ExtractedMedia, MediaArtifact, MEDIA_DIR_NAME,
    UNDECODABLE_PLACEHOLDER,
};
pub use yaml::{compile_tool_input, yaml_lines, ToolInputError};

pub const DEFAULT_INTERNAL_TOOLS: &[&str] = &["TodoWrite", "ToolSearch"];

/// Configuration for the content transformations.
#[derive(Debug, Clone)]
pub struct NormalizeConfig {
    pub markup_rules: Vec<MarkupRule>,
    pub internal_tools: BTreeSet<String>,
}

impl Default for NormalizeConfig {
    fn default() -> Self {
        Self {
            markup_rules: default_markup_rules(),
            internal_tools: DEFAULT_INTERNAL_TOOLS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl NormalizeConfig {
    pub fn is_internal_tool(&self, tool_name: &str) -> bool {
        self.internal_tools.contains(tool_name)
    }
}

/// Whether `tool_name` is one of the default internal (bookkeeping) tools.
pub fn is_internal_tool(tool_name: &str) -> bool {
    DEFAULT_INTERNAL_TOOLS.contains(&tool_name)
}

/// Removes the `<spaces><digits>→` line-number gutter the Read tool puts on
/// every line of file content. Lines without the gutter pass through.
///
/// Not idempotent on content that itself starts with a gutter, e.g. a file
/// whose lines read `12→x`.
pub fn strip_read_prefix(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for (i, line) in text.split('\n').enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(read_prefix_body(line).unwrap_or(line));
    }
    out
}

fn read_prefix_body(line: &str) -> Option<&str> {
    let rest = line.trim_start_matches(' ');
    let digits = rest.len() - rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
    if digits == 0 {
        return None;
    }
    rest[digits..].strip_prefix('→')
}
