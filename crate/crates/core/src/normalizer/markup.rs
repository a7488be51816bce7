//! Removal of harness-injected XML-ish elements such as `<system-reminder>`.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkupAction {
    /// Remove the element; never hide the turn because of it.
    StripKeepRest,
    /// Remove the element; hide the turn if nothing else is left.
    HideTurnIfSoleContent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkupRule {
    tag_name: String,
    action: MarkupAction,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid markup tag name {0:?}")]
pub struct InvalidTagName(pub String);

impl MarkupRule {
    pub fn new(tag_name: impl Into<String>, action: MarkupAction) -> Result<Self, InvalidTagName> {
        let tag_name = tag_name.into();
        if tag_name.is_empty()
            || tag_name
                .chars()
                .any(|c| c == '<' || c == '>' || c == '/' || c.is_whitespace())
        {
            return Err(InvalidTagName(tag_name));
        }
        Ok(Self { tag_name, action })
    }

    pub fn tag_name(&self) -> &str {
        &self.tag_name
    }

    pub fn action(&self) -> MarkupAction {
        self.action
    }
}

pub const DEFAULT_MARKUP_TAGS: &[&str] = &[
    "system-reminder",
    "ide_opened_file",
    "command-message",
    "command-stdout",
    "local-command-stdout",
];

pub fn default_markup_rules() -> Vec<MarkupRule> {
    DEFAULT_MARKUP_TAGS
        .iter()
        .map(|tag| MarkupRule::new(*tag, MarkupAction::HideTurnIfSoleContent).expect("valid tag"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrippedMarkup {
    pub text: String,
    pub hide_turn: bool,
    /// Tags whose opening had no matching close; removed through end of text.
    pub unbalanced: Vec<String>,
}

/// Deletes every configured element, content included.
///
/// Same-name nesting is matched by depth and the outermost element goes as a
/// whole. An element that never closes is removed through the end of the text
/// and reported in `unbalanced`. When the turn is hidden the returned text is
/// empty.
pub fn strip_harness_markup(text: &str, rules: &[MarkupRule]) -> StrippedMarkup {
    let mut out = String::with_capacity(text.len());
    let mut unbalanced = Vec::new();
    let mut removed_hiding = false;
    let mut cursor = 0;
    let mut scan = 0;

    while let Some(offset) = text[scan..].find('<') {
        let at = scan + offset;
        let Some((rule, open_end, self_closing)) = match_open(text, at, rules) else {
            scan = at + 1;
            continue;
        };
        let end = if self_closing {
            open_end
        } else {
            match find_close(text, open_end, &rule.tag_name) {
                Some(end) => end,
                None => {
                    unbalanced.push(rule.tag_name.clone());
                    text.len()
                }
            }
        };
        out.push_str(&text[cursor..at]);
        removed_hiding |= rule.action == MarkupAction::HideTurnIfSoleContent;
        cursor = end;
        scan = end;
    }
    out.push_str(&text[cursor..]);

    let hide_turn = removed_hiding && out.trim().is_empty();
    if hide_turn {
        out.clear();
    }
    StrippedMarkup {
        text: out,
        hide_turn,
        unbalanced,
    }
}

/// If an opening tag of a configured element starts at `at`, returns the rule,
/// the byte offset just past the tag, and whether it was self-closing. An
/// opening tag with no `>` ends at the end of the text and never closes.
fn match_open<'r>(text: &str, at: usize, rules: &'r [MarkupRule]) -> Option<(&'r MarkupRule, usize, bool)> {
    let rest = &text[at + 1..];
    let rule = rules.iter().find(|r| {
        rest.strip_prefix(r.tag_name.as_str())
            .map(|after| after.is_empty() || after.starts_with(['>', '/']) || after.starts_with(char::is_whitespace))
            .unwrap_or(false)
    })?;
    match text[at..].find('>') {
        Some(gt) => {
            let self_closing = text[..at + gt].ends_with('/');
            Some((rule, at + gt + 1, self_closing))
        }
        None => Some((rule, text.len(), false)),
    }
}

fn find_close(text: &str, from: usize, tag: &str) -> Option<usize> {
    let mut depth = 1usize;
    let mut scan = from;
    while let Some(offset) = text[scan..].find('<') {
        let at = scan + offset;
        let rest = &text[at + 1..];
        if let Some(after) = rest.strip_prefix('/').and_then(|r| r.strip_prefix(tag)) {
            let trimmed = after.trim_start();
            if trimmed.starts_with('>') {
                depth -= 1;
                let end = at + 1 + 1 + tag.len() + (after.len() - trimmed.len()) + 1;
                if depth == 0 {
                    return Some(end);
                }
                scan = end;
                continue;
            }
        } else if let Some(after) = rest.strip_prefix(tag) {
            if after.starts_with('>') || after.starts_with(char::is_whitespace) {
                depth += 1;
            }
        }
        scan = at + 1;
    }
    None
}
