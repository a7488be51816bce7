//! Relevance predicates over full-view lines.
//!
//! [`Predicate`] is the seam for other relevance functions (lexical scoring,
//! embeddings, model judgments); only regular expressions ship. A scoring
//! predicate plugs in by thresholding its score inside `eval`.

use std::fmt;

use regex::{Regex, RegexBuilder};
use thiserror::Error;

use crate::ir::Node;

/// A total, deterministic yes/no judgment on one line of text.
pub trait Predicate {
    fn eval(&self, line: &str) -> bool;

    fn description(&self) -> String;
}

impl<F: Fn(&str) -> bool> Predicate for F {
    fn eval(&self, line: &str) -> bool {
        self(line)
    }

    fn description(&self) -> String {
        "<fn>".to_string()
    }
}

#[derive(Debug, Error)]
#[error("invalid pattern: {0}")]
pub struct PatternError(#[from] regex::Error);

/// Unanchored regular-expression search (Rust `regex` syntax; no
/// backreferences or lookaround, linear-time matching).
#[derive(Debug, Clone)]
pub struct RegexPredicate {
    regex: Regex,
    pattern: String,
    case_sensitive: bool,
}

impl RegexPredicate {
    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn case_sensitive(&self) -> bool {
        self.case_sensitive
    }
}

impl Predicate for RegexPredicate {
    fn eval(&self, line: &str) -> bool {
        self.regex.is_match(line)
    }

    fn description(&self) -> String {
        let flag = if self.case_sensitive { "" } else { " (ignoring case)" };
        format!("regex /{}/{flag}", self.pattern)
    }
}

impl fmt::Display for RegexPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.description())
    }
}

/// Compiles `pattern`; errors carry the position of the offending token.
pub fn build_regex_predicate(pattern: &str, case_sensitive: bool) -> Result<RegexPredicate, PatternError> {
    let regex = RegexBuilder::new(pattern).case_insensitive(!case_sensitive).build()?;
    Ok(RegexPredicate {
        regex,
        pattern: pattern.to_string(),
        case_sensitive,
    })
}

/// The lines of `node` that satisfy `predicate`, with their full-view line
/// numbers, ascending. Empty for a node without a span.
pub fn match_lines<'n>(node: &'n Node, predicate: &dyn Predicate) -> Vec<(usize, &'n str)> {
    let Some(span) = node.span() else {
        return Vec::new();
    };
    span.lines()
        .zip(&node.content_lines)
        .filter(|(_, text)| predicate.eval(text))
        .map(|(n, text)| (n, text.as_str()))
        .collect()
}
