//! JSON tool parameters to block-style YAML.
//!
//! Multi-line strings become literal block scalars so that code and prose in
//! tool inputs read verbatim. Everything the emitter produces parses back, with
//! a standard YAML 1.2 reader, to the JSON value it came from.

use serde_json::{Map, Number, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ToolInputError {
    #[error("tool input is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("tool input is not a JSON object")]
    NotAnObject,
}

/// Implicit keys longer than this are written with the explicit `? ` form.
const MAX_IMPLICIT_KEY: usize = 1000;

/// Compiles a JSON object of tool parameters to YAML.
///
/// Every output line is LF-terminated; `{}` compiles to the empty string.
/// Keys keep their source order.
pub fn compile_tool_input(raw_json: &str) -> Result<String, ToolInputError> {
    let value: Value = serde_json::from_str(raw_json)?;
    let map = value.as_object().ok_or(ToolInputError::NotAnObject)?;
    let mut out = String::new();
    for line in yaml_lines(map) {
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

/// The YAML rendering of `map`, one entry per output line, without newlines.
pub fn yaml_lines(map: &Map<String, Value>) -> Vec<String> {
    let mut lines = Vec::new();
    emit_mapping(map, 0, &mut lines);
    lines
}

fn emit_mapping(map: &Map<String, Value>, indent: usize, out: &mut Vec<String>) {
    let pad = " ".repeat(indent);
    for (key, value) in map {
        let key = scalar_string(key, true);
        if key.len() > MAX_IMPLICIT_KEY {
            out.push(format!("{pad}? {key}"));
            emit_value(format!("{pad}:"), value, indent, out);
        } else {
            emit_value(format!("{pad}{key}:"), value, indent, out);
        }
    }
}

fn emit_sequence(items: &[Value], indent: usize, out: &mut Vec<String>) {
    let pad = " ".repeat(indent);
    for item in items {
        match item {
            Value::Object(map) if !map.is_empty() => {
                let start = out.len();
                emit_mapping(map, indent + 2, out);
                out[start].replace_range(..indent + 2, &format!("{pad}- "));
            }
            Value::Array(inner) if !inner.is_empty() => {
                let start = out.len();
                emit_sequence(inner, indent + 2, out);
                out[start].replace_range(..indent + 2, &format!("{pad}- "));
            }
            _ => emit_value(format!("{pad}-"), item, indent, out),
        }
    }
}

/// Emits `value` after `prefix` (`key:` or `-`), whose owning node sits at
/// column `indent`.
fn emit_value(prefix: String, value: &Value, indent: usize, out: &mut Vec<String>) {
    match value {
        Value::Object(map) if !map.is_empty() => {
            out.push(prefix);
            emit_mapping(map, indent + 2, out);
        }
        Value::Array(items) if !items.is_empty() => {
            out.push(prefix);
            emit_sequence(items, indent + 2, out);
        }
        Value::Object(_) => out.push(format!("{prefix} {{}}")),
        Value::Array(_) => out.push(format!("{prefix} []")),
        Value::String(s) if block_safe(s) => emit_literal(prefix, s, indent, out),
        Value::String(s) => out.push(format!("{prefix} {}", scalar_string(s, false))),
        Value::Null => out.push(format!("{prefix} null")),
        Value::Bool(b) => out.push(format!("{prefix} {b}")),
        Value::Number(n) => out.push(format!("{prefix} {}", number(n))),
    }
}

fn emit_literal(prefix: String, s: &str, indent: usize, out: &mut Vec<String>) {
    let body = s.trim_end_matches('\n');
    let trailing = s.len() - body.len();
    let chomp = if trailing == 0 { "-" } else { "+" };
    // Auto-detection would misread a leading space or blank line as indentation.
    let indicator = if body.starts_with([' ', '\t', '\n']) { "2" } else { "" };
    out.push(format!("{prefix} |{indicator}{chomp}"));

    let pad = " ".repeat(indent + 2);
    for line in body.split('\n') {
        if line.is_empty() {
            out.push(String::new());
        } else {
            out.push(format!("{pad}{line}"));
        }
    }
    // The last body line's break is implicit; the rest are kept as empty lines.
    for _ in 1..trailing {
        out.push(String::new());
    }
}

fn number(n: &Number) -> String {
    let text = n.to_string();
    // serde_json writes exponent floats without a fraction ("1e300"), which
    // YAML 1.1 readers resolve as strings.
    if n.is_f64() && !text.contains('.') {
        if let Some((mantissa, exp)) = text.split_once(['e', 'E']) {
            return format!("{mantissa}.0e{exp}");
        }
    }
    text
}

/// A string is written as a literal block only when it spans lines and every
/// character survives a block scalar unchanged.
fn block_safe(s: &str) -> bool {
    s.contains('\n')
        && !s.trim_end_matches('\n').is_empty()
        && s.chars().all(|c| c == '\n' || c == '\t' || printable(c))
}

fn scalar_string(s: &str, is_key: bool) -> String {
    if plain_safe(s, is_key) {
        s.to_string()
    } else {
        double_quoted(s)
    }
}

/// YAML's printable set, minus the characters readers treat as line breaks
/// or byte-order marks.
fn printable(c: char) -> bool {
    matches!(c,
        '\u{20}'..='\u{7e}'
        | '\u{a0}'..='\u{2027}'
        | '\u{202a}'..='\u{d7ff}'
        | '\u{e000}'..='\u{fefe}'
        | '\u{ff00}'..='\u{fffd}'
        | '\u{10000}'..='\u{10ffff}')
}

const RESERVED: &[&str] = &[
    "null", "~", "true", "false", "yes", "no", "on", "off", "y", "n", "inf", "nan", "infinity", "<<", "=",
];

fn plain_safe(s: &str, is_key: bool) -> bool {
    let (Some(first), Some(last)) = (s.chars().next(), s.chars().last()) else {
        return false;
    };
    if is_key && s.len() > MAX_IMPLICIT_KEY {
        return false;
    }
    if first.is_whitespace() || last.is_whitespace() || last == ':' {
        return false;
    }
    if "-?:,[]{}#&*!|>'\"%@`+.".contains(first) || first.is_ascii_digit() {
        return false;
    }
    if s.contains(": ") || s.contains(" #") {
        return false;
    }
    if !s.chars().all(|c| printable(c) && !",[]{}".contains(c)) {
        return false;
    }
    !RESERVED.contains(&s.to_ascii_lowercase().as_str())
}

fn double_quoted(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            '\0' => out.push_str("\\0"),
            c if printable(c) => out.push(c),
            c if (c as u32) < 0x100 => out.push_str(&format!("\\x{:02X}", c as u32)),
            c => out.push_str(&format!("\\u{:04X}", c as u32)),
        }
    }
    out.push('"');
    out
}
