//! JSONL lexing: one physical line, one record.
//!
//! Accepted record shape (the subset of the Claude-Code log dialect this
//! crate understands):
//!
//! ```text
//! { "type": "...", "uuid"?: "...", "timestamp"?: "...",
//!   "message"?: { "id"?: "...", "role": "...", "content": string | [block, ...] } }
//! ```
//!
//! `system` records may carry their payload in a top-level `content` string,
//! `summary` records in a top-level `summary` string.
//!
//! Kinds that carry no conversation are dropped here with a warning. The set
//! is open-ended: log dialects grow new bookkeeping kinds, and every kind not
//! listed in [`RecordKind`] lexes as [`RecordKind::Unknown`] and is dropped
//! the same way.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::diag::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    User,
    Assistant,
    System,
    Summary,
    QueueOperation,
    FileHistorySnapshot,
    Progress,
    ApiError,
    Unknown,
}

impl RecordKind {
    pub const ALL: [RecordKind; 9] = [
        RecordKind::User,
        RecordKind::Assistant,
        RecordKind::System,
        RecordKind::Summary,
        RecordKind::QueueOperation,
        RecordKind::FileHistorySnapshot,
        RecordKind::Progress,
        RecordKind::ApiError,
        RecordKind::Unknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::User => "user",
            RecordKind::Assistant => "assistant",
            RecordKind::System => "system",
            RecordKind::Summary => "summary",
            RecordKind::QueueOperation => "queue_operation",
            RecordKind::FileHistorySnapshot => "file_history_snapshot",
            RecordKind::Progress => "progress",
            RecordKind::ApiError => "api_error",
            RecordKind::Unknown => "unknown",
        }
    }

    /// Whether records of this kind survive lexing.
    pub fn is_conversational(self) -> bool {
        matches!(
            self,
            RecordKind::User | RecordKind::Assistant | RecordKind::System | RecordKind::Summary
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    User,
    Assistant,
    System,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockType {
    Text,
    Thinking,
    ToolUse,
    ToolResult,
    Image,
}

/// One content block of a record.
///
/// For `Image` blocks `text` holds the base64 payload and `media_type` the
/// declared MIME type. An image nested inside a tool result is lexed as a
/// separate `Image` block that carries the result's `tool_use_id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentBlock {
    pub block_type: BlockType,
    pub text: String,
    pub tool_name: Option<String>,
    pub tool_input_json: Option<String>,
    pub tool_use_id: Option<String>,
    pub media_type: Option<String>,
}

impl ContentBlock {
    pub fn text(text: impl Into<String>) -> Self {
        Self::bare(BlockType::Text, text.into())
    }

    pub fn thinking(text: impl Into<String>) -> Self {
        Self::bare(BlockType::Thinking, text.into())
    }

    pub fn tool_use(id: Option<String>, name: impl Into<String>, input_json: impl Into<String>) -> Self {
        Self {
            tool_name: Some(name.into()),
            tool_input_json: Some(input_json.into()),
            tool_use_id: id,
            ..Self::bare(BlockType::ToolUse, String::new())
        }
    }

    pub fn tool_result(tool_use_id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            tool_use_id: Some(tool_use_id.into()),
            ..Self::bare(BlockType::ToolResult, text.into())
        }
    }

    pub fn image(media_type: Option<String>, base64_data: impl Into<String>) -> Self {
        Self {
            media_type,
            ..Self::bare(BlockType::Image, base64_data.into())
        }
    }

    fn bare(block_type: BlockType, text: String) -> Self {
        Self {
            block_type,
            text,
            tool_name: None,
            tool_input_json: None,
            tool_use_id: None,
            media_type: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub kind: RecordKind,
    pub role: Role,
    pub message_id: Option<String>,
    /// 0-based physical line of the record in the source file.
    pub source_index: usize,
    pub content: Vec<ContentBlock>,
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LexOptions {
    /// Abort on the first malformed line instead of skipping it.
    pub strict: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LexStats {
    /// Well-formed records seen, by kind, including filtered ones.
    pub by_kind: BTreeMap<RecordKind, usize>,
    pub filtered: usize,
    pub malformed: usize,
    pub empty_lines: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Lexed {
    pub records: Vec<RawRecord>,
    pub diagnostics: Vec<Diagnostic>,
    pub stats: LexStats,
}

impl Lexed {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }
}

/// Maps a record's top-level `type` tag onto a [`RecordKind`].
pub fn classify_record(record: &Value) -> RecordKind {
    match record.get("type").and_then(Value::as_str) {
        Some("user") => RecordKind::User,
        Some("assistant") => RecordKind::Assistant,
        Some("system") => RecordKind::System,
        Some("summary") => RecordKind::Summary,
        Some("queue-operation") => RecordKind::QueueOperation,
        Some("file-history-snapshot") => RecordKind::FileHistorySnapshot,
        Some("progress") => RecordKind::Progress,
        Some("api_error") | Some("api-error") => RecordKind::ApiError,
        _ => RecordKind::Unknown,
    }
}

/// Lexes newline-delimited JSON into records.
///
/// Every non-blank line yields exactly one record or one diagnostic. In
/// strict mode the first malformed line yields an error diagnostic and ends
/// lexing.
pub fn lex_stream(source: &str, opts: LexOptions) -> Lexed {
    let mut out = Lexed::default();
    let source = source.strip_prefix('\u{feff}').unwrap_or(source);

    for (index, line) in source.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            // The piece after a final newline is not a line.
            if index > 0 || !line.is_empty() {
                out.stats.empty_lines += 1;
            }
            continue;
        }

        let outcome = serde_json::from_str::<Value>(line)
            .map_err(|e| format!("malformed JSON: {e}"))
            .and_then(|value| lex_record(&value, index));

        match outcome {
            Ok(Lexeme::Record(record)) => {
                *out.stats.by_kind.entry(record.kind).or_default() += 1;
                out.records.push(record);
            }
            Ok(Lexeme::Filtered(kind, tag)) => {
                *out.stats.by_kind.entry(kind).or_default() += 1;
                out.stats.filtered += 1;
                out.diagnostics.push(Diagnostic::warn(
                    index,
                    format!("dropped non-conversational record of type {tag:?}"),
                ));
            }
            Err(message) => {
                out.stats.malformed += 1;
                if opts.strict {
                    out.diagnostics.push(Diagnostic::error(index, message));
                    break;
                }
                out.diagnostics.push(Diagnostic::warn(index, message));
            }
        }
    }

    out
}

enum Lexeme {
    Record(RawRecord),
    Filtered(RecordKind, String),
}

fn lex_record(value: &Value, index: usize) -> Result<Lexeme, String> {
    let obj = value
        .as_object()
        .ok_or_else(|| "record is not a JSON object".to_string())?;
    let kind = classify_record(value);
    if !kind.is_conversational() {
        let tag = obj
            .get("type")
            .and_then(Value::as_str)
            .unwrap_or("<missing>")
            .to_string();
        return Ok(Lexeme::Filtered(kind, tag));
    }

    let message = obj.get("message").and_then(Value::as_object);
    let timestamp = obj.get("timestamp").and_then(Value::as_str).map(str::to_string);
    let message_id = message
        .and_then(|m| m.get("id"))
        .and_then(Value::as_str)
        .map(str::to_string);

    let (role, content) = match kind {
        RecordKind::User | RecordKind::Assistant => {
            let message = message.ok_or("record has no message object")?;
            let default_role = if kind == RecordKind::User { Role::User } else { Role::Assistant };
            let role = match message.get("role").and_then(Value::as_str) {
                Some("user") => Role::User,
                Some("assistant") => Role::Assistant,
                Some("system") => Role::System,
                Some(other) => return Err(format!("unknown message role {other:?}")),
                None => default_role,
            };
            let content = message.get("content").ok_or("message has no content")?;
            (role, lex_content(content)?)
        }
        RecordKind::System => {
            let content = obj
                .get("content")
                .or_else(|| message.and_then(|m| m.get("content")))
                .ok_or("system record has no content")?;
            (Role::System, lex_content(content)?)
        }
        RecordKind::Summary => {
            let summary = obj
                .get("summary")
                .and_then(Value::as_str)
                .ok_or("summary record has no summary string")?;
            (Role::None, vec![ContentBlock::text(summary)])
        }
        _ => unreachable!("filtered above"),
    };

    Ok(Lexeme::Record(RawRecord {
        kind,
        role,
        message_id,
        source_index: index,
        content,
        timestamp,
    }))
}

fn lex_content(content: &Value) -> Result<Vec<ContentBlock>, String> {
    match content {
        Value::String(s) => Ok(vec![ContentBlock::text(s.as_str())]),
        Value::Array(items) => {
            let mut blocks = Vec::with_capacity(items.len());
            for item in items {
                lex_block(item, &mut blocks)?;
            }
            Ok(blocks)
        }
        Value::Null => Ok(Vec::new()),
        other => Err(format!("content must be a string or an array, found {}", json_type(other))),
    }
}

fn lex_block(item: &Value, out: &mut Vec<ContentBlock>) -> Result<(), String> {
    let Some(obj) = item.as_object() else {
        out.push(ContentBlock::text(scalar_or_json(item)));
        return Ok(());
    };
    match obj.get("type").and_then(Value::as_str) {
        Some("text") => out.push(ContentBlock::text(str_field(obj, "text"))),
        Some("thinking") => out.push(ContentBlock::thinking(str_field(obj, "thinking"))),
        Some("redacted_thinking") => out.push(ContentBlock::thinking("")),
        Some("tool_use") | Some("server_tool_use") => {
            let name = obj
                .get("name")
                .and_then(Value::as_str)
                .ok_or("tool_use block has no name")?;
            let id = obj.get("id").and_then(Value::as_str).map(str::to_string);
            let input = obj
                .get("input")
                .cloned()
                .unwrap_or_else(|| Value::Object(Map::new()));
            let input_json = serde_json::to_string(&input).map_err(|e| e.to_string())?;
            out.push(ContentBlock::tool_use(id, name, input_json));
        }
        Some("tool_result") => {
            let id = obj
                .get("tool_use_id")
                .and_then(Value::as_str)
                .ok_or("tool_result block has no tool_use_id")?;
            let mut images = Vec::new();
            let text = match obj.get("content") {
                None | Some(Value::Null) => String::new(),
                Some(Value::String(s)) => s.clone(),
                Some(Value::Array(parts)) => {
                    let mut texts = Vec::new();
                    for part in parts {
                        match part.get("type").and_then(Value::as_str) {
                            Some("text") => {
                                texts.push(part.get("text").and_then(Value::as_str).unwrap_or("").to_string())
                            }
                            Some("image") => {
                                let mut image = lex_image(part)?;
                                image.tool_use_id = Some(id.to_string());
                                images.push(image);
                            }
                            _ => texts.push(scalar_or_json(part)),
                        }
                    }
                    texts.join("\n")
                }
                Some(other) => scalar_or_json(other),
            };
            out.push(ContentBlock::tool_result(id, text));
            out.extend(images);
        }
        Some("image") => out.push(lex_image(item)?),
        _ => out.push(ContentBlock::text(scalar_or_json(item))),
    }
    Ok(())
}

fn lex_image(item: &Value) -> Result<ContentBlock, String> {
    let source = item
        .get("source")
        .and_then(Value::as_object)
        .ok_or("image block has no source")?;
    match source.get("type").and_then(Value::as_str) {
        Some("base64") | None => {
            let data = source
                .get("data")
                .and_then(Value::as_str)
                .ok_or("image source has no data")?;
            let media_type = source.get("media_type").and_then(Value::as_str).map(str::to_string);
            Ok(ContentBlock::image(media_type, data))
        }
        Some(_) => {
            let target = source
                .get("url")
                .or_else(|| source.get("file_id"))
                .map(scalar_or_json)
                .unwrap_or_else(|| scalar_or_json(&Value::Object(source.clone())));
            Ok(ContentBlock::text(format!("[image: {target}]")))
        }
    }
}

fn str_field(obj: &Map<String, Value>, key: &str) -> String {
    obj.get(key).map(scalar_or_json).unwrap_or_default()
}

fn scalar_or_json(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn json_type(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}
