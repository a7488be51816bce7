use std::fmt;

use base64::engine::general_purpose::STANDARD;
use base64::Engine as _;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tracec_core::{NodeKind, SectionRole};

/// Parameters of one synthetic session.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSpec {
    pub seed: u64,
    /// Number of user/assistant exchanges, alternating and starting with
    /// the user.
    pub turn_count: usize,
    /// Per assistant turn: chance of a tool round, repeated up to four
    /// times while it keeps succeeding.
    pub tool_call_rate: f64,
    pub thinking_rate: f64,
    /// Chance a user turn carries harness markup (half of those are markup
    /// only and vanish), and chance of a harness system record per turn.
    pub markup_rate: f64,
    pub compaction_split_rate: f64,
    pub filtered_record_rate: f64,
    pub media_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvalidSpec(pub &'static str);

impl fmt::Display for InvalidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} must lie in [0, 1]", self.0)
    }
}

impl std::error::Error for InvalidSpec {}

impl TraceSpec {
    /// A plain dialogue: every rate zero.
    pub fn plain(seed: u64, turn_count: usize) -> Self {
        Self {
            seed,
            turn_count,
            tool_call_rate: 0.0,
            thinking_rate: 0.0,
            markup_rate: 0.0,
            compaction_split_rate: 0.0,
            filtered_record_rate: 0.0,
            media_rate: 0.0,
        }
    }

    /// Rates and length drawn from `seed` itself, for corpus sweeps.
    pub fn mixed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f00d);
        let mut rate = || [0.0, 0.1, 0.3, 0.5, 0.8, 1.0][rng.gen_range(0..6)];
        let spec = Self {
            seed,
            turn_count: 0,
            tool_call_rate: rate(),
            thinking_rate: rate(),
            markup_rate: rate(),
            compaction_split_rate: rate(),
            filtered_record_rate: rate(),
            media_rate: rate() / 2.0,
        };
        Self {
            turn_count: ChaCha8Rng::seed_from_u64(seed).gen_range(2..=24),
            ..spec
        }
    }

    pub fn validate(&self) -> Result<(), InvalidSpec> {
        let rates = [
            ("tool_call_rate", self.tool_call_rate),
            ("thinking_rate", self.thinking_rate),
            ("markup_rate", self.markup_rate),
            ("compaction_split_rate", self.compaction_split_rate),
            ("filtered_record_rate", self.filtered_record_rate),
            ("media_rate", self.media_rate),
        ];
        match rates.iter().find(|(_, r)| !(0.0..=1.0).contains(r)) {
            Some((name, _)) => Err(InvalidSpec(name)),
            None => Ok(()),
        }
    }
}

/// A section the compiler is expected to produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedSection {
    pub role: SectionRole,
    pub kinds: Vec<NodeKind>,
}

/// What a synthesized trace was built to contain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    pub sections: Vec<ExpectedSection>,
    /// `(tool_use_id, tool name)` of every visible call, in order.
    pub tool_pairs: Vec<(String, String)>,
    pub filtered_records: usize,
    /// Assistant messages written as two records sharing `message.id`.
    pub split_messages: usize,
    pub assistant_records: usize,
    pub hidden_user_turns: usize,
    pub images: usize,
}

const WORDS: &[&str] = &[
    "the", "dog", "cat", "runs", "log", "error", "42", "build", "test", "file", "path", "value", "config",
    "barks", "food", "walk", "night", "7", "port", "8080", "fix", "bug", "retry", "alpha", "beta", "cache",
    "index", "parse", "token", "line", "user", "async", "queue", "a", "is", "not", "ok", "timeout", "2024",
];

const FILES: &[&str] = &[
    "src/main.rs", "src/config.py", "lib/dog.py", "tests/test_api.py", "README.md", "src/pets.py",
    "app/server.ts", "notes/todo.md",
];

const REMINDERS: &[&str] = &[
    "<system-reminder>\nThe user opened a file. Do not mention this reminder.\n</system-reminder>",
    "<ide_opened_file>The user opened src/config.py in the IDE.</ide_opened_file>",
    "<command-message>run the tests</command-message>",
    "<local-command-stdout>ok 12 tests</local-command-stdout>",
];

const ANSI: &[&str] = &["\u{1b}[32m", "\u{1b}[1;31m", "\u{1b}[0m", "\u{1b}]0;shell\u{7}", "\u{1b}[2K"];

struct Synth {
    spec: TraceSpec,
    rng: ChaCha8Rng,
    lines: Vec<String>,
    truth: GroundTruth,
    next_id: usize,
    clock: u64,
}

/// Builds a session log from `spec`; identical specs give identical bytes.
///
/// # Panics
///
/// When a rate lies outside `[0, 1]`.
pub fn synthesize_trace(spec: &TraceSpec) -> (String, GroundTruth) {
    if let Err(e) = spec.validate() {
        panic!("invalid trace spec: {e}");
    }
    let mut s = Synth {
        spec: *spec,
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        lines: Vec::new(),
        truth: GroundTruth::default(),
        next_id: 0,
        clock: 0,
    };
    for turn in 0..spec.turn_count {
        s.maybe_filtered();
        if s.chance(spec.markup_rate / 4.0) {
            s.system_record();
        }
        if turn % 2 == 0 {
            s.user_turn();
        } else {
            s.assistant_turn();
        }
    }
    let mut text = s.lines.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    (text, s.truth)
}

impl Synth {
    fn chance(&mut self, p: f64) -> bool {
        p > 0.0 && self.rng.gen_bool(p.min(1.0))
    }

    fn id(&mut self, prefix: &str) -> String {
        self.next_id += 1;
        format!("{prefix}_{:04}_{:03}", self.spec.seed % 10_000, self.next_id)
    }

    fn timestamp(&mut self) -> String {
        self.clock += self.rng.gen_range(1..40);
        let t = self.clock;
        format!("2025-03-14T{:02}:{:02}:{:02}.000Z", 9 + t / 3600 % 12, t / 60 % 60, t % 60)
    }

    fn sentence(&mut self) -> String {
        let n = self.rng.gen_range(2..9);
        (0..n).map(|_| *WORDS.choose(&mut self.rng).unwrap()).collect::<Vec<_>>().join(" ")
    }

    fn paragraph(&mut self, max_lines: usize) -> String {
        let n = self.rng.gen_range(1..=max_lines);
        let mut lines: Vec<String> = (0..n).map(|_| self.sentence()).collect();
        if n > 2 && self.chance(0.2) {
            lines.insert(n / 2, String::new());
        }
        lines.join("\n")
    }

    fn emit(&mut self, mut record: Value) {
        let ts = self.timestamp();
        let obj = record.as_object_mut().expect("records are objects");
        obj.insert("timestamp".into(), Value::String(ts));
        obj.insert("sessionId".into(), Value::String(format!("session-{}", self.spec.seed)));
        self.lines.push(record.to_string());
    }

    fn push_section(&mut self, role: SectionRole, kinds: Vec<NodeKind>) {
        if !kinds.is_empty() {
            self.truth.sections.push(ExpectedSection { role, kinds });
        }
    }

    fn maybe_filtered(&mut self) {
        if !self.chance(self.spec.filtered_record_rate) {
            return;
        }
        let record = match self.rng.gen_range(0..3) {
            0 => json!({"type": "progress", "data": {"message": "thinking", "elapsed_ms": self.rng.gen_range(10..999)}}),
            1 => json!({"type": "file-history-snapshot", "snapshot": {"files": [FILES[0]]}}),
            _ => json!({"type": "queue-operation", "operation": "enqueue", "content": self.sentence()}),
        };
        self.truth.filtered_records += 1;
        self.emit(record);
    }

    fn system_record(&mut self) {
        let text = format!("Harness notice: {}", self.sentence());
        self.emit(json!({"type": "system", "subtype": "informational", "content": text}));
        self.push_section(SectionRole::System, vec![NodeKind::System]);
    }

    fn image_block(&mut self) -> Value {
        let len = self.rng.gen_range(16..96);
        let mut bytes = vec![0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a];
        bytes.extend((0..len).map(|_| self.rng.gen::<u8>()));
        self.truth.images += 1;
        json!({"type": "image", "source": {"type": "base64", "media_type": "image/png", "data": STANDARD.encode(bytes)}})
    }

    fn user_turn(&mut self) {
        let mut text = self.paragraph(3);
        if self.chance(self.spec.markup_rate) {
            let reminder = *REMINDERS.choose(&mut self.rng).unwrap();
            if self.rng.gen_bool(0.5) {
                self.truth.hidden_user_turns += 1;
                self.emit(json!({"type": "user", "message": {"role": "user", "content": format!("{reminder}\n")}}));
                return;
            }
            text = format!("{reminder}\n{text}");
        }
        let mut kinds = vec![NodeKind::User];
        let content = if self.chance(self.spec.media_rate) {
            kinds.push(NodeKind::User);
            let image = self.image_block();
            json!([{"type": "text", "text": text}, image])
        } else {
            Value::String(text)
        };
        self.emit(json!({"type": "user", "message": {"role": "user", "content": content}}));
        self.push_section(SectionRole::User, kinds);
    }

    fn assistant_turn(&mut self) {
        let mut rounds = 0;
        while rounds < 4 && self.chance(self.spec.tool_call_rate) {
            rounds += 1;
            let mut blocks = Vec::new();
            if self.chance(self.spec.thinking_rate) {
                blocks.push(json!({"type": "thinking", "thinking": self.paragraph(4), "signature": "sig"}));
            }
            if self.rng.gen_bool(0.5) {
                blocks.push(json!({"type": "text", "text": self.sentence()}));
            }
            let calls: Vec<(String, String, Value, Value)> =
                (0..self.rng.gen_range(1..=3)).map(|_| self.tool_call()).collect();
            for (id, name, input, _) in &calls {
                blocks.push(json!({"type": "tool_use", "id": id, "name": name, "input": input}));
            }
            self.assistant_message(blocks);

            let results: Vec<Value> = calls.iter().map(|(_, _, _, result)| result.clone()).collect();
            let kinds = calls
                .iter()
                .filter(|(_, name, _, _)| !is_internal(name))
                .map(|_| NodeKind::ToolResult)
                .collect();
            self.emit(json!({"type": "user", "message": {"role": "user", "content": results}}));
            self.push_section(SectionRole::Assistant, kinds);
        }

        let mut blocks = Vec::new();
        if rounds == 0 && self.chance(self.spec.thinking_rate) {
            blocks.push(json!({"type": "thinking", "thinking": self.paragraph(4), "signature": "sig"}));
        }
        blocks.push(json!({"type": "text", "text": self.paragraph(5)}));
        self.assistant_message(blocks);
    }

    /// Writes one assistant message, possibly split across two records.
    fn assistant_message(&mut self, mut blocks: Vec<Value>) {
        let id = self.id("msg");
        let split = self.chance(self.spec.compaction_split_rate);
        if split && blocks.len() == 1 {
            blocks.insert(0, json!({"type": "text", "text": self.sentence()}));
        }
        let kinds: Vec<NodeKind> = blocks.iter().filter_map(block_kind).collect();
        if split {
            let at = self.rng.gen_range(1..blocks.len());
            let tail = blocks.split_off(at);
            for part in [blocks, tail] {
                self.emit(json!({"type": "assistant", "message": {"id": id, "role": "assistant", "content": part}}));
                self.truth.assistant_records += 1;
            }
            self.truth.split_messages += 1;
            self.push_section(SectionRole::Assistant, kinds);
        } else {
            self.emit(json!({"type": "assistant", "message": {"id": id, "role": "assistant", "content": blocks}}));
            self.truth.assistant_records += 1;
            self.push_section(SectionRole::Assistant, kinds);
        }
    }

    /// `(id, name, input, tool_result block)` of a fresh call.
    fn tool_call(&mut self) -> (String, String, Value, Value) {
        let id = self.id("toolu");
        let file = *FILES.choose(&mut self.rng).unwrap();
        let (name, input, output) = match self.rng.gen_range(0..10) {
            0..=3 => {
                let n = self.rng.gen_range(8..60);
                let body: Vec<String> = (1..=n).map(|i| format!("{i:>6}→{}", self.sentence())).collect();
                ("Read", json!({"file_path": file}), body.join("\n"))
            }
            4 | 5 => {
                let command = format!("cargo test {} -- --nocapture", self.sentence().replace(' ', "_"));
                let mut out = Vec::new();
                for _ in 0..self.rng.gen_range(1..12) {
                    let color = *ANSI.choose(&mut self.rng).unwrap();
                    out.push(format!("{color}{}\u{1b}[0m", self.sentence()));
                }
                ("Bash", json!({"command": command, "description": self.sentence()}), out.join("\n"))
            }
            6 => {
                let pattern = *WORDS.choose(&mut self.rng).unwrap();
                let hits: Vec<String> = (0..self.rng.gen_range(0..6))
                    .map(|_| format!("{file}:{}: {}", self.rng.gen_range(1..300), self.sentence()))
                    .collect();
                ("Grep", json!({"pattern": pattern, "path": "src"}), hits.join("\n"))
            }
            7 => {
                let old = self.paragraph(3);
                let new = format!("{}\n", self.paragraph(3));
                (
                    "Edit",
                    json!({"file_path": file, "old_string": old, "new_string": new, "replace_all": false}),
                    format!("The file {file} has been updated."),
                )
            }
            8 => (
                "Deploy",
                json!({"target": "staging", "replicas": self.rng.gen_range(1..5), "dry_run": true, "labels": {"team": "pets"}}),
                "deployment ok".to_string(),
            ),
            _ => (
                "TodoWrite",
                json!({"todos": [{"content": self.sentence(), "status": "pending"}]}),
                "Todos have been modified successfully.".to_string(),
            ),
        };
        let mut result = json!({"type": "tool_result", "tool_use_id": id, "content": output});
        if name == "Read" && self.chance(self.spec.media_rate) {
            let image = self.image_block();
            result["content"] = json!([{"type": "text", "text": output}, image]);
        }
        if !is_internal(name) {
            self.truth.tool_pairs.push((id.clone(), name.to_string()));
        }
        (id, name.to_string(), input, result)
    }
}

fn is_internal(name: &str) -> bool {
    name == "TodoWrite"
}

fn block_kind(block: &Value) -> Option<NodeKind> {
    match block["type"].as_str()? {
        "thinking" => Some(NodeKind::Thinking),
        "text" => Some(NodeKind::Assistant),
        "tool_use" if !is_internal(block["name"].as_str()?) => Some(NodeKind::ToolCall),
        _ => None,
    }
}
