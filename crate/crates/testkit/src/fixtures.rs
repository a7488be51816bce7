//! The committed fixture corpus and the seed sweep built on top of it.

use std::path::PathBuf;

use crate::synth::{synthesize_trace, TraceSpec};

/// Fixtures generated from a spec; they must regenerate byte for byte.
pub fn synthesized_fixtures() -> Vec<(&'static str, TraceSpec)> {
    vec![
        (
            "tool_heavy.jsonl",
            TraceSpec {
                tool_call_rate: 1.0,
                thinking_rate: 0.5,
                ..TraceSpec::plain(1001, 20)
            },
        ),
        (
            "compaction.jsonl",
            TraceSpec {
                compaction_split_rate: 1.0,
                tool_call_rate: 0.3,
                thinking_rate: 0.5,
                ..TraceSpec::plain(1002, 4)
            },
        ),
        (
            "kitchen_sink.jsonl",
            TraceSpec {
                tool_call_rate: 0.6,
                thinking_rate: 0.6,
                markup_rate: 0.5,
                compaction_split_rate: 0.3,
                filtered_record_rate: 0.4,
                media_rate: 0.3,
                ..TraceSpec::plain(1003, 16)
            },
        ),
    ]
}

/// Hand-written fixtures.
pub const HAND_WRITTEN: &[&str] = &["figure1.jsonl", "filtered.jsonl", "split_message.jsonl"];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Contents of a committed fixture.
///
/// # Panics
///
/// When the file is missing.
pub fn load_fixture(name: &str) -> String {
    let path = fixture_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// A named session log.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub spec: Option<TraceSpec>,
    pub jsonl: String,
}

/// Every committed fixture followed by `TraceSpec::mixed` over `seeds`.
pub fn corpus(seeds: std::ops::RangeInclusive<u64>) -> Vec<CorpusEntry> {
    let mut entries: Vec<CorpusEntry> = HAND_WRITTEN
        .iter()
        .map(|name| CorpusEntry {
            name: name.to_string(),
            spec: None,
            jsonl: load_fixture(name),
        })
        .collect();
    for (name, spec) in synthesized_fixtures() {
        entries.push(CorpusEntry {
            name: name.to_string(),
            spec: Some(spec),
            jsonl: load_fixture(name),
        });
    }
    for seed in seeds {
        let spec = TraceSpec::mixed(seed);
        entries.push(CorpusEntry {
            name: format!("seed-{seed}"),
            spec: Some(spec),
            jsonl: synthesize_trace(&spec).0,
        });
    }
    entries
}
