use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use tracec_core::views::{emit_adaptive, emit_full, AdaptiveOptions, Modality};
use tracec_core::{build_regex_predicate, compile, CompileOptions, Compiled, LayoutRules, NodeKind, SectionRole};
use tracec_testkit::{naive_grep, random_pattern, reingest_full_view, synthesize_trace, ExpectedSection, TraceSpec};

fn compiled(jsonl: &str) -> Compiled {
    compile(jsonl, &CompileOptions::default()).unwrap()
}

fn shape(c: &Compiled) -> Vec<ExpectedSection> {
    c.document
        .sections()
        .iter()
        .map(|s| ExpectedSection {
            role: s.role,
            kinds: s.nodes.iter().map(|n| n.kind).collect(),
        })
        .collect()
}

fn spec_strategy() -> impl Strategy<Value = TraceSpec> {
    let rate = || prop_oneof![Just(0.0), Just(1.0), 0.0..=1.0f64];
    (any::<u64>(), 0..30usize, rate(), rate(), rate(), rate(), rate(), rate()).prop_map(
        |(seed, turn_count, tool, thinking, markup, split, filtered, media)| TraceSpec {
            seed,
            turn_count,
            tool_call_rate: tool,
            thinking_rate: thinking,
            markup_rate: markup,
            compaction_split_rate: split,
            filtered_record_rate: filtered,
            media_rate: media,
        },
    )
}

#[test]
fn plain_two_turn_dialogue() {
    let (jsonl, truth) = synthesize_trace(&TraceSpec::plain(3, 2));
    assert_eq!(jsonl.lines().count(), 2);
    assert_eq!(
        truth.sections,
        vec![
            ExpectedSection { role: SectionRole::User, kinds: vec![NodeKind::User] },
            ExpectedSection { role: SectionRole::Assistant, kinds: vec![NodeKind::Assistant] },
        ]
    );
    assert_eq!(shape(&compiled(&jsonl)), truth.sections);
}

#[test]
fn full_split_rate_splits_every_assistant_message() {
    let spec = TraceSpec {
        compaction_split_rate: 1.0,
        ..TraceSpec::plain(11, 4)
    };
    let (jsonl, truth) = synthesize_trace(&spec);
    let ids: Vec<String> = jsonl
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap())
        .filter(|r| r["type"] == "assistant")
        .map(|r| r["message"]["id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(ids.len(), 4);
    assert!(ids.chunks(2).all(|pair| pair[0] == pair[1]));
    assert_eq!(truth.split_messages, 2);
    assert_eq!(shape(&compiled(&jsonl)), truth.sections);
}

#[test]
fn seed_42_is_reproducible() {
    let spec = TraceSpec::mixed(42);
    assert_eq!(synthesize_trace(&spec).0.into_bytes(), synthesize_trace(&spec).0.into_bytes());
    assert_ne!(synthesize_trace(&spec).0, synthesize_trace(&TraceSpec::mixed(43)).0);
}

#[test]
#[should_panic(expected = "media_rate")]
fn rates_outside_the_unit_interval_are_rejected() {
    synthesize_trace(&TraceSpec {
        media_rate: 1.5,
        ..TraceSpec::plain(1, 2)
    });
}

#[test]
fn five_hundred_lines_and_twenty_patterns() {
    let spec = TraceSpec {
        tool_call_rate: 0.5,
        thinking_rate: 0.5,
        ..TraceSpec::plain(500, 40)
    };
    let (jsonl, _) = synthesize_trace(&spec);
    let doc = compiled(&jsonl).document;
    assert!(doc.total_lines() >= 500, "{} lines", doc.total_lines());
    let full = emit_full(&doc).unwrap().text;
    let structural = reingest_full_view(&full, &LayoutRules::default()).unwrap().structural;
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for _ in 0..20 {
        let pattern = random_pattern(&mut rng);
        let p = build_regex_predicate(&pattern, true).unwrap();
        let view = emit_adaptive(&doc, &p, Modality::Index, &AdaptiveOptions::default()).unwrap();
        assert_eq!(adaptive_lines(&view.text), naive_grep(&full, &pattern, &structural), "{pattern}");
    }
}

fn adaptive_lines(text: &str) -> BTreeSet<(usize, String)> {
    text.lines()
        .filter_map(|l| {
            let (n, rest) = l.split_once(": ")?;
            Some((n.parse().ok()?, rest.to_string()))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn compiled_structure_matches_ground_truth(spec in spec_strategy()) {
        let (jsonl, truth) = synthesize_trace(&spec);
        let c = compiled(&jsonl);
        prop_assert_eq!(shape(&c), truth.sections.clone());
        prop_assert_eq!(c.lex_stats.filtered, truth.filtered_records);
        let pairs: Vec<(String, String)> = c
            .document
            .nodes()
            .filter(|n| n.kind == NodeKind::ToolCall)
            .map(|n| (n.tool_use_id.clone().unwrap(), n.tool_name.clone().unwrap()))
            .collect();
        prop_assert_eq!(pairs, truth.tool_pairs.clone());
        for result in c.document.nodes().filter(|n| n.kind == NodeKind::ToolResult) {
            let id = result.tool_use_id.as_deref().unwrap();
            let (_, name) = truth.tool_pairs.iter().find(|(i, _)| i == id).unwrap();
            prop_assert_eq!(result.tool_name.as_deref(), Some(name.as_str()));
        }
        prop_assert_eq!(c.document.media().len(), truth.images);
        prop_assert!(c.diagnostics.iter().all(|d| !d.is_error()));
    }

    #[test]
    fn full_view_reingests_to_the_same_blocks(spec in spec_strategy()) {
        let doc = compiled(&synthesize_trace(&spec).0).document;
        let full = emit_full(&doc).unwrap().text;
        let back = reingest_full_view(&full, &LayoutRules::default()).unwrap();
        prop_assert_eq!(back.sections.len(), doc.sections().len());
        for (section, original) in back.sections.iter().zip(doc.sections()) {
            prop_assert_eq!(section.role, original.role);
            prop_assert_eq!(section.blocks.len(), original.nodes.len());
            for (block, node) in section.blocks.iter().zip(&original.nodes) {
                prop_assert_eq!(block.kind, node.kind);
                prop_assert_eq!(&block.lines, &node.content_lines);
                prop_assert_eq!(&block.tool_name, &node.tool_name);
            }
        }
        let owned: BTreeSet<usize> = doc
            .line_map()
            .unwrap()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.owner.is_structural())
            .map(|(i, _)| i + 1)
            .collect();
        prop_assert_eq!(back.structural, owned);
    }

    #[test]
    fn grep_oracle_agrees_with_adaptive(spec in spec_strategy(), pattern_seed in any::<u64>()) {
        let doc = compiled(&synthesize_trace(&spec).0).document;
        let full = emit_full(&doc).unwrap().text;
        let structural = reingest_full_view(&full, &LayoutRules::default()).unwrap().structural;
        let pattern = random_pattern(&mut ChaCha8Rng::seed_from_u64(pattern_seed));
        let p = build_regex_predicate(&pattern, true).unwrap();
        for modality in [Modality::Document, Modality::Index] {
            let view = emit_adaptive(&doc, &p, modality, &AdaptiveOptions::default()).unwrap();
            prop_assert_eq!(adaptive_lines(&view.text), naive_grep(&full, &pattern, &structural));
        }
    }
}
