use std::collections::BTreeSet;

use tracec_core::views::{emit_adaptive, emit_full, emit_full_with_gutter, emit_ui, slice, AdaptiveOptions, Modality, UiOptions};
use tracec_core::{build_regex_predicate, compile, CompileOptions, Document, LineOwner, LineSpan, NodeKind, ViewError};

const DOG_SESSION: &str = r#"{"type":"user","message":{"role":"user","content":"My dog keeps barking at night. Can you check the notes file?"}}
{"type":"assistant","message":{"id":"msg_1","role":"assistant","content":[{"type":"thinking","thinking":"The user mentions a dog.\nI should read notes.md first."},{"type":"tool_use","id":"toolu_1","name":"Read","input":{"file_path":"notes.md"}}]}}
{"type":"user","message":{"role":"user","content":[{"type":"tool_result","tool_use_id":"toolu_1","content":"     1→# Notes\n     2→walk the dog at 9pm\n     3→buy cat food"}]}}
{"type":"assistant","message":{"id":"msg_2","role":"assistant","content":[{"type":"text","text":"Your notes say to walk the dog at 9pm.\nTry moving the walk later."}]}}
"#;

fn compiled(source: &str) -> Document {
    compile(source, &CompileOptions::default()).unwrap().document
}

#[test]
fn full_view_of_the_dog_session() {
    let doc = compiled(DOG_SESSION);
    let full = emit_full(&doc).unwrap();
    assert_eq!(
        full.text,
        "\
=== turn 1: user ===
--- user ---
My dog keeps barking at night. Can you check the notes file?

=== turn 2: assistant ===
--- thinking ---
The user mentions a dog.
I should read notes.md first.

--- tool_call: Read ---
file_path: notes.md

=== turn 3: assistant ===
--- tool_result: Read ---
# Notes
walk the dog at 9pm
buy cat food

=== turn 4: assistant ===
--- assistant ---
Your notes say to walk the dog at 9pm.
Try moving the walk later.
"
    );
    assert_eq!(full.line_count(), doc.total_lines());
    assert!(full.pointers.is_empty());
    for (i, line) in full.text.lines().enumerate() {
        assert_eq!(line, doc.line(i + 1).unwrap().text);
    }
}

#[test]
fn gutter_numbers_every_line() {
    let doc = compiled(DOG_SESSION);
    let gutter = emit_full_with_gutter(&doc).unwrap();
    let lines: Vec<&str> = gutter.lines().collect();
    assert_eq!(lines.len(), doc.total_lines());
    assert_eq!(lines[0], " 1 | === turn 1: user ===");
    assert_eq!(lines[3], " 4 |");
    assert_eq!(lines[21], "22 | Try moving the walk later.");
}

#[test]
fn ui_view_of_the_dog_session() {
    let doc = compiled(DOG_SESSION);
    let ui = emit_ui(&doc, &UiOptions::default()).unwrap();
    assert_eq!(
        ui.text,
        "\
=== user ===
My dog keeps barking at night. Can you check the notes file?

=== assistant ===
* Read \"notes.md\" (file.txt:11,15-17)

Your notes say to walk the dog at 9pm.
Try moving the walk later.
"
    );
    assert_eq!(ui.pointers.len(), 1);
    assert!(ui.line_count() < doc.total_lines());
}

#[test]
fn ui_pointers_dereference_to_tool_lines() {
    let doc = compiled(DOG_SESSION);
    let ui = emit_ui(&doc, &UiOptions::default()).unwrap();
    for (_, span) in &ui.pointers {
        let text = slice(&doc, span).unwrap();
        assert!(!text.is_empty());
        for n in span.lines() {
            let kind = doc.owner_node(n).unwrap().kind;
            assert!(matches!(kind, NodeKind::ToolCall | NodeKind::ToolResult), "line {n}");
        }
    }
}

#[test]
fn adaptive_dog_in_both_modalities() {
    let doc = compiled(DOG_SESSION);
    let dog = build_regex_predicate("dog", true).unwrap();
    let opts = AdaptiveOptions::default();

    let document = emit_adaptive(&doc, &dog, Modality::Document, &opts).unwrap();
    assert_eq!(
        document.text,
        "\
=== turn 1: user ===
[user] (file.txt:3)
3: My dog keeps barking at night. Can you check the notes file?

=== turn 2: assistant ===
[thinking] (file.txt:7-8)
7: The user mentions a dog.

=== turn 3: assistant ===
[tool_result] Read (file.txt:15-17)
16: walk the dog at 9pm

=== turn 4: assistant ===
[assistant] (file.txt:21-22)
21: Your notes say to walk the dog at 9pm.
"
    );

    let index = emit_adaptive(&doc, &dog, Modality::Index, &opts).unwrap();
    assert_eq!(
        index.text,
        "\
[user] (file.txt:3)
3: My dog keeps barking at night. Can you check the notes file?

[thinking] (file.txt:7-8)
7: The user mentions a dog.

[tool_result] Read (file.txt:15-17)
16: walk the dog at 9pm

[assistant] (file.txt:21-22)
21: Your notes say to walk the dog at 9pm.
"
    );
    assert_eq!(document.pointers, index.pointers);
}

#[test]
fn adaptive_match_nothing_is_empty() {
    let doc = compiled(DOG_SESSION);
    let none = |_: &str| false;
    for modality in [Modality::Document, Modality::Index] {
        let view = emit_adaptive(&doc, &none, modality, &AdaptiveOptions::default()).unwrap();
        assert_eq!(view.text, "");
        assert!(view.pointers.is_empty());
    }
}

#[test]
fn adaptive_match_everything_covers_every_content_line_once() {
    let doc = compiled(DOG_SESSION);
    let all = |_: &str| true;
    let view = emit_adaptive(&doc, &all, Modality::Index, &AdaptiveOptions::default()).unwrap();
    let emitted: Vec<usize> = view
        .text
        .lines()
        .filter_map(|l| l.split_once(": ").and_then(|(n, _)| n.parse().ok()))
        .collect();
    let content: Vec<usize> = doc
        .line_map()
        .unwrap()
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.owner.is_structural())
        .map(|(i, _)| i + 1)
        .collect();
    assert_eq!(emitted, content);
    assert_eq!(view.pointers.len(), doc.nodes().count());
}

#[test]
fn adaptive_block_cap_counts_the_rest() {
    let doc = compiled(DOG_SESSION);
    let all = |_: &str| true;
    let opts = AdaptiveOptions {
        max_block_lines: Some(1),
        ..AdaptiveOptions::default()
    };
    let view = emit_adaptive(&doc, &all, Modality::Index, &opts).unwrap();
    assert!(view.text.contains("[tool_result] Read (file.txt:15-17)\n15: # Notes\n… 2 more matching lines\n"));
}

#[test]
fn slice_reads_ranges_with_a_marker() {
    let doc = compiled(DOG_SESSION);
    let one = slice(&doc, &LineSpan::single(1, 1).unwrap()).unwrap();
    assert_eq!(one, "=== turn 1: user ===\n");
    let two = slice(&doc, &"11,15-16".parse().unwrap()).unwrap();
    assert_eq!(two, "file_path: notes.md\n⋯\n# Notes\nwalk the dog at 9pm\n");
    let err = slice(&doc, &"20-99".parse().unwrap()).unwrap_err();
    assert_eq!(
        err,
        ViewError::OutOfRange {
            range: "20-99".into(),
            total_lines: 22
        }
    );
    assert!(err.to_string().contains("20-99") && err.to_string().contains("22"));
}

#[test]
fn nineteen_to_thirty_four_slices_to_fifteen_lines() {
    let mut source = String::new();
    for i in 0..20 {
        source.push_str(&format!(
            "{{\"type\":\"user\",\"message\":{{\"role\":\"user\",\"content\":\"message {i}\"}}}}\n"
        ));
    }
    let doc = compiled(&source);
    let text = slice(&doc, &"19-21,24-34".parse().unwrap()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 15);
    assert_eq!(lines.iter().filter(|l| **l == "⋯").count(), 1);
    assert_eq!(lines[3], "⋯");
}

#[test]
fn merged_assistant_turns_share_one_header() {
    let source = r#"{"type":"user","message":{"role":"user","content":"hi"}}
{"type":"assistant","message":{"id":"a","role":"assistant","content":"one"}}
{"type":"assistant","message":{"id":"b","role":"assistant","content":"two"}}
{"type":"user","message":{"role":"user","content":"bye"}}
"#;
    let doc = compiled(source);
    let ui = emit_ui(&doc, &UiOptions::default()).unwrap();
    let headers: Vec<&str> = ui.text.lines().filter(|l| l.starts_with("=== ")).collect();
    assert_eq!(headers, ["=== user ===", "=== assistant ===", "=== user ==="]);
}

#[test]
fn views_reject_unassigned_documents() {
    let doc = Document::from_sections(Vec::new()).unwrap();
    assert_eq!(emit_full(&doc).unwrap_err(), ViewError::NotAssigned);
    assert_eq!(emit_ui(&doc, &UiOptions::default()).unwrap_err(), ViewError::NotAssigned);
    let all = |_: &str| true;
    assert!(emit_adaptive(&doc, &all, Modality::Index, &AdaptiveOptions::default()).is_err());
    assert!(slice(&doc, &LineSpan::single(1, 1).unwrap()).is_err());
}

#[test]
fn empty_session_has_empty_views() {
    let doc = compiled("");
    assert_eq!(emit_full(&doc).unwrap().text, "");
    assert_eq!(emit_ui(&doc, &UiOptions::default()).unwrap().text, "");
}

#[test]
fn line_owners_partition_the_full_view() {
    let doc = compiled(DOG_SESSION);
    let mut owned = BTreeSet::new();
    for node in doc.nodes() {
        for n in node.span().unwrap().lines() {
            assert!(owned.insert(n));
            assert!(matches!(doc.line(n).unwrap().owner, LineOwner::Node { .. }));
        }
    }
    let structural = doc.line_map().unwrap().iter().filter(|l| l.owner.is_structural()).count();
    assert_eq!(owned.len() + structural, doc.total_lines());
}
