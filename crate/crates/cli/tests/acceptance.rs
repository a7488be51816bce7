//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use tracec_core::normalizer::{compile_tool_input, default_markup_rules, strip_harness_markup, strip_read_prefix};
use tracec_core::views::{
    emit_adaptive, emit_full, emit_ui, slice, summarize_tool_call, AdaptiveOptions, HeadlineTable, Modality, UiOptions,
};
use tracec_core::{
    build_regex_predicate, compile, CompileOptions, Document, IrError, LayoutRules, LineSpan, Node, NodeKind, Pointer,
};
use tracec_testkit::{corpus, naive_grep, random_pattern, reingest_full_view, CorpusEntry};

const LABEL: &str = "full.txt";

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], summary: String) -> Self {
        let mut detail = summary;
        for f in failures.iter().take(5) {
            detail.push_str(&format!("\n      {f}"));
        }
        Self {
            pass: failures.is_empty(),
            detail,
        }
    }
}

type Check = fn(&[Case<'_>]) -> Outcome;

struct Case<'c> {
    entry: &'c CorpusEntry,
    doc: Document,
}

fn main() {
    let started = Instant::now();
    let entries = corpus(1..=200);
    let cases: Vec<Case<'_>> = entries
        .iter()
        .map(|entry| Case {
            entry,
            doc: compile(&entry.jsonl, &CompileOptions::default())
                .unwrap_or_else(|e| panic!("{}: {e}", entry.name))
                .document,
        })
        .collect();
    println!(
        "acceptance corpus: {} sessions, {} full-view lines (built in {:.2?})",
        cases.len(),
        cases.iter().map(|c| c.doc.total_lines()).sum::<usize>(),
        started.elapsed()
    );

    let criteria: [(&str, Check); 8] = [
        ("pointer soundness", pointer_soundness),
        ("grep-oracle equivalence", grep_oracle_equivalence),
        ("transpose equivalence", transpose_equivalence),
        ("assign once, never renumber", assign_once),
        ("full-view identity and re-ingest", full_view_identity),
        ("UI compression on tool-heavy traces", ui_compression),
        ("transformation worked examples", worked_examples),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check(&cases);
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{verdict} {}. {name}: {} [{:.2?}]", i + 1, outcome.detail, t.elapsed());
        failed += usize::from(!outcome.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn seeded<'a>(cases: &'a [Case<'a>]) -> impl Iterator<Item = &'a Case<'a>> {
    cases.iter().filter(|c| c.entry.name.starts_with("seed-"))
}

/// `(pointer text, role tag, matched lines)` for every block of adaptive
/// output, sorted.
fn adaptive_blocks(text: &str) -> Vec<(String, String, Vec<String>)> {
    let mut blocks = Vec::new();
    for line in text.lines() {
        if line.starts_with('[') {
            let role = line.split(' ').next().unwrap().to_string();
            let pointer = line[line.rfind(" (").unwrap() + 1..].to_string();
            blocks.push((pointer, role, Vec::new()));
        } else if line.split_once(": ").is_some_and(|(n, _)| n.parse::<usize>().is_ok()) {
            blocks.last_mut().expect("match line inside a block").2.push(line.to_string());
        }
    }
    blocks.sort();
    blocks
}

fn matched_lines(text: &str) -> BTreeSet<(usize, String)> {
    text.lines()
        .filter(|l| !l.starts_with('[') && !l.starts_with("=== "))
        .filter_map(|l| {
            let (n, rest) = l.split_once(": ")?;
            Some((n.parse().ok()?, rest.to_string()))
        })
        .collect()
}

fn harvested_pointers(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| l.starts_with("* ") || l.starts_with('['))
        .filter_map(|l| l.rfind(" (").map(|i| l[i + 1..].to_string()))
        .collect()
}

fn pointer_soundness(cases: &[Case<'_>]) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let ui_opts = UiOptions {
        file_label: LABEL.into(),
        ..UiOptions::default()
    };
    let adaptive_opts = AdaptiveOptions {
        file_label: LABEL.into(),
        ..AdaptiveOptions::default()
    };
    for case in seeded(cases) {
        let doc = &case.doc;
        let name = &case.entry.name;
        let mut deref = |pointer: &str, fail: &mut Vec<String>| -> Option<LineSpan> {
            checked += 1;
            let parsed: Pointer = match pointer.parse() {
                Ok(p) => p,
                Err(e) => {
                    fail.push(format!("{name}: {pointer} does not parse: {e}"));
                    return None;
                }
            };
            match slice(doc, &parsed.span) {
                Ok(text) if !text.is_empty() && parsed.file_label == LABEL => Some(parsed.span),
                Ok(_) => {
                    fail.push(format!("{name}: {pointer} dereferences to nothing"));
                    None
                }
                Err(e) => {
                    fail.push(format!("{name}: {pointer}: {e}"));
                    None
                }
            }
        };

        let ui = emit_ui(doc, &ui_opts).unwrap();
        let harvested = harvested_pointers(&ui.text);
        let calls: Vec<&Node> = doc.nodes().filter(|n| n.kind == NodeKind::ToolCall).collect();
        if harvested.len() != calls.len() {
            failures.push(format!("{name}: {} summaries for {} calls", harvested.len(), calls.len()));
        }
        for (pointer, call) in harvested.iter().zip(&calls) {
            let Some(span) = deref(pointer, &mut failures) else { continue };
            for n in span.lines() {
                let owner = doc.owner_node(n);
                let consistent = owner.is_some_and(|o| {
                    matches!(o.kind, NodeKind::ToolCall | NodeKind::ToolResult) && o.tool_use_id == call.tool_use_id
                });
                if !consistent {
                    failures.push(format!("{name}: {pointer} line {n} is not owned by its call or result"));
                }
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(case.doc.total_lines() as u64);
        let patterns = [".".to_string(), "dog".to_string(), random_pattern(&mut rng)];
        for pattern in &patterns {
            let p = build_regex_predicate(pattern, true).unwrap();
            for modality in [Modality::Document, Modality::Index] {
                let view = emit_adaptive(doc, &p, modality, &adaptive_opts).unwrap();
                for (pointer, role, _) in adaptive_blocks(&view.text) {
                    let Some(span) = deref(&pointer, &mut failures) else { continue };
                    let owner = doc.owner_node(span.start());
                    let exact = owner.is_some_and(|o| o.span() == Some(&span) && o.kind.role_tag() == role);
                    if !exact {
                        failures.push(format!("{name}: {role} {pointer} is not exactly one {role} block"));
                    }
                }
            }
        }
    }
    Outcome::new(&failures, format!("{checked} pointers dereferenced, {} failures", failures.len()))
}

fn grep_oracle_equivalence(cases: &[Case<'_>]) -> Outcome {
    let mut failures = Vec::new();
    let mut agreed = 0;
    let mut total = 0;
    for (i, case) in seeded(cases).take(50).enumerate() {
        let full = emit_full(&case.doc).unwrap().text;
        let structural = reingest_full_view(&full, &LayoutRules::default()).unwrap().structural;
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + i as u64);
        for _ in 0..20 {
            total += 1;
            let pattern = random_pattern(&mut rng);
            let p = build_regex_predicate(&pattern, true).unwrap();
            let view = emit_adaptive(&case.doc, &p, Modality::Document, &AdaptiveOptions::default()).unwrap();
            if matched_lines(&view.text) == naive_grep(&full, &pattern, &structural) {
                agreed += 1;
            } else {
                failures.push(format!("{} /{pattern}/", case.entry.name));
            }
        }
    }
    let ok = total == 1000 && agreed == total;
    let mut outcome = Outcome::new(&failures, format!("{agreed}/{total} trace-pattern cases agree"));
    outcome.pass &= ok;
    outcome
}

fn transpose_equivalence(cases: &[Case<'_>]) -> Outcome {
    let mut failures = Vec::new();
    let mut compared = 0;
    for case in cases {
        let mut rng = ChaCha8Rng::seed_from_u64(20_000 + case.doc.total_lines() as u64);
        let patterns = [".".to_string(), "dog".into(), "[0-9]+".into(), random_pattern(&mut rng), random_pattern(&mut rng)];
        for pattern in &patterns {
            let p = build_regex_predicate(pattern, true).unwrap();
            let opts = AdaptiveOptions::default();
            let document = emit_adaptive(&case.doc, &p, Modality::Document, &opts).unwrap();
            let index = emit_adaptive(&case.doc, &p, Modality::Index, &opts).unwrap();
            compared += 1;
            if adaptive_blocks(&document.text) != adaptive_blocks(&index.text) {
                failures.push(format!("{} /{pattern}/", case.entry.name));
            }
        }
    }
    Outcome::new(&failures, format!("{compared} document/index pairs, {} differ", failures.len()))
}

#[derive(Clone, Copy, Debug)]
enum View {
    Full,
    Ui,
    Adaptive,
}

fn assign_once(cases: &[Case<'_>]) -> Outcome {
    use View::*;
    let orderings = [
        [Full, Ui, Adaptive],
        [Full, Adaptive, Ui],
        [Ui, Full, Adaptive],
        [Ui, Adaptive, Full],
        [Adaptive, Full, Ui],
        [Adaptive, Ui, Full],
    ];
    let mut failures = Vec::new();
    let mut rejected = 0;
    for case in cases {
        let mut doc = case.doc.clone();
        let map = doc.line_map().unwrap().to_vec();
        let fingerprint = doc.fingerprint();
        let everything = |_: &str| true;
        let mut renders: Vec<[String; 3]> = Vec::new();
        for ordering in &orderings {
            let mut out: [String; 3] = Default::default();
            for view in ordering {
                match view {
                    Full => out[0] = emit_full(&doc).unwrap().text,
                    Ui => out[1] = emit_ui(&doc, &UiOptions::default()).unwrap().text,
                    Adaptive => {
                        out[2] = emit_adaptive(&doc, &everything, Modality::Document, &AdaptiveOptions::default())
                            .unwrap()
                            .text
                    }
                }
                if doc.line_map().unwrap() != map.as_slice() || doc.recompute_fingerprint() != fingerprint {
                    failures.push(format!("{}: line map changed during {ordering:?}", case.entry.name));
                }
            }
            renders.push(out);
        }
        if renders.windows(2).any(|w| w[0] != w[1]) {
            failures.push(format!("{}: output depends on emission order", case.entry.name));
        }
        match doc.assign_lines(&LayoutRules::default()) {
            Err(IrError::AlreadyAssigned) => rejected += 1,
            other => failures.push(format!("{}: second assignment returned {other:?}", case.entry.name)),
        }
        if doc.line_map().unwrap() != map.as_slice() {
            failures.push(format!("{}: rejected assignment changed the map", case.entry.name));
        }
    }
    Outcome::new(
        &failures,
        format!(
            "{} documents x 6 orderings unchanged, second assignment rejected on {rejected}/{}",
            cases.len(),
            cases.len()
        ),
    )
}

fn full_view_identity(cases: &[Case<'_>]) -> Outcome {
    let mut failures = Vec::new();
    let mut lines = 0;
    for case in cases {
        let doc = &case.doc;
        let name = &case.entry.name;
        let full = emit_full(doc).unwrap().text;
        let map = doc.line_map().unwrap();
        let physical: Vec<&str> = full.split_terminator('\n').collect();
        if physical.len() != map.len() {
            failures.push(format!("{name}: {} physical lines, {} mapped", physical.len(), map.len()));
        }
        for (i, (text, mapped)) in physical.iter().zip(map).enumerate() {
            lines += 1;
            if *text != mapped.text {
                failures.push(format!("{name}: line {} differs from the map", i + 1));
            }
        }
        match reingest_full_view(&full, &LayoutRules::default()) {
            Ok(back) => {
                let original: Vec<(NodeKind, &[String])> =
                    doc.nodes().map(|n| (n.kind, n.content_lines.as_slice())).collect();
                let recovered: Vec<(NodeKind, &[String])> = back
                    .sections
                    .iter()
                    .flat_map(|s| &s.blocks)
                    .map(|b| (b.kind, b.lines.as_slice()))
                    .collect();
                if original != recovered {
                    failures.push(format!("{name}: re-ingested blocks differ"));
                }
            }
            Err(e) => failures.push(format!("{name}: re-ingest failed: {e}")),
        }
    }
    Outcome::new(
        &failures,
        format!("{} documents, {lines} lines identical, {} failures", cases.len(), failures.len()),
    )
}

fn ui_compression(cases: &[Case<'_>]) -> Outcome {
    let mut failures = Vec::new();
    let mut ratios = Vec::new();
    for case in cases.iter().filter(|c| c.entry.spec.is_some_and(|s| s.tool_call_rate >= 0.5)) {
        let full = emit_full(&case.doc).unwrap().line_count();
        let ui = emit_ui(&case.doc, &UiOptions::default()).unwrap().line_count();
        if ui >= full {
            failures.push(format!("{}: ui {ui} >= full {full}", case.entry.name));
        }
        if full > 0 {
            ratios.push(ui as f64 / full as f64);
        }
    }
    let n = ratios.len();
    let mean = ratios.iter().sum::<f64>() / n.max(1) as f64;
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let mut outcome = Outcome::new(
        &failures,
        format!(
            "ui < full on {}/{n} traces; ui/full mean {mean:.3}, min {min:.3}, max {max:.3}",
            n - failures.len()
        ),
    );
    outcome.pass &= n > 0;
    outcome
}

fn worked_examples(_: &[Case<'_>]) -> Outcome {
    let mut failures = Vec::new();
    let mut check = |name: &str, actual: String, expected: &str| {
        if actual != expected {
            failures.push(format!("{name}: expected {expected:?}, got {actual:?}"));
        }
    };

    let call = Node::new(NodeKind::ToolCall, vec!["file_path: src/config.py".into(); 3])
        .with_tool(Some("Read".into()), Some("toolu_1".into()))
        .with_tool_input(r#"{"file_path":"src/config.py"}"#)
        .with_span(LineSpan::single(19, 21).unwrap());
    let result = Node::new(NodeKind::ToolResult, vec!["x".into(); 11])
        .with_tool(Some("Read".into()), Some("toolu_1".into()))
        .with_span(LineSpan::single(24, 34).unwrap());
    let (summary, _) = summarize_tool_call(&call, Some(&result), "file.txt", &HeadlineTable::default()).unwrap();
    check("Read summary", summary, r#"* Read "src/config.py" (file.txt:19-21,24-34)"#);

    let yaml = compile_tool_input(r#"{"file_path":"src/pets.py","content":"class Pet:\n    def __init__(self, name):"}"#)
        .unwrap_or_else(|e| e.to_string());
    check(
        "pets.py block scalar",
        yaml,
        "file_path: src/pets.py\ncontent: |-\n  class Pet:\n      def __init__(self, name):\n",
    );

    check(
        "digits prefix",
        strip_read_prefix("     1→import os\n     2→print(1)"),
        "import os\nprint(1)",
    );

    let inline = strip_harness_markup("<system-reminder>be terse</system-reminder>fix the bug", &default_markup_rules());
    check("inline reminder", format!("{:?}", (inline.text, inline.hide_turn)), r#"("fix the bug", false)"#);
    let hidden = compile(
        concat!(
            r#"{"type":"user","message":{"role":"user","content":"<system-reminder>\nbe terse\n</system-reminder>\n"}}"#,
            "\n",
            r#"{"type":"assistant","message":{"id":"m1","role":"assistant","content":"Done."}}"#,
        ),
        &CompileOptions::default(),
    )
    .unwrap();
    check(
        "reminder-only turn hidden",
        emit_full(&hidden.document).unwrap().text,
        "=== turn 1: assistant ===\n--- assistant ---\nDone.\n",
    );

    let split = compile(
        concat!(
            r#"{"type":"assistant","message":{"id":"msg_A","role":"assistant","content":[{"type":"text","text":"Let me look."}]}}"#,
            "\n",
            r#"{"type":"assistant","message":{"id":"msg_A","role":"assistant","content":[{"type":"tool_use","id":"t1","name":"Read","input":{"file_path":"a.py"}}]}}"#,
        ),
        &CompileOptions::default(),
    )
    .unwrap();
    check(
        "message.id reassembly",
        emit_full(&split.document).unwrap().text,
        "=== turn 1: assistant ===\n--- assistant ---\nLet me look.\n\n--- tool_call: Read ---\nfile_path: a.py\n",
    );

    Outcome::new(&failures, format!("5 examples, {} mismatches", failures.len()))
}

fn run_compile(session: &Path, out: &Path) -> Result<(), String> {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let args = ["tracec", "compile", session.to_str().unwrap(), "--out", out.to_str().unwrap()];
    match tracec::run(args, &mut stdout, &mut stderr) {
        0 => Ok(()),
        status => Err(format!("exit {status}: {}", String::from_utf8_lossy(&stderr))),
    }
}

fn determinism(cases: &[Case<'_>]) -> Outcome {
    let mut failures = Vec::new();
    let dir = TempDir::new().unwrap();
    let session = dir.path().join("session.jsonl");
    for case in cases {
        let name = &case.entry.name;
        let crlf = case.entry.jsonl.replace('\n', "\r\n");
        let mut outputs = Vec::new();
        for (run, text) in [("lf-1", &case.entry.jsonl), ("lf-2", &case.entry.jsonl), ("crlf", &crlf)] {
            std::fs::write(&session, text).unwrap();
            let out = dir.path().join(run);
            if let Err(e) = run_compile(&session, &out) {
                failures.push(format!("{name} {run}: {e}"));
                continue;
            }
            let files: Vec<Vec<u8>> = ["full.txt", "ui.txt", "manifest.json"]
                .iter()
                .map(|f| std::fs::read(out.join(f)).unwrap())
                .collect();
            let mut media: Vec<(String, Vec<u8>)> = std::fs::read_dir(out.join("media"))
                .unwrap()
                .map(|e| {
                    let e = e.unwrap();
                    (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
                })
                .collect();
            media.sort();
            outputs.push((files, media));
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            failures.push(format!("{name}: outputs differ between runs"));
        }
    }
    Outcome::new(
        &failures,
        format!(
            "{} sessions x (2 LF runs + 1 CRLF run): full.txt, ui.txt, manifest.json, media identical; {} failures",
            cases.len(),
            failures.len()
        ),
    )
}
