use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use tracec_core::lexer::RecordKind;
use tracec_core::views::{emit_ui, UiOptions};
use tracec_core::NodeKind;

use crate::{load, Failure, StatsArgs};

#[derive(Debug, Clone, Serialize)]
pub struct SessionStats {
    pub records: BTreeMap<&'static str, usize>,
    pub filtered_records: usize,
    pub malformed_lines: usize,
    pub sections: usize,
    pub nodes: BTreeMap<&'static str, usize>,
    pub total_lines: usize,
    pub ui_lines: usize,
    /// `ui_lines / total_lines`; absent for an empty session.
    pub ui_full_ratio: Option<f64>,
    pub diagnostics: usize,
}

pub(crate) fn cmd_stats(args: &StatsArgs, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let compiled = load(&args.input, None)?;
    let doc = &compiled.document;
    let ui = emit_ui(doc, &UiOptions::default()).map_err(|e| Failure::usage(e.to_string()))?;

    let records = RecordKind::ALL
        .iter()
        .map(|k| (k.as_str(), compiled.lex_stats.by_kind.get(k).copied().unwrap_or(0)))
        .collect();
    let nodes = NodeKind::ALL
        .iter()
        .map(|k| (k.as_str(), doc.nodes().filter(|n| n.kind == *k).count()))
        .collect();
    let total_lines = doc.total_lines();
    let stats = SessionStats {
        records,
        filtered_records: compiled.lex_stats.filtered,
        malformed_lines: compiled.lex_stats.malformed,
        sections: doc.sections().len(),
        nodes,
        total_lines,
        ui_lines: ui.line_count(),
        ui_full_ratio: (total_lines > 0).then(|| ui.line_count() as f64 / total_lines as f64),
        diagnostics: compiled.diagnostics.len(),
    };

    if args.json {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&stats).expect("stats serialize"))?;
        return Ok(0);
    }
    for (kind, n) in &stats.records {
        writeln!(stdout, "records.{kind}: {n}")?;
    }
    writeln!(stdout, "records.filtered: {}", stats.filtered_records)?;
    writeln!(stdout, "records.malformed: {}", stats.malformed_lines)?;
    writeln!(stdout, "sections: {}", stats.sections)?;
    for (kind, n) in &stats.nodes {
        writeln!(stdout, "nodes.{kind}: {n}")?;
    }
    writeln!(stdout, "lines.full: {}", stats.total_lines)?;
    writeln!(stdout, "lines.ui: {}", stats.ui_lines)?;
    match stats.ui_full_ratio {
        Some(r) => writeln!(stdout, "ratio.ui_full: {r:.3}")?,
        None => writeln!(stdout, "ratio.ui_full: n/a")?,
    }
    writeln!(stdout, "diagnostics: {}", stats.diagnostics)?;
    Ok(0)
}
