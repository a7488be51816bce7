use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tracec_core::normalizer::{MediaArtifact, MEDIA_DIR_NAME};
use tracec_core::views::{emit_full, emit_full_with_gutter, emit_ui, UiOptions};
use tracec_core::Diagnostic;

use crate::{load, CompileArgs, Failure, FULL_VIEW_FILE, GUTTER_VIEW_FILE, MANIFEST_FILE, TOOL_VERSION, UI_VIEW_FILE};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// Contents of `manifest.json`. Paths are relative to the output directory,
/// except `source_path`, which is echoed as given.
#[derive(Debug, Clone, Serialize)]
pub struct CompileManifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub source_path: String,
    pub full_view_path: String,
    pub ui_view_path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gutter_view_path: Option<String>,
    pub media_dir: String,
    pub file_label: String,
    pub total_lines: usize,
    pub ui_lines: usize,
    pub section_count: usize,
    pub media: Vec<MediaArtifact>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Removes the staging directory when dropped.
struct Staging(Option<PathBuf>);

impl Drop for Staging {
    fn drop(&mut self) {
        if let Some(dir) = self.0.take() {
            let _ = fs::remove_dir_all(dir);
        }
    }
}

pub(crate) fn cmd_compile(args: &CompileArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8, Failure> {
    let out = &args.out;
    fs::create_dir_all(out).map_err(|e| Failure::usage(format!("{}: {e}", out.display())))?;
    let staging_dir = out.join(format!(".tracec-staging-{}", std::process::id()));
    if staging_dir.exists() {
        fs::remove_dir_all(&staging_dir)?;
    }
    let staging = Staging(Some(staging_dir.clone()));
    let media_dir = staging_dir.join(MEDIA_DIR_NAME);
    fs::create_dir_all(&media_dir)?;

    let compiled = load(&args.input, Some(media_dir))?;
    let doc = &compiled.document;
    let view_error = |e: tracec_core::ViewError| Failure::usage(e.to_string());
    let full = emit_full(doc).map_err(view_error)?;
    let ui = emit_ui(
        doc,
        &UiOptions {
            file_label: args.file_label.clone(),
            ..UiOptions::default()
        },
    )
    .map_err(view_error)?;

    let ui_lines = ui.line_count();
    let mut written = vec![(FULL_VIEW_FILE, full.text), (UI_VIEW_FILE, ui.text)];
    if args.gutter {
        written.push((GUTTER_VIEW_FILE, emit_full_with_gutter(doc).map_err(view_error)?));
    }
    let manifest = CompileManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        source_path: args.input.session.display().to_string(),
        full_view_path: FULL_VIEW_FILE.to_string(),
        ui_view_path: UI_VIEW_FILE.to_string(),
        gutter_view_path: args.gutter.then(|| GUTTER_VIEW_FILE.to_string()),
        media_dir: MEDIA_DIR_NAME.to_string(),
        file_label: args.file_label.clone(),
        total_lines: doc.total_lines(),
        ui_lines,
        section_count: doc.sections().len(),
        media: doc.media().to_vec(),
        diagnostics: compiled.diagnostics.clone(),
    };
    let mut manifest_json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    manifest_json.push('\n');
    written.push((MANIFEST_FILE, manifest_json));

    for (name, text) in &written {
        fs::write(staging_dir.join(name), text)?;
    }
    publish(&staging_dir, out, written.iter().map(|(name, _)| *name))?;
    drop(staging);

    for diagnostic in &compiled.diagnostics {
        writeln!(stderr, "{diagnostic}")?;
    }
    writeln!(
        stdout,
        "{}: {} lines, {}: {} lines, {} sections",
        out.join(FULL_VIEW_FILE).display(),
        manifest.total_lines,
        out.join(UI_VIEW_FILE).display(),
        manifest.ui_lines,
        manifest.section_count
    )?;
    Ok(0)
}

/// Moves the staged media directory and files into `out`, manifest last.
fn publish<'a>(staging: &Path, out: &Path, files: impl Iterator<Item = &'a str>) -> std::io::Result<()> {
    let media = out.join(MEDIA_DIR_NAME);
    if media.exists() {
        fs::remove_dir_all(&media)?;
    }
    fs::rename(staging.join(MEDIA_DIR_NAME), media)?;
    for name in files {
        fs::rename(staging.join(name), out.join(name))?;
    }
    Ok(())
}
