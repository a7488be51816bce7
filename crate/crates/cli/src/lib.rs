//! The `tracec` command line.
//!
//! ```text
//! tracec compile session.jsonl --out views/
//! tracec grep 'dog' session.jsonl --index
//! tracec slice session.jsonl 19-21,24-34
//! tracec stats session.jsonl --json
//! ```
//!
//! Exit status follows grep: 0 on success (a match, for `grep`), 1 for "no
//! match" or a strict-mode input error, 2 for anything else.

mod compile;
mod stats;

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use tracec_core::views::{emit_adaptive, slice, AdaptiveOptions, Modality};
use tracec_core::{build_regex_predicate, compile as compile_session, CompileError, CompileOptions, Compiled, LineSpan, Pointer};

pub use compile::{CompileManifest, MANIFEST_SCHEMA_VERSION};
pub use stats::SessionStats;

/// File name of the full view; pointers name it by default.
pub const FULL_VIEW_FILE: &str = "full.txt";
pub const UI_VIEW_FILE: &str = "ui.txt";
pub const GUTTER_VIEW_FILE: &str = "full.gutter.txt";
pub const MANIFEST_FILE: &str = "manifest.json";

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "tracec", version, about = "Compile agent session logs into line-addressed transcripts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write full.txt, ui.txt, media/ and manifest.json for a session.
    Compile(CompileArgs),
    /// Print the blocks whose lines match PATTERN, with pointers into full.txt.
    ///
    /// PATTERN uses Rust regex syntax (no backreferences or lookaround) and
    /// matches anywhere in a line. Only content lines are searched.
    Grep(GrepArgs),
    /// Print full-view lines, e.g. `19-21,24-34` or `(full.txt:19-21)`.
    Slice(SliceArgs),
    /// Report record, node and line counts.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct Session {
    /// Session log (JSONL).
    pub session: PathBuf,
    /// Stop at the first malformed line.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub input: Session,
    /// Output directory; created if missing.
    #[arg(long, short)]
    pub out: PathBuf,
    /// File name printed in pointers.
    #[arg(long, default_value = FULL_VIEW_FILE)]
    pub file_label: String,
    /// Also write full.gutter.txt with `<n> | ` line numbers.
    #[arg(long)]
    pub gutter: bool,
}

#[derive(Debug, Args)]
pub struct GrepArgs {
    pub pattern: String,
    #[command(flatten)]
    pub input: Session,
    /// Flat list of matching blocks.
    #[arg(long, conflicts_with = "document")]
    pub index: bool,
    /// Matching blocks under their turn headers (the default).
    #[arg(long)]
    pub document: bool,
    #[arg(short = 'i', long)]
    pub ignore_case: bool,
    #[arg(long, default_value = FULL_VIEW_FILE)]
    pub file_label: String,
    /// Print at most N matching lines per block.
    #[arg(long, value_name = "N")]
    pub max_block_lines: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[command(flatten)]
    pub input: Session,
    pub ranges: String,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: Session,
    #[arg(long)]
    pub json: bool,
}

/// A failed command: exit status and message.
#[derive(Debug)]
pub struct Failure {
    pub status: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            status: 2,
            message: message.into(),
        }
    }
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Self {
        match e {
            CompileError::Strict(d) => Self { status: 1, message: d.to_string() },
            CompileError::Ir(e) => Self::usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return u8::try_from(e.exit_code()).unwrap_or(2);
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(status) => status,
        Err(failure) => {
            let _ = writeln!(stderr, "tracec: {}", failure.message);
            failure.status
        }
    }
}

fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8, Failure> {
    match command {
        Command::Compile(args) => compile::cmd_compile(args, stdout, stderr),
        Command::Grep(args) => cmd_grep(args, stdout),
        Command::Slice(args) => cmd_slice(args, stdout),
        Command::Stats(args) => stats::cmd_stats(args, stdout),
    }
}

fn read_session(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(input: &Session, media_dir: Option<PathBuf>) -> Result<Compiled, Failure> {
    let source = read_session(&input.session)?;
    let opts = CompileOptions {
        strict: input.strict,
        media_dir,
        ..CompileOptions::default()
    };
    Ok(compile_session(&source, &opts)?)
}

fn cmd_grep(args: &GrepArgs, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let predicate = build_regex_predicate(&args.pattern, !args.ignore_case).map_err(|e| Failure::usage(e.to_string()))?;
    let compiled = load(&args.input, None)?;
    let modality = if args.index { Modality::Index } else { Modality::Document };
    let opts = AdaptiveOptions {
        file_label: args.file_label.clone(),
        max_block_lines: args.max_block_lines,
    };
    let view = emit_adaptive(&compiled.document, &predicate, modality, &opts).map_err(|e| Failure::usage(e.to_string()))?;
    stdout.write_all(view.text.as_bytes())?;
    Ok(if view.pointers.is_empty() { 1 } else { 0 })
}

/// Accepts `19-21,24-34`, `L19-L21` or a whole pointer `(full.txt:19-21)`.
pub fn parse_ranges(ranges: &str) -> Result<LineSpan, String> {
    let trimmed = ranges.trim();
    let parsed = if trimmed.starts_with('(') {
        trimmed.parse::<Pointer>().map(|p| p.span)
    } else {
        trimmed.parse::<LineSpan>()
    };
    parsed.map_err(|e| format!("bad range {ranges:?}: {e}"))
}

fn cmd_slice(args: &SliceArgs, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let span = parse_ranges(&args.ranges).map_err(Failure::usage)?;
    let compiled = load(&args.input, None)?;
    let text = slice(&compiled.document, &span).map_err(|e| Failure::usage(e.to_string()))?;
    stdout.write_all(text.as_bytes())?;
    Ok(0)
}
