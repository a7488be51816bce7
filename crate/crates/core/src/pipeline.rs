//! Lexing, parsing and line assignment in one call.

use std::path::PathBuf;

use thiserror::Error;

use crate::diag::Diagnostic;
use crate::ir::{parse, reassemble_split_messages, Document, IrError, LayoutRules, ParseOptions};
use crate::lexer::{lex_stream, LexOptions, LexStats};
use crate::normalizer::NormalizeConfig;

#[derive(Debug, Clone, Default)]
pub struct CompileOptions {
    /// Fail on the first malformed line instead of skipping it.
    pub strict: bool,
    pub normalize: NormalizeConfig,
    pub layout: LayoutRules,
    /// Directory that receives decoded inline media.
    pub media_dir: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("{0}")]
    Strict(Diagnostic),
    #[error(transparent)]
    Ir(#[from] IrError),
}

/// An assigned document and what was learned compiling it.
#[derive(Debug)]
pub struct Compiled {
    pub document: Document,
    pub lex_stats: LexStats,
    /// Lexer diagnostics followed by the document's own.
    pub diagnostics: Vec<Diagnostic>,
}

pub fn compile(source: &str, opts: &CompileOptions) -> Result<Compiled, CompileError> {
    let lexed = lex_stream(source, LexOptions { strict: opts.strict });
    if opts.strict {
        if let Some(err) = lexed.diagnostics.iter().find(|d| d.is_error()) {
            return Err(CompileError::Strict(err.clone()));
        }
    }
    let parse_opts = ParseOptions {
        normalize: opts.normalize.clone(),
        media_dir: opts.media_dir.as_deref(),
    };
    let document = parse(&lexed.records, &parse_opts)?;
    let mut document = reassemble_split_messages(document)?;
    document.assign_lines(&opts.layout)?;

    let mut diagnostics = lexed.diagnostics;
    diagnostics.extend(document.diagnostics().iter().cloned());
    Ok(Compiled {
        document,
        lex_stats: lexed.stats,
        diagnostics,
    })
}
