//! Compiler from agent-session JSONL logs to line-addressed transcript views.
//!
//! The pipeline has four stages:
//!
//! 1. [`lexer`] turns JSONL text into typed [`RawRecord`]s and drops records
//!    that carry no conversation (progress pings, snapshots, queue bookkeeping).
//! 2. [`ir::parse`] lowers records into a sectioned [`Document`], running the
//!    [`normalizer`] transformations on every content block.
//! 3. [`Document::assign_lines`] renders the full transcript once and fixes a
//!    1-based line number for every IR line. This is the only place line
//!    numbers are created.
//! 4. [`views`] lowers the assigned document into the full, UI and adaptive
//!    views. Lowering never renumbers: every pointer emitted by any view is a
//!    [`LineSpan`] into the full view.
//!
//! [`compile`] runs stages 1–3 in one call.

pub mod diag;
pub mod ir;
pub mod lexer;
pub mod normalizer;
pub mod pipeline;
pub mod predicate;
pub mod views;

pub use diag::{Diagnostic, Severity};
pub use ir::{Document, IrError, LayoutRules, LineOwner, LineSpan, Node, NodeKind, Section, SectionRole};
pub use lexer::{lex_stream, BlockType, ContentBlock, LexOptions, LexStats, Lexed, RawRecord, RecordKind, Role};
pub use pipeline::{compile, CompileError, CompileOptions, Compiled};
pub use predicate::{build_regex_predicate, match_lines, PatternError, Predicate, RegexPredicate};
pub use views::{Pointer, RenderedView, ViewError, ViewKind};
