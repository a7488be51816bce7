//! Synthetic session logs and independent oracles for testing `tracec`.
//!
//! The oracles here read emitted text and never call into the predicate or
//! view code they check.

pub mod fixtures;
pub mod oracle;
pub mod reingest;
pub mod synth;

pub use fixtures::{corpus, load_fixture, CorpusEntry};
pub use oracle::{naive_grep, random_pattern};
pub use reingest::{reingest_full_view, Reingested, ReingestedBlock, ReingestedSection};
pub use synth::{synthesize_trace, ExpectedSection, GroundTruth, InvalidSpec, TraceSpec};
