//! Reference implementations that work on emitted text only.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use regex::Regex;

/// Flat grep over the content lines of a full view.
///
/// `structural` holds the 1-based numbers of header, delimiter and blank
/// separator lines; they are never reported.
///
/// # Panics
///
/// When `pattern` does not compile.
pub fn naive_grep(full_view_text: &str, pattern: &str, structural: &BTreeSet<usize>) -> BTreeSet<(usize, String)> {
    let re = Regex::new(pattern).unwrap_or_else(|e| panic!("oracle pattern {pattern:?}: {e}"));
    full_view_text
        .split_terminator('\n')
        .enumerate()
        .map(|(i, line)| (i + 1, line))
        .filter(|(n, line)| !structural.contains(n) && re.is_match(line))
        .map(|(n, line)| (n, line.to_string()))
        .collect()
}

const PATTERN_WORDS: &[&str] = &[
    "dog", "cat", "error", "config", "test", "path", "the", "bug", "food", "alpha", "queue", "timeout", "is",
];

/// A regex over the synthesizer's vocabulary, mixing literals, classes,
/// alternation, anchors and case folding.
pub fn random_pattern<R: Rng>(rng: &mut R) -> String {
    let word = *PATTERN_WORDS.choose(rng).unwrap();
    let other = *PATTERN_WORDS.choose(rng).unwrap();
    match rng.gen_range(0..12) {
        0 => word.to_string(),
        1 => format!("{word}|{other}"),
        2 => "[0-9]+".to_string(),
        3 => format!("^{word}"),
        4 => format!("{word}$"),
        5 => format!("(?i){}", word.to_uppercase()),
        6 => format!("\\b{word}\\b"),
        7 => format!("{}.{}", &word[..1], &word[word.len() - 1..]),
        8 => "\\d{2,}".to_string(),
        9 => format!("{word} [a-z]+ {other}"),
        10 => "^$".to_string(),
        _ => "[→:]".to_string(),
    }
}
