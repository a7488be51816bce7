use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error("empty line range list")]
    Empty,
    #[error("line numbers start at 1, got range {0}")]
    ZeroLine(String),
    #[error("range {start}-{end} ends before it starts")]
    Reversed { start: usize, end: usize },
    #[error("malformed line range {0:?}")]
    Malformed(String),
}

/// A set of full-view lines as inclusive, 1-based ranges.
///
/// Ranges are kept sorted, disjoint and non-adjacent: `19-21,22-34` is stored
/// (and printed) as `19-34`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineSpan {
    ranges: Vec<(usize, usize)>,
}

impl LineSpan {
    pub fn new(ranges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, SpanError> {
        let mut ranges: Vec<_> = ranges.into_iter().collect();
        if ranges.is_empty() {
            return Err(SpanError::Empty);
        }
        for &(start, end) in &ranges {
            if start == 0 {
                return Err(SpanError::ZeroLine(format!("{start}-{end}")));
            }
            if start > end {
                return Err(SpanError::Reversed { start, end });
            }
        }
        ranges.sort_unstable();
        let mut merged: Vec<(usize, usize)> = Vec::with_capacity(ranges.len());
        for (start, end) in ranges {
            match merged.last_mut() {
                Some(last) if start <= last.1 + 1 => last.1 = last.1.max(end),
                _ => merged.push((start, end)),
            }
        }
        Ok(Self { ranges: merged })
    }

    pub fn single(start: usize, end: usize) -> Result<Self, SpanError> {
        Self::new([(start, end)])
    }

    pub fn ranges(&self) -> &[(usize, usize)] {
        &self.ranges
    }

    pub fn start(&self) -> usize {
        self.ranges[0].0
    }

    pub fn end(&self) -> usize {
        self.ranges[self.ranges.len() - 1].1
    }

    /// Number of lines covered.
    pub fn line_count(&self) -> usize {
        self.ranges.iter().map(|(s, e)| e - s + 1).sum()
    }

    pub fn lines(&self) -> impl Iterator<Item = usize> + '_ {
        self.ranges.iter().flat_map(|&(s, e)| s..=e)
    }

    pub fn contains(&self, line: usize) -> bool {
        self.ranges.iter().any(|&(s, e)| s <= line && line <= e)
    }

    pub fn union(&self, other: &LineSpan) -> LineSpan {
        Self::new(self.ranges.iter().chain(other.ranges.iter()).copied()).expect("both spans are valid")
    }
}

impl fmt::Display for LineSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(start, end)) in self.ranges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if start == end {
                write!(f, "{start}")?;
            } else {
                write!(f, "{start}-{end}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LineSpan {
    type Err = SpanError;

    /// Parses `19-21,24-34` style range lists. A leading `L` on a bound is
    /// accepted (`L19-L21`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut ranges = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let bound = |b: &str| {
                let b = b.trim();
                b.strip_prefix('L')
                    .unwrap_or(b)
                    .parse::<usize>()
                    .map_err(|_| SpanError::Malformed(part.to_string()))
            };
            let range = match part.split_once('-') {
                Some((start, end)) => (bound(start)?, bound(end)?),
                None => {
                    let line = bound(part)?;
                    (line, line)
                }
            };
            ranges.push(range);
        }
        Self::new(ranges)
    }
}
