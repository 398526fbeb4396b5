//! Heuristic comment and string detection.
//!
//! Natural-language text in source code lives almost entirely in comments and
//! string literals, so lines holding a run of plain alphabetic words
//! ("candidate lines") are searched for the delimiters around that run. Three
//! searches run in order (strings, block comments, line comments); each one
//! removes the lines it matched from the later ones, and each reports the most
//! frequent token it saw. [`mask`] then cuts the delimited content out of the
//! text so it cannot bias feature extraction.

mod blocks;
mod db;
mod line;
mod mask;
mod strings;

use std::collections::{BTreeMap, BTreeSet};

pub use blocks::{detect_block_comments, BlockSpan};
pub use db::TokenDatabase;
pub use line::{combine_prefix_tokens, detect_line_comments, line_comment_token};
pub use mask::{mask, MaskedText, RemovedSpan, SpanKind};
pub use strings::detect_strings;

use crate::sample::SourceSample;

/// Minimum letters per word and words per run for the words property.
pub const MIN_WORD_LEN: usize = 2;
pub const MIN_WORDS: usize = 2;

/// The longest run of plain words on a candidate line.
///
/// Columns are byte offsets into the line; the span is half-open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Capture {
    pub line_index: usize,
    pub start_col: usize,
    pub end_col: usize,
    pub word_count: usize,
}

impl Capture {
    pub fn text<'a>(&self, line: &'a str) -> &'a str {
        &line[self.start_col..self.end_col]
    }
}

/// Output of one search stage: ranked token counts plus the lines it matched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageResult<T> {
    pub counts: Vec<(T, usize)>,
    pub consumed: BTreeSet<usize>,
}

impl<T> Default for StageResult<T> {
    fn default() -> Self {
        StageResult {
            counts: Vec::new(),
            consumed: BTreeSet::new(),
        }
    }
}

/// Detected delimiters for one sample.
///
/// [`detect_all`] keeps only the most common token of each kind, so each list
/// holds at most one entry.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenFindings {
    pub string_tokens: Vec<(String, usize)>,
    pub block_pairs: Vec<((String, String), usize)>,
    pub line_tokens: Vec<(String, usize)>,
}

impl TokenFindings {
    pub fn is_empty(&self) -> bool {
        self.string_tokens.is_empty() && self.block_pairs.is_empty() && self.line_tokens.is_empty()
    }

    pub fn string_token(&self) -> Option<&str> {
        self.string_tokens.first().map(|(t, _)| t.as_str())
    }

    pub fn block_pair(&self) -> Option<(&str, &str)> {
        self.block_pairs
            .first()
            .map(|((o, c), _)| (o.as_str(), c.as_str()))
    }

    pub fn line_token(&self) -> Option<&str> {
        self.line_tokens.first().map(|(t, _)| t.as_str())
    }
}

fn is_word_glue(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Finds the longest run of at least two alphabetic-only words separated by
/// single spaces. Ties go to the leftmost run.
///
/// A word is a run of ASCII letters not glued to letters, digits or
/// underscores on either side. A run must begin and end with a word of at
/// least [`MIN_WORD_LEN`] letters; one-letter words ("a", "I") only count
/// inside a run, so `a b` in code never qualifies while `this is a comment`
/// does.
pub fn words_property(line: &str) -> Option<Capture> {
    words_property_at(0, line)
}

fn words_property_at(line_index: usize, line: &str) -> Option<Capture> {
    let bytes = line.as_bytes();
    let mut words: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if !bytes[i].is_ascii_alphabetic() {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
            i += 1;
        }
        let glued_left = line[..start].chars().next_back().is_some_and(is_word_glue);
        let glued_right = line[i..].chars().next().is_some_and(is_word_glue);
        if !glued_left && !glued_right {
            words.push((start, i));
        }
    }

    let mut best: Option<Capture> = None;
    let mut run_start = 0;
    for k in 0..words.len() {
        let continues =
            k + 1 < words.len() && words[k + 1].0 == words[k].1 + 1 && bytes[words[k].1] == b' ';
        if continues {
            continue;
        }
        let run = &words[run_start..=k];
        run_start = k + 1;
        let long = |&&(s, e): &&(usize, usize)| e - s >= MIN_WORD_LEN;
        let (Some(first), Some(last)) = (
            run.iter().position(|w| long(&w)),
            run.iter().rposition(|w| long(&w)),
        ) else {
            continue;
        };
        let count = last + 1 - first;
        if count >= MIN_WORDS && best.is_none_or(|b| count > b.word_count) {
            best = Some(Capture {
                line_index,
                start_col: run[first].0,
                end_col: run[last].1,
                word_count: count,
            });
        }
    }
    best
}

/// One capture per line that has the words property, in line order.
pub fn find_candidate_lines(sample: &SourceSample) -> Vec<Capture> {
    sample
        .lines()
        .iter()
        .enumerate()
        .filter_map(|(i, line)| words_property_at(i, line))
        .collect()
}

/// Total length of a token key, for tie-breaking.
pub(crate) trait TokenKey: Ord + Clone {
    fn token_len(&self) -> usize;
}

impl TokenKey for String {
    fn token_len(&self) -> usize {
        self.len()
    }
}

impl TokenKey for (String, String) {
    fn token_len(&self) -> usize {
        self.0.len() + self.1.len()
    }
}

/// Orders by count descending, then shortest token, then lexicographically.
pub(crate) fn rank_counts<T: TokenKey>(counts: BTreeMap<T, usize>) -> Vec<(T, usize)> {
    let mut ranked: Vec<(T, usize)> = counts.into_iter().filter(|(_, n)| *n > 0).collect();
    ranked.sort_by(|(a, na), (b, nb)| {
        nb.cmp(na)
            .then_with(|| a.token_len().cmp(&b.token_len()))
            .then_with(|| a.cmp(b))
    });
    ranked
}

/// Runs the three searches in order, removing matched lines between stages,
/// and keeps the most common token of each kind.
pub fn detect_all(sample: &SourceSample, db: &TokenDatabase) -> TokenFindings {
    let captures = find_candidate_lines(sample);
    let strings = detect_strings(sample, &captures, db);
    let remaining: Vec<Capture> = captures
        .into_iter()
        .filter(|c| !strings.consumed.contains(&c.line_index))
        .collect();
    let blocks = detect_block_comments(sample, &remaining, db);
    let remaining: Vec<Capture> = remaining
        .into_iter()
        .filter(|c| !blocks.consumed.contains(&c.line_index))
        .collect();
    let lines = detect_line_comments(sample, &remaining);

    TokenFindings {
        string_tokens: strings.counts.into_iter().take(1).collect(),
        block_pairs: blocks.counts.into_iter().take(1).collect(),
        line_tokens: lines.counts.into_iter().take(1).collect(),
    }
}
