use std::collections::BTreeMap;

use super::{rank_counts, Capture, StageResult};
use crate::sample::SourceSample;

/// The run of punctuation at the left margin of a line, if any.
///
/// The run must stand alone (followed by whitespace or the end of the line)
/// and must not be made of brackets only: `(defun` and `} else` are code.
pub fn line_comment_token(line: &str) -> Option<&str> {
    let trimmed = line.trim_start();
    let end = trimmed
        .char_indices()
        .find(|(_, c)| c.is_alphanumeric() || c.is_whitespace())
        .map_or(trimmed.len(), |(i, _)| i);
    let token = &trimmed[..end];
    let stands_alone = trimmed[end..]
        .chars()
        .next()
        .is_none_or(char::is_whitespace);
    let brackets_only = token.chars().all(|c| "(){}[]<>".contains(c));
    (!token.is_empty() && stands_alone && !brackets_only).then_some(token)
}

/// Merges every token into the shortest observed token that is a prefix of
/// it, so `;;`, `;(` and `;` all count as `;`.
pub fn combine_prefix_tokens(counts: BTreeMap<String, usize>) -> BTreeMap<String, usize> {
    let mut by_len: Vec<(String, usize)> = counts.into_iter().collect();
    by_len.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    let mut combined: BTreeMap<String, usize> = BTreeMap::new();
    for (token, n) in by_len {
        // shorter tokens were inserted first, so the first hit is the shortest
        let root = combined
            .keys()
            .filter(|k| token.starts_with(k.as_str()))
            .min_by_key(|k| k.len())
            .cloned();
        *combined.entry(root.unwrap_or(token)).or_insert(0) += n;
    }
    combined
}

/// Line-comment search over the captures left by the earlier searches.
pub fn detect_line_comments(sample: &SourceSample, captures: &[Capture]) -> StageResult<String> {
    let lines = sample.lines();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut result = StageResult::default();
    for capture in captures {
        let Some(line) = lines.get(capture.line_index) else {
            continue;
        };
        if let Some(token) = line_comment_token(line) {
            *counts.entry(token.to_owned()).or_insert(0) += 1;
            result.consumed.insert(capture.line_index);
        }
    }
    result.counts = rank_counts(combine_prefix_tokens(counts));
    result
}
