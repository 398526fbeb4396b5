use std::collections::BTreeMap;

use super::{rank_counts, Capture, StageResult, TokenDatabase};
use crate::sample::SourceSample;

/// String token that encloses the capture on its own line, if any.
///
/// A token encloses the capture when an odd number of its occurrences lie to
/// the left of it (so the capture sits inside an open literal) and at least one
/// lies to the right. When several tokens qualify, the one opening nearest to
/// the capture wins, longer tokens first on ties.
pub(crate) fn enclosing_string_token<'d>(
    line: &str,
    capture: &Capture,
    db: &'d TokenDatabase,
) -> Option<&'d str> {
    let prefix = &line[..capture.start_col];
    let suffix = &line[capture.end_col..];
    let mut best: Option<(usize, &str)> = None;
    for token in db.string_tokens() {
        let left: Vec<usize> = prefix
            .match_indices(token.as_str())
            .map(|(i, _)| i)
            .collect();
        if left.len().is_multiple_of(2) || !suffix.contains(token.as_str()) {
            continue;
        }
        let open_end = left[left.len() - 1] + token.len();
        // string_tokens() is longest first, so strict > keeps the longer one on ties
        if best.is_none_or(|(end, _)| open_end > end) {
            best = Some((open_end, token.as_str()));
        }
    }
    best.map(|(_, t)| t)
}

/// String search: counts, per token, the candidate lines whose capture sits
/// between a matching pair of that token.
pub fn detect_strings(
    sample: &SourceSample,
    captures: &[Capture],
    db: &TokenDatabase,
) -> StageResult<String> {
    let lines = sample.lines();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut result = StageResult::default();
    for capture in captures {
        let Some(line) = lines.get(capture.line_index) else {
            continue;
        };
        if let Some(token) = enclosing_string_token(line, capture, db) {
            *counts.entry(token.to_owned()).or_insert(0) += 1;
            result.consumed.insert(capture.line_index);
        }
    }
    result.counts = rank_counts(counts);
    result
}
