use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{rank_counts, Capture, StageResult, TokenDatabase};
use crate::sample::SourceSample;

/// Characters typical of comment delimiters.
const OPENER_CHARS: &str = "/*#(<{-!=%\"'";

/// Minimum heuristic score for a token to count as a likely opener.
const LIKELY_OPENER_SCORE: u32 = 2;

/// A detected block comment, from the first byte of its opener to one past the
/// last byte of its closer. Positions are `(line, byte column)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockSpan {
    pub start: (usize, usize),
    pub end: (usize, usize),
    pub open: String,
    pub close: String,
}

impl BlockSpan {
    fn contains(&self, other: &BlockSpan) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    fn covers(&self, capture: &Capture) -> bool {
        self.start <= (capture.line_index, capture.start_col)
            && (capture.line_index, capture.end_col) <= self.end
    }
}

/// Heuristic likelihood that `token` opens a block comment.
///
/// +2 for a database opener, +1 for a length of 1 to 3, +1 when every
/// character is a typical delimiter character, +1 when it shares a
/// punctuation character with a database opener.
pub fn opener_score(token: &str, db: &TokenDatabase) -> u32 {
    let mut score = 0;
    if db.is_opener(token) {
        score += 2;
    }
    if (1..=3).contains(&token.chars().count()) {
        score += 1;
    }
    if !token.is_empty() && token.chars().all(|c| OPENER_CHARS.contains(c)) {
        score += 1;
    }
    let known: Vec<char> = db.opener_chars().filter(|c| !c.is_alphanumeric()).collect();
    if token.chars().any(|c| known.contains(&c)) {
        score += 1;
    }
    score
}

/// The opener a whitespace-delimited token stands for, if it is likely one.
///
/// Tokens starting with a database opener (`/**`, `<!--foo`) reduce to that
/// opener. Anything else must score at least [`LIKELY_OPENER_SCORE`], be two
/// or more characters long and be made only of typical delimiter characters;
/// single brackets and operators such as `=>` are everywhere in code.
pub fn likely_opener<'a>(token: &'a str, db: &'a TokenDatabase) -> Option<&'a str> {
    if let Some(open) = db.opener_prefix_of(token) {
        return Some(open);
    }
    if db.is_closer_only(token) || token.chars().count() < 2 {
        return None;
    }
    if !token.chars().all(|c| OPENER_CHARS.contains(c)) {
        return None;
    }
    (opener_score(token, db) >= LIKELY_OPENER_SCORE).then_some(token)
}

/// Reverses a token and swaps bracket characters: `(*` → `*)`, `<!--` → `--!>`.
pub fn mirror(token: &str) -> String {
    token
        .chars()
        .rev()
        .map(|c| match c {
            '(' => ')',
            ')' => '(',
            '{' => '}',
            '}' => '{',
            '<' => '>',
            '>' => '<',
            '[' => ']',
            ']' => '[',
            other => other,
        })
        .collect()
}

/// Closing token accepted for `opener`: its database partner, otherwise its
/// mirror image. Self-symmetric tokens (`--`, `//`) outside the database
/// cannot close anything.
pub fn expected_closer(opener: &str, db: &TokenDatabase) -> Option<String> {
    if let Some(close) = db.closer_for(opener) {
        return Some(close.to_owned());
    }
    let m = mirror(opener);
    (m != opener).then_some(m)
}

/// Finds the closer matching an opener that ended at `from`, scanning right
/// and then down. Nested openers must be closed first.
pub(crate) fn find_closer<S: AsRef<str>>(
    lines: &[S],
    open: &str,
    close: &str,
    from: (usize, usize),
) -> Option<(usize, usize)> {
    let mut depth = 0usize;
    let (mut line_idx, mut col) = from;
    while let Some(line) = lines.get(line_idx) {
        let line = line.as_ref();
        while col <= line.len() {
            let rest = &line[col..];
            let next_close = rest.find(close);
            let next_open = if open == close { None } else { rest.find(open) };
            match (next_open, next_close) {
                (Some(o), Some(c)) if o < c => {
                    depth += 1;
                    col += o + open.len();
                }
                (_, Some(c)) => {
                    if depth == 0 {
                        return Some((line_idx, col + c));
                    }
                    depth -= 1;
                    col += c + close.len();
                }
                (Some(o), None) => {
                    depth += 1;
                    col += o + open.len();
                }
                (None, None) => break,
            }
        }
        line_idx += 1;
        col = 0;
    }
    None
}

/// Likely openers among the whitespace-separated tokens of `text`, with the
/// byte column where each starts.
fn openers_in(text: &str, db: &TokenDatabase) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split_inclusive(char::is_whitespace) {
        let token = piece.trim_end();
        if let Some(open) = likely_opener(token, db) {
            out.push((offset, open.to_owned()));
        }
        offset += piece.len();
    }
    out
}

struct BlockSearch<'a, S> {
    lines: &'a [S],
    db: &'a TokenDatabase,
    has_words: Vec<bool>,
    line_openers: HashMap<usize, Vec<(usize, String)>>,
    closers: HashMap<(usize, usize), Option<BlockSpan>>,
}

impl<'a, S: AsRef<str>> BlockSearch<'a, S> {
    fn new(lines: &'a [S], db: &'a TokenDatabase) -> Self {
        let has_words = lines
            .iter()
            .map(|l| super::words_property(l.as_ref()).is_some())
            .collect();
        BlockSearch {
            lines,
            db,
            has_words,
            line_openers: HashMap::new(),
            closers: HashMap::new(),
        }
    }

    fn openers_on(&mut self, line: usize) -> Vec<(usize, String)> {
        let (lines, db) = (self.lines, self.db);
        self.line_openers
            .entry(line)
            .or_insert_with(|| openers_in(lines[line].as_ref(), db))
            .clone()
    }

    fn block_from(&mut self, line: usize, col: usize, open: &str) -> Option<BlockSpan> {
        let (lines, db) = (self.lines, self.db);
        self.closers
            .entry((line, col))
            .or_insert_with(|| {
                let close = expected_closer(open, db)?;
                let (cl, cc) = find_closer(lines, open, &close, (line, col + open.len()))?;
                Some(BlockSpan {
                    start: (line, col),
                    end: (cl, cc + close.len()),
                    open: open.to_owned(),
                    close,
                })
            })
            .clone()
    }

    /// Blocks that enclose `capture`, searching left on its line and then up
    /// while lines keep the words property, plus one line beyond.
    fn blocks_around(&mut self, capture: &Capture) -> Vec<BlockSpan> {
        let line = self.lines[capture.line_index].as_ref();
        let mut starts: Vec<(usize, usize, String)> =
            openers_in(&line[..capture.start_col], self.db)
                .into_iter()
                .map(|(col, open)| (capture.line_index, col, open))
                .collect();
        for up in (0..capture.line_index).rev() {
            starts.extend(
                self.openers_on(up)
                    .into_iter()
                    .map(|(col, open)| (up, col, open)),
            );
            if !self.has_words[up] {
                break;
            }
        }
        starts
            .into_iter()
            .filter_map(|(l, c, open)| self.block_from(l, c, &open))
            .filter(|block| block.covers(capture))
            .collect()
    }
}

/// Drops every block lying inside another one. This removes nested comments
/// as well as interior decorations with different tokens (the leading `*` of
/// C comment lines).
pub fn outermost_blocks(blocks: BTreeSet<BlockSpan>) -> Vec<BlockSpan> {
    let all: Vec<BlockSpan> = blocks.into_iter().collect();
    all.iter()
        .filter(|b| !all.iter().any(|other| other != *b && other.contains(b)))
        .cloned()
        .collect()
}

/// Block-comment search over the captures left by the string search.
///
/// Returns pair counts (one per distinct outermost block) and the capture lines
/// lying inside a retained block.
pub fn detect_block_comments(
    sample: &SourceSample,
    captures: &[Capture],
    db: &TokenDatabase,
) -> StageResult<(String, String)> {
    detect_block_spans(sample.lines(), captures, db).0
}

pub(crate) fn detect_block_spans<S: AsRef<str>>(
    lines: &[S],
    captures: &[Capture],
    db: &TokenDatabase,
) -> (StageResult<(String, String)>, Vec<BlockSpan>) {
    let mut search = BlockSearch::new(lines, db);
    let mut found = BTreeSet::new();
    for capture in captures {
        if capture.line_index < lines.len() {
            found.extend(search.blocks_around(capture));
        }
    }
    let kept = outermost_blocks(found);

    let mut counts: BTreeMap<(String, String), usize> = BTreeMap::new();
    for block in &kept {
        *counts
            .entry((block.open.clone(), block.close.clone()))
            .or_insert(0) += 1;
    }
    let consumed = captures
        .iter()
        .filter(|c| kept.iter().any(|b| b.covers(c)))
        .map(|c| c.line_index)
        .collect();
    (
        StageResult {
            counts: rank_counts(counts),
            consumed,
        },
        kept,
    )
}
