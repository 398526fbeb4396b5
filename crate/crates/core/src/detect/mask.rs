use super::TokenFindings;
use crate::sample::SourceSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpanKind {
    String,
    Block,
    Line,
}

/// Bytes `start_col..end_col` of original line `line_index` were removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RemovedSpan {
    pub line_index: usize,
    pub start_col: usize,
    pub end_col: usize,
    pub kind: SpanKind,
}

/// Sample lines with detected comment and string content (delimiters
/// included) cut out.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MaskedText {
    pub lines: Vec<String>,
    pub removed_spans: Vec<RemovedSpan>,
}

impl MaskedText {
    /// Unmasked view of plain lines.
    pub fn from_lines<I, S>(lines: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        MaskedText {
            lines: lines.into_iter().map(Into::into).collect(),
            removed_spans: Vec::new(),
        }
    }

    pub fn char_count(&self) -> usize {
        self.lines.iter().map(|l| l.chars().count()).sum()
    }
}

struct OpenBlock<'a> {
    open: &'a str,
    close: &'a str,
    depth: usize,
}

impl OpenBlock<'_> {
    /// Scans `line` from `col`; returns the column just past the matching
    /// closer if it is on this line.
    fn advance(&mut self, line: &str, mut col: usize) -> Option<usize> {
        loop {
            let rest = &line[col..];
            let close = rest.find(self.close);
            let open = if self.open == self.close {
                None
            } else {
                rest.find(self.open)
            };
            match (open, close) {
                (Some(o), Some(c)) if o < c => {
                    self.depth += 1;
                    col += o + self.open.len();
                }
                (_, Some(c)) => {
                    col += c + self.close.len();
                    if self.depth == 0 {
                        return Some(col);
                    }
                    self.depth -= 1;
                }
                (Some(o), None) => {
                    self.depth += 1;
                    col += o + self.open.len();
                }
                (None, None) => return None,
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Hit {
    // declaration order is the tie-break order for equally long matches
    Block,
    Line,
    String,
}

/// Removes string literals, block comments and line comments found by the
/// detector, scanning left to right so that a delimiter inside one construct
/// does not start another. An unterminated block comment runs to end of file.
pub fn mask(sample: &SourceSample, findings: &TokenFindings) -> MaskedText {
    if findings.is_empty() {
        return MaskedText::from_lines(sample.lines().iter().cloned());
    }
    let string_tok = findings.string_token();
    let block = findings.block_pair();
    let line_tok = findings.line_token();

    let mut out = MaskedText::default();
    let mut open_block: Option<OpenBlock> = None;
    for (line_index, line) in sample.lines().iter().enumerate() {
        let mut spans: Vec<(usize, usize, SpanKind)> = Vec::new();
        let mut col = 0;
        if let Some(ob) = open_block.as_mut() {
            match ob.advance(line, 0) {
                Some(end) => {
                    spans.push((0, end, SpanKind::Block));
                    col = end;
                    open_block = None;
                }
                None => {
                    spans.push((0, line.len(), SpanKind::Block));
                    col = line.len();
                }
            }
        }

        while col < line.len() {
            let rest = &line[col..];
            let mut best: Option<(usize, Hit)> = None;
            let mut consider = |tok: Option<&str>, hit: Hit| {
                if let Some(t) = tok {
                    if rest.starts_with(t)
                        && best.is_none_or(|(len, h)| t.len() > len || (t.len() == len && hit < h))
                    {
                        best = Some((t.len(), hit));
                    }
                }
            };
            consider(block.map(|(o, _)| o), Hit::Block);
            consider(line_tok, Hit::Line);
            consider(string_tok, Hit::String);

            match best {
                Some((len, Hit::Block)) => {
                    let (open, close) = block.expect("block hit implies a pair");
                    let mut ob = OpenBlock {
                        open,
                        close,
                        depth: 0,
                    };
                    match ob.advance(line, col + len) {
                        Some(end) => {
                            spans.push((col, end, SpanKind::Block));
                            col = end;
                        }
                        None => {
                            spans.push((col, line.len(), SpanKind::Block));
                            col = line.len();
                            open_block = Some(ob);
                        }
                    }
                }
                Some((_, Hit::Line)) => {
                    spans.push((col, line.len(), SpanKind::Line));
                    col = line.len();
                }
                Some((len, Hit::String)) => {
                    let tok = string_tok.expect("string hit implies a token");
                    match line[col + len..].find(tok) {
                        Some(q) => {
                            let end = col + len + q + tok.len();
                            spans.push((col, end, SpanKind::String));
                            col = end;
                        }
                        None => col += len,
                    }
                }
                None => col += rest.chars().next().map_or(1, char::len_utf8),
            }
        }

        let mut kept = String::with_capacity(line.len());
        let mut last = 0;
        for &(start, end, kind) in &spans {
            kept.push_str(&line[last..start]);
            last = end;
            if end > start {
                out.removed_spans.push(RemovedSpan {
                    line_index,
                    start_col: start,
                    end_col: end,
                    kind,
                });
            }
        }
        kept.push_str(&line[last..]);
        out.lines.push(kept);
    }
    out
}
