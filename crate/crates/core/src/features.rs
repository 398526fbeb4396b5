//! The seven per-sample features, computed on masked text.
//!
//! Raw counts ([`FeatureCounts`]) are kept separately from fractions
//! ([`FeatureObservation`]) so that training can pool counts across files and
//! convert to fractions once.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::detect::{detect_all, mask, MaskedText, TokenDatabase, TokenFindings};
use crate::sample::SourceSample;

pub const BRACKET_KINDS: [&str; 4] = ["paren", "curly", "square", "angle"];

fn bracket_kind(c: char) -> Option<usize> {
    match c {
        '(' | ')' => Some(0),
        '{' | '}' => Some(1),
        '[' | ']' => Some(2),
        '<' | '>' => Some(3),
        _ => None,
    }
}

/// Integer tallies behind every fraction-valued feature. Merging is
/// commutative and associative.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureCounts {
    pub brackets: [u64; 4],
    pub nonblank_lines: u64,
    pub first_words: BTreeMap<String, u64>,
    pub last_chars: BTreeMap<String, u64>,
    pub keywords: BTreeMap<String, u64>,
    pub operators: BTreeMap<String, u64>,
    pub punctuation: u64,
    pub letters: u64,
}

fn bump(map: &mut BTreeMap<String, u64>, key: &str, n: u64) {
    if let Some(v) = map.get_mut(key) {
        *v += n;
    } else {
        map.insert(key.to_owned(), n);
    }
}

fn merge_map(into: &mut BTreeMap<String, u64>, from: &BTreeMap<String, u64>) {
    for (k, n) in from {
        bump(into, k, *n);
    }
}

impl FeatureCounts {
    pub fn from_masked(m: &MaskedText) -> Self {
        let mut c = FeatureCounts::default();
        for line in &m.lines {
            c.add_line(line);
        }
        c
    }

    fn add_line(&mut self, line: &str) {
        for ch in line.chars() {
            if let Some(k) = bracket_kind(ch) {
                self.brackets[k] += 1;
            }
            if ch.is_ascii_punctuation() {
                self.punctuation += 1;
            } else if ch.is_alphabetic() {
                self.letters += 1;
            }
        }

        if let Some(first) = line.split_whitespace().next() {
            self.nonblank_lines += 1;
            bump(&mut self.first_words, first, 1);
            let last = line.trim_end().chars().next_back().expect("nonblank line");
            let mut buf = [0u8; 4];
            bump(&mut self.last_chars, last.encode_utf8(&mut buf), 1);
        }

        for word in line
            .split(|c: char| !c.is_ascii_alphabetic())
            .filter(|w| !w.is_empty())
        {
            bump(&mut self.keywords, word, 1);
        }
        for op in line
            .split(|c: char| !c.is_ascii_punctuation())
            .filter(|w| !w.is_empty())
        {
            bump(&mut self.operators, op, 1);
        }
    }

    pub fn merge(&mut self, other: &FeatureCounts) {
        for (a, b) in self.brackets.iter_mut().zip(other.brackets) {
            *a += b;
        }
        self.nonblank_lines += other.nonblank_lines;
        merge_map(&mut self.first_words, &other.first_words);
        merge_map(&mut self.last_chars, &other.last_chars);
        merge_map(&mut self.keywords, &other.keywords);
        merge_map(&mut self.operators, &other.operators);
        self.punctuation += other.punctuation;
        self.letters += other.letters;
    }

    pub fn keyword_total(&self) -> u64 {
        self.keywords.values().sum()
    }

    pub fn operator_total(&self) -> u64 {
        self.operators.values().sum()
    }

    pub fn bracket_dist(&self) -> [f64; 4] {
        let total: u64 = self.brackets.iter().sum();
        if total == 0 {
            return [0.0; 4];
        }
        self.brackets.map(|n| n as f64 / total as f64)
    }

    pub fn punct_ratio(&self) -> (f64, f64) {
        let total = self.punctuation + self.letters;
        if total == 0 {
            return (0.0, 0.0);
        }
        (
            self.punctuation as f64 / total as f64,
            self.letters as f64 / total as f64,
        )
    }

    pub fn first_word_fractions(&self) -> BTreeMap<String, f64> {
        fractions(&self.first_words, self.nonblank_lines)
    }

    pub fn last_char_fractions(&self) -> BTreeMap<String, f64> {
        fractions(&self.last_chars, self.nonblank_lines)
    }

    pub fn keyword_fractions(&self) -> BTreeMap<String, f64> {
        fractions(&self.keywords, self.keyword_total())
    }

    pub fn operator_fractions(&self) -> BTreeMap<String, f64> {
        fractions(&self.operators, self.operator_total())
    }
}

fn fractions(counts: &BTreeMap<String, u64>, total: u64) -> BTreeMap<String, f64> {
    if total == 0 {
        return BTreeMap::new();
    }
    counts
        .iter()
        .map(|(k, n)| (k.clone(), *n as f64 / total as f64))
        .collect()
}

/// One sample's feature values, all fractions in `[0, 1]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureObservation {
    /// Paren, curly, square, angle; sums to 1 or is all zero.
    pub bracket_dist: [f64; 4],
    /// Per nonblank line.
    pub first_words: BTreeMap<String, f64>,
    /// Per keyword occurrence.
    pub keywords: BTreeMap<String, f64>,
    /// Per nonblank line.
    pub last_chars: BTreeMap<String, f64>,
    /// Per operator occurrence.
    pub operators: BTreeMap<String, f64>,
    /// (punctuation, letters) share of all punctuation and letters.
    pub punct_ratio: (f64, f64),
    pub token_findings: TokenFindings,
}

impl FeatureObservation {
    pub fn from_counts(counts: &FeatureCounts, token_findings: TokenFindings) -> Self {
        FeatureObservation {
            bracket_dist: counts.bracket_dist(),
            first_words: counts.first_word_fractions(),
            keywords: counts.keyword_fractions(),
            last_chars: counts.last_char_fractions(),
            operators: counts.operator_fractions(),
            punct_ratio: counts.punct_ratio(),
            token_findings,
        }
    }

    /// True when no extractor saw anything.
    pub fn is_empty(&self) -> bool {
        self.bracket_dist == [0.0; 4]
            && self.first_words.is_empty()
            && self.keywords.is_empty()
            && self.last_chars.is_empty()
            && self.operators.is_empty()
            && self.punct_ratio == (0.0, 0.0)
    }
}

pub fn extract_brackets(m: &MaskedText) -> [f64; 4] {
    FeatureCounts::from_masked(m).bracket_dist()
}

pub fn extract_first_words(m: &MaskedText) -> BTreeMap<String, f64> {
    FeatureCounts::from_masked(m).first_word_fractions()
}

pub fn extract_keywords(m: &MaskedText) -> BTreeMap<String, f64> {
    FeatureCounts::from_masked(m).keyword_fractions()
}

pub fn extract_last_chars(m: &MaskedText) -> BTreeMap<String, f64> {
    FeatureCounts::from_masked(m).last_char_fractions()
}

pub fn extract_operators(m: &MaskedText) -> BTreeMap<String, f64> {
    FeatureCounts::from_masked(m).operator_fractions()
}

pub fn extract_punct_ratio(m: &MaskedText) -> (f64, f64) {
    FeatureCounts::from_masked(m).punct_ratio()
}

/// Detection, masking and counting for one sample.
pub fn extract_counts(sample: &SourceSample, db: &TokenDatabase) -> (FeatureCounts, TokenFindings) {
    let findings = detect_all(sample, db);
    let masked = mask(sample, &findings);
    (FeatureCounts::from_masked(&masked), findings)
}

pub fn extract_all(sample: &SourceSample, db: &TokenDatabase) -> FeatureObservation {
    let (counts, findings) = extract_counts(sample, db);
    FeatureObservation::from_counts(&counts, findings)
}

/// Tab-separated dump, one `feature<TAB>item<TAB>value` row per entry.
pub fn render_observation(obs: &FeatureObservation) -> String {
    let mut out = String::new();
    for (kind, v) in BRACKET_KINDS.iter().zip(obs.bracket_dist) {
        let _ = writeln!(out, "brackets\t{kind}\t{v}");
    }
    for (name, map) in [
        ("first_word", &obs.first_words),
        ("keyword", &obs.keywords),
        ("last_char", &obs.last_chars),
        ("operator", &obs.operators),
    ] {
        let mut items: Vec<(&String, &f64)> = map.iter().collect();
        items.sort_by(|a, b| b.1.total_cmp(a.1).then_with(|| a.0.cmp(b.0)));
        for (item, v) in items {
            let _ = writeln!(out, "{name}\t{item}\t{v}");
        }
    }
    let _ = writeln!(out, "punctuation\tpunct\t{}", obs.punct_ratio.0);
    let _ = writeln!(out, "punctuation\tletters\t{}", obs.punct_ratio.1);
    let f = &obs.token_findings;
    for (t, n) in &f.string_tokens {
        let _ = writeln!(out, "token\tstring\t{t}\t{n}");
    }
    for ((o, c), n) in &f.block_pairs {
        let _ = writeln!(out, "token\tblock\t{o}\t{c}\t{n}");
    }
    for (t, n) in &f.line_tokens {
        let _ = writeln!(out, "token\tline\t{t}\t{n}");
    }
    out
}
