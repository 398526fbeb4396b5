//! Top-k evaluation over a labeled corpus.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::detect::TokenDatabase;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::profile::Model;
use crate::sample::SourceSample;
use crate::score::identify;

/// Ranks past this are reported as misses.
pub const HISTOGRAM_RANKS: usize = 5;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageTally {
    pub total: usize,
    pub correct_at_1: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub total: usize,
    /// Keys `"1"`..`"5"` and `"miss"`.
    pub rank_histogram: BTreeMap<String, usize>,
    /// Keyed by k.
    pub top_k_accuracy: BTreeMap<usize, f64>,
    pub per_language: BTreeMap<String, LanguageTally>,
}

/// Accumulates the rank of the true language for each evaluated file.
#[derive(Debug, Clone, Default)]
pub struct RankTally {
    outcomes: Vec<(String, Option<usize>)>,
}

impl RankTally {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one file; `rank` is 1-based, `None` when the language was not
    /// ranked at all.
    pub fn record(&mut self, language: impl Into<String>, rank: Option<usize>) {
        self.outcomes.push((language.into(), rank));
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Histogram and accuracies for k = 1..=max_k.
    pub fn finish(&self, max_k: usize) -> EvalResult {
        let total = self.outcomes.len();
        let mut hist = [0usize; HISTOGRAM_RANKS];
        let mut miss = 0;
        let mut per_language: BTreeMap<String, LanguageTally> = BTreeMap::new();
        for (lang, rank) in &self.outcomes {
            match rank {
                Some(r @ 1..=HISTOGRAM_RANKS) => hist[r - 1] += 1,
                _ => miss += 1,
            }
            let t = per_language.entry(lang.clone()).or_default();
            t.total += 1;
            if *rank == Some(1) {
                t.correct_at_1 += 1;
            }
        }
        let mut rank_histogram: BTreeMap<String, usize> = hist
            .iter()
            .enumerate()
            .map(|(i, n)| ((i + 1).to_string(), *n))
            .collect();
        rank_histogram.insert("miss".to_owned(), miss);

        let top_k_accuracy = (1..=max_k.max(1))
            .map(|k| {
                let hits = self
                    .outcomes
                    .iter()
                    .filter(|(_, r)| r.is_some_and(|r| r <= k))
                    .count();
                let acc = if total == 0 {
                    0.0
                } else {
                    hits as f64 / total as f64
                };
                (k, acc)
            })
            .collect();
        EvalResult {
            total,
            rank_histogram,
            top_k_accuracy,
            per_language,
        }
    }
}

/// Identifies every sample from its text alone and tallies where its label
/// lands in the ranking.
pub fn evaluate(
    samples: &[SourceSample],
    model: &Model,
    db: &TokenDatabase,
    max_k: usize,
    execution: Execution,
) -> Result<EvalResult> {
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }
    for s in samples {
        match s.label() {
            Some(l) if model.language(l).is_some() => {}
            Some(l) => {
                return Err(Error::UnknownLabel {
                    language: l.to_owned(),
                    origin: s.origin().to_owned(),
                })
            }
            None => {
                return Err(Error::UnlabeledSample {
                    origin: s.origin().to_owned(),
                })
            }
        }
    }
    let ranks = execution.map(samples, |s| {
        let truth = s.label().expect("checked above");
        identify(&s.without_label(), model, db).map(|r| r.rank_of(truth))
    });
    let mut tally = RankTally::new();
    for (s, rank) in samples.iter().zip(ranks) {
        tally.record(s.label().expect("checked above"), rank?);
    }
    Ok(tally.finish(max_k))
}

fn pct(n: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * n as f64 / total as f64
    }
}

impl EvalResult {
    pub fn histogram_count(&self, bucket: &str) -> usize {
        self.rank_histogram.get(bucket).copied().unwrap_or(0)
    }

    pub fn accuracy_at(&self, k: usize) -> Option<f64> {
        self.top_k_accuracy.get(&k).copied()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "files evaluated: {}", self.total);
        for r in 1..=HISTOGRAM_RANKS {
            let n = self.histogram_count(&r.to_string());
            let _ = writeln!(
                out,
                "correct at rank {r}: {n:>4} ({:5.1}%)",
                pct(n, self.total)
            );
        }
        let miss = self.histogram_count("miss");
        let _ = writeln!(
            out,
            "not in top {HISTOGRAM_RANKS}:    {miss:>4} ({:5.1}%)",
            pct(miss, self.total)
        );
        for (k, acc) in &self.top_k_accuracy {
            let _ = writeln!(out, "top-{k} accuracy: {:.1}%", 100.0 * acc);
        }
        let width = self.per_language.keys().map(String::len).max().unwrap_or(0);
        let _ = writeln!(out, "per language (files, correct at rank 1):");
        for (lang, t) in &self.per_language {
            let _ = writeln!(
                out,
                "  {lang:<width$}  {:>4}  {:>4}",
                t.total, t.correct_at_1
            );
        }
        out
    }

    pub fn to_canonical_json(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        Ok(text)
    }
}
