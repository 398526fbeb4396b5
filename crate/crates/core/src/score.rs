//! Per-feature similarity scores, normalization and ranking.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::detect::{TokenDatabase, TokenFindings};
use crate::error::{Error, Result};
use crate::features::{extract_all, FeatureObservation};
use crate::profile::{LanguageProfile, Model, TokenSets};
use crate::sample::SourceSample;

/// Floor for every denominator; an exact match scores `1/EPSILON` instead of
/// infinity.
pub const EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Brackets,
    FirstWord,
    Keywords,
    LastCharacter,
    Operators,
    Punctuation,
    CommentsStrings,
}

impl Feature {
    pub const ALL: [Feature; 7] = [
        Feature::Brackets,
        Feature::FirstWord,
        Feature::Keywords,
        Feature::LastCharacter,
        Feature::Operators,
        Feature::Punctuation,
        Feature::CommentsStrings,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Feature::Brackets => "brackets",
            Feature::FirstWord => "first_word",
            Feature::Keywords => "keywords",
            Feature::LastCharacter => "last_character",
            Feature::Operators => "operators",
            Feature::Punctuation => "punctuation",
            Feature::CommentsStrings => "comments_strings",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inverse mean squared relative error over a language's top `depth` items.
///
/// For each of the language's ranked items `(item, p)`, `x` is the sample's
/// fraction for that same item (0 when absent). The mean of
/// `((p - x) / p)^2` is used so lists shorter than `depth` stay comparable.
/// An empty profile list scores 0.
pub fn score_ranked(
    profile: &[(String, f64)],
    observation: &BTreeMap<String, f64>,
    depth: usize,
) -> f64 {
    let used = &profile[..profile.len().min(depth)];
    if used.is_empty() {
        return 0.0;
    }
    let sum: f64 = used
        .iter()
        .map(|(item, p)| {
            let x = observation.get(item).copied().unwrap_or(0.0);
            let rel = (p - x) / p;
            rel * rel
        })
        .sum();
    1.0 / (sum / used.len() as f64).max(EPSILON)
}

/// Inverse squared distance between bracket distributions.
pub fn score_brackets(profile: &[f64; 4], observation: &[f64; 4]) -> f64 {
    let sum: f64 = profile
        .iter()
        .zip(observation)
        .map(|(p, x)| (p - x) * (p - x))
        .sum();
    1.0 / sum.max(EPSILON)
}

/// Number of the sample's detected tokens that the language also uses, one
/// point at most per kind (string, block pair, line).
pub fn score_tokens(profile: &TokenSets, findings: &TokenFindings) -> f64 {
    let string = findings
        .string_tokens
        .iter()
        .any(|(t, _)| profile.string.contains(t));
    let block = findings
        .block_pairs
        .iter()
        .any(|(p, _)| profile.block.contains(p));
    let line = findings
        .line_tokens
        .iter()
        .any(|(t, _)| profile.line.contains(t));
    [string, block, line].into_iter().filter(|&hit| hit).count() as f64
}

/// Inverse square root of the absolute gaps in punctuation share `(a, b)` and
/// letter share `(x, y)`.
pub fn score_punct(profile: (f64, f64), observation: (f64, f64)) -> f64 {
    let (b, y) = profile;
    let (a, x) = observation;
    1.0 / ((a - b).abs() + (x - y).abs()).max(EPSILON).sqrt()
}

/// Scales scores to sum to 1; all-zero input becomes uniform.
pub fn normalize(raw: &BTreeMap<String, f64>) -> BTreeMap<String, f64> {
    let sum: f64 = raw.values().sum();
    if sum > 0.0 {
        raw.iter().map(|(k, v)| (k.clone(), v / sum)).collect()
    } else {
        let uniform = 1.0 / raw.len() as f64;
        raw.keys().map(|k| (k.clone(), uniform)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub raw: f64,
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub per_feature: BTreeMap<Feature, BTreeMap<String, FeatureScore>>,
    pub totals: BTreeMap<String, f64>,
    /// Languages by total, best first; ties by name.
    pub ranking: Vec<(String, f64)>,
    /// Set when the sample had nothing to score (empty or whitespace only).
    pub degenerate: bool,
}

impl ScoreReport {
    pub fn best(&self) -> Option<&str> {
        self.ranking.first().map(|(l, _)| l.as_str())
    }

    /// 1-based position of `language` in the ranking.
    pub fn rank_of(&self, language: &str) -> Option<usize> {
        self.ranking
            .iter()
            .position(|(l, _)| l == language)
            .map(|i| i + 1)
    }

    pub fn to_canonical_json(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        Ok(text)
    }

    /// Aligned table of the top `k` languages.
    pub fn render_table(&self, k: usize) -> String {
        let rows: Vec<&(String, f64)> = self.ranking.iter().take(k).collect();
        let width = rows
            .iter()
            .map(|(l, _)| l.len())
            .max()
            .unwrap_or(0)
            .max("language".len());
        let mut out = String::new();
        if self.degenerate {
            out.push_str("warning: empty sample, scores are uniform\n");
        }
        let _ = writeln!(out, "{:>4}  {:<width$}  {:>9}", "rank", "language", "total");
        for (i, (lang, total)) in rows.iter().enumerate() {
            let _ = writeln!(out, "{:>4}  {:<width$}  {:>9.6}", i + 1, lang, total);
        }
        out
    }
}

fn raw_score(
    feature: Feature,
    profile: &LanguageProfile,
    obs: &FeatureObservation,
    model: &Model,
) -> f64 {
    let d = &model.feature_depths;
    match feature {
        Feature::Brackets => score_brackets(&profile.bracket_dist, &obs.bracket_dist),
        Feature::FirstWord => score_ranked(&profile.first_words, &obs.first_words, d.first_word),
        Feature::Keywords => score_ranked(&profile.keywords, &obs.keywords, d.keywords),
        Feature::LastCharacter => {
            score_ranked(&profile.last_chars, &obs.last_chars, d.last_character)
        }
        Feature::Operators => score_ranked(&profile.operators, &obs.operators, d.operators),
        Feature::Punctuation => score_punct(profile.punct, obs.punct_ratio),
        Feature::CommentsStrings => score_tokens(&profile.tokens, &obs.token_findings),
    }
}

/// Scores an already extracted observation against every language.
pub fn score_observation(
    obs: &FeatureObservation,
    model: &Model,
    degenerate: bool,
) -> Result<ScoreReport> {
    if model.languages.is_empty() {
        return Err(Error::EmptyModel);
    }
    let mut per_feature = BTreeMap::new();
    let mut totals: BTreeMap<String, f64> = model
        .language_names()
        .map(|l| (l.to_owned(), 0.0))
        .collect();
    for feature in Feature::ALL {
        let raw: BTreeMap<String, f64> = model
            .languages
            .iter()
            .map(|p| {
                let s = if degenerate {
                    0.0
                } else {
                    raw_score(feature, p, obs, model)
                };
                (p.name.clone(), s)
            })
            .collect();
        let normalized = normalize(&raw);
        let mut scores = BTreeMap::new();
        for (lang, r) in &raw {
            let n = normalized[lang];
            *totals.get_mut(lang).expect("same language set") += n;
            scores.insert(
                lang.clone(),
                FeatureScore {
                    raw: *r,
                    normalized: n,
                },
            );
        }
        per_feature.insert(feature, scores);
    }
    let mut ranking: Vec<(String, f64)> = totals.iter().map(|(l, t)| (l.clone(), *t)).collect();
    ranking.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(ScoreReport {
        per_feature,
        totals,
        ranking,
        degenerate,
    })
}

/// Ranks every language in `model` for `sample`. Only the text is used.
pub fn identify(sample: &SourceSample, model: &Model, db: &TokenDatabase) -> Result<ScoreReport> {
    if sample.is_blank() {
        return score_observation(&FeatureObservation::default(), model, true);
    }
    let obs = extract_all(sample, db);
    score_observation(&obs, model, false)
}
