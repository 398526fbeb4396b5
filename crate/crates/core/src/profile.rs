//! Per-language profiles and the persisted model.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detect::{TokenDatabase, TokenFindings};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::features::{extract_counts, FeatureCounts};
use crate::sample::SourceSample;

pub const FORMAT_VERSION: u64 = 1;

/// Sum tolerance for distributions read back from disk.
const SUM_TOLERANCE: f64 = 1e-9;

/// How many top-ranked items each ranked feature compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureDepths {
    pub first_word: usize,
    pub keywords: usize,
    pub last_character: usize,
    pub operators: usize,
}

impl Default for FeatureDepths {
    fn default() -> Self {
        FeatureDepths {
            first_word: 20,
            keywords: 50,
            last_character: 15,
            operators: 30,
        }
    }
}

impl FeatureDepths {
    pub fn set(&mut self, feature: &str, depth: usize) -> Result<()> {
        if depth == 0 {
            return Err(Error::InvalidDepth {
                feature: feature.to_owned(),
                depth,
            });
        }
        let slot = match feature {
            "first_word" | "firstword" => &mut self.first_word,
            "keywords" | "keyword" => &mut self.keywords,
            "last_character" | "last_char" | "lastcharacter" => &mut self.last_character,
            "operators" | "operator" => &mut self.operators,
            _ => {
                return Err(Error::InvalidDepth {
                    feature: feature.to_owned(),
                    depth,
                })
            }
        };
        *slot = depth;
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        for (name, depth) in [
            ("first_word", self.first_word),
            ("keywords", self.keywords),
            ("last_character", self.last_character),
            ("operators", self.operators),
        ] {
            if depth == 0 {
                return Err(Error::InvalidDepth {
                    feature: name.to_owned(),
                    depth,
                });
            }
        }
        Ok(())
    }
}

/// Comment and string delimiters seen in a language's files.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSets {
    pub string: Vec<String>,
    pub block: Vec<(String, String)>,
    pub line: Vec<String>,
}

/// Ranked `(item, fraction)` list, most frequent first.
pub type Ranked = Vec<(String, f64)>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageProfile {
    pub name: String,
    pub file_count: usize,
    pub first_words: Ranked,
    pub keywords: Ranked,
    pub last_chars: Ranked,
    pub operators: Ranked,
    pub bracket_dist: [f64; 4],
    /// (punctuation, letters) share.
    pub punct: (f64, f64),
    pub tokens: TokenSets,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub format_version: u64,
    pub feature_depths: FeatureDepths,
    pub languages: Vec<LanguageProfile>,
}

#[derive(Debug, Clone)]
pub struct TrainOptions {
    pub depths: FeatureDepths,
    /// A token joins a profile when it was the detected token in at least this
    /// share of the language's files.
    pub token_min_file_share: f64,
    /// Languages that must each receive at least one sample.
    pub declared_languages: Vec<String>,
    pub execution: Execution,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            depths: FeatureDepths::default(),
            token_min_file_share: 0.10,
            declared_languages: Vec::new(),
            execution: Execution::default(),
        }
    }
}

#[derive(Default)]
struct LanguageTally {
    files: usize,
    counts: FeatureCounts,
    string: BTreeMap<String, usize>,
    block: BTreeMap<(String, String), usize>,
    line: BTreeMap<String, usize>,
}

impl LanguageTally {
    fn add(&mut self, counts: &FeatureCounts, findings: &TokenFindings) {
        self.files += 1;
        self.counts.merge(counts);
        for (t, _) in &findings.string_tokens {
            *self.string.entry(t.clone()).or_insert(0) += 1;
        }
        for (p, _) in &findings.block_pairs {
            *self.block.entry(p.clone()).or_insert(0) += 1;
        }
        for (t, _) in &findings.line_tokens {
            *self.line.entry(t.clone()).or_insert(0) += 1;
        }
    }

    fn into_profile(self, name: String, opts: &TrainOptions) -> LanguageProfile {
        let depths = &opts.depths;
        let c = &self.counts;
        let files = self.files;
        let keep = |n: &usize| *n as f64 >= opts.token_min_file_share * files as f64;
        let retained = |m: BTreeMap<String, usize>| {
            m.into_iter()
                .filter(|(_, n)| keep(n))
                .map(|(t, _)| t)
                .collect()
        };
        LanguageProfile {
            name,
            file_count: files,
            first_words: rank(c.first_word_fractions(), depths.first_word),
            keywords: rank(c.keyword_fractions(), depths.keywords),
            last_chars: rank(c.last_char_fractions(), depths.last_character),
            operators: rank(c.operator_fractions(), depths.operators),
            bracket_dist: c.bracket_dist(),
            punct: c.punct_ratio(),
            tokens: TokenSets {
                string: retained(self.string),
                block: self
                    .block
                    .into_iter()
                    .filter(|(_, n)| keep(n))
                    .map(|(p, _)| p)
                    .collect(),
                line: retained(self.line),
            },
        }
    }
}

/// Sorts by fraction descending (ties by item) and keeps the top `depth`.
pub fn rank(fractions: BTreeMap<String, f64>, depth: usize) -> Ranked {
    let mut items: Ranked = fractions.into_iter().filter(|(_, p)| *p > 0.0).collect();
    items.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    items.truncate(depth);
    items
}

/// Pools feature counts of every labeled sample per language.
///
/// The result does not depend on sample order.
pub fn train(samples: &[SourceSample], db: &TokenDatabase, opts: &TrainOptions) -> Result<Model> {
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }
    opts.depths.validate()?;
    if let Some(s) = samples.iter().find(|s| s.label().is_none()) {
        return Err(Error::UnlabeledSample {
            origin: s.origin().to_owned(),
        });
    }

    let extracted = opts.execution.map(samples, |s| extract_counts(s, db));
    let mut tallies: BTreeMap<String, LanguageTally> = BTreeMap::new();
    for (sample, (counts, findings)) in samples.iter().zip(&extracted) {
        let label = sample.label().expect("checked above");
        tallies
            .entry(label.to_owned())
            .or_default()
            .add(counts, findings);
    }
    for lang in &opts.declared_languages {
        if !tallies.contains_key(lang) {
            return Err(Error::EmptyLanguage(lang.clone()));
        }
    }

    let languages = tallies
        .into_iter()
        .map(|(name, tally)| tally.into_profile(name, opts))
        .collect();
    Ok(Model {
        format_version: FORMAT_VERSION,
        feature_depths: opts.depths,
        languages,
    })
}

impl Model {
    pub fn language(&self, name: &str) -> Option<&LanguageProfile> {
        self.languages.iter().find(|l| l.name == name)
    }

    pub fn language_names(&self) -> impl Iterator<Item = &str> {
        self.languages.iter().map(|l| l.name.as_str())
    }

    /// Canonical JSON text: sorted keys, shortest round-trip numbers,
    /// two-space indentation, trailing newline.
    pub fn to_canonical_json(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(text: &str) -> Result<Model> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let version = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::MalformedModel("missing format_version".into()))?;
        if version != FORMAT_VERSION {
            return Err(Error::ModelVersion {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        let model: Model =
            serde_json::from_value(value).map_err(|e| Error::MalformedModel(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = self.to_canonical_json()?;
        std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Model> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Model::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.feature_depths.validate()?;
        let mut seen = BTreeSet::new();
        for lang in &self.languages {
            if !seen.insert(lang.name.as_str()) {
                return Err(Error::DuplicateLanguage(lang.name.clone()));
            }
            let bad = |what: &str| Error::MalformedModel(format!("{}: {what}", lang.name));
            for (name, list) in [
                ("first_words", &lang.first_words),
                ("keywords", &lang.keywords),
                ("last_chars", &lang.last_chars),
                ("operators", &lang.operators),
            ] {
                if list.iter().any(|(_, p)| !(*p > 0.0 && *p <= 1.0)) {
                    return Err(bad(&format!("{name} fraction outside (0, 1]")));
                }
                let ordered = list
                    .windows(2)
                    .all(|w| w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
                if !ordered {
                    return Err(bad(&format!("{name} not in rank order")));
                }
            }
            if !is_distribution(&lang.bracket_dist) {
                return Err(bad("bracket_dist must sum to 1 or be all zero"));
            }
            if !is_distribution(&[lang.punct.0, lang.punct.1]) {
                return Err(bad("punct must sum to 1 or be all zero"));
            }
        }
        Ok(())
    }
}

fn is_distribution(values: &[f64]) -> bool {
    if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return false;
    }
    let sum: f64 = values.iter().sum();
    sum == 0.0 || (sum - 1.0).abs() <= SUM_TOLERANCE
}
