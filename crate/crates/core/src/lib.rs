//! Statistical programming-language identification.
//!
//! Training walks a labeled corpus, strips comments and string literals with a
//! heuristic delimiter detector, and pools seven per-language features into a
//! [`Model`]. Identification scores an unknown sample against every profile,
//! normalizes each feature across languages and ranks languages by the sum.

pub mod corpus;
pub mod detect;
pub mod error;
pub mod eval;
pub mod exec;
pub mod features;
pub mod profile;
pub mod sample;
pub mod score;

pub use corpus::{lookup_extension, walk_corpus, Corpus, ExtensionMap};
pub use detect::{detect_all, mask, MaskedText, TokenDatabase, TokenFindings};
pub use error::{Error, Result};
pub use eval::{EvalResult, RankTally};
pub use exec::Execution;
pub use features::{extract_all, FeatureCounts, FeatureObservation};
pub use profile::{train, FeatureDepths, LanguageProfile, Model, TrainOptions};
pub use sample::SourceSample;
pub use score::{identify, Feature, ScoreReport};
