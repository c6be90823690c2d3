//! Sentiment polarity classification for short social-media texts.
//!
//! The crate is organised as a sequence of stages that can be run
//! independently or wired together through [`system::SystemSpec`]:
//!
//! * [`corpus`]: labeled tweet datasets (TSV / JSONL).
//! * [`langid`]: character n-gram Naive Bayes language filter.
//! * [`pipeline`]: tokenization and the eight preprocessing steps.
//! * [`lexicon`]: sentiment lexicons and PMI bootstrapping from seeds.
//! * [`features`]: TF.IDF n-grams plus per-lexicon and emoticon counts.
//! * [`model`]: multinomial logistic regression.
//! * [`eval`]: metrics, agreement and leave-one-out ablation.

pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod langid;
pub mod lexicon;
pub mod model;
pub mod pipeline;
pub mod synth;
pub mod system;
mod tsv;

pub use corpus::{Label, RawTweet};
pub use error::{Error, Result};
