use std::path::PathBuf;

use thiserror::Error;

use crate::corpus::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Top-level error; every variant carries the module that raised it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("corpus: {0}")]
    Corpus(#[from] CorpusError),
    #[error("langid: {0}")]
    LangId(#[from] LangIdError),
    #[error("pipeline: {0}")]
    Pipeline(#[from] PipelineError),
    #[error("lexicon: {0}")]
    Lexicon(#[from] LexiconError),
    #[error("features: {0}")]
    Features(#[from] FeatureError),
    #[error("model: {0}")]
    Model(#[from] ModelError),
    #[error("eval: {0}")]
    Eval(#[from] EvalError),
    #[error("config: {0}")]
    Config(#[from] ConfigError),
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: unknown label {label:?}")]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: duplicate id {id:?}")]
    DuplicateId { line: usize, id: String },
    #[error("unknown dataset format {0:?} (expected tsv or jsonl)")]
    UnknownFormat(String),
}

#[derive(Debug, Error)]
pub enum LangIdError {
    #[error("class {0:?} has no training samples")]
    EmptyClass(String),
    #[error("no training samples")]
    NoSamples,
    #[error("n-gram order must be at least 1")]
    BadOrder,
    #[error("smoothing constant must be positive, got {0}")]
    BadAlpha(f64),
    #[error("cannot classify empty text")]
    EmptyText,
    #[error("model file line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{resource} line {line}: {message}")]
    Resource {
        resource: &'static str,
        line: usize,
        message: String,
    },
    #[error("step {step} is enabled but resource {resource} is not loaded")]
    MissingResource {
        step: &'static str,
        resource: &'static str,
    },
    #[error("unknown pipeline step {0:?}")]
    UnknownStep(String),
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: duplicate term {term:?}")]
    DuplicateTerm { line: usize, term: String },
    #[error("line {line}: score {raw:?} is not a finite number")]
    BadScore { line: usize, raw: String },
    #[error("line {line}: term {term:?} has zero score")]
    ZeroScore { line: usize, term: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("seed sets overlap on {0:?}")]
    OverlappingSeeds(String),
    #[error("{0} seed set is empty")]
    EmptySeeds(&'static str),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("no tweet contains a {0} seed")]
    SeedsNeverOccur(&'static str),
    #[error("invalid PMI configuration: {0}")]
    BadConfig(String),
}

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("cannot build a vocabulary from an empty corpus")]
    EmptyCorpus,
    #[error("lexicon features are required but no lexicon is configured")]
    NoLexicons,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("vocab line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("class {0} is absent from the training data")]
    MissingClass(Label),
    #[error("no training examples")]
    NoExamples,
    #[error("training tweet {0:?} has no label")]
    Unlabeled(String),
    #[error("{0} vectors but {1} labels")]
    LengthMismatch(usize, usize),
    #[error("example {0} has a non-finite feature value")]
    NonFinite(usize),
    #[error("feature index {index} out of range for model dimension {dim}")]
    DimensionMismatch { index: usize, dim: usize },
    #[error("invalid training configuration: {0}")]
    BadConfig(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("model file line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("gold has {0} labels but predictions have {1}")]
    LengthMismatch(usize, usize),
    #[error("no labels to evaluate")]
    Empty,
    #[error("chance agreement is 1 but observed agreement is {0}")]
    DegenerateKappa(f64),
    #[error("unknown ablation component {0:?}")]
    UnknownComponent(String),
    #[error("example {0} has no gold label")]
    Unlabeled(String),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("key {key}: path {path} does not exist")]
    MissingPath { key: String, path: PathBuf },
}
