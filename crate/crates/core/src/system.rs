//! End-to-end system: preprocessing, lexicon construction, feature extraction
//! and training wired together, plus the saved artifact bundle.

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::corpus::{Label, RawTweet};
use crate::error::{EvalError, FeatureError, LexiconError, ModelError, PipelineError, Result};
use crate::features::{assemble_features, build_vocab, dense_len, Document, FeatureConfig, NgramOrders, VocabIndex};
use crate::lexicon::{bootstrap_pmi, load_lexicon, PmiConfig, SeedSet, SentimentLexicon};
use crate::model::{train, LinearModel, SparseRow, TrainConfig};
use crate::pipeline::{run_pipeline, PipelineConfig, Resources, Step, Token};

pub const MODEL_FILE: &str = "model.tsv";
pub const VOCAB_FILE: &str = "vocab.tsv";
/// Lists the lexicon files of a saved system, one per line, in feature order.
pub const LEXICON_MANIFEST: &str = "lexicons.txt";

#[derive(Debug, Clone)]
pub enum LexiconSource {
    Fixed(SentimentLexicon),
    /// Induced at training time from the training tweets plus `extra_corpus`.
    Bootstrap {
        seeds: SeedSet,
        pmi: PmiConfig,
        extra_corpus: Vec<String>,
    },
}

/// Lexicons that are ablated together. Every lexicon gets its own feature block.
#[derive(Debug, Clone)]
pub struct LexiconGroup {
    pub name: String,
    pub sources: Vec<LexiconSource>,
}

#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub pipeline: PipelineConfig,
    /// Preprocessing resources; `lexicons` is filled in from `lexicon_groups`.
    pub resources: Resources,
    pub lexicon_groups: Vec<LexiconGroup>,
    pub min_df: u64,
    pub orders: NgramOrders,
    pub features: FeatureConfig,
    pub train: TrainConfig,
}

impl Default for SystemSpec {
    fn default() -> Self {
        SystemSpec {
            pipeline: PipelineConfig::all(),
            resources: Resources::default(),
            lexicon_groups: Vec::new(),
            min_df: 2,
            orders: NgramOrders::default(),
            features: FeatureConfig::default(),
            train: TrainConfig::default(),
        }
    }
}

fn preprocess_all(texts: &[&str], config: &PipelineConfig, resources: &Resources) -> Result<Vec<Vec<Token>>, PipelineError> {
    texts.par_iter().map(|t| run_pipeline(t, config, resources)).collect()
}

impl SystemSpec {
    /// Copy with one preprocessing step or one lexicon group switched off.
    pub fn without_component(&self, name: &str) -> Result<SystemSpec, EvalError> {
        let mut spec = self.clone();
        if let Some(i) = spec.lexicon_groups.iter().position(|g| g.name == name) {
            spec.lexicon_groups.remove(i);
            return Ok(spec);
        }
        let step: Step = name.parse().map_err(|_| EvalError::UnknownComponent(name.to_string()))?;
        spec.pipeline = spec.pipeline.without(step);
        Ok(spec)
    }

    /// Builds every configured lexicon. Bootstrapping runs on the preprocessed
    /// (untagged) training tweets followed by the source's extra corpus.
    pub fn build_lexicons(&self, train_tokens: &[Vec<Token>]) -> Result<Vec<SentimentLexicon>> {
        let untagged = self.pipeline.clone().without(Step::SentimentTag);
        let mut out = Vec::new();
        for group in &self.lexicon_groups {
            let many = group.sources.len() > 1;
            for (i, source) in group.sources.iter().enumerate() {
                let lex = match source {
                    LexiconSource::Fixed(lex) => lex.clone(),
                    LexiconSource::Bootstrap {
                        seeds,
                        pmi,
                        extra_corpus,
                    } => {
                        let texts: Vec<&str> = extra_corpus.iter().map(String::as_str).collect();
                        let mut corpus = train_tokens.to_vec();
                        corpus.extend(preprocess_all(&texts, &untagged, &self.resources)?);
                        bootstrap_pmi(&corpus, seeds, pmi)?
                    }
                };
                let name = if many { format!("{}-{}", group.name, i + 1) } else { group.name.clone() };
                out.push(lex.with_name(name));
            }
        }
        Ok(out)
    }

    pub fn train(&self, tweets: &[RawTweet]) -> Result<TrainedSystem> {
        let labels: Vec<Label> = tweets
            .iter()
            .map(|t| t.label.ok_or_else(|| ModelError::Unlabeled(t.id.clone())))
            .collect::<Result<_, _>>()?;
        if tweets.is_empty() {
            return Err(ModelError::NoExamples.into());
        }
        self.resources.check(&self.pipeline)?;
        let texts: Vec<&str> = tweets.iter().map(|t| t.text.as_str()).collect();

        let untagged = self.pipeline.clone().without(Step::SentimentTag);
        let plain = preprocess_all(&texts, &untagged, &self.resources)?;
        let lexicons = self.build_lexicons(&plain)?;

        let mut resources = self.resources.clone();
        resources.lexicons = lexicons;
        let tokens = if self.pipeline.enabled(Step::SentimentTag) && !resources.lexicons.is_empty() {
            preprocess_all(&texts, &self.pipeline, &resources)?
        } else {
            plain
        };

        let docs: Vec<Document> = tokens.iter().map(|t| Document::from_tokens(t)).collect();
        let vocab = build_vocab(&docs, self.min_df, self.orders)?;
        let rows: Vec<SparseRow> = tokens
            .par_iter()
            .map(|t| assemble_features(t, &vocab, &resources.lexicons, &self.features).map(|f| f.to_indexed(vocab.len())))
            .collect::<Result<_, FeatureError>>()?;
        let dim = vocab.len() + dense_len(resources.lexicons.len());
        let model = train(&rows, &labels, dim, &self.train)?;
        Ok(TrainedSystem {
            pipeline: self.pipeline.clone(),
            resources,
            features: self.features.clone(),
            vocab,
            model,
        })
    }
}

#[derive(Debug, Clone)]
pub struct TrainedSystem {
    pub pipeline: PipelineConfig,
    /// Preprocessing resources including the trained lexicons.
    pub resources: Resources,
    pub features: FeatureConfig,
    pub vocab: VocabIndex,
    pub model: LinearModel,
}

impl TrainedSystem {
    pub fn lexicons(&self) -> &[SentimentLexicon] {
        &self.resources.lexicons
    }

    pub fn featurize(&self, text: &str) -> Result<SparseRow> {
        let tokens = run_pipeline(text, &self.pipeline, &self.resources)?;
        let fv = assemble_features(&tokens, &self.vocab, &self.resources.lexicons, &self.features)?;
        Ok(fv.to_indexed(self.vocab.len()))
    }

    /// Predicted label and class probabilities in [`Label::ALL`] order.
    pub fn predict(&self, text: &str) -> Result<(Label, [f64; 3])> {
        let row = self.featurize(text)?;
        let proba = self.model.predict_proba(&row)?;
        Ok((crate::model::argmax(&proba), proba))
    }

    pub fn predict_all<'a, I>(&self, texts: I) -> Result<Vec<(Label, [f64; 3])>>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let texts: Vec<&str> = texts.into_iter().collect();
        texts.par_iter().map(|t| self.predict(t)).collect()
    }

    /// Writes the model, vocabulary, lexicons and lexicon manifest into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|source| ModelError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        self.model.save(&dir.join(MODEL_FILE))?;
        self.vocab.save(&dir.join(VOCAB_FILE))?;
        let mut manifest = String::new();
        for lex in self.lexicons() {
            let file = format!("{}.lexicon.tsv", lex.name);
            lex.write(&dir.join(&file))?;
            manifest.push_str(&file);
            manifest.push('\n');
        }
        let path = dir.join(LEXICON_MANIFEST);
        fs::write(&path, manifest).map_err(|source| LexiconError::Io { path, source })?;
        Ok(())
    }

    /// Reassembles a saved system. Lexicons are read from the manifest next to
    /// `model_path`; a missing manifest means no lexicons.
    pub fn load(model_path: &Path, vocab_path: &Path, spec: &SystemSpec) -> Result<TrainedSystem> {
        let model = LinearModel::load(model_path)?;
        let vocab = VocabIndex::load(vocab_path)?;
        let dir = model_path.parent().unwrap_or(Path::new("."));
        let manifest = dir.join(LEXICON_MANIFEST);
        let mut lexicons = Vec::new();
        if manifest.exists() {
            let text = fs::read_to_string(&manifest).map_err(|source| LexiconError::Io {
                path: manifest.clone(),
                source,
            })?;
            for file in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
                lexicons.push(load_lexicon(&dir.join(file))?);
            }
        }
        let expected = vocab.len() + dense_len(lexicons.len());
        if model.dim() != expected {
            return Err(ModelError::DimensionMismatch {
                index: expected,
                dim: model.dim(),
            }
            .into());
        }
        let mut resources = spec.resources.clone();
        resources.lexicons = lexicons;
        Ok(TrainedSystem {
            pipeline: spec.pipeline.clone(),
            resources,
            features: spec.features.clone(),
            vocab,
            model,
        })
    }
}
