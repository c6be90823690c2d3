//! Run configuration: a line-oriented `key = value` file.
//!
//! Blank lines and lines starting with `#` are ignored. Relative paths are
//! resolved against the directory of the config file. Recognised keys:
//!
//! ```text
//! stopwords = resources/stopwords.txt
//! normalization = resources/normalization.tsv
//! negation_cues = resources/negation.txt
//! stem_rules = resources/stem_rules.tsv
//! pos_dictionary = resources/pos_dictionary.tsv
//! lemmas = resources/lemmas.txt
//! emoticons = resources/emoticons.tsv
//! steps = all                         # or none, or a comma list of step names
//! lexicon = manual:lexicons/manual.tsv      # repeatable; name:path
//! lexicon_lists = manual:pos.txt:neg.txt    # repeatable; name:pos:neg, scores +1/-1
//! bootstrap = auto:seeds_pos.txt:seeds_neg.txt
//! bootstrap_corpus = data/unlabeled.jsonl   # extra tweets for bootstrapping
//! pmi_epsilon = 0.5
//! pmi_min_count = 5
//! min_df = 2
//! ngrams = 1,2
//! lambda = 0.0001
//! learning_rate = 0.5
//! max_epochs = 500
//! tolerance = 0.000001
//! lemma_threshold = 0.85
//! lemma_jw_weight = 0.5
//! output_dir = out
//! threads = 4
//! ```
//!
//! Lexicon entries sharing a name form one ablation group.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::corpus::{load_dataset, Format};
use crate::error::{ConfigError, Result};
use crate::features::{EmoticonTable, FeatureConfig, NgramOrders};
use crate::lexicon::{load_lexicon, load_polarity_lists, PmiConfig, SeedSet};
use crate::model::TrainConfig;
use crate::pipeline::{
    LemmaList, LemmatizerConfig, NegationCues, NormalizationMap, PipelineConfig, PosDictionary, Resources, StemRuleSet,
    Step, Stopwords,
};
use crate::system::{LexiconGroup, LexiconSource, SystemSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum LexiconEntry {
    File(PathBuf),
    Lists { pos: PathBuf, neg: PathBuf },
    Bootstrap { pos_seeds: PathBuf, neg_seeds: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub stopwords: Option<PathBuf>,
    pub normalization: Option<PathBuf>,
    pub negation_cues: Option<PathBuf>,
    pub stem_rules: Option<PathBuf>,
    pub pos_dictionary: Option<PathBuf>,
    pub lemmas: Option<PathBuf>,
    pub emoticons: Option<PathBuf>,
    pub steps: PipelineConfig,
    /// `(group name, entry)` in file order.
    pub lexicons: Vec<(String, LexiconEntry)>,
    pub bootstrap_corpus: Option<PathBuf>,
    pub pmi: PmiConfig,
    pub min_df: u64,
    pub orders: NgramOrders,
    pub train: TrainConfig,
    pub lemmatizer: LemmatizerConfig,
    pub output_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            stopwords: None,
            normalization: None,
            negation_cues: None,
            stem_rules: None,
            pos_dictionary: None,
            lemmas: None,
            emoticons: None,
            steps: PipelineConfig::all(),
            lexicons: Vec::new(),
            bootstrap_corpus: None,
            pmi: PmiConfig::default(),
            min_df: 2,
            orders: NgramOrders::default(),
            train: TrainConfig::default(),
            lemmatizer: LemmatizerConfig::default(),
            output_dir: None,
            threads: None,
        }
    }
}

fn malformed(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Malformed {
        line,
        message: message.into(),
    }
}

fn number<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| malformed(line, format!("{key}: cannot parse {value:?}")))
}

fn parse_steps(line: usize, value: &str) -> Result<PipelineConfig, ConfigError> {
    match value {
        "all" => Ok(PipelineConfig::all()),
        "none" => Ok(PipelineConfig::none()),
        _ => value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<Step>().map_err(|_| malformed(line, format!("unknown step {s:?}"))))
            .collect::<Result<Vec<_>, _>>()
            .map(PipelineConfig::with_steps),
    }
}

fn parse_orders(line: usize, value: &str) -> Result<NgramOrders, ConfigError> {
    let mut orders = NgramOrders {
        unigrams: false,
        bigrams: false,
    };
    for n in value.split(',').map(str::trim) {
        match n {
            "1" => orders.unigrams = true,
            "2" => orders.bigrams = true,
            _ => return Err(malformed(line, format!("ngrams: unsupported order {n:?}"))),
        }
    }
    Ok(orders)
}

impl RunConfig {
    /// Parses config text; relative paths are joined onto `base`.
    pub fn parse(text: &str, base: &Path) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        let path = |v: &str| base.join(v);
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| malformed(line, "expected key = value"))?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(malformed(line, format!("{key}: empty value")));
            }
            match key {
                "stopwords" => cfg.stopwords = Some(path(value)),
                "normalization" => cfg.normalization = Some(path(value)),
                "negation_cues" => cfg.negation_cues = Some(path(value)),
                "stem_rules" => cfg.stem_rules = Some(path(value)),
                "pos_dictionary" => cfg.pos_dictionary = Some(path(value)),
                "lemmas" => cfg.lemmas = Some(path(value)),
                "emoticons" => cfg.emoticons = Some(path(value)),
                "steps" => cfg.steps = parse_steps(line, value)?,
                "lexicon" => {
                    let (name, file) = value
                        .split_once(':')
                        .ok_or_else(|| malformed(line, "lexicon: expected name:path"))?;
                    cfg.lexicons.push((name.trim().to_string(), LexiconEntry::File(path(file.trim()))));
                }
                "lexicon_lists" | "bootstrap" => {
                    let parts: Vec<&str> = value.splitn(3, ':').map(str::trim).collect();
                    let [name, pos, neg] = parts[..] else {
                        return Err(malformed(line, format!("{key}: expected name:pos_path:neg_path")));
                    };
                    let entry = if key == "bootstrap" {
                        LexiconEntry::Bootstrap {
                            pos_seeds: path(pos),
                            neg_seeds: path(neg),
                        }
                    } else {
                        LexiconEntry::Lists {
                            pos: path(pos),
                            neg: path(neg),
                        }
                    };
                    cfg.lexicons.push((name.to_string(), entry));
                }
                "bootstrap_corpus" => cfg.bootstrap_corpus = Some(path(value)),
                "pmi_epsilon" => cfg.pmi.epsilon = number(line, key, value)?,
                "pmi_min_count" => cfg.pmi.min_count = number(line, key, value)?,
                "min_df" => cfg.min_df = number(line, key, value)?,
                "ngrams" => cfg.orders = parse_orders(line, value)?,
                "lambda" => cfg.train.lambda = number(line, key, value)?,
                "learning_rate" => cfg.train.learning_rate = number(line, key, value)?,
                "max_epochs" => cfg.train.max_epochs = number(line, key, value)?,
                "tolerance" => cfg.train.tolerance = number(line, key, value)?,
                "lemma_threshold" => cfg.lemmatizer.threshold = number(line, key, value)?,
                "lemma_jw_weight" => cfg.lemmatizer.jw_weight = number(line, key, value)?,
                "output_dir" => cfg.output_dir = Some(path(value)),
                "threads" => cfg.threads = Some(number(line, key, value)?),
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        RunConfig::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Every referenced input path must exist. `output_dir` is created later.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut paths: Vec<(&str, &PathBuf)> = [
            ("stopwords", &self.stopwords),
            ("normalization", &self.normalization),
            ("negation_cues", &self.negation_cues),
            ("stem_rules", &self.stem_rules),
            ("pos_dictionary", &self.pos_dictionary),
            ("lemmas", &self.lemmas),
            ("emoticons", &self.emoticons),
            ("bootstrap_corpus", &self.bootstrap_corpus),
        ]
        .into_iter()
        .filter_map(|(k, p)| p.as_ref().map(|p| (k, p)))
        .collect();
        for (_, entry) in &self.lexicons {
            match entry {
                LexiconEntry::File(p) => paths.push(("lexicon", p)),
                LexiconEntry::Lists { pos, neg } => paths.extend([("lexicon_lists", pos), ("lexicon_lists", neg)]),
                LexiconEntry::Bootstrap { pos_seeds, neg_seeds } => {
                    paths.extend([("bootstrap", pos_seeds), ("bootstrap", neg_seeds)])
                }
            }
        }
        for (key, path) in paths {
            if !path.exists() {
                return Err(ConfigError::MissingPath {
                    key: key.to_string(),
                    path: path.clone(),
                });
            }
        }
        Ok(())
    }

    /// Loads every resource and lexicon into a trainable specification.
    pub fn to_spec(&self) -> Result<SystemSpec> {
        let mut resources = Resources {
            stopwords: self.stopwords.as_deref().map(Stopwords::load).transpose()?,
            normalization: self.normalization.as_deref().map(NormalizationMap::load).transpose()?,
            negation_cues: self.negation_cues.as_deref().map(NegationCues::load).transpose()?,
            stem_rules: self.stem_rules.as_deref().map(StemRuleSet::load).transpose()?,
            lemmas: self.lemmas.as_deref().map(LemmaList::load).transpose()?,
            lemmatizer: self.lemmatizer,
            ..Default::default()
        };
        if let Some(p) = &self.pos_dictionary {
            resources = resources.with_pos_dictionary(PosDictionary::load(p)?);
        }
        resources.check(&self.steps)?;

        let extra_corpus: Vec<String> = match &self.bootstrap_corpus {
            Some(p) => load_dataset(p, Format::from_path(p))?.into_iter().map(|t| t.text).collect(),
            None => Vec::new(),
        };
        let mut groups: Vec<LexiconGroup> = Vec::new();
        for (name, entry) in &self.lexicons {
            let source = match entry {
                LexiconEntry::File(p) => LexiconSource::Fixed(load_lexicon(p)?),
                LexiconEntry::Lists { pos, neg } => LexiconSource::Fixed(load_polarity_lists(name, pos, neg)?),
                LexiconEntry::Bootstrap { pos_seeds, neg_seeds } => {
                    self.pmi.validate()?;
                    LexiconSource::Bootstrap {
                        seeds: SeedSet::load(pos_seeds, neg_seeds)?,
                        pmi: self.pmi,
                        extra_corpus: extra_corpus.clone(),
                    }
                }
            };
            match groups.iter_mut().find(|g| &g.name == name) {
                Some(g) => g.sources.push(source),
                None => groups.push(LexiconGroup {
                    name: name.clone(),
                    sources: vec![source],
                }),
            }
        }
        let emoticons = match &self.emoticons {
            Some(p) => EmoticonTable::load(p)?,
            None => EmoticonTable::default(),
        };
        self.train.validate()?;
        Ok(SystemSpec {
            pipeline: self.steps.clone(),
            resources,
            lexicon_groups: groups,
            min_df: self.min_df,
            orders: self.orders,
            features: FeatureConfig {
                require_lexicons: false,
                emoticons,
            },
            train: self.train,
        })
    }
}
