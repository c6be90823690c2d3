//! Tweet preprocessing: tokenization followed by up to eight steps applied in
//! a fixed order. Each step can be switched off independently.

mod lemma;
mod resources;
mod stem;
mod steps;
mod strsim;
mod token;
mod tokenize;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use lemma::{lemma_score, lemmatize, LemmatizerConfig};
pub use resources::{LemmaList, NegationCues, NormalizationMap, PosDictionary, Stopwords};
pub use stem::{stem, Affix, RemovalRule, ReplacementRule, StemRuleSet};
pub use steps::{
    is_clause_punctuation, mark_negation, normalize_nonstandard, pos_tag, remove_stopwords, remove_stopwords_keeping_cues, squash_repeats,
    squash_word, strip_urls_mentions, DictionaryTagger, PosTagger, CLAUSE_PUNCTUATION,
};
pub use strsim::{jaro, jaro_winkler, levenshtein};
pub use token::{PosTag, SentimentMark, Token, TokenKind, NEG_PREFIX};
pub use tokenize::tokenize;

use crate::error::PipelineError;
use crate::lexicon::{tag_sentiment_tokens, SentimentLexicon};

/// Preprocessing steps in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    StripUrlsMentions,
    Stopwords,
    SquashRepeats,
    Negation,
    Normalize,
    PosTag,
    SentimentTag,
    Stem,
}

impl Step {
    pub const ALL: [Step; 8] = [
        Step::StripUrlsMentions,
        Step::Stopwords,
        Step::SquashRepeats,
        Step::Negation,
        Step::Normalize,
        Step::PosTag,
        Step::SentimentTag,
        Step::Stem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Step::StripUrlsMentions => "strip_urls_mentions",
            Step::Stopwords => "stopwords",
            Step::SquashRepeats => "squash_repeats",
            Step::Negation => "negation",
            Step::Normalize => "normalize",
            Step::PosTag => "pos_tag",
            Step::SentimentTag => "sentiment_tag",
            Step::Stem => "stem",
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Step {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Step::ALL
            .into_iter()
            .find(|step| step.name() == s.trim())
            .ok_or_else(|| PipelineError::UnknownStep(s.to_string()))
    }
}

/// The set of enabled steps. Execution order is always [`Step::ALL`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    steps: BTreeSet<Step>,
}

impl PipelineConfig {
    pub fn all() -> Self {
        PipelineConfig {
            steps: Step::ALL.into_iter().collect(),
        }
    }

    pub fn none() -> Self {
        PipelineConfig { steps: BTreeSet::new() }
    }

    pub fn with_steps(steps: impl IntoIterator<Item = Step>) -> Self {
        PipelineConfig {
            steps: steps.into_iter().collect(),
        }
    }

    pub fn without(mut self, step: Step) -> Self {
        self.steps.remove(&step);
        self
    }

    pub fn enabled(&self, step: Step) -> bool {
        self.steps.contains(&step)
    }

    pub fn steps(&self) -> impl Iterator<Item = Step> + '_ {
        self.steps.iter().copied()
    }
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig::all()
    }
}

/// Loaded resources. A resource only has to be present when its step is enabled.
#[derive(Clone, Default)]
pub struct Resources {
    pub stopwords: Option<Stopwords>,
    pub normalization: Option<NormalizationMap>,
    pub negation_cues: Option<NegationCues>,
    pub pos_tagger: Option<Arc<dyn PosTagger>>,
    pub stem_rules: Option<StemRuleSet>,
    pub lemmas: Option<LemmaList>,
    pub lemmatizer: LemmatizerConfig,
    /// Lexicons used by the sentiment tagging step, first wins on conflicts.
    pub lexicons: Vec<SentimentLexicon>,
}

impl fmt::Debug for Resources {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Resources")
            .field("stopwords", &self.stopwords.as_ref().map(Stopwords::len))
            .field("normalization", &self.normalization.as_ref().map(NormalizationMap::len))
            .field("negation_cues", &self.negation_cues.as_ref().map(NegationCues::len))
            .field("pos_tagger", &self.pos_tagger.is_some())
            .field("stem_rules", &self.stem_rules.as_ref().map(StemRuleSet::len))
            .field("lemmas", &self.lemmas.as_ref().map(LemmaList::len))
            .field("lexicons", &self.lexicons.iter().map(|l| l.name.as_str()).collect::<Vec<_>>())
            .finish()
    }
}

impl Resources {
    pub fn with_pos_dictionary(mut self, dictionary: PosDictionary) -> Self {
        self.pos_tagger = Some(Arc::new(DictionaryTagger::new(dictionary)));
        self
    }

    /// Fails when an enabled step lacks its resource.
    pub fn check(&self, config: &PipelineConfig) -> Result<(), PipelineError> {
        let missing = |step: Step, resource: &'static str, present: bool| {
            if config.enabled(step) && !present {
                Err(PipelineError::MissingResource {
                    step: step.name(),
                    resource,
                })
            } else {
                Ok(())
            }
        };
        missing(Step::Stopwords, "stopwords", self.stopwords.is_some())?;
        missing(Step::Negation, "negation_cues", self.negation_cues.is_some())?;
        missing(Step::Normalize, "normalization", self.normalization.is_some())?;
        missing(Step::PosTag, "pos_dictionary", self.pos_tagger.is_some())?;
        missing(Step::Stem, "stem_rules", self.stem_rules.is_some())?;
        Ok(())
    }
}

/// Tokenizes `text` and applies every enabled step in order.
pub fn run_pipeline(text: &str, config: &PipelineConfig, resources: &Resources) -> Result<Vec<Token>, PipelineError> {
    resources.check(config)?;
    let mut tokens = tokenize(text);

    if config.enabled(Step::StripUrlsMentions) {
        tokens = strip_urls_mentions(tokens);
    }
    if let (true, Some(stopwords)) = (config.enabled(Step::Stopwords), &resources.stopwords) {
        tokens = match (config.enabled(Step::Negation), &resources.negation_cues) {
            (true, Some(cues)) => remove_stopwords_keeping_cues(tokens, stopwords, cues),
            _ => remove_stopwords(tokens, stopwords),
        };
    }
    if config.enabled(Step::SquashRepeats) {
        tokens = tokens.into_iter().map(squash_repeats).collect();
    }
    if let (true, Some(cues)) = (config.enabled(Step::Negation), &resources.negation_cues) {
        tokens = mark_negation(tokens, cues);
    }
    if let (true, Some(map)) = (config.enabled(Step::Normalize), &resources.normalization) {
        tokens = tokens.into_iter().map(|t| normalize_nonstandard(t, map)).collect();
    }
    if let (true, Some(tagger)) = (config.enabled(Step::PosTag), &resources.pos_tagger) {
        tokens = tagger.tag(tokens);
    }
    if config.enabled(Step::SentimentTag) {
        tokens = tag_sentiment_tokens(tokens, &resources.lexicons);
    }
    if let (true, Some(rules)) = (config.enabled(Step::Stem), &resources.stem_rules) {
        for t in tokens.iter_mut().filter(|t| t.is_word()) {
            t.stem = Some(stem(&t.surface, rules));
            if let Some(lemmas) = &resources.lemmas {
                t.lemma = lemmatize(&t.surface, lemmas, &resources.lemmatizer);
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_resources() -> Resources {
        Resources {
            stopwords: Some(["е", "и"].into_iter().collect()),
            normalization: Some([("фала", "благодарам")].into_iter().collect()),
            negation_cues: Some(NegationCues::new(["не"])),
            stem_rules: Some(StemRuleSet::parse("remove\t-о\t3\n").unwrap()),
            lexicons: vec![SentimentLexicon::from_entries("toy", [("добро", 1.0)]).unwrap()],
            ..Default::default()
        }
        .with_pos_dictionary([("добро", PosTag::AV)].into_iter().collect())
    }

    #[test]
    fn all_disabled_is_tokenize() {
        let text = "Не е добро :( @ana http://x.mk";
        let out = run_pipeline(text, &PipelineConfig::none(), &Resources::default()).unwrap();
        assert_eq!(out, tokenize(text));
    }

    #[test]
    fn negation_disabled_marks_nothing() {
        let cfg = PipelineConfig::all().without(Step::Negation);
        let out = run_pipeline("не е добро", &cfg, &toy_resources()).unwrap();
        assert!(out.iter().all(|t| !t.negated));
    }

    #[test]
    fn full_toy_trace() {
        let out = run_pipeline("не е добро :(", &PipelineConfig::all(), &toy_resources()).unwrap();
        let terms: Vec<_> = out.iter().map(|t| t.feature_term().into_owned()).collect();
        assert_eq!(terms, ["не", "NEG_CONTEXT_добр", ":("]);
        assert_eq!(out[1].surface, "добро");
        assert!(out[1].negated);
        assert_eq!(out[1].pos, Some(PosTag::AV));
        // the negated form is a different lexicon term
        assert_eq!(out[1].sentiment_mark, None);
        assert_eq!(out[2].kind, TokenKind::Emoticon);
    }

    #[test]
    fn missing_resource_for_enabled_step() {
        let err = run_pipeline("а", &PipelineConfig::with_steps([Step::Stem]), &Resources::default()).unwrap_err();
        assert!(matches!(err, PipelineError::MissingResource { step: "stem", .. }));
    }

    #[test]
    fn step_names_round_trip() {
        for step in Step::ALL {
            assert_eq!(step.name().parse::<Step>().unwrap(), step);
        }
        assert!("lemmatize".parse::<Step>().is_err());
    }
}
