//! Seeded generator for synthetic tweet corpora with a planted sentiment lexicon.
//!
//! Sentiment terms are drawn from a Zipf distribution, so a handful of head
//! terms are frequent and the tail is rare in a small labeled sample but still
//! common in the larger unlabeled sample. Filler words carry no polarity.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Label, RawTweet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub labeled: usize,
    pub unlabeled: usize,
    pub positive_terms: usize,
    pub negative_terms: usize,
    pub filler_terms: usize,
    /// Probability that a labeled tweet's label is replaced by another class.
    pub label_noise: f64,
    pub sentiment_zipf: f64,
    pub filler_zipf: f64,
    /// Probability that a polar tweet also contains one opposite-polarity term.
    pub contrast_rate: f64,
    /// Probability that a neutral tweet contains one term of each polarity.
    pub neutral_pair_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 7,
            labeled: 2000,
            unlabeled: 20000,
            positive_terms: 40,
            negative_terms: 40,
            filler_terms: 400,
            label_noise: 0.1,
            sentiment_zipf: 1.5,
            filler_zipf: 1.0,
            contrast_rate: 0.0,
            neutral_pair_rate: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub labeled: Vec<RawTweet>,
    /// Same generative process, labels dropped.
    pub unlabeled: Vec<RawTweet>,
    /// Planted positive terms, most frequent first.
    pub positive: Vec<String>,
    /// Planted negative terms, most frequent first.
    pub negative: Vec<String>,
    pub filler: Vec<String>,
}

const ONSETS: &[&str] = &["б", "в", "г", "д", "з", "к", "л", "м", "н", "п", "р", "с", "т", "ф", "х", "ч", "ш"];
const VOWELS: &[&str] = &["а", "е", "и", "о", "у"];
const CODAS: &[&str] = &["б", "д", "ж", "з", "к", "л", "м", "п", "р", "ф", "ц", "ш"];

fn pseudo_word(rng: &mut ChaCha8Rng, syllables: usize) -> String {
    let mut w = String::new();
    for _ in 0..syllables {
        w.push_str(ONSETS.choose(rng).unwrap());
        w.push_str(VOWELS.choose(rng).unwrap());
    }
    w.push_str(CODAS.choose(rng).unwrap());
    w
}

/// `count` distinct pseudo-words not already in `taken`.
fn vocabulary(rng: &mut ChaCha8Rng, count: usize, syllables: usize, taken: &mut BTreeSet<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let w = pseudo_word(rng, syllables);
        if taken.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

fn zipf(n: usize, s: f64) -> WeightedIndex<f64> {
    WeightedIndex::new((1..=n).map(|k| (k as f64).powf(-s))).expect("non-empty vocabulary")
}

struct Sampler<'a> {
    corpus: &'a SyntheticCorpus,
    cfg: &'a SynthConfig,
    pos: WeightedIndex<f64>,
    neg: WeightedIndex<f64>,
    filler: WeightedIndex<f64>,
}

impl Sampler<'_> {
    fn tweet(&self, rng: &mut ChaCha8Rng, label: Label) -> String {
        let n_filler = rng.gen_range(4..=9);
        let mut words: Vec<&str> = (0..n_filler)
            .map(|_| self.corpus.filler[self.filler.sample(rng)].as_str())
            .collect();
        let pos = |rng: &mut ChaCha8Rng| self.corpus.positive[self.pos.sample(rng)].as_str();
        let neg = |rng: &mut ChaCha8Rng| self.corpus.negative[self.neg.sample(rng)].as_str();
        match label {
            Label::Positive | Label::Negative => {
                let polar = rng.gen_range(1..=3);
                for _ in 0..polar {
                    let w = if label == Label::Positive { pos(rng) } else { neg(rng) };
                    words.push(w);
                }
                if rng.gen_bool(self.cfg.contrast_rate) {
                    let w = if label == Label::Positive { neg(rng) } else { pos(rng) };
                    words.push(w);
                }
            }
            Label::Neutral => {
                if rng.gen_bool(self.cfg.neutral_pair_rate) {
                    words.push(pos(rng));
                    words.push(neg(rng));
                }
            }
        }
        words.shuffle(rng);
        words.join(" ")
    }
}

pub fn generate(cfg: &SynthConfig) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut taken = BTreeSet::new();
    let mut corpus = SyntheticCorpus {
        labeled: Vec::new(),
        unlabeled: Vec::new(),
        positive: vocabulary(&mut rng, cfg.positive_terms, 2, &mut taken),
        negative: vocabulary(&mut rng, cfg.negative_terms, 2, &mut taken),
        filler: vocabulary(&mut rng, cfg.filler_terms, 2, &mut taken),
    };
    let sampler = Sampler {
        corpus: &corpus,
        cfg,
        pos: zipf(cfg.positive_terms, cfg.sentiment_zipf),
        neg: zipf(cfg.negative_terms, cfg.sentiment_zipf),
        filler: zipf(cfg.filler_terms, cfg.filler_zipf),
    };
    let mut labeled = Vec::with_capacity(cfg.labeled);
    for i in 0..cfg.labeled {
        let label = Label::ALL[rng.gen_range(0..3)];
        let text = sampler.tweet(&mut rng, label);
        let observed = if rng.gen_bool(cfg.label_noise) {
            let others: Vec<Label> = Label::ALL.into_iter().filter(|&l| l != label).collect();
            *others.choose(&mut rng).unwrap()
        } else {
            label
        };
        labeled.push(RawTweet::new(format!("s{i:05}"), text, Some(observed)));
    }
    let mut unlabeled = Vec::with_capacity(cfg.unlabeled);
    for i in 0..cfg.unlabeled {
        let label = Label::ALL[rng.gen_range(0..3)];
        unlabeled.push(RawTweet::new(format!("u{i:05}"), sampler.tweet(&mut rng, label), None));
    }
    corpus.labeled = labeled;
    corpus.unlabeled = unlabeled;
    corpus
}
