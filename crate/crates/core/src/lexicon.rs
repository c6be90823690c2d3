//! Sentiment lexicons: loading, PMI bootstrapping from seed words, and token tagging.
//!
//! Lexicon files are TSV `term<TAB>score` with an optional `# name: <name>`
//! header line. Positive scores mean positive polarity.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::LexiconError;
use crate::pipeline::{SentimentMark, Token, TokenKind};
use crate::tsv::content_lines;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentLexicon {
    pub name: String,
    entries: BTreeMap<String, f64>,
}

fn read(path: &Path) -> Result<String, LexiconError> {
    fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("lexicon")
        .trim_end_matches(".lexicon")
        .to_string()
}

impl SentimentLexicon {
    /// Builds a lexicon, dropping zero scores. Fails on non-finite scores.
    pub fn from_entries<I, S>(name: impl Into<String>, entries: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (i, (term, score)) in entries.into_iter().enumerate() {
            let term = term.into();
            if !score.is_finite() {
                return Err(LexiconError::BadScore {
                    line: i + 1,
                    raw: score.to_string(),
                });
            }
            if term.is_empty() || score == 0.0 {
                continue;
            }
            if map.insert(term.clone(), score).is_some() {
                return Err(LexiconError::DuplicateTerm { line: i + 1, term });
            }
        }
        Ok(SentimentLexicon {
            name: name.into(),
            entries: map,
        })
    }

    pub fn parse(text: &str, default_name: &str) -> Result<Self, LexiconError> {
        let mut name = default_name.to_string();
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end_matches('\r');
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(n) = rest.trim().strip_prefix("name:") {
                    name = n.trim().to_string();
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let (term, score) = line.split_once('\t').ok_or_else(|| LexiconError::Malformed {
                line: line_no,
                message: "expected term<TAB>score".into(),
            })?;
            let term = term.trim();
            if term.is_empty() {
                return Err(LexiconError::Malformed {
                    line: line_no,
                    message: "empty term".into(),
                });
            }
            let value: f64 = score
                .trim()
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| LexiconError::BadScore {
                    line: line_no,
                    raw: score.to_string(),
                })?;
            if value == 0.0 {
                return Err(LexiconError::ZeroScore {
                    line: line_no,
                    term: term.to_string(),
                });
            }
            if map.insert(term.to_string(), value).is_some() {
                return Err(LexiconError::DuplicateTerm {
                    line: line_no,
                    term: term.to_string(),
                });
            }
        }
        Ok(SentimentLexicon { name, entries: map })
    }

    /// Builds a lexicon from a positive and a negative word list at +1 / -1.
    pub fn from_polarity_lists(name: impl Into<String>, pos: &str, neg: &str) -> Result<Self, LexiconError> {
        let mut map = BTreeMap::new();
        for (words, score) in [(pos, 1.0), (neg, -1.0)] {
            for (line, w) in content_lines(words) {
                let w = w.trim();
                if map.insert(w.to_string(), score).is_some() {
                    return Err(LexiconError::DuplicateTerm {
                        line,
                        term: w.to_string(),
                    });
                }
            }
        }
        Ok(SentimentLexicon {
            name: name.into(),
            entries: map,
        })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("# name: {}\n", self.name);
        for (term, score) in &self.entries {
            let _ = writeln!(out, "{term}\t{score}");
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), LexiconError> {
        fs::write(path, self.to_tsv()).map_err(|source| LexiconError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn get(&self, term: &str) -> Option<f64> {
        self.entries.get(term).copied()
    }

    /// Score for a token: effective surface first, then effective stem.
    pub fn lookup(&self, token: &Token) -> Option<f64> {
        if !token.is_word() {
            return None;
        }
        self.get(&token.effective_surface())
            .or_else(|| token.effective_stem().and_then(|s| self.get(&s)))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn load_lexicon(path: &Path) -> Result<SentimentLexicon, LexiconError> {
    SentimentLexicon::parse(&read(path)?, &file_stem(path))
}

/// Two-file form: one positive word per line, one negative word per line.
pub fn load_polarity_lists(name: &str, pos: &Path, neg: &Path) -> Result<SentimentLexicon, LexiconError> {
    SentimentLexicon::from_polarity_lists(name, &read(pos)?, &read(neg)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSet {
    pub pos: BTreeSet<String>,
    pub neg: BTreeSet<String>,
}

impl SeedSet {
    pub fn new<P, N, S, T>(pos: P, neg: N) -> Result<SeedSet, LexiconError>
    where
        P: IntoIterator<Item = S>,
        N: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let pos: BTreeSet<String> = pos.into_iter().map(Into::into).collect();
        let neg: BTreeSet<String> = neg.into_iter().map(Into::into).collect();
        if pos.is_empty() {
            return Err(LexiconError::EmptySeeds("positive"));
        }
        if neg.is_empty() {
            return Err(LexiconError::EmptySeeds("negative"));
        }
        if let Some(w) = pos.intersection(&neg).next() {
            return Err(LexiconError::OverlappingSeeds(w.clone()));
        }
        Ok(SeedSet { pos, neg })
    }

    pub fn load(pos: &Path, neg: &Path) -> Result<SeedSet, LexiconError> {
        let words = |text: String| -> Vec<String> { content_lines(&text).map(|(_, l)| l.trim().to_lowercase()).collect() };
        SeedSet::new(words(read(pos)?), words(read(neg)?))
    }

    pub fn swapped(&self) -> SeedSet {
        SeedSet {
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmiConfig {
    /// Pseudo-count added to every count in the PMI ratio.
    pub epsilon: f64,
    /// Minimum number of tweets containing a candidate term.
    pub min_count: usize,
}

impl Default for PmiConfig {
    fn default() -> Self {
        PmiConfig {
            epsilon: 0.5,
            min_count: 5,
        }
    }
}

impl PmiConfig {
    pub fn validate(&self) -> Result<(), LexiconError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(LexiconError::BadConfig(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        if self.min_count == 0 {
            return Err(LexiconError::BadConfig("min_count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Tweet-level indicator counts behind the PMI estimates.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CooccurrenceCounts {
    pub tweets: u64,
    pub with_pos: u64,
    pub with_neg: u64,
    /// term -> (tweets containing it, ... and a positive seed, ... and a negative seed)
    pub terms: HashMap<String, (u64, u64, u64)>,
}

impl CooccurrenceCounts {
    fn add_tweet(&mut self, tokens: &[Token], seeds: &SeedSet) {
        let terms: HashSet<String> = tokens
            .iter()
            .filter(|t| !matches!(t.kind, TokenKind::Url | TokenKind::Mention | TokenKind::Punctuation))
            .map(|t| t.effective_surface().into_owned())
            .collect();
        let has_pos = terms.iter().any(|t| seeds.pos.contains(t));
        let has_neg = terms.iter().any(|t| seeds.neg.contains(t));
        self.tweets += 1;
        self.with_pos += u64::from(has_pos);
        self.with_neg += u64::from(has_neg);
        for term in terms {
            let e = self.terms.entry(term).or_default();
            e.0 += 1;
            e.1 += u64::from(has_pos);
            e.2 += u64::from(has_neg);
        }
    }

    fn merge(mut self, other: CooccurrenceCounts) -> CooccurrenceCounts {
        self.tweets += other.tweets;
        self.with_pos += other.with_pos;
        self.with_neg += other.with_neg;
        for (term, (a, b, c)) in other.terms {
            let e = self.terms.entry(term).or_default();
            e.0 += a;
            e.1 += b;
            e.2 += c;
        }
        self
    }

    pub fn count(corpus: &[Vec<Token>], seeds: &SeedSet) -> CooccurrenceCounts {
        corpus
            .par_iter()
            .fold(CooccurrenceCounts::default, |mut acc, tweet| {
                acc.add_tweet(tweet, seeds);
                acc
            })
            .reduce(CooccurrenceCounts::default, CooccurrenceCounts::merge)
    }
}

/// `ln( (n(w,s)+eps) * N / ((n(w)+eps) * (n(s)+eps)) )`
pub fn pmi(joint: u64, term: u64, seed: u64, tweets: u64, epsilon: f64) -> f64 {
    (((joint as f64 + epsilon) * tweets as f64) / ((term as f64 + epsilon) * (seed as f64 + epsilon))).ln()
}

/// Semantic orientation of every candidate term: PMI with the positive seeds
/// minus PMI with the negative seeds, counted at tweet level.
pub fn bootstrap_pmi(corpus: &[Vec<Token>], seeds: &SeedSet, cfg: &PmiConfig) -> Result<SentimentLexicon, LexiconError> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(LexiconError::EmptyCorpus);
    }
    let counts = CooccurrenceCounts::count(corpus, seeds);
    if counts.with_pos == 0 {
        return Err(LexiconError::SeedsNeverOccur("positive"));
    }
    if counts.with_neg == 0 {
        return Err(LexiconError::SeedsNeverOccur("negative"));
    }
    let n = counts.tweets;
    let entries: BTreeMap<String, f64> = counts
        .terms
        .into_par_iter()
        .filter(|(_, (nw, _, _))| *nw >= cfg.min_count as u64)
        .filter_map(|(term, (nw, nwp, nwn))| {
            let so = pmi(nwp, nw, counts.with_pos, n, cfg.epsilon) - pmi(nwn, nw, counts.with_neg, n, cfg.epsilon);
            (so != 0.0).then_some((term, so))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(SentimentLexicon {
        name: "bootstrapped".into(),
        entries,
    })
}

/// Marks word tokens found in any lexicon as POS or NEG; the first lexicon
/// containing the term decides.
pub fn tag_sentiment_tokens(mut tokens: Vec<Token>, lexicons: &[SentimentLexicon]) -> Vec<Token> {
    for t in tokens.iter_mut() {
        t.sentiment_mark = lexicons.iter().find_map(|lex| lex.lookup(t)).map(|score| {
            if score > 0.0 {
                SentimentMark::Pos
            } else {
                SentimentMark::Neg
            }
        });
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(raw: &[&[&str]]) -> Vec<Vec<Token>> {
        raw.iter().map(|d| d.iter().map(|w| Token::word(*w)).collect()).collect()
    }

    #[test]
    fn parse_two_entries_with_name() {
        let lex = SentimentLexicon::parse("# name: manual\nдобро\t1.0\nлошо\t-1.0\n", "x").unwrap();
        assert_eq!(lex.name, "manual");
        assert_eq!(lex.len(), 2);
        assert_eq!(lex.get("лошо"), Some(-1.0));
    }

    #[test]
    fn parse_errors() {
        let dup = SentimentLexicon::parse("добро\t1\nдобро\t2\n", "x").unwrap_err();
        assert!(matches!(dup, LexiconError::DuplicateTerm { ref term, .. } if term == "добро"));
        assert!(matches!(
            SentimentLexicon::parse("добро\tмногу\n", "x").unwrap_err(),
            LexiconError::BadScore { line: 1, .. }
        ));
        assert!(matches!(
            SentimentLexicon::parse("добро\t0\n", "x").unwrap_err(),
            LexiconError::ZeroScore { .. }
        ));
    }

    #[test]
    fn polarity_lists() {
        let lex = SentimentLexicon::from_polarity_lists("m", "а\nб\n", "в\nг\nд\n").unwrap();
        assert_eq!(lex.len(), 5);
        assert_eq!(lex.get("а"), Some(1.0));
        assert_eq!(lex.get("д"), Some(-1.0));
    }

    #[test]
    fn tsv_round_trip() {
        let lex = SentimentLexicon::from_entries("b", [("а", 0.1 + 0.2), ("б", -3.5e-7)]).unwrap();
        let back = SentimentLexicon::parse(&lex.to_tsv(), "other").unwrap();
        assert_eq!(back, lex);
    }

    #[test]
    fn toy_bootstrap_signs() {
        let corpus = docs(&[&["good", "great"], &["good", "nice"], &["bad", "awful"], &["bad", "nice"]]);
        let seeds = SeedSet::new(["good"], ["bad"]).unwrap();
        let cfg = PmiConfig {
            epsilon: 0.5,
            min_count: 1,
        };
        let lex = bootstrap_pmi(&corpus, &seeds, &cfg).unwrap();
        let great = lex.get("great").unwrap();
        let awful = lex.get("awful").unwrap();
        // nice co-occurs once with each seed and n(pos) == n(neg)
        assert_eq!(lex.get("nice"), None);
        assert!(great > 0.0 && awful < 0.0);
        // N=4, n(great)=1, n(great,pos)=1, n(great,neg)=0, n(pos)=n(neg)=2
        let expected = ((1.5 * 4.0) / (1.5 * 2.5f64)).ln() - ((0.5 * 4.0) / (1.5 * 2.5f64)).ln();
        assert!((great - expected).abs() < 1e-12);
        assert!(lex.get("good").unwrap() > 0.0);
    }

    #[test]
    fn min_count_above_corpus_size_gives_empty_lexicon() {
        let corpus = docs(&[&["good", "great"], &["good", "nice"], &["bad", "awful"], &["bad", "nice"]]);
        let seeds = SeedSet::new(["good"], ["bad"]).unwrap();
        let lex = bootstrap_pmi(&corpus, &seeds, &PmiConfig::default()).unwrap();
        assert!(lex.is_empty());
    }

    #[test]
    fn bootstrap_errors() {
        let seeds = SeedSet::new(["good"], ["bad"]).unwrap();
        let cfg = PmiConfig::default();
        assert!(matches!(bootstrap_pmi(&[], &seeds, &cfg), Err(LexiconError::EmptyCorpus)));
        assert!(matches!(
            bootstrap_pmi(&docs(&[&["good"]]), &seeds, &cfg),
            Err(LexiconError::SeedsNeverOccur("negative"))
        ));
        assert!(SeedSet::new(["a"], ["a"]).is_err());
        assert!(SeedSet::new(Vec::<String>::new(), ["a"]).is_err());
    }

    #[test]
    fn negated_forms_are_distinct_terms() {
        let lex = SentimentLexicon::from_entries("l", [("добро", 1.0)]).unwrap();
        let mut neg = Token::word("добро");
        neg.negated = true;
        let out = tag_sentiment_tokens(vec![Token::word("добро"), neg], &[lex]);
        assert_eq!(out[0].sentiment_mark, Some(SentimentMark::Pos));
        assert_eq!(out[1].sentiment_mark, None);
    }

    #[test]
    fn first_lexicon_wins() {
        let a = SentimentLexicon::from_entries("a", [("w", 1.0)]).unwrap();
        let b = SentimentLexicon::from_entries("b", [("w", -1.0)]).unwrap();
        let out = tag_sentiment_tokens(vec![Token::word("w")], &[a.clone(), b.clone()]);
        assert_eq!(out[0].sentiment_mark, Some(SentimentMark::Pos));
        let out = tag_sentiment_tokens(vec![Token::word("w")], &[b, a]);
        assert_eq!(out[0].sentiment_mark, Some(SentimentMark::Neg));
    }

    #[test]
    fn stem_fallback() {
        let lex = SentimentLexicon::from_entries("l", [("навред", -1.0)]).unwrap();
        let mut t = Token::word("навредата");
        t.stem = Some("навред".into());
        assert_eq!(lex.lookup(&t), Some(-1.0));
    }
}
