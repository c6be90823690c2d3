//! Character n-gram Naive Bayes language identifier.
//!
//! Text is lowercased, whitespace runs are collapsed to one space, and the
//! result is padded with `n - 1` boundary markers on each side before n-gram
//! extraction. Likelihoods use add-alpha smoothing with one shared bucket per
//! class for n-grams never seen in training, so each class distribution over
//! `vocab ∪ {unknown}` sums to one.
//!
//! The model is persisted as TSV: `class<TAB>ngram<TAB>logprob` rows plus
//! `#`-prefixed header rows for the order, smoothing, priors and unknown buckets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::LangIdError;
use crate::tsv;

const START: char = '\u{2}';
const END: char = '\u{3}';
const MAGIC: &str = "# mksent-langid v1";

#[derive(Debug, Clone, PartialEq)]
pub struct LangIdModel {
    pub n: usize,
    pub alpha: f64,
    pub classes: Vec<String>,
    pub log_prior: Vec<f64>,
    /// Per class, log-likelihood of every vocabulary n-gram.
    pub log_likelihood: Vec<HashMap<String, f64>>,
    /// Per class, log-likelihood of any n-gram outside the vocabulary.
    pub log_unknown: Vec<f64>,
    pub vocab: BTreeSet<String>,
}

fn normalize(text: &str) -> String {
    text.to_lowercase().split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Padded character n-grams of `text`.
pub fn char_ngrams(text: &str, n: usize) -> Vec<String> {
    let norm = normalize(text);
    let mut chars: Vec<char> = Vec::with_capacity(norm.len() + 2 * n);
    chars.extend(std::iter::repeat_n(START, n - 1));
    chars.extend(norm.chars());
    chars.extend(std::iter::repeat_n(END, n - 1));
    if chars.len() < n {
        return Vec::new();
    }
    chars.windows(n).map(|w| w.iter().collect()).collect()
}

pub fn train_langid<S: AsRef<str>, L: AsRef<str>>(
    samples: &[(S, L)],
    n: usize,
    alpha: f64,
) -> Result<LangIdModel, LangIdError> {
    let classes: BTreeSet<&str> = samples.iter().map(|(_, l)| l.as_ref()).collect();
    train_langid_with_classes(&classes.into_iter().collect::<Vec<_>>(), samples, n, alpha)
}

/// Trains over a declared class list; every declared class needs a sample.
pub fn train_langid_with_classes<C: AsRef<str>, S: AsRef<str>, L: AsRef<str>>(
    classes: &[C],
    samples: &[(S, L)],
    n: usize,
    alpha: f64,
) -> Result<LangIdModel, LangIdError> {
    if n == 0 {
        return Err(LangIdError::BadOrder);
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(LangIdError::BadAlpha(alpha));
    }
    if samples.is_empty() || classes.is_empty() {
        return Err(LangIdError::NoSamples);
    }
    let classes: Vec<String> = classes
        .iter()
        .map(|c| c.as_ref().to_string())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();

    let mut docs = vec![0usize; classes.len()];
    let mut counts: Vec<HashMap<String, u64>> = vec![HashMap::new(); classes.len()];
    for (text, lang) in samples {
        let Some(&c) = index.get(lang.as_ref()) else {
            return Err(LangIdError::EmptyClass(lang.as_ref().to_string()));
        };
        docs[c] += 1;
        for g in char_ngrams(text.as_ref(), n) {
            *counts[c].entry(g).or_default() += 1;
        }
    }
    if let Some(c) = docs.iter().position(|&d| d == 0) {
        return Err(LangIdError::EmptyClass(classes[c].clone()));
    }

    let vocab: BTreeSet<String> = counts.iter().flat_map(|m| m.keys().cloned()).collect();
    let total_docs: usize = docs.iter().sum();
    let v = vocab.len() as f64;
    let mut log_likelihood = Vec::with_capacity(classes.len());
    let mut log_unknown = Vec::with_capacity(classes.len());
    for class_counts in &counts {
        let total: u64 = class_counts.values().sum();
        let denom = (total as f64 + alpha * (v + 1.0)).ln();
        let ll: HashMap<String, f64> = vocab
            .iter()
            .map(|g| {
                let c = class_counts.get(g).copied().unwrap_or(0) as f64;
                (g.clone(), (c + alpha).ln() - denom)
            })
            .collect();
        log_likelihood.push(ll);
        log_unknown.push(alpha.ln() - denom);
    }
    let log_prior = docs
        .iter()
        .map(|&d| (d as f64 / total_docs as f64).ln())
        .collect();

    Ok(LangIdModel {
        n,
        alpha,
        classes,
        log_prior,
        log_likelihood,
        log_unknown,
        vocab,
    })
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

impl LangIdModel {
    /// Normalised log-posterior per class, in `classes` order.
    pub fn log_posteriors(&self, text: &str) -> Result<Vec<f64>, LangIdError> {
        if text.trim().is_empty() {
            return Err(LangIdError::EmptyText);
        }
        let grams = char_ngrams(text, self.n);
        let joint: Vec<f64> = (0..self.classes.len())
            .map(|c| {
                self.log_prior[c]
                    + grams
                        .iter()
                        .map(|g| self.log_likelihood[c].get(g).copied().unwrap_or(self.log_unknown[c]))
                        .sum::<f64>()
            })
            .collect();
        let z = log_sum_exp(&joint);
        Ok(joint.into_iter().map(|j| j - z).collect())
    }

    fn best(log_post: &[f64]) -> usize {
        // first class wins ties
        let mut best = 0;
        for (i, &lp) in log_post.iter().enumerate() {
            if lp > log_post[best] {
                best = i;
            }
        }
        best
    }

    pub fn classify(&self, text: &str) -> Result<(&str, f64), LangIdError> {
        let lp = self.log_posteriors(text)?;
        let best = Self::best(&lp);
        Ok((&self.classes[best], lp[best].exp()))
    }

    /// Log-posterior of `target` minus the best rival; `+inf` without rivals.
    /// `None` when the text is empty or `target` is not the argmax class.
    pub fn target_margin(&self, text: &str, target: &str) -> Option<f64> {
        let lp = self.log_posteriors(text).ok()?;
        let best = Self::best(&lp);
        if self.classes[best] != target {
            return None;
        }
        let rival = lp
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != best)
            .map(|(_, &x)| x)
            .fold(f64::NEG_INFINITY, f64::max);
        Some(lp[best] - rival)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("{MAGIC}\n#n\t{}\n#alpha\t{}\n", self.n, self.alpha);
        for (c, class) in self.classes.iter().enumerate() {
            let class = tsv::escape(class);
            let _ = writeln!(out, "#prior\t{class}\t{}", self.log_prior[c]);
            let _ = writeln!(out, "#unknown\t{class}\t{}", self.log_unknown[c]);
        }
        for (c, class) in self.classes.iter().enumerate() {
            let class = tsv::escape(class);
            for g in &self.vocab {
                let _ = writeln!(out, "{class}\t{}\t{}", tsv::escape(g), self.log_likelihood[c][g]);
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<LangIdModel, LangIdError> {
        let bad = |line: usize, message: &str| LangIdError::Format {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim_end() == MAGIC => {}
            _ => return Err(bad(1, "missing model header")),
        }
        let mut n = None;
        let mut alpha = None;
        let mut priors: BTreeMap<String, f64> = BTreeMap::new();
        let mut unknown: BTreeMap<String, f64> = BTreeMap::new();
        let mut ll: BTreeMap<String, HashMap<String, f64>> = BTreeMap::new();
        let num = |line: usize, raw: &str| -> Result<f64, LangIdError> {
            raw.parse::<f64>().map_err(|_| bad(line, "bad number"))
        };
        for (i, line) in lines {
            let line_no = i + 1;
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            match cols[..] {
                ["#n", v] => n = Some(v.parse::<usize>().map_err(|_| bad(line_no, "bad order"))?),
                ["#alpha", v] => alpha = Some(num(line_no, v)?),
                ["#prior", c, v] => {
                    priors.insert(tsv::unescape(c), num(line_no, v)?);
                }
                ["#unknown", c, v] => {
                    unknown.insert(tsv::unescape(c), num(line_no, v)?);
                }
                [c, g, v] if !c.starts_with('#') => {
                    ll.entry(tsv::unescape(c)).or_default().insert(tsv::unescape(g), num(line_no, v)?);
                }
                _ => return Err(bad(line_no, "unrecognised row")),
            }
        }
        let n = n.ok_or_else(|| bad(0, "missing #n"))?;
        let alpha = alpha.ok_or_else(|| bad(0, "missing #alpha"))?;
        let classes: Vec<String> = priors.keys().cloned().collect();
        let mut log_likelihood = Vec::new();
        let mut log_unknown = Vec::new();
        for class in &classes {
            log_unknown.push(*unknown.get(class).ok_or_else(|| bad(0, "class without unknown bucket"))?);
            log_likelihood.push(ll.remove(class).unwrap_or_default());
        }
        if !ll.is_empty() {
            return Err(bad(0, "n-gram rows for a class without prior"));
        }
        let vocab: BTreeSet<String> = log_likelihood.iter().flat_map(|m| m.keys().cloned()).collect();
        if log_likelihood.iter().any(|m| m.len() != vocab.len()) {
            return Err(bad(0, "classes disagree on the n-gram vocabulary"));
        }
        Ok(LangIdModel {
            n,
            alpha,
            log_prior: classes.iter().map(|c| priors[c]).collect(),
            classes,
            log_likelihood,
            log_unknown,
            vocab,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), LangIdError> {
        fs::write(path, self.to_tsv()).map_err(|source| LangIdError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<LangIdModel, LangIdError> {
        let text = fs::read_to_string(path).map_err(|source| LangIdError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        LangIdModel::parse(&text)
    }
}

pub fn classify_language<'m>(model: &'m LangIdModel, text: &str) -> Result<(&'m str, f64), LangIdError> {
    model.classify(text)
}

/// Keeps texts whose argmax class is `target` and whose log-posterior lead
/// over the best rival is at least `margin`. Raising `margin` never adds texts.
pub fn filter_high_precision<'t, S: AsRef<str>>(
    model: &LangIdModel,
    texts: &'t [S],
    target: &str,
    margin: f64,
) -> Vec<&'t S> {
    texts
        .iter()
        .filter(|t| model.target_margin(t.as_ref(), target).is_some_and(|m| m >= margin))
        .collect()
}
