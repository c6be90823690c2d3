//! Plain-text resource files used by the preprocessing steps. All are UTF-8;
//! blank lines and lines starting with `#` are ignored. Entries are lowercased
//! on load since the tokenizer lowercases its input.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::Path;

use crate::error::PipelineError;
use crate::tsv::content_lines;

use super::token::PosTag;

pub(crate) fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn two_columns<'a>(
    resource: &'static str,
    line_no: usize,
    line: &'a str,
) -> Result<(&'a str, &'a str), PipelineError> {
    let mut cols = line.split('\t');
    match (cols.next(), cols.next(), cols.next()) {
        (Some(a), Some(b), None) if !a.trim().is_empty() && !b.trim().is_empty() => Ok((a.trim(), b.trim())),
        _ => Err(PipelineError::Resource {
            resource,
            line: line_no,
            message: "expected two TAB-separated columns".into(),
        }),
    }
}

/// One word per line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stopwords(pub HashSet<String>);

impl Stopwords {
    pub fn parse(text: &str) -> Stopwords {
        Stopwords(content_lines(text).map(|(_, l)| l.trim().to_lowercase()).collect())
    }

    pub fn load(path: &Path) -> Result<Stopwords, PipelineError> {
        Ok(Stopwords::parse(&read(path)?))
    }

    pub fn contains(&self, w: &str) -> bool {
        self.0.contains(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Stopwords {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Stopwords(iter.into_iter().map(Into::into).collect())
    }
}

/// `variant<TAB>standard`; duplicate variants are rejected.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizationMap(pub HashMap<String, String>);

impl NormalizationMap {
    pub fn parse(text: &str) -> Result<NormalizationMap, PipelineError> {
        let mut map = HashMap::new();
        for (line_no, line) in content_lines(text) {
            let (variant, standard) = two_columns("normalization map", line_no, line)?;
            if map.insert(variant.to_lowercase(), standard.to_lowercase()).is_some() {
                return Err(PipelineError::Resource {
                    resource: "normalization map",
                    line: line_no,
                    message: format!("duplicate variant {variant:?}"),
                });
            }
        }
        Ok(NormalizationMap(map))
    }

    pub fn load(path: &Path) -> Result<NormalizationMap, PipelineError> {
        NormalizationMap::parse(&read(path)?)
    }

    pub fn get(&self, w: &str) -> Option<&str> {
        self.0.get(w).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for NormalizationMap {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        NormalizationMap(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

/// Negation cues, one per line; a line may hold a multi-word phrase.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NegationCues {
    // sorted longest phrase first
    phrases: Vec<Vec<String>>,
}

impl NegationCues {
    pub fn new<I, S>(phrases: I) -> NegationCues
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set: BTreeSet<Vec<String>> = phrases
            .into_iter()
            .map(|p| p.as_ref().split_whitespace().map(str::to_lowercase).collect::<Vec<_>>())
            .filter(|p| !p.is_empty())
            .collect();
        let mut phrases: Vec<_> = set.into_iter().collect();
        phrases.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        NegationCues { phrases }
    }

    pub fn parse(text: &str) -> NegationCues {
        NegationCues::new(content_lines(text).map(|(_, l)| l))
    }

    pub fn load(path: &Path) -> Result<NegationCues, PipelineError> {
        Ok(NegationCues::parse(&read(path)?))
    }

    pub fn phrases(&self) -> &[Vec<String>] {
        &self.phrases
    }

    /// Words that appear in any cue phrase.
    pub fn words(&self) -> HashSet<&str> {
        self.phrases.iter().flatten().map(String::as_str).collect()
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }
}

/// `word<TAB>tag` with tags from the closed tagset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PosDictionary(pub HashMap<String, PosTag>);

impl PosDictionary {
    pub fn parse(text: &str) -> Result<PosDictionary, PipelineError> {
        let mut map = HashMap::new();
        for (line_no, line) in content_lines(text) {
            let (word, tag) = two_columns("POS dictionary", line_no, line)?;
            let tag: PosTag = tag.parse().map_err(|message| PipelineError::Resource {
                resource: "POS dictionary",
                line: line_no,
                message,
            })?;
            map.insert(word.to_lowercase(), tag);
        }
        Ok(PosDictionary(map))
    }

    pub fn load(path: &Path) -> Result<PosDictionary, PipelineError> {
        PosDictionary::parse(&read(path)?)
    }
}

impl<K: Into<String>> FromIterator<(K, PosTag)> for PosDictionary {
    fn from_iter<I: IntoIterator<Item = (K, PosTag)>>(iter: I) -> Self {
        PosDictionary(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// Dictionary headwords, one per line, kept sorted and unique.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaList(pub Vec<String>);

impl LemmaList {
    pub fn new<I, S>(words: I) -> LemmaList
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = words.into_iter().map(Into::into).filter(|w| !w.is_empty()).collect();
        LemmaList(set.into_iter().collect())
    }

    pub fn parse(text: &str) -> LemmaList {
        LemmaList::new(content_lines(text).map(|(_, l)| l.trim().to_lowercase()))
    }

    pub fn load(path: &Path) -> Result<LemmaList, PipelineError> {
        Ok(LemmaList::parse(&read(path)?))
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
