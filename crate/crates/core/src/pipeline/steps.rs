//! Token-level preprocessing steps. Each step keeps the relative order of the
//! tokens it does not remove and touches only the token kinds it is meant for.

use super::resources::{NegationCues, NormalizationMap, PosDictionary, Stopwords};
use super::token::{PosTag, Token, TokenKind};

/// Surfaces that close a negation scope.
pub const CLAUSE_PUNCTUATION: [&str; 6] = [".", ",", ";", ":", "!", "?"];

pub fn is_clause_punctuation(token: &Token) -> bool {
    token.kind == TokenKind::Punctuation && CLAUSE_PUNCTUATION.contains(&token.surface.as_str())
}

pub fn strip_urls_mentions(tokens: Vec<Token>) -> Vec<Token> {
    tokens
        .into_iter()
        .filter(|t| !matches!(t.kind, TokenKind::Url | TokenKind::Mention))
        .collect()
}

pub fn remove_stopwords(tokens: Vec<Token>, stopwords: &Stopwords) -> Vec<Token> {
    tokens
        .into_iter()
        .filter(|t| !(t.is_word() && stopwords.contains(&t.surface)))
        .collect()
}

/// Collapses character runs of length >= 3 to a single character, then
/// reduces a word made of k >= 2 copies of a unit of length >= 2 to one copy.
pub fn squash_word(word: &str) -> String {
    let chars: Vec<char> = word.chars().collect();
    let mut squashed: Vec<char> = Vec::with_capacity(chars.len());
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let mut j = i;
        while j < chars.len() && chars[j] == c {
            j += 1;
        }
        let run = j - i;
        let keep = if run >= 3 { 1 } else { run };
        squashed.extend(std::iter::repeat_n(c, keep));
        i = j;
    }

    let n = squashed.len();
    for unit in 2..=n / 2 {
        if n.is_multiple_of(unit) && (unit..n).all(|k| squashed[k] == squashed[k - unit]) {
            return squashed[..unit].iter().collect();
        }
    }
    squashed.into_iter().collect()
}

pub fn squash_repeats(mut token: Token) -> Token {
    if token.is_word() {
        token.surface = squash_word(&token.surface);
    }
    token
}

fn cue_length_at(tokens: &[Token], start: usize, cues: &NegationCues) -> Option<usize> {
    cues.phrases().iter().find_map(|phrase| {
        let window = tokens.get(start..start + phrase.len())?;
        window
            .iter()
            .zip(phrase)
            .all(|(t, w)| t.is_word() && &t.surface == w)
            .then_some(phrase.len())
    })
}

/// Flags every word after a negation cue up to the next clause punctuation.
/// Cue tokens themselves stay unflagged; the longest cue phrase wins.
pub fn mark_negation(mut tokens: Vec<Token>, cues: &NegationCues) -> Vec<Token> {
    let mut in_scope = false;
    let mut i = 0;
    while i < tokens.len() {
        if let Some(len) = cue_length_at(&tokens, i, cues) {
            in_scope = true;
            i += len;
            continue;
        }
        let token = &mut tokens[i];
        if is_clause_punctuation(token) {
            in_scope = false;
        } else if in_scope && token.is_word() {
            token.negated = true;
        }
        i += 1;
    }
    tokens
}

/// Stopword removal that keeps tokens forming a negation cue match, so the
/// negation step still sees phrases such as "не е" whose words are stopwords.
pub fn remove_stopwords_keeping_cues(tokens: Vec<Token>, stopwords: &Stopwords, cues: &NegationCues) -> Vec<Token> {
    let mut keep = vec![false; tokens.len()];
    let mut i = 0;
    while i < tokens.len() {
        match cue_length_at(&tokens, i, cues) {
            Some(len) => {
                keep[i..i + len].iter_mut().for_each(|k| *k = true);
                i += len;
            }
            None => i += 1,
        }
    }
    tokens
        .into_iter()
        .zip(keep)
        .filter(|(t, keep)| *keep || !(t.is_word() && stopwords.contains(&t.surface)))
        .map(|(t, _)| t)
        .collect()
}

pub fn normalize_nonstandard(mut token: Token, map: &NormalizationMap) -> Token {
    if token.is_word() {
        if let Some(standard) = map.get(&token.surface) {
            token.surface = standard.to_string();
        }
    }
    token
}

/// Assigns part-of-speech tags to word tokens.
pub trait PosTagger: Send + Sync {
    fn tag_word(&self, word: &str) -> PosTag;

    fn tag(&self, mut tokens: Vec<Token>) -> Vec<Token> {
        for t in tokens.iter_mut().filter(|t| t.is_word()) {
            t.pos = Some(self.tag_word(&t.surface));
        }
        tokens
    }
}

/// Dictionary lookup with `NN` as the fallback tag.
#[derive(Debug, Clone, Default)]
pub struct DictionaryTagger {
    pub dictionary: PosDictionary,
}

impl DictionaryTagger {
    pub fn new(dictionary: PosDictionary) -> Self {
        DictionaryTagger { dictionary }
    }
}

impl PosTagger for DictionaryTagger {
    fn tag_word(&self, word: &str) -> PosTag {
        self.dictionary.0.get(word).copied().unwrap_or(PosTag::NN)
    }
}

pub fn pos_tag(tokens: Vec<Token>, dictionary: &PosDictionary) -> Vec<Token> {
    DictionaryTagger::new(dictionary.clone()).tag(tokens)
}
