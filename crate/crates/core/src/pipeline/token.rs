use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Prefix attached to the effective surface of words inside a negation scope.
pub const NEG_PREFIX: &str = "NEG_CONTEXT_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenKind {
    Word,
    Hashtag,
    Mention,
    Url,
    Emoticon,
    Number,
    Punctuation,
}

/// Closed part-of-speech tagset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PosTag {
    /// noun
    NN,
    /// adverb
    AV,
    /// verb
    VB,
    /// adjective
    AE,
    /// pronoun
    PN,
    /// cardinal number
    CN,
    /// conjunction
    CC,
}

impl PosTag {
    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::NN => "NN",
            PosTag::AV => "AV",
            PosTag::VB => "VB",
            PosTag::AE => "AE",
            PosTag::PN => "PN",
            PosTag::CN => "CN",
            PosTag::CC => "CC",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "NN" => PosTag::NN,
            "AV" => PosTag::AV,
            "VB" => PosTag::VB,
            "AE" => PosTag::AE,
            "PN" => PosTag::PN,
            "CN" => PosTag::CN,
            "CC" => PosTag::CC,
            other => return Err(format!("tag {other:?} is not in the tagset")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SentimentMark {
    #[serde(rename = "POS")]
    Pos,
    #[serde(rename = "NEG")]
    Neg,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    #[serde(default)]
    pub negated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<PosTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentiment_mark: Option<SentimentMark>,
}

impl Token {
    pub fn new(surface: impl Into<String>, kind: TokenKind) -> Self {
        Token {
            surface: surface.into(),
            kind,
            negated: false,
            stem: None,
            lemma: None,
            pos: None,
            sentiment_mark: None,
        }
    }

    pub fn word(surface: impl Into<String>) -> Self {
        Token::new(surface, TokenKind::Word)
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    fn with_neg_prefix<'a>(&self, s: &'a str) -> Cow<'a, str> {
        if self.negated {
            Cow::Owned(format!("{NEG_PREFIX}{s}"))
        } else {
            Cow::Borrowed(s)
        }
    }

    /// Surface as seen by lexicons and bootstrapping: prefixed when negated.
    pub fn effective_surface(&self) -> Cow<'_, str> {
        self.with_neg_prefix(&self.surface)
    }

    pub fn effective_stem(&self) -> Option<Cow<'_, str>> {
        self.stem.as_deref().map(|s| self.with_neg_prefix(s))
    }

    /// Term used for n-gram features: the stem when stemming ran, else the surface.
    pub fn feature_term(&self) -> Cow<'_, str> {
        self.effective_stem().unwrap_or_else(|| self.effective_surface())
    }
}
