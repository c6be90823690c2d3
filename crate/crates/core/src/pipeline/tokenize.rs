//! Social-media tokenizer in the style of Potts' sentiment tokenizer: URLs,
//! emoticons, hashtags and mentions are recognised before ordinary words.

use once_cell::sync::Lazy;
use regex::Regex;

use super::token::{Token, TokenKind};

// NOTE: alternation order matters; the regex engine takes the first branch
// that matches at a position.
static TOKEN_RE: Lazy<Regex> = Lazy::new(|| {
    Regex::new(
        r"(?x)
        (?P<url>(?:https?://|www\.)\S+)
      | (?P<emoticon>
            [<>]?[:;=][\-o\*']?[\)\]\(\[dp/\}\{@\|\\]+
          | [\)\]\(\[\}\{\|\\]+[\-o\*']?[:;=][<>]?
          | <3
        )
      | (?P<hashtag>\#[\p{L}\p{N}_]+)
      | (?P<mention>@[\p{L}\p{N}_]+)
      | (?P<number>[0-9]+(?:[.,:][0-9]+)*)
      | (?P<word>\p{L}[\p{L}\p{M}]*(?:['’\-][\p{L}\p{M}]+)*)
      | (?P<punct>\S)
        ",
    )
    .expect("token regex compiles")
});

const GROUPS: [(&str, TokenKind); 7] = [
    ("url", TokenKind::Url),
    ("emoticon", TokenKind::Emoticon),
    ("hashtag", TokenKind::Hashtag),
    ("mention", TokenKind::Mention),
    ("number", TokenKind::Number),
    ("word", TokenKind::Word),
    ("punct", TokenKind::Punctuation),
];

/// Lowercases `text` and splits it into typed tokens in input order.
pub fn tokenize(text: &str) -> Vec<Token> {
    let lower = text.to_lowercase();
    TOKEN_RE
        .captures_iter(&lower)
        .filter_map(|caps| {
            GROUPS
                .iter()
                .find_map(|(name, kind)| caps.name(name).map(|m| Token::new(m.as_str(), *kind)))
        })
        .collect()
}
