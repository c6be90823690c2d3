//! Rule-based affix stemmer.
//!
//! Rules come in two groups. At most one removal rule and then at most one
//! replacement rule fire per word. Removal rules are tried longest affix
//! first and only fire when the remaining stem keeps at least `min_stem`
//! characters; replacement rules are tried in file order.
//!
//! File format (TAB-separated columns, shown aligned below; `#` comments allowed):
//!
//! ```text
//! # suffix removal with min stem length 3, prefix removal, suffix replacement
//! remove  -ата  3
//! remove  пре-  4
//! replace  -ци  -к
//! ```

use std::path::Path;

use crate::error::PipelineError;
use crate::tsv::content_lines;

use super::resources::read;

/// Remainder length a replacement rule must leave before appending its replacement.
const MIN_REPLACE_STEM: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Affix {
    Prefix(String),
    Suffix(String),
}

impl Affix {
    fn parse(raw: &str) -> Option<Affix> {
        let raw = raw.trim();
        if let Some(s) = raw.strip_prefix('-') {
            (!s.is_empty() && !s.ends_with('-')).then(|| Affix::Suffix(s.to_lowercase()))
        } else if let Some(p) = raw.strip_suffix('-') {
            (!p.is_empty()).then(|| Affix::Prefix(p.to_lowercase()))
        } else {
            None
        }
    }

    fn text(&self) -> &str {
        match self {
            Affix::Prefix(s) | Affix::Suffix(s) => s,
        }
    }

    fn char_len(&self) -> usize {
        self.text().chars().count()
    }

    /// Word with the affix removed, if it carries the affix.
    fn strip<'a>(&self, word: &'a str) -> Option<&'a str> {
        match self {
            Affix::Prefix(p) => word.strip_prefix(p.as_str()),
            Affix::Suffix(s) => word.strip_suffix(s.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalRule {
    pub affix: Affix,
    pub min_stem: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacementRule {
    pub affix: Affix,
    pub replacement: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StemRuleSet {
    removal: Vec<RemovalRule>,
    replacement: Vec<ReplacementRule>,
}

impl StemRuleSet {
    pub fn new(mut removal: Vec<RemovalRule>, replacement: Vec<ReplacementRule>) -> Self {
        // stable: ties keep file order
        removal.sort_by_key(|r| std::cmp::Reverse(r.affix.char_len()));
        StemRuleSet { removal, replacement }
    }

    pub fn parse(text: &str) -> Result<StemRuleSet, PipelineError> {
        let bad = |line: usize, message: String| PipelineError::Resource {
            resource: "stem rules",
            line,
            message,
        };
        let mut removal = Vec::new();
        let mut replacement = Vec::new();
        for (line_no, line) in content_lines(text) {
            let cols: Vec<&str> = line.split('\t').map(str::trim).filter(|c| !c.is_empty()).collect();
            let [kind, pattern, arg] = cols[..] else {
                return Err(bad(line_no, "expected kind<TAB>pattern<TAB>argument".into()));
            };
            let affix = Affix::parse(pattern)
                .ok_or_else(|| bad(line_no, format!("pattern {pattern:?} must start or end with '-'")))?;
            match kind {
                "remove" => {
                    let min_stem = arg
                        .parse()
                        .map_err(|_| bad(line_no, format!("min stem length {arg:?} is not an integer")))?;
                    removal.push(RemovalRule { affix, min_stem });
                }
                "replace" => {
                    let replacement_text = arg.trim_matches('-').to_lowercase();
                    replacement.push(ReplacementRule {
                        affix,
                        replacement: replacement_text,
                    });
                }
                other => return Err(bad(line_no, format!("unknown rule kind {other:?}"))),
            }
        }
        Ok(StemRuleSet::new(removal, replacement))
    }

    pub fn load(path: &Path) -> Result<StemRuleSet, PipelineError> {
        StemRuleSet::parse(&read(path)?)
    }

    pub fn removal_rules(&self) -> &[RemovalRule] {
        &self.removal
    }

    pub fn replacement_rules(&self) -> &[ReplacementRule] {
        &self.replacement
    }

    pub fn len(&self) -> usize {
        self.removal.len() + self.replacement.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn stem(word: &str, rules: &StemRuleSet) -> String {
    let mut current = word.to_string();

    if let Some(rest) = rules.removal.iter().find_map(|rule| {
        rule.affix
            .strip(&current)
            .filter(|rest| rest.chars().count() >= rule.min_stem.max(1))
    }) {
        current = rest.to_string();
    }

    if let Some(next) = rules.replacement.iter().find_map(|rule| {
        let rest = rule.affix.strip(&current)?;
        if rest.chars().count() < MIN_REPLACE_STEM {
            return None;
        }
        Some(match &rule.affix {
            Affix::Suffix(_) => format!("{rest}{}", rule.replacement),
            Affix::Prefix(_) => format!("{}{rest}", rule.replacement),
        })
    }) {
        current = next;
    }

    current
}
