//! Fuzzy dictionary lemmatizer: blends Jaro-Winkler similarity with a
//! length-normalised Levenshtein similarity and keeps the best headword above
//! a threshold.

use serde::{Deserialize, Serialize};

use super::resources::LemmaList;
use super::strsim::{jaro_winkler, levenshtein};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmatizerConfig {
    /// Minimum blended score for a headword to be accepted.
    pub threshold: f64,
    /// Weight of Jaro-Winkler; Levenshtein similarity gets `1 - jw_weight`.
    pub jw_weight: f64,
}

impl Default for LemmatizerConfig {
    fn default() -> Self {
        LemmatizerConfig {
            threshold: 0.85,
            jw_weight: 0.5,
        }
    }
}

/// Blended similarity of `word` and a candidate headword.
pub fn lemma_score(word: &str, candidate: &str, jw_weight: f64) -> f64 {
    let longest = word.chars().count().max(candidate.chars().count());
    let lev_sim = if longest == 0 {
        1.0
    } else {
        1.0 - levenshtein(word, candidate) as f64 / longest as f64
    };
    jw_weight * jaro_winkler(word, candidate) + (1.0 - jw_weight) * lev_sim
}

fn is_candidate(word: &str, candidate: &str) -> bool {
    let same_first = word.chars().next() == candidate.chars().next();
    let len_gap = word.chars().count().abs_diff(candidate.chars().count());
    same_first || len_gap <= 3
}

pub fn lemmatize(word: &str, lemmas: &LemmaList, cfg: &LemmatizerConfig) -> Option<String> {
    let mut best: Option<(&str, f64)> = None;
    // lemma list is sorted, so strict `>` keeps the lexicographically smallest on ties
    for candidate in lemmas.iter().filter(|c| is_candidate(word, c)) {
        let score = lemma_score(word, candidate, cfg.jw_weight);
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((candidate, score));
        }
    }
    best.filter(|&(_, s)| s >= cfg.threshold).map(|(c, _)| c.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_match_returns_itself() {
        let list = LemmaList::new(["навреда", "поздрав"]);
        let cfg = LemmatizerConfig {
            threshold: 1.0,
            jw_weight: 0.5,
        };
        assert_eq!(lemmatize("поздрав", &list, &cfg).as_deref(), Some("поздрав"));
    }

    #[test]
    fn empty_list() {
        assert_eq!(lemmatize("збор", &LemmaList::default(), &LemmatizerConfig::default()), None);
    }

    #[test]
    fn inflected_form() {
        let list = LemmaList::new(["навреда", "поздрав"]);
        let cfg = LemmatizerConfig {
            threshold: 0.8,
            jw_weight: 0.5,
        };
        assert_eq!(lemmatize("навредата", &list, &cfg).as_deref(), Some("навреда"));
    }

    #[test]
    fn ties_pick_smallest() {
        // both candidates are one substitution away with the same prefix length
        let list = LemmaList::new(["мачкб", "мачка"]);
        let cfg = LemmatizerConfig {
            threshold: 0.0,
            jw_weight: 0.5,
        };
        assert_eq!(lemmatize("мачкв", &list, &cfg).as_deref(), Some("мачка"));
    }
}
