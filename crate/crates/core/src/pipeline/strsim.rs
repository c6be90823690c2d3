//! Character-level string similarity used by the lemmatizer.

/// Maximum common-prefix length rewarded by the Winkler boost.
const WINKLER_MAX_PREFIX: usize = 4;
const WINKLER_SCALING: f64 = 0.1;

pub fn jaro(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }

    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut b_used = vec![false; b.len()];
    let mut a_matched = Vec::with_capacity(a.len());
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        if let Some(j) = (lo..hi).find(|&j| !b_used[j] && b[j] == ca) {
            b_used[j] = true;
            a_matched.push(ca);
        }
    }
    let m = a_matched.len();
    if m == 0 {
        return 0.0;
    }
    let b_matched = b.iter().zip(&b_used).filter(|(_, &u)| u).map(|(c, _)| *c);
    let half_transpositions = a_matched.iter().zip(b_matched).filter(|(x, y)| **x != *y).count();
    let t = (half_transpositions / 2) as f64;
    let m = m as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

/// Jaro similarity boosted by the length of the common prefix (at most 4, scale 0.1).
pub fn jaro_winkler(a: &str, b: &str) -> f64 {
    let j = jaro(a, b);
    let prefix = a
        .chars()
        .zip(b.chars())
        .take(WINKLER_MAX_PREFIX)
        .take_while(|(x, y)| x == y)
        .count();
    (j + prefix as f64 * WINKLER_SCALING * (1.0 - j)).clamp(0.0, 1.0)
}

/// Unit-cost edit distance over characters.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_empty() {
        assert_eq!(jaro_winkler("навреда", "навреда"), 1.0);
        assert_eq!(jaro_winkler("x", ""), 0.0);
        assert_eq!(jaro_winkler("", "x"), 0.0);
        assert_eq!(levenshtein("а", ""), 1);
        assert_eq!(levenshtein("марта", "марта"), 0);
    }

    #[test]
    fn textbook_pairs() {
        // classic record-linkage examples
        assert!((jaro("martha", "marhta") - 0.944_444).abs() < 1e-6);
        assert!((jaro_winkler("martha", "marhta") - 0.961_111).abs() < 1e-6);
        assert!((jaro_winkler("dwayne", "duane") - 0.84).abs() < 1e-6);
        assert!((jaro_winkler("dixon", "dicksonx") - 0.813_333).abs() < 1e-6);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
    }

    #[test]
    fn cyrillic_transposition() {
        // 5 matches, one transposition, common prefix 1
        let j = (1.0 + 1.0 + 4.0 / 5.0) / 3.0;
        let expected = j + 0.1 * (1.0 - j);
        assert!((jaro_winkler("марта", "мрата") - expected).abs() < 1e-12);
    }
}
