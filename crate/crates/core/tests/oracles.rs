//! Library results checked against small independent reimplementations.

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;

use mksent::eval::{cohen_kappa, confusion, f1_pn};
use mksent::lexicon::{bootstrap_pmi, PmiConfig, SeedSet};
use mksent::model::{train_with_trace, Params, Problem, SparseRow, TrainConfig};
use mksent::pipeline::{jaro_winkler, levenshtein, Token};
use mksent::Label;

const VOCAB: [&str; 8] = ["а", "б", "в", "г", "д", "ѓ", "е", "ж"];

fn to_tokens(corpus: &[Vec<String>]) -> Vec<Vec<Token>> {
    corpus.iter().map(|t| t.iter().map(|w| Token::word(w.as_str())).collect()).collect()
}

/// SO by direct counting over the tweets, no shared code with the library.
fn brute_force_so(corpus: &[Vec<String>], pos: &[&str], neg: &[&str], eps: f64) -> HashMap<String, (u64, f64)> {
    let n = corpus.len() as f64;
    let has = |tweet: &Vec<String>, w: &str| tweet.iter().any(|x| x == w);
    let has_any = |tweet: &Vec<String>, ws: &[&str]| ws.iter().any(|w| has(tweet, w));
    let n_pos = corpus.iter().filter(|t| has_any(t, pos)).count() as f64;
    let n_neg = corpus.iter().filter(|t| has_any(t, neg)).count() as f64;
    let terms: BTreeSet<&String> = corpus.iter().flatten().collect();
    terms
        .into_iter()
        .map(|w| {
            let nw = corpus.iter().filter(|t| has(t, w)).count();
            let nwp = corpus.iter().filter(|t| has(t, w) && has_any(t, pos)).count() as f64;
            let nwn = corpus.iter().filter(|t| has(t, w) && has_any(t, neg)).count() as f64;
            let pmi_pos = (((nwp + eps) * n) / ((nw as f64 + eps) * (n_pos + eps))).ln();
            let pmi_neg = (((nwn + eps) * n) / ((nw as f64 + eps) * (n_neg + eps))).ln();
            (w.clone(), (nw as u64, pmi_pos - pmi_neg))
        })
        .collect()
}

fn corpus_strategy() -> impl Strategy<Value = Vec<Vec<String>>> {
    let tweet = prop::collection::vec(prop::sample::select(&VOCAB[..]).prop_map(String::from), 1..6);
    prop::collection::vec(tweet, 1..30)
}

proptest! {
    #[test]
    fn pmi_matches_brute_force(corpus in corpus_strategy(), min_count in 1usize..4, eps in 0.1f64..2.0) {
        let (pos, neg) = (["а"], ["б"]);
        let seeds = SeedSet::new(pos, neg).unwrap();
        let cfg = PmiConfig { epsilon: eps, min_count };
        let has = |w: &str| corpus.iter().any(|t| t.iter().any(|x| x == w));
        let result = bootstrap_pmi(&to_tokens(&corpus), &seeds, &cfg);
        if !has("а") || !has("б") {
            prop_assert!(result.is_err());
            return Ok(());
        }
        let lex = result.unwrap();
        let oracle = brute_force_so(&corpus, &pos, &neg, eps);
        for (term, (nw, so)) in &oracle {
            match lex.get(term) {
                Some(got) => prop_assert!((got - so).abs() < 1e-12, "{term}: {got} vs {so}"),
                None => prop_assert!(*nw < min_count as u64 || *so == 0.0, "{term} missing, n={nw} so={so}"),
            }
        }
        prop_assert!(lex.entries().all(|(t, _)| oracle.contains_key(t)));
    }

    #[test]
    fn f1_and_confusion_match_brute_force(pairs in prop::collection::vec((0usize..3, 0usize..3), 1..60)) {
        let gold: Vec<Label> = pairs.iter().map(|p| Label::ALL[p.0]).collect();
        let pred: Vec<Label> = pairs.iter().map(|p| Label::ALL[p.1]).collect();
        let m = confusion(&gold, &pred).unwrap();
        for g in Label::ALL {
            for p in Label::ALL {
                let n = gold.iter().zip(&pred).filter(|(a, b)| **a == g && **b == p).count() as u64;
                prop_assert_eq!(m.get(g, p), n);
            }
        }
        let f1 = |c: Label| {
            let tp = gold.iter().zip(&pred).filter(|(a, b)| **a == c && **b == c).count() as f64;
            let fp = gold.iter().zip(&pred).filter(|(a, b)| **a != c && **b == c).count() as f64;
            let fneg = gold.iter().zip(&pred).filter(|(a, b)| **a == c && **b != c).count() as f64;
            if tp == 0.0 { 0.0 } else { 2.0 * tp / (2.0 * tp + fp + fneg) }
        };
        let expected = (f1(Label::Positive) + f1(Label::Negative)) / 2.0;
        prop_assert!((f1_pn(&m) - expected).abs() < 1e-12);
    }

    #[test]
    fn kappa_matches_brute_force(pairs in prop::collection::vec((0usize..3, 0usize..3), 1..60)) {
        let a: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let b: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let n = a.len() as f64;
        let po = a.iter().zip(&b).filter(|(x, y)| x == y).count() as f64 / n;
        let pe: f64 = (0..3)
            .map(|c| (a.iter().filter(|&&x| x == c).count() as f64 / n) * (b.iter().filter(|&&x| x == c).count() as f64 / n))
            .sum();
        match cohen_kappa(&a, &b) {
            Ok(k) if pe < 1.0 => {
                prop_assert!((k - (po - pe) / (1.0 - pe)).abs() < 1e-12);
                prop_assert!(k <= 1.0 + 1e-12);
            }
            Ok(k) => prop_assert_eq!(k, 1.0),
            Err(_) => prop_assert!(pe == 1.0 && po < 1.0),
        }
    }
}

fn lev_oracle(a: &[char], b: &[char], memo: &mut HashMap<(usize, usize), usize>) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    if let Some(&d) = memo.get(&(a.len(), b.len())) {
        return d;
    }
    let cost = usize::from(a[0] != b[0]);
    let d = (lev_oracle(&a[1..], b, memo) + 1)
        .min(lev_oracle(a, &b[1..], memo) + 1)
        .min(lev_oracle(&a[1..], &b[1..], memo) + cost);
    memo.insert((a.len(), b.len()), d);
    d
}

fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|s| alphabet.iter().map(move |c| format!("{s}{c}")))
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

#[test]
fn levenshtein_matches_recursive_definition() {
    let strings = all_strings(&['а', 'б', 'в'], 4);
    for a in &strings {
        let ac: Vec<char> = a.chars().collect();
        for b in &strings {
            let bc: Vec<char> = b.chars().collect();
            assert_eq!(levenshtein(a, b), lev_oracle(&ac, &bc, &mut HashMap::new()), "{a:?} {b:?}");
        }
    }
}

/// Textbook Jaro-Winkler written independently of the library version.
fn jw_reference(a: &str, b: &str) -> f64 {
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
    let mut a_matched = Vec::new();
    for (i, ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_used[j] && b[j] == *ca {
                b_used[j] = true;
                a_matched.push(*ca);
                break;
            }
        }
    }
    let m = a_matched.len() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let b_matched: Vec<char> = b.iter().zip(&b_used).filter(|(_, u)| **u).map(|(c, _)| *c).collect();
    let t = a_matched.iter().zip(&b_matched).filter(|(x, y)| x != y).count() as f64 / 2.0;
    let jaro = (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0;
    let prefix = a.iter().zip(&b).take(4).take_while(|(x, y)| x == y).count() as f64;
    jaro + prefix * 0.1 * (1.0 - jaro)
}

#[test]
fn jaro_winkler_matches_reference() {
    let strings = all_strings(&['м', 'а', 'р'], 4);
    for a in &strings {
        for b in &strings {
            assert!((jaro_winkler(a, b) - jw_reference(a, b)).abs() < 1e-12, "{a:?} {b:?}");
        }
    }
    assert!((jaro_winkler("марта", "мрата") - jw_reference("марта", "мрата")).abs() < 1e-12);
}

fn random_problem(seed: u64) -> (Vec<SparseRow>, Vec<Label>, usize, f64) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.gen_range(1..=10);
    let n = rng.gen_range(3..=30);
    let mut rows: Vec<SparseRow> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = SparseRow::new();
        for j in 0..dim {
            if rng.gen_bool(0.6) {
                row.push((j, rng.gen_range(-2.0..2.0)));
            }
        }
        rows.push(row);
    }
    let mut labels: Vec<Label> = (0..n).map(|_| Label::ALL[rng.gen_range(0..3)]).collect();
    labels[..3].copy_from_slice(&Label::ALL);
    (rows, labels, dim, rng.gen_range(0.0..0.1))
}

#[test]
fn gradient_matches_central_differences() {
    use rand::{Rng, SeedableRng};
    for seed in 0..20 {
        let (rows, labels, dim, lambda) = random_problem(seed);
        let problem = Problem {
            rows: &rows,
            labels: &labels,
            dim,
            lambda,
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1000 + seed);
        let mut p = Params::zeros(dim);
        for i in 0..p.len() {
            p.set(i, rng.gen_range(-1.0..1.0));
        }
        let analytic = problem.gradient(&p);
        let h = 1e-5;
        let (mut diff, mut norm) = (0.0f64, 0.0f64);
        for i in 0..p.len() {
            let mut plus = p.clone();
            plus.set(i, p.get(i) + h);
            let mut minus = p.clone();
            minus.set(i, p.get(i) - h);
            let numeric = (problem.objective(&plus) - problem.objective(&minus)) / (2.0 * h);
            diff += (analytic.get(i) - numeric).powi(2);
            norm += analytic.get(i).powi(2) + numeric.powi(2);
        }
        let rel = diff.sqrt() / norm.sqrt().max(1e-12);
        assert!(rel < 1e-6, "seed {seed}: relative error {rel}");
    }
}

#[test]
fn objective_never_increases() {
    for seed in 0..10 {
        let (rows, labels, dim, lambda) = random_problem(seed);
        let cfg = TrainConfig {
            lambda,
            max_epochs: 200,
            ..Default::default()
        };
        let (_, trace) = train_with_trace(&rows, &labels, dim, &cfg).unwrap();
        assert!(trace.windows(2).all(|w| w[1] <= w[0]), "seed {seed}");
    }
}

#[test]
fn strong_regularization_shrinks_weights() {
    let (rows, labels, dim, _) = random_problem(3);
    let weight_norm = |lambda: f64| {
        let cfg = TrainConfig {
            lambda,
            max_epochs: 300,
            ..Default::default()
        };
        let (m, _) = train_with_trace(&rows, &labels, dim, &cfg).unwrap();
        m.params().weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    };
    let weak = weight_norm(1e-4);
    let strong = weight_norm(100.0);
    assert!(strong < 1e-2, "{strong}");
    assert!(strong < weak);
}
