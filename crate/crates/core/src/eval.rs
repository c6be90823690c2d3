//! Evaluation: confusion matrices, per-class scores, the positive/negative
//! averaged F1, Cohen's kappa, and the leave-one-component-out ablation harness.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Label, RawTweet};
use crate::error::{EvalError, Result};
use crate::system::SystemSpec;

/// Rows are gold labels, columns predictions, both in [`Label::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 3]; 3],
}

impl ConfusionMatrix {
    pub fn get(&self, gold: Label, pred: Label) -> u64 {
        self.counts[gold.index()][pred.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn precision(&self, class: Label) -> f64 {
        let k = class.index();
        let predicted: u64 = (0..3).map(|g| self.counts[g][k]).sum();
        ratio(self.counts[k][k], predicted)
    }

    pub fn recall(&self, class: Label) -> f64 {
        let k = class.index();
        let gold: u64 = self.counts[k].iter().sum();
        ratio(self.counts[k][k], gold)
    }

    /// Harmonic mean of precision and recall; 0 when both are 0.
    pub fn f1(&self, class: Label) -> f64 {
        let p = self.precision(class);
        let r = self.recall(class);
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }

    pub fn accuracy(&self) -> f64 {
        ratio((0..3).map(|k| self.counts[k][k]).sum(), self.total())
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn confusion(gold: &[Label], pred: &[Label]) -> Result<ConfusionMatrix, EvalError> {
    if gold.len() != pred.len() {
        return Err(EvalError::LengthMismatch(gold.len(), pred.len()));
    }
    if gold.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut m = ConfusionMatrix::default();
    for (g, p) in gold.iter().zip(pred) {
        m.counts[g.index()][p.index()] += 1;
    }
    Ok(m)
}

/// Mean of the positive-class and negative-class F1.
pub fn f1_pn(matrix: &ConfusionMatrix) -> f64 {
    (matrix.f1(Label::Positive) + matrix.f1(Label::Negative)) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassScores {
    pub label: Label,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub per_class: Vec<ClassScores>,
    pub accuracy: f64,
    pub f1_pn: f64,
    pub confusion: ConfusionMatrix,
}

impl EvalReport {
    pub fn from_matrix(matrix: ConfusionMatrix) -> EvalReport {
        EvalReport {
            per_class: Label::ALL
                .iter()
                .map(|&label| ClassScores {
                    label,
                    precision: matrix.precision(label),
                    recall: matrix.recall(label),
                    f1: matrix.f1(label),
                })
                .collect(),
            accuracy: matrix.accuracy(),
            f1_pn: f1_pn(&matrix),
            confusion: matrix,
        }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("metric\tclass\tvalue\n");
        for c in &self.per_class {
            let _ = writeln!(out, "precision\t{}\t{:.6}", c.label, c.precision);
            let _ = writeln!(out, "recall\t{}\t{:.6}", c.label, c.recall);
            let _ = writeln!(out, "f1\t{}\t{:.6}", c.label, c.f1);
        }
        let _ = writeln!(out, "accuracy\tall\t{:.6}", self.accuracy);
        let _ = writeln!(out, "f1_pn\tall\t{:.6}", self.f1_pn);
        out
    }
}

pub fn evaluate(gold: &[Label], pred: &[Label]) -> Result<EvalReport, EvalError> {
    confusion(gold, pred).map(EvalReport::from_matrix)
}

/// Chance-corrected agreement between two annotators.
pub fn cohen_kappa<T: Eq + Hash>(ann1: &[T], ann2: &[T]) -> Result<f64, EvalError> {
    if ann1.len() != ann2.len() {
        return Err(EvalError::LengthMismatch(ann1.len(), ann2.len()));
    }
    if ann1.is_empty() {
        return Err(EvalError::Empty);
    }
    let n = ann1.len() as f64;
    let observed = ann1.iter().zip(ann2).filter(|(a, b)| a == b).count() as f64 / n;
    let mut marginals: HashMap<&T, (u64, u64)> = HashMap::new();
    for a in ann1 {
        marginals.entry(a).or_default().0 += 1;
    }
    for b in ann2 {
        marginals.entry(b).or_default().1 += 1;
    }
    let chance: f64 = marginals
        .values()
        .map(|&(a, b)| (a as f64 / n) * (b as f64 / n))
        .sum();
    if chance == 1.0 {
        return if observed == 1.0 {
            Ok(1.0)
        } else {
            Err(EvalError::DegenerateKappa(observed))
        };
    }
    Ok((observed - chance) / (1.0 - chance))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationRow {
    pub name: String,
    pub f1_pn: f64,
    /// `f1_pn - full.f1_pn`; zero on the full row.
    pub diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationReport {
    pub rows: Vec<AblationRow>,
}

impl AblationReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("configuration\tf_score\tdiff\n");
        for r in &self.rows {
            let _ = writeln!(out, "{}\t{:.4}\t{:.4}", r.name, 100.0 * r.f1_pn, 100.0 * r.diff);
        }
        out
    }

    /// Aligned plain-text table with F-scores in percent.
    pub fn to_table(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0).max(8);
        let mut out = format!("{:<width$}  {:>7}  {:>6}\n", "Features", "F-score", "Diff.");
        let _ = writeln!(out, "{}", "-".repeat(width + 17));
        for (i, r) in self.rows.iter().enumerate() {
            let diff = if i == 0 {
                String::new()
            } else {
                format!("{:.2}", 100.0 * r.diff)
            };
            let _ = writeln!(out, "{:<width$}  {:>7.2}  {:>6}", r.name, 100.0 * r.f1_pn, diff);
        }
        out
    }
}

fn gold_labels(tweets: &[RawTweet]) -> Result<Vec<Label>, EvalError> {
    tweets
        .iter()
        .map(|t| t.label.ok_or_else(|| EvalError::Unlabeled(t.id.clone())))
        .collect()
}

/// Trains `spec` on `train` and scores it on `test`.
pub fn train_and_score(spec: &SystemSpec, train: &[RawTweet], test: &[RawTweet]) -> Result<EvalReport> {
    let gold = gold_labels(test)?;
    let system = spec.train(train)?;
    let pred = system
        .predict_all(test.iter().map(|t| t.text.as_str()))?
        .into_iter()
        .map(|(l, _)| l)
        .collect::<Vec<_>>();
    Ok(evaluate(&gold, &pred)?)
}

/// First row is the full system; each further row retrains with exactly one
/// component (preprocessing step or lexicon group) removed.
pub fn run_ablation(
    train: &[RawTweet],
    test: &[RawTweet],
    components: &[String],
    full: &SystemSpec,
) -> Result<AblationReport> {
    let mut specs = vec![("All".to_string(), full.clone())];
    for c in components {
        specs.push((format!("All - {c}"), full.without_component(c)?));
    }
    let scores: Vec<f64> = specs
        .par_iter()
        .map(|(_, spec)| train_and_score(spec, train, test).map(|r| r.f1_pn))
        .collect::<Result<_>>()?;
    let base = scores[0];
    Ok(AblationReport {
        rows: specs
            .into_iter()
            .zip(scores)
            .map(|((name, _), f1_pn)| AblationRow {
                name,
                f1_pn,
                diff: f1_pn - base,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::*;

    #[test]
    fn diagonal_confusion() {
        let gold = [Positive, Negative, Neutral, Positive, Negative];
        let m = confusion(&gold, &gold).unwrap();
        assert_eq!((0..3).map(|k| m.counts[k][k]).sum::<u64>(), 5);
        assert_eq!(f1_pn(&m), 1.0);
    }

    #[test]
    fn single_off_diagonal() {
        let m = confusion(&[Positive], &[Negative]).unwrap();
        assert_eq!(m.get(Positive, Negative), 1);
        assert_eq!(m.total(), 1);
    }

    #[test]
    fn confusion_errors() {
        assert!(matches!(confusion(&[Positive], &[]), Err(EvalError::LengthMismatch(1, 0))));
        assert!(matches!(confusion(&[], &[]), Err(EvalError::Empty)));
    }

    #[test]
    fn all_neutral_predictions_score_zero() {
        let gold = [Positive, Negative, Neutral];
        let m = confusion(&gold, &[Neutral; 3]).unwrap();
        assert_eq!(f1_pn(&m), 0.0);
    }

    #[test]
    fn hand_computed_f1_pn() {
        let m = confusion(&[Positive, Positive, Negative, Neutral], &[Positive, Negative, Negative, Neutral]).unwrap();
        assert!((m.f1(Positive) - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.f1(Negative) - 2.0 / 3.0).abs() < 1e-12);
        assert!((f1_pn(&m) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_cases() {
        assert_eq!(cohen_kappa(&[Positive, Negative], &[Positive, Negative]).unwrap(), 1.0);
        let k = cohen_kappa(&[Positive; 4], &[Positive, Negative, Positive, Negative]).unwrap();
        assert!(k.abs() < 1e-12);
        assert_eq!(cohen_kappa(&[Neutral; 3], &[Neutral; 3]).unwrap(), 1.0);
        assert!(matches!(cohen_kappa::<Label>(&[], &[]), Err(EvalError::Empty)));
        assert!(matches!(cohen_kappa(&[Neutral], &[]), Err(EvalError::LengthMismatch(1, 0))));
    }

    #[test]
    fn report_table_layout() {
        let r = AblationReport {
            rows: vec![
                AblationRow {
                    name: "All".into(),
                    f1_pn: 0.9216,
                    diff: 0.0,
                },
                AblationRow {
                    name: "All - stopwords".into(),
                    f1_pn: 0.8624,
                    diff: 0.8624 - 0.9216,
                },
            ],
        };
        let table = r.to_table();
        assert!(table.contains("92.16"));
        assert!(table.contains("-5.92"));
        assert!(r.to_tsv().starts_with("configuration\tf_score\tdiff\nAll\t92.1600\t0.0000\n"));
    }
}
