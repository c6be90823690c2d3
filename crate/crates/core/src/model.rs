//! Multinomial logistic regression trained by deterministic full-batch
//! gradient descent with step halving.
//!
//! The objective is the mean cross-entropy plus `lambda / 2 * ||W||^2`; the
//! bias is not regularised. Training starts from zero weights and never draws
//! random numbers, so two runs on the same data give bit-identical models.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::ModelError;

const N_CLASSES: usize = 3;
const CHUNK: usize = 256;
const MIN_RATE: f64 = 1e-12;
const MAGIC: &str = "# mksent-model v1";

/// A sparse example: `(feature index, value)` pairs.
pub type SparseRow = Vec<(usize, f64)>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub lambda: f64,
    pub learning_rate: f64,
    pub max_epochs: usize,
    /// Stop once the gradient norm drops below this.
    pub tolerance: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lambda: 1e-4,
            learning_rate: 0.5,
            max_epochs: 500,
            tolerance: 1e-6,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(ModelError::BadConfig(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(ModelError::BadConfig(format!(
                "learning rate must be > 0, got {}",
                self.learning_rate
            )));
        }
        if !(self.tolerance >= 0.0) {
            return Err(ModelError::BadConfig(format!("tolerance must be >= 0, got {}", self.tolerance)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub lambda: f64,
    pub epochs: usize,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    dim: usize,
    /// Row-major `3 x dim`, rows in [`Label::ALL`] order.
    weights: Vec<f64>,
    bias: [f64; N_CLASSES],
    pub meta: TrainingMeta,
}

/// Model parameters as one flat vector: weights row-major, then the 3 biases.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub weights: Vec<f64>,
    pub bias: [f64; N_CLASSES],
}

impl Params {
    pub fn zeros(dim: usize) -> Params {
        Params {
            weights: vec![0.0; N_CLASSES * dim],
            bias: [0.0; N_CLASSES],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len() + N_CLASSES
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> f64 {
        if i < self.weights.len() {
            self.weights[i]
        } else {
            self.bias[i - self.weights.len()]
        }
    }

    pub fn set(&mut self, i: usize, v: f64) {
        if i < self.weights.len() {
            self.weights[i] = v;
        } else {
            self.bias[i - self.weights.len()] = v;
        }
    }

    fn norm(&self) -> f64 {
        (self.weights.iter().map(|x| x * x).sum::<f64>() + self.bias.iter().map(|x| x * x).sum::<f64>()).sqrt()
    }

    fn step(&self, grad: &Params, rate: f64) -> Params {
        Params {
            weights: self
                .weights
                .iter()
                .zip(&grad.weights)
                .map(|(w, g)| w - rate * g)
                .collect(),
            bias: std::array::from_fn(|k| self.bias[k] - rate * grad.bias[k]),
        }
    }
}

fn scores(weights: &[f64], bias: &[f64; N_CLASSES], dim: usize, row: &[(usize, f64)]) -> [f64; N_CLASSES] {
    std::array::from_fn(|k| {
        let w = &weights[k * dim..(k + 1) * dim];
        bias[k] + row.iter().map(|&(j, x)| w[j] * x).sum::<f64>()
    })
}

fn softmax(s: [f64; N_CLASSES]) -> [f64; N_CLASSES] {
    let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: [f64; N_CLASSES] = std::array::from_fn(|k| (s[k] - max).exp());
    let z: f64 = e.iter().sum();
    std::array::from_fn(|k| e[k] / z)
}

/// A training problem: examples, labels and the L2 strength.
#[derive(Debug, Clone)]
pub struct Problem<'a> {
    pub rows: &'a [SparseRow],
    pub labels: &'a [Label],
    pub dim: usize,
    pub lambda: f64,
}

impl Problem<'_> {
    pub fn objective(&self, p: &Params) -> f64 {
        self.evaluate(p, false).0
    }

    pub fn gradient(&self, p: &Params) -> Params {
        self.evaluate(p, true).1
    }

    /// Objective and (optionally) gradient. Examples are reduced in fixed-size
    /// chunks merged in order, so the result does not depend on thread count.
    pub fn evaluate(&self, p: &Params, with_grad: bool) -> (f64, Params) {
        let n = self.rows.len() as f64;
        let dim = self.dim;
        let partials: Vec<(f64, Params)> = self
            .rows
            .par_chunks(CHUNK)
            .zip(self.labels.par_chunks(CHUNK))
            .map(|(rows, labels)| {
                let mut loss = 0.0;
                let mut g = if with_grad { Params::zeros(dim) } else { Params::zeros(0) };
                for (row, label) in rows.iter().zip(labels) {
                    let s = scores(&p.weights, &p.bias, dim, row);
                    let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let lse = max + s.iter().map(|x| (x - max).exp()).sum::<f64>().ln();
                    let y = label.index();
                    loss += lse - s[y];
                    if with_grad {
                        for k in 0..N_CLASSES {
                            let delta = (s[k] - lse).exp() - f64::from(u8::from(k == y));
                            g.bias[k] += delta;
                            let gw = &mut g.weights[k * dim..(k + 1) * dim];
                            for &(j, x) in row {
                                gw[j] += delta * x;
                            }
                        }
                    }
                }
                (loss, g)
            })
            .collect();

        let mut loss = 0.0;
        let mut grad = if with_grad { Params::zeros(dim) } else { Params::zeros(0) };
        for (l, g) in partials {
            loss += l;
            if with_grad {
                for (a, b) in grad.weights.iter_mut().zip(&g.weights) {
                    *a += b;
                }
                for k in 0..N_CLASSES {
                    grad.bias[k] += g.bias[k];
                }
            }
        }
        let sq: f64 = p.weights.iter().map(|w| w * w).sum();
        let objective = loss / n + 0.5 * self.lambda * sq;
        if with_grad {
            for (g, w) in grad.weights.iter_mut().zip(&p.weights) {
                *g = *g / n + self.lambda * w;
            }
            for b in grad.bias.iter_mut() {
                *b /= n;
            }
        }
        (objective, grad)
    }
}

fn validate_data(rows: &[SparseRow], labels: &[Label], dim: usize) -> Result<(), ModelError> {
    if rows.len() != labels.len() {
        return Err(ModelError::LengthMismatch(rows.len(), labels.len()));
    }
    if rows.is_empty() {
        return Err(ModelError::NoExamples);
    }
    for (i, row) in rows.iter().enumerate() {
        for &(j, x) in row {
            if !x.is_finite() {
                return Err(ModelError::NonFinite(i));
            }
            if j >= dim {
                return Err(ModelError::DimensionMismatch { index: j, dim });
            }
        }
    }
    for class in Label::ALL {
        if !labels.contains(&class) {
            return Err(ModelError::MissingClass(class));
        }
    }
    Ok(())
}

/// Trains on `dim`-dimensional sparse rows. Also returns the objective value
/// after every accepted epoch (first entry is the zero model).
pub fn train_with_trace(
    rows: &[SparseRow],
    labels: &[Label],
    dim: usize,
    cfg: &TrainConfig,
) -> Result<(LinearModel, Vec<f64>), ModelError> {
    cfg.validate()?;
    validate_data(rows, labels, dim)?;
    let problem = Problem {
        rows,
        labels,
        dim,
        lambda: cfg.lambda,
    };
    let mut params = Params::zeros(dim);
    let (mut objective, mut grad) = problem.evaluate(&params, true);
    let mut trace = vec![objective];
    let mut rate = cfg.learning_rate;
    let mut epochs = 0;
    'outer: while epochs < cfg.max_epochs {
        if grad.norm() < cfg.tolerance {
            break;
        }
        loop {
            let candidate = params.step(&grad, rate);
            let (obj, g) = problem.evaluate(&candidate, true);
            if obj <= objective {
                params = candidate;
                objective = obj;
                grad = g;
                break;
            }
            rate *= 0.5;
            if rate < MIN_RATE {
                break 'outer;
            }
        }
        epochs += 1;
        trace.push(objective);
    }
    let model = LinearModel {
        dim,
        weights: params.weights,
        bias: params.bias,
        meta: TrainingMeta {
            lambda: cfg.lambda,
            epochs,
            objective,
        },
    };
    Ok((model, trace))
}

pub fn train(rows: &[SparseRow], labels: &[Label], dim: usize, cfg: &TrainConfig) -> Result<LinearModel, ModelError> {
    train_with_trace(rows, labels, dim, cfg).map(|(m, _)| m)
}

impl LinearModel {
    pub fn zeros(dim: usize) -> LinearModel {
        LinearModel {
            dim,
            weights: vec![0.0; N_CLASSES * dim],
            bias: [0.0; N_CLASSES],
            meta: TrainingMeta {
                lambda: 0.0,
                epochs: 0,
                objective: f64::NAN,
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self, class: Label, feature: usize) -> f64 {
        self.weights[class.index() * self.dim + feature]
    }

    pub fn bias(&self, class: Label) -> f64 {
        self.bias[class.index()]
    }

    pub fn params(&self) -> Params {
        Params {
            weights: self.weights.clone(),
            bias: self.bias,
        }
    }

    /// Multiplies all weights and biases by `c`.
    pub fn scaled(&self, c: f64) -> LinearModel {
        let mut m = self.clone();
        m.weights.iter_mut().for_each(|w| *w *= c);
        m.bias.iter_mut().for_each(|b| *b *= c);
        m
    }

    pub fn scores(&self, row: &[(usize, f64)]) -> Result<[f64; N_CLASSES], ModelError> {
        if let Some(&(index, _)) = row.iter().find(|&&(j, _)| j >= self.dim) {
            return Err(ModelError::DimensionMismatch { index, dim: self.dim });
        }
        Ok(scores(&self.weights, &self.bias, self.dim, row))
    }

    pub fn predict_proba(&self, row: &[(usize, f64)]) -> Result<[f64; N_CLASSES], ModelError> {
        self.scores(row).map(softmax)
    }

    pub fn predict(&self, row: &[(usize, f64)]) -> Result<Label, ModelError> {
        Ok(argmax(&self.predict_proba(row)?))
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "{MAGIC}\n#classes\tpositive\tneutral\tnegative\n#dim\t{}\n#lambda\t{}\n#epochs\t{}\n#objective\t{}\n",
            self.dim, self.meta.lambda, self.meta.epochs, self.meta.objective
        );
        for class in Label::ALL {
            let _ = writeln!(out, "{class}\tbias\t{}", self.bias(class));
            for j in 0..self.dim {
                let w = self.weight(class, j);
                if w != 0.0 {
                    let _ = writeln!(out, "{class}\t{j}\t{w}");
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<LinearModel, ModelError> {
        let bad = |line: usize, message: &str| ModelError::Format {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate();
        if lines.next().map(|(_, l)| l.trim_end()) != Some(MAGIC) {
            return Err(bad(1, "missing model header"));
        }
        let mut dim = None;
        let mut meta = TrainingMeta {
            lambda: 0.0,
            epochs: 0,
            objective: f64::NAN,
        };
        let mut entries = Vec::new();
        for (i, line) in lines {
            let line_no = i + 1;
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(line_no, "bad number"));
            match cols[..] {
                ["#classes", "positive", "neutral", "negative"] => {}
                ["#classes", ..] => return Err(bad(line_no, "unsupported class order")),
                ["#dim", v] => dim = Some(v.parse::<usize>().map_err(|_| bad(line_no, "bad dim"))?),
                ["#lambda", v] => meta.lambda = num(v)?,
                ["#epochs", v] => meta.epochs = v.parse().map_err(|_| bad(line_no, "bad epochs"))?,
                ["#objective", v] => meta.objective = num(v)?,
                [class, feature, w] => {
                    let class: Label = class.parse().map_err(|_| bad(line_no, "unknown class"))?;
                    let feature = if feature == "bias" {
                        None
                    } else {
                        Some(feature.parse::<usize>().map_err(|_| bad(line_no, "bad feature id"))?)
                    };
                    entries.push((line_no, class, feature, num(w)?));
                }
                _ => return Err(bad(line_no, "unrecognised row")),
            }
        }
        let dim = dim.ok_or_else(|| bad(0, "missing #dim"))?;
        let mut model = LinearModel::zeros(dim);
        model.meta = meta;
        for (line_no, class, feature, w) in entries {
            match feature {
                None => model.bias[class.index()] = w,
                Some(j) if j < dim => model.weights[class.index() * dim + j] = w,
                Some(_) => return Err(bad(line_no, "feature id beyond #dim")),
            }
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        fs::write(path, self.to_tsv()).map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<LinearModel, ModelError> {
        let text = fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        LinearModel::parse(&text)
    }
}

/// Class with the highest probability; ties go to the earlier class.
pub fn argmax(proba: &[f64; N_CLASSES]) -> Label {
    let mut best = 0;
    for k in 1..N_CLASSES {
        if proba[k] > proba[best] {
            best = k;
        }
    }
    Label::ALL[best]
}
