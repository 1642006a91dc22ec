//! Thresholded binary evaluation: confusion counts and
//! accuracy/precision/recall/F1 under binary, macro and weighted
//! averaging.
//!
//! Class 1 (rust present) is the positive class. A precision or recall
//! whose denominator is zero is reported as 0.0 with its `*_defined`
//! flag cleared rather than silently; under strong class imbalance that
//! distinction is the whole story.

use crate::data::window::Example;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nn::activation::sigmoid;
use crate::nn::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub true_pos: usize,
    pub false_pos: usize,
    pub false_neg: usize,
    pub true_neg: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Averaging {
    Binary,
    Macro,
    Weighted,
}

impl Averaging {
    pub fn parse(s: &str) -> Result<Averaging> {
        match s {
            "binary" => Ok(Averaging::Binary),
            "macro" => Ok(Averaging::Macro),
            "weighted" => Ok(Averaging::Weighted),
            other => Err(Error::InvalidConfig(format!(
                "unknown averaging {other:?} (expected binary, macro or weighted)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Averaging::Binary => "binary",
            Averaging::Macro => "macro",
            Averaging::Weighted => "weighted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// False when the class received no predictions (precision) or has
    /// no true members (recall); the metric is then reported as 0.
    pub precision_defined: bool,
    pub recall_defined: bool,
    /// Number of true members of the class.
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    pub positive: ClassMetrics,
    pub negative: ClassMetrics,
    pub macro_avg: AveragedMetrics,
    pub weighted_avg: AveragedMetrics,
}

/// Class 1 iff `sigmoid(logit) >= threshold`.
pub fn predict(params: &ModelParams, examples: &[Example], threshold: f64) -> Result<Vec<bool>> {
    Ok(probabilities(params, examples)?
        .into_iter()
        .map(|p| p >= threshold)
        .collect())
}

pub fn probabilities(params: &ModelParams, examples: &[Example]) -> Result<Vec<f64>> {
    if examples.is_empty() {
        return Ok(Vec::new());
    }
    let xs: Vec<&Matrix> = examples.iter().map(|e| &e.x).collect();
    let (logits, _) = params.forward_batch(&xs)?;
    Ok(logits.into_iter().map(sigmoid).collect())
}

/// Standard counts with class 1 as positive. Empty inputs give the
/// all-zero matrix; `metrics` flags that as an empty evaluation.
pub fn confusion(preds: &[bool], labels: &[bool]) -> Result<ConfusionMatrix> {
    if preds.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: preds.len(),
            right: labels.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &y) in preds.iter().zip(labels) {
        match (p, y) {
            (true, true) => cm.true_pos += 1,
            (true, false) => cm.false_pos += 1,
            (false, true) => cm.false_neg += 1,
            (false, false) => cm.true_neg += 1,
        }
    }
    Ok(cm)
}

fn class_metrics(tp: usize, fp: usize, fn_: usize) -> ClassMetrics {
    let precision_defined = tp + fp > 0;
    let recall_defined = tp + fn_ > 0;
    let precision = if precision_defined {
        tp as f64 / (tp + fp) as f64
    } else {
        0.0
    };
    let recall = if recall_defined {
        tp as f64 / (tp + fn_) as f64
    } else {
        0.0
    };
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    ClassMetrics {
        precision,
        recall,
        f1,
        precision_defined,
        recall_defined,
        support: tp + fn_,
    }
}

pub fn metrics(cm: &ConfusionMatrix) -> Result<EvalReport> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyEvaluation);
    }
    let positive = class_metrics(cm.true_pos, cm.false_pos, cm.false_neg);
    // Class 0 metrics come from the same matrix with roles swapped.
    let negative = class_metrics(cm.true_neg, cm.false_neg, cm.false_pos);
    let accuracy = (cm.true_pos + cm.true_neg) as f64 / total as f64;

    let macro_avg = AveragedMetrics {
        precision: (positive.precision + negative.precision) / 2.0,
        recall: (positive.recall + negative.recall) / 2.0,
        f1: (positive.f1 + negative.f1) / 2.0,
    };
    let wp = positive.support as f64 / total as f64;
    let wn = negative.support as f64 / total as f64;
    let weighted_avg = AveragedMetrics {
        precision: wp * positive.precision + wn * negative.precision,
        recall: wp * positive.recall + wn * negative.recall,
        f1: wp * positive.f1 + wn * negative.f1,
    };
    Ok(EvalReport {
        confusion: *cm,
        accuracy,
        positive,
        negative,
        macro_avg,
        weighted_avg,
    })
}

impl EvalReport {
    /// The (precision, recall, f1) triple under the chosen averaging.
    pub fn averaged(&self, averaging: Averaging) -> AveragedMetrics {
        match averaging {
            Averaging::Binary => AveragedMetrics {
                precision: self.positive.precision,
                recall: self.positive.recall,
                f1: self.positive.f1,
            },
            Averaging::Macro => self.macro_avg,
            Averaging::Weighted => self.weighted_avg,
        }
    }

    /// Metric body as `key value` lines (full precision).
    pub fn to_kv_lines(&self) -> String {
        let mut out = String::new();
        let cm = &self.confusion;
        out.push_str(&format!("examples {}\n", cm.total()));
        out.push_str(&format!("tp {}\nfp {}\nfn {}\ntn {}\n", cm.true_pos, cm.false_pos, cm.false_neg, cm.true_neg));
        out.push_str(&format!("accuracy {}\n", self.accuracy));
        for (tag, class) in [("pos", &self.positive), ("neg", &self.negative)] {
            out.push_str(&format!("precision_{tag} {}\n", class.precision));
            out.push_str(&format!("recall_{tag} {}\n", class.recall));
            out.push_str(&format!("f1_{tag} {}\n", class.f1));
            out.push_str(&format!("precision_{tag}_defined {}\n", class.precision_defined));
            out.push_str(&format!("recall_{tag}_defined {}\n", class.recall_defined));
        }
        for (tag, avg) in [("macro", &self.macro_avg), ("weighted", &self.weighted_avg)] {
            out.push_str(&format!("precision_{tag} {}\n", avg.precision));
            out.push_str(&format!("recall_{tag} {}\n", avg.recall));
            out.push_str(&format!("f1_{tag} {}\n", avg.f1));
        }
        out
    }
}
