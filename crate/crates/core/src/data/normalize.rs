//! Per-feature z-score normalization with statistics from the training
//! split only.

use crate::data::window::Example;
use crate::error::{Error, Result};

/// Constant features clamp their std to this floor, which maps them to 0.
pub const STD_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct NormStats {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

/// Fit mean and population std per feature column over every month of
/// every training example.
pub fn fit_norm_stats(train: &[Example]) -> Result<NormStats> {
    let first = train.first().ok_or(Error::EmptyTrainingSet)?;
    let width = first.x.cols();
    let mut mean = vec![0.0; width];
    let mut count = 0.0;
    for ex in train {
        check_width(ex, width)?;
        for r in 0..ex.x.rows() {
            for (m, v) in mean.iter_mut().zip(ex.x.row(r)) {
                *m += v;
            }
            count += 1.0;
        }
    }
    for m in &mut mean {
        *m /= count;
    }
    let mut var = vec![0.0; width];
    for ex in train {
        for r in 0..ex.x.rows() {
            for ((acc, v), mu) in var.iter_mut().zip(ex.x.row(r)).zip(&mean) {
                let d = v - mu;
                *acc += d * d;
            }
        }
    }
    let std = var
        .into_iter()
        .map(|s| (s / count).sqrt().max(STD_FLOOR))
        .collect();
    Ok(NormStats { mean, std })
}

/// `(x - mean) / std` per feature, in place.
pub fn apply_norm(stats: &NormStats, example: &mut Example) -> Result<()> {
    check_width(example, stats.mean.len())?;
    let cols = example.x.cols();
    for (i, v) in example.x.data_mut().iter_mut().enumerate() {
        let c = i % cols;
        *v = (*v - stats.mean[c]) / stats.std[c];
    }
    Ok(())
}

pub fn apply_norm_all(stats: &NormStats, examples: &mut [Example]) -> Result<()> {
    for ex in examples {
        apply_norm(stats, ex)?;
    }
    Ok(())
}

fn check_width(ex: &Example, width: usize) -> Result<()> {
    if ex.x.cols() != width {
        return Err(Error::ShapeMismatch {
            context: "normalize",
            expected: format!("{width} feature columns"),
            got: format!("{}", ex.x.cols()),
        });
    }
    Ok(())
}
