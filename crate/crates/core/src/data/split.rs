//! Randomized train/validation splitting and class-balance statistics.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;

use crate::data::window::Example;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone)]
pub struct DatasetSplit {
    pub train: Vec<Example>,
    pub val: Vec<Example>,
    pub seed: u64,
    pub val_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMode {
    /// Shuffle individual examples; windows from one region may land in
    /// both splits.
    Example,
    /// Whole regions go to one side, for leakage-aware evaluation.
    Region,
}

impl SplitMode {
    pub fn parse(s: &str) -> Result<SplitMode> {
        match s {
            "example" => Ok(SplitMode::Example),
            "region" => Ok(SplitMode::Region),
            other => Err(Error::InvalidConfig(format!(
                "unknown split mode {other:?} (expected example or region)"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SplitMode::Example => "example",
            SplitMode::Region => "region",
        }
    }
}

/// Seeded uniform shuffle, then partition. The validation side gets
/// `round(n * val_fraction)` examples, clamped so both sides are
/// non-empty whenever `n >= 2`.
pub fn random_split(examples: Vec<Example>, val_fraction: f64, seed: u64) -> Result<DatasetSplit> {
    validate_fraction(val_fraction)?;
    if examples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = examples.len();
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(&mut rng_from_seed(seed));
    let n_val = clamp_val_count(n, val_fraction);

    let mut examples: Vec<Option<Example>> = examples.into_iter().map(Some).collect();
    let take = |examples: &mut Vec<Option<Example>>, idx: &[usize]| {
        idx.iter()
            .map(|&i| examples[i].take().expect("each index taken once"))
            .collect::<Vec<_>>()
    };
    let val = take(&mut examples, &indices[..n_val]);
    let train = take(&mut examples, &indices[n_val..]);
    Ok(DatasetSplit {
        train,
        val,
        seed,
        val_fraction,
    })
}

/// Region-level split: shuffle region ids, then move whole regions to
/// the validation side until it holds at least `round(n * val_fraction)`
/// examples.
pub fn region_split(examples: Vec<Example>, val_fraction: f64, seed: u64) -> Result<DatasetSplit> {
    validate_fraction(val_fraction)?;
    if examples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let regions: BTreeSet<String> = examples.iter().map(|e| e.region_id.clone()).collect();
    if regions.len() < 2 {
        return Err(Error::InvalidConfig(
            "region split needs at least 2 regions".to_string(),
        ));
    }
    let mut region_order: Vec<String> = regions.into_iter().collect();
    region_order.shuffle(&mut rng_from_seed(seed));

    let n = examples.len();
    let target = clamp_val_count(n, val_fraction);
    let mut val_regions = BTreeSet::new();
    let mut val_count = 0usize;
    for region in &region_order {
        if val_count >= target || val_regions.len() + 1 == region_order.len() {
            break;
        }
        val_count += examples.iter().filter(|e| &e.region_id == region).count();
        val_regions.insert(region.clone());
    }
    let (val, train): (Vec<Example>, Vec<Example>) = examples
        .into_iter()
        .partition(|e| val_regions.contains(&e.region_id));
    if train.is_empty() || val.is_empty() {
        return Err(Error::InvalidConfig(
            "region split produced an empty side; adjust val_fraction".to_string(),
        ));
    }
    Ok(DatasetSplit {
        train,
        val,
        seed,
        val_fraction,
    })
}

fn validate_fraction(val_fraction: f64) -> Result<()> {
    if !(val_fraction > 0.0 && val_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "val_fraction must be in (0, 1), got {val_fraction}"
        )));
    }
    Ok(())
}

fn clamp_val_count(n: usize, val_fraction: f64) -> usize {
    let raw = (n as f64 * val_fraction).round() as usize;
    if n >= 2 {
        raw.clamp(1, n - 1)
    } else {
        raw.min(n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub n_total: usize,
    pub n_positive: usize,
    /// None when there are no examples: prevalence is undefined.
    pub prevalence: Option<f64>,
    /// Accuracy of the constant majority-class predictor.
    pub majority_accuracy: Option<f64>,
}

pub fn class_stats(examples: &[Example]) -> ClassStats {
    let n_total = examples.len();
    let n_positive = examples.iter().filter(|e| e.label).count();
    if n_total == 0 {
        return ClassStats {
            n_total: 0,
            n_positive: 0,
            prevalence: None,
            majority_accuracy: None,
        };
    }
    let n = n_total as f64;
    ClassStats {
        n_total,
        n_positive,
        prevalence: Some(n_positive as f64 / n),
        majority_accuracy: Some(n_positive.max(n_total - n_positive) as f64 / n),
    }
}
