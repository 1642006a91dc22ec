//! Training hyperparameters.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub lr: f64,
    /// Early-stopping patience in epochs.
    pub patience: usize,
    pub max_epochs: usize,
    pub seed: u64,
    pub val_fraction: f64,
    /// Decision threshold on the sigmoid probability; the boundary is
    /// inclusive (p == threshold predicts class 1).
    pub threshold: f64,
    pub positive_class_weight: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            batch_size: 32,
            lr: 0.001,
            patience: 5,
            max_epochs: 100,
            seed: 42,
            val_fraction: 0.2,
            threshold: 0.5,
            positive_class_weight: 1.0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size < 1 {
            return Err(Error::InvalidConfig("batch_size must be >= 1".into()));
        }
        if self.patience < 1 {
            return Err(Error::InvalidConfig("patience must be >= 1".into()));
        }
        if self.max_epochs < 1 {
            return Err(Error::InvalidConfig("max_epochs must be >= 1".into()));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidConfig("threshold must be in (0, 1)".into()));
        }
        if !(self.val_fraction > 0.0 && self.val_fraction < 1.0) {
            return Err(Error::InvalidConfig("val_fraction must be in (0, 1)".into()));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(Error::InvalidConfig("lr must be positive".into()));
        }
        if !(self.positive_class_weight > 0.0 && self.positive_class_weight.is_finite()) {
            return Err(Error::InvalidConfig(
                "positive_class_weight must be positive".into(),
            ));
        }
        Ok(())
    }
}
