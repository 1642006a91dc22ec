//! Early stopping on validation loss.
//!
//! An epoch improves only when its loss is strictly below the best by
//! more than 1e-12; training stops once `patience` consecutive epochs
//! fail to improve. The caller restores the best epoch's parameters.

#[derive(Debug, Clone)]
pub struct EarlyStopper {
    patience: usize,
    best_loss: Option<f64>,
    best_epoch: usize,
    since_improve: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observation {
    pub improved: bool,
    pub stop: bool,
}

impl EarlyStopper {
    pub fn new(patience: usize) -> Self {
        EarlyStopper {
            patience,
            best_loss: None,
            best_epoch: 0,
            since_improve: 0,
        }
    }

    pub fn observe(&mut self, epoch: usize, val_loss: f64) -> Observation {
        let improved = match self.best_loss {
            None => true,
            Some(best) => val_loss < best - 1e-12,
        };
        if improved {
            self.best_loss = Some(val_loss);
            self.best_epoch = epoch;
            self.since_improve = 0;
        } else {
            self.since_improve += 1;
        }
        Observation {
            improved,
            stop: self.since_improve >= self.patience,
        }
    }

    pub fn best_epoch(&self) -> usize {
        self.best_epoch
    }

    pub fn best_loss(&self) -> Option<f64> {
        self.best_loss
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_simulated_sequence_stops_after_epoch_seven() {
        // Losses 1.0, 0.9, 0.91, 0.92, 0.93, 0.94, 0.95 with patience 5:
        // best is epoch 2; epochs 3-7 are five non-improvements.
        let mut stopper = EarlyStopper::new(5);
        let losses = [1.0, 0.9, 0.91, 0.92, 0.93, 0.94, 0.95];
        let mut stopped_at = None;
        for (i, &loss) in losses.iter().enumerate() {
            let epoch = i + 1;
            let obs = stopper.observe(epoch, loss);
            if obs.stop {
                stopped_at = Some(epoch);
                break;
            }
        }
        assert_eq!(stopped_at, Some(7));
        assert_eq!(stopper.best_epoch(), 2);
        assert_eq!(stopper.best_loss(), Some(0.9));
    }

    #[test]
    fn equal_loss_within_tolerance_is_not_improvement() {
        let mut stopper = EarlyStopper::new(2);
        assert!(stopper.observe(1, 0.5).improved);
        assert!(!stopper.observe(2, 0.5).improved);
        assert!(!stopper.observe(3, 0.5 - 1e-13).improved);
        assert_eq!(stopper.best_epoch(), 1);
    }

    #[test]
    fn improvement_resets_the_counter() {
        let mut stopper = EarlyStopper::new(2);
        stopper.observe(1, 1.0);
        assert!(!stopper.observe(2, 1.1).stop);
        assert!(!stopper.observe(3, 0.9).stop);
        assert!(!stopper.observe(4, 0.95).stop);
        assert!(stopper.observe(5, 0.96).stop);
        assert_eq!(stopper.best_epoch(), 3);
    }
}
