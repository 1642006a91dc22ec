//! Training loop with early stopping, plus thresholded binary
//! evaluation under binary/macro/weighted averaging.

pub mod config;
pub mod early;
pub mod eval;
pub mod trainer;

pub use config::TrainConfig;
pub use early::EarlyStopper;
pub use eval::{
    confusion, metrics, predict, probabilities, Averaging, AveragedMetrics, ClassMetrics,
    ConfusionMatrix, EvalReport,
};
pub use trainer::{batch_ranges, train, train_with_progress, validation_loss, EpochLog, TrainOutcome};
