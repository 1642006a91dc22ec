//! Minimal deterministic f64 neural-network engine: dense and LSTM
//! layers with exact analytic backward passes, BCE-on-logits, Adam, and
//! a finite-difference gradient checker.

pub mod activation;
pub mod adam;
pub mod checkpoint;
pub mod dense;
pub mod fcnn;
pub mod gradcheck;
pub mod loss;
pub mod lstm;
pub mod model;

pub use activation::{relu, sigmoid};
pub use adam::{AdamConfig, AdamState};
pub use checkpoint::Checkpoint;
pub use dense::DenseLayer;
pub use fcnn::FcnnParams;
pub use gradcheck::{grad_check, grad_check_against, GradCheckReport};
pub use loss::bce_with_logits;
pub use lstm::{lstm_cell_forward, LstmParams};
pub use model::{Arch, Gradients, ModelParams};
