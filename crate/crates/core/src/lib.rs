//! Forecasting wheat yellow rust occurrence from monthly weather
//! features, built from scratch: a deterministic f64 neural-network
//! engine (dense + LSTM with exact backprop-through-time, Adam, BCE on
//! logits, finite-difference gradient checking), a CSV data pipeline
//! that windows regional month series at predictive leads 0-6, a seeded
//! synthetic data generator with a planted lag-local signal, and the
//! training/evaluation machinery to sweep leads and report
//! accuracy/precision/recall/F1.
//!
//! Everything is deterministic given the configured seed: identical
//! runs produce bit-identical parameters, metrics and artifacts.

pub mod data;
pub mod error;
pub mod matrix;
pub mod nn;
pub mod rng;
pub mod synth;
pub mod train;

pub use error::{Error, Result};
pub use matrix::Matrix;
