//! Finite-difference gradient checker.
//!
//! Compares analytic gradients against central finite differences of the
//! scalar batch loss, block by block, and reports the worst relative
//! error per block. The checker never fails hard; failures are carried
//! in the report.

use crate::error::Result;
use crate::matrix::Matrix;
use crate::nn::model::{Gradients, ModelParams};

#[derive(Debug, Clone)]
pub struct BlockCheck {
    pub name: String,
    pub max_rel_err: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    pub blocks: Vec<BlockCheck>,
    pub h: f64,
    pub tol: f64,
}

impl GradCheckReport {
    pub fn pass(&self) -> bool {
        self.blocks.iter().all(|b| b.pass)
    }

    pub fn max_rel_err(&self) -> f64 {
        self.blocks.iter().map(|b| b.max_rel_err).fold(0.0, f64::max)
    }

    /// First failing block, if any.
    pub fn first_failure(&self) -> Option<&BlockCheck> {
        self.blocks.iter().find(|b| !b.pass)
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / (a.abs() + b.abs()).max(1e-8)
}

/// Check the model's own analytic gradients on the given batch.
pub fn grad_check(
    params: &ModelParams,
    xs: &[&Matrix],
    ys: &[bool],
    h: f64,
    tol: f64,
) -> Result<GradCheckReport> {
    let (_, analytic) = params.batch_grads(xs, ys, 1.0)?;
    grad_check_against(params, &analytic, xs, ys, h, tol)
}

/// Check an externally supplied gradient set against finite differences.
/// Lets callers verify that a corrupted gradient is actually caught.
pub fn grad_check_against(
    params: &ModelParams,
    analytic: &Gradients,
    xs: &[&Matrix],
    ys: &[bool],
    h: f64,
    tol: f64,
) -> Result<GradCheckReport> {
    assert!(h > 0.0, "finite-difference step must be positive");
    let analytic_blocks = analytic.blocks();
    let mut report = GradCheckReport {
        blocks: Vec::with_capacity(analytic_blocks.len()),
        h,
        tol,
    };

    let mut work = params.clone();
    let n_blocks = analytic_blocks.len();
    for bi in 0..n_blocks {
        let (name, a_block) = {
            let b = &analytic_blocks[bi];
            (b.0.clone(), b.1.to_vec())
        };
        let mut max_rel: f64 = 0.0;
        for idx in 0..a_block.len() {
            let orig = work.blocks_mut()[bi].1[idx];
            work.blocks_mut()[bi].1[idx] = orig + h;
            let loss_plus = work.batch_loss(xs, ys, 1.0)?;
            work.blocks_mut()[bi].1[idx] = orig - h;
            let loss_minus = work.batch_loss(xs, ys, 1.0)?;
            work.blocks_mut()[bi].1[idx] = orig;
            let numeric = (loss_plus - loss_minus) / (2.0 * h);
            max_rel = max_rel.max(rel_err(a_block[idx], numeric));
        }
        report.blocks.push(BlockCheck {
            pass: max_rel < tol,
            name,
            max_rel_err: max_rel,
        });
    }
    Ok(report)
}
