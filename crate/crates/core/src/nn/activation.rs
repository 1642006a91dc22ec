//! Element-wise activations.

use crate::matrix::Matrix;

/// Numerically stable logistic function. Evaluates the branch whose
/// exponential argument is non-positive, so it never overflows for any
/// finite f64 input.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub fn sigmoid_matrix(x: &Matrix) -> Matrix {
    x.map(sigmoid)
}

/// Element-wise max(0, x).
pub fn relu(x: &Matrix) -> Matrix {
    x.map(|v| if v > 0.0 { v } else { 0.0 })
}

/// ReLU subgradient: 1 where the pre-activation is strictly positive,
/// 0 elsewhere. The subgradient at exactly 0 is pinned to 0 so gradient
/// checks are reproducible.
#[inline]
pub fn relu_grad(pre: f64) -> f64 {
    if pre > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Upstream gradient masked by the ReLU subgradient of the pre-activation.
pub fn relu_backward(pre: &Matrix, upstream: &Matrix) -> Matrix {
    pre.zip_map(upstream, |p, u| relu_grad(p) * u)
}

/// ln(1 + e^x) evaluated without overflow.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
