//! Binary cross-entropy computed from logits.
//!
//! The softplus form `max(z,0) - z*y + ln(1+e^-|z|)` never materializes
//! log(0), so the loss is finite for every f64 logit. The gradient of the
//! batch mean is `(sigmoid(z) - y) / n` per example.

use crate::error::{Error, Result};
use crate::nn::activation::{sigmoid, softplus};

/// Mean BCE over the batch plus the gradient on each logit.
///
/// `pos_weight` scales the contribution (loss and gradient) of positive
/// examples; 1.0 reproduces the unweighted loss. The mean divides by the
/// batch size, not by the weight sum.
pub fn bce_with_logits(logits: &[f64], labels: &[bool], pos_weight: f64) -> Result<(f64, Vec<f64>)> {
    if logits.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if logits.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: logits.len(),
            right: labels.len(),
        });
    }
    let n = logits.len() as f64;
    let mut loss = 0.0;
    let mut grad = Vec::with_capacity(logits.len());
    for (&z, &label) in logits.iter().zip(labels) {
        let y = if label { 1.0 } else { 0.0 };
        let w = if label { pos_weight } else { 1.0 };
        // softplus(-z) + z*(1-y)  ==  max(z,0) - z*y + ln(1+e^-|z|)
        loss += w * (softplus(-z) + z * (1.0 - y));
        grad.push(w * (sigmoid(z) - y) / n);
    }
    Ok((loss / n, grad))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confident_correct_is_near_zero() {
        let (loss, _) = bce_with_logits(&[40.0], &[true], 1.0).unwrap();
        assert!(loss < 1e-12);
        assert!(loss >= 0.0);
    }

    #[test]
    fn logit_zero_gives_ln2() {
        let (loss, grad) = bce_with_logits(&[0.0], &[true], 1.0).unwrap();
        assert!((loss - std::f64::consts::LN_2).abs() < 1e-12);
        assert!((grad[0] - (-0.5)).abs() < 1e-15);
    }

    #[test]
    fn extreme_wrong_logit_stays_finite() {
        let (loss, grad) = bce_with_logits(&[-1000.0], &[true], 1.0).unwrap();
        assert!(loss.is_finite());
        assert!((loss - 1000.0).abs() < 1e-9);
        assert!(grad[0].is_finite());
    }

    #[test]
    fn empty_batch_is_an_error() {
        assert!(matches!(
            bce_with_logits(&[], &[], 1.0),
            Err(Error::EmptyBatch)
        ));
    }

    #[test]
    fn gradient_is_mean_of_sigmoid_minus_label() {
        let logits = [0.5, -1.2, 3.0, 0.0];
        let labels = [true, false, true, false];
        let (_, grad) = bce_with_logits(&logits, &labels, 1.0).unwrap();
        for ((&z, &lab), g) in logits.iter().zip(&labels).zip(&grad) {
            let y = if lab { 1.0 } else { 0.0 };
            assert!((g - (sigmoid(z) - y) / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn loss_matches_finite_difference_of_gradient() {
        // d(loss)/d(logit_i) central difference against the analytic grad.
        let logits = vec![0.3, -0.7, 1.1];
        let labels = vec![true, false, false];
        let (_, grad) = bce_with_logits(&logits, &labels, 1.0).unwrap();
        let h = 1e-6;
        for i in 0..logits.len() {
            let mut plus = logits.clone();
            plus[i] += h;
            let mut minus = logits.clone();
            minus[i] -= h;
            let (lp, _) = bce_with_logits(&plus, &labels, 1.0).unwrap();
            let (lm, _) = bce_with_logits(&minus, &labels, 1.0).unwrap();
            let numeric = (lp - lm) / (2.0 * h);
            assert!((numeric - grad[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn pos_weight_scales_positive_terms() {
        let (l1, g1) = bce_with_logits(&[0.0, 0.0], &[true, false], 2.0).unwrap();
        let (l0, g0) = bce_with_logits(&[0.0, 0.0], &[true, false], 1.0).unwrap();
        let ln2 = std::f64::consts::LN_2;
        assert!((l0 - ln2).abs() < 1e-12);
        assert!((l1 - 1.5 * ln2).abs() < 1e-12);
        assert!((g1[0] - 2.0 * g0[0]).abs() < 1e-15);
        assert!((g1[1] - g0[1]).abs() < 1e-15);
    }
}
