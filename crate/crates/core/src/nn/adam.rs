//! Adam optimizer with bias correction.

use crate::error::{Error, Result};
use crate::nn::model::{Gradients, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            lr: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Per-parameter first and second moments, mirroring the model's block
/// structure, plus the step counter used for bias correction.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub cfg: AdamConfig,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    t: u64,
}

/// The update kernel for one parameter block at step `t` (1-based):
///
/// ```text
/// m <- b1*m + (1-b1)*g         v <- b2*v + (1-b2)*g^2
/// m_hat = m/(1-b1^t)           v_hat = v/(1-b2^t)
/// p <- p - lr * m_hat / (sqrt(v_hat) + eps)
/// ```
pub fn adam_update_block(
    cfg: &AdamConfig,
    t: u64,
    p: &mut [f64],
    g: &[f64],
    m: &mut [f64],
    v: &mut [f64],
) {
    debug_assert!(t >= 1);
    let bc1 = 1.0 - cfg.beta1.powi(t as i32);
    let bc2 = 1.0 - cfg.beta2.powi(t as i32);
    for i in 0..p.len() {
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
        let m_hat = m[i] / bc1;
        let v_hat = v[i] / bc2;
        p[i] -= cfg.lr * m_hat / (v_hat.sqrt() + cfg.eps);
    }
}

impl AdamState {
    pub fn new(params: &ModelParams, cfg: AdamConfig) -> Self {
        let shapes: Vec<usize> = params.blocks().iter().map(|(_, b)| b.len()).collect();
        AdamState {
            cfg,
            m: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            v: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            t: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.t
    }

    /// Apply one Adam step. The step counter increments exactly once per
    /// call; a zero gradient with fresh moments leaves parameters
    /// untouched.
    pub fn step(&mut self, params: &mut ModelParams, grads: &Gradients) -> Result<()> {
        let g_blocks = grads.blocks();
        let mut p_blocks = params.blocks_mut();
        if p_blocks.len() != g_blocks.len() || p_blocks.len() != self.m.len() {
            return Err(Error::ShapeMismatch {
                context: "adam_step",
                expected: format!("{} blocks", self.m.len()),
                got: format!("{} param / {} grad", p_blocks.len(), g_blocks.len()),
            });
        }
        for (i, ((_, p), (_, g))) in p_blocks.iter().zip(&g_blocks).enumerate() {
            if p.len() != g.len() || p.len() != self.m[i].len() {
                return Err(Error::ShapeMismatch {
                    context: "adam_step",
                    expected: format!("block {i} of {} entries", self.m[i].len()),
                    got: format!("{} param / {} grad", p.len(), g.len()),
                });
            }
        }
        self.t += 1;
        for (i, ((_, p), (_, g))) in p_blocks.iter_mut().zip(&g_blocks).enumerate() {
            adam_update_block(&self.cfg, self.t, p, g, &mut self.m[i], &mut self.v[i]);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::fcnn::FcnnParams;

    fn tiny_model() -> ModelParams {
        ModelParams::Fcnn(FcnnParams::zeros(2, &[2, 2, 2]))
    }

    #[test]
    fn zero_gradient_is_identity_on_fresh_state() {
        let mut params = tiny_model();
        let before = params.clone();
        let grads = Gradients::zeros_like(&params);
        let mut state = AdamState::new(&params, AdamConfig::default());
        state.step(&mut params, &grads).unwrap();
        assert_eq!(params, before);
        assert_eq!(state.step_count(), 1);
    }

    #[test]
    fn one_step_scalar_hand_value() {
        // Fresh state, theta = 0, g = 1, lr = 0.001:
        // m_hat = v_hat = 1, so theta_1 = -0.001 / (1 + 1e-8).
        let cfg = AdamConfig::default();
        let mut p = [0.0];
        let mut m = [0.0];
        let mut v = [0.0];
        adam_update_block(&cfg, 1, &mut p, &[1.0], &mut m, &mut v);
        let expected = -0.001 / (1.0 + 1e-8);
        assert!((p[0] - expected).abs() < 1e-18);
        assert!((p[0] - (-0.000_999_999_99)).abs() < 1e-12);
    }

    #[test]
    fn three_steps_match_hand_recurrence() {
        // Independent recurrence for g = (1, 1, 1) on a scalar.
        let cfg = AdamConfig::default();
        let (mut m_ref, mut v_ref, mut p_ref) = (0.0f64, 0.0f64, 0.0f64);
        let mut p = [0.0];
        let mut m = [0.0];
        let mut v = [0.0];
        for t in 1..=3u64 {
            m_ref = 0.9 * m_ref + 0.1;
            v_ref = 0.999 * v_ref + 0.001;
            let m_hat = m_ref / (1.0 - 0.9f64.powi(t as i32));
            let v_hat = v_ref / (1.0 - 0.999f64.powi(t as i32));
            p_ref -= 0.001 * m_hat / (v_hat.sqrt() + 1e-8);

            adam_update_block(&cfg, t, &mut p, &[1.0], &mut m, &mut v);
            assert!(
                (p[0] - p_ref).abs() < 1e-12,
                "step {t}: {} vs {}",
                p[0],
                p_ref
            );
        }
        // For constant unit gradients both bias-corrected moments are
        // exactly 1 at every step, so each step subtracts lr/(1+eps).
        assert!((p[0] - 3.0 * (-0.001 / (1.0 + 1e-8))).abs() < 1e-12);
    }

    #[test]
    fn second_moment_stays_nonnegative_and_t_increments() {
        let mut params = tiny_model();
        let mut grads = Gradients::zeros_like(&params);
        if let Gradients::Fcnn(g) = &mut grads {
            for l in &mut g.layers {
                for w in l.w.data_mut() {
                    *w = -0.3;
                }
            }
        }
        let mut state = AdamState::new(&params, AdamConfig::default());
        for expect_t in 1..=4 {
            state.step(&mut params, &grads).unwrap();
            assert_eq!(state.step_count(), expect_t);
        }
        assert!(state.v.iter().flatten().all(|&x| x >= 0.0));
    }

    #[test]
    fn mismatched_gradients_are_rejected() {
        let mut params = tiny_model();
        let other = ModelParams::Fcnn(FcnnParams::zeros(3, &[2, 2, 2]));
        let grads = Gradients::zeros_like(&other);
        let mut state = AdamState::new(&params, AdamConfig::default());
        assert!(matches!(
            state.step(&mut params, &grads),
            Err(Error::ShapeMismatch { .. })
        ));
    }
}
