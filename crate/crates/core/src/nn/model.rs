//! Architecture-tagged parameter sets and the batch glue shared by the
//! trainer and the gradient checker.
//!
//! Parameters and gradients expose a canonical block order (used by the
//! Adam state and the checkpoint byte layout):
//!
//! - FCNN: `fc1.w, fc1.b, fc2.w, fc2.b, fc3.w, fc3.b, out.w, out.b`
//! - LSTM: `lstm1.w_ih, lstm1.w_hh, lstm1.b, lstm2..., head.w, head.b`

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nn::fcnn::{FcnnCache, FcnnGrads, FcnnParams};
use crate::nn::loss::bce_with_logits;
use crate::nn::lstm::{LstmCache, LstmGrads, LstmParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arch {
    Fcnn,
    Lstm,
}

impl Arch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Arch::Fcnn => "fcnn",
            Arch::Lstm => "lstm",
        }
    }

    pub fn parse(s: &str) -> Result<Arch> {
        match s {
            "fcnn" => Ok(Arch::Fcnn),
            "lstm" => Ok(Arch::Lstm),
            other => Err(Error::InvalidConfig(format!(
                "unknown model {other:?} (expected fcnn or lstm)"
            ))),
        }
    }
}

impl fmt::Display for Arch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Fcnn(FcnnParams),
    Lstm(LstmParams),
}

#[derive(Debug, Clone)]
pub enum Gradients {
    Fcnn(FcnnGrads),
    Lstm(LstmGrads),
}

pub enum BatchCache {
    Fcnn(FcnnCache),
    Lstm(Vec<LstmCache>),
}

impl ModelParams {
    pub fn arch(&self) -> Arch {
        match self {
            ModelParams::Fcnn(_) => Arch::Fcnn,
            ModelParams::Lstm(_) => Arch::Lstm,
        }
    }

    pub fn param_count(&self) -> usize {
        match self {
            ModelParams::Fcnn(p) => p.param_count(),
            ModelParams::Lstm(p) => p.param_count(),
        }
    }

    /// Expected shape of one example: FCNN consumes any `T x F` window
    /// whose flattened length matches the input layer, LSTM consumes a
    /// sequence whose feature width matches layer 1.
    pub fn input_width(&self) -> usize {
        match self {
            ModelParams::Fcnn(p) => p.input_width(),
            ModelParams::Lstm(p) => p.input_width(),
        }
    }

    pub fn blocks(&self) -> Vec<(String, &[f64])> {
        match self {
            ModelParams::Fcnn(p) => {
                let n = p.layers.len();
                p.layers
                    .iter()
                    .enumerate()
                    .flat_map(|(i, l)| {
                        let tag = fcnn_block_tag(i, n);
                        [
                            (format!("{tag}.w"), l.w.data()),
                            (format!("{tag}.b"), l.b.as_slice()),
                        ]
                    })
                    .collect()
            }
            ModelParams::Lstm(p) => {
                let mut out: Vec<(String, &[f64])> = p
                    .layers
                    .iter()
                    .enumerate()
                    .flat_map(|(i, l)| {
                        [
                            (format!("lstm{}.w_ih", i + 1), l.w_ih.data()),
                            (format!("lstm{}.w_hh", i + 1), l.w_hh.data()),
                            (format!("lstm{}.b", i + 1), l.b.as_slice()),
                        ]
                    })
                    .collect();
                out.push(("head.w".to_string(), p.head.w.data()));
                out.push(("head.b".to_string(), p.head.b.as_slice()));
                out
            }
        }
    }

    pub fn blocks_mut(&mut self) -> Vec<(String, &mut [f64])> {
        match self {
            ModelParams::Fcnn(p) => {
                let n = p.layers.len();
                p.layers
                    .iter_mut()
                    .enumerate()
                    .flat_map(|(i, l)| {
                        let tag = fcnn_block_tag(i, n);
                        [
                            (format!("{tag}.w"), l.w.data_mut()),
                            (format!("{tag}.b"), l.b.as_mut_slice()),
                        ]
                    })
                    .collect()
            }
            ModelParams::Lstm(p) => {
                let mut out: Vec<(String, &mut [f64])> = p
                    .layers
                    .iter_mut()
                    .enumerate()
                    .flat_map(|(i, l)| {
                        [
                            (format!("lstm{}.w_ih", i + 1), l.w_ih.data_mut()),
                            (format!("lstm{}.w_hh", i + 1), l.w_hh.data_mut()),
                            (format!("lstm{}.b", i + 1), l.b.as_mut_slice()),
                        ]
                    })
                    .collect();
                out.push(("head.w".to_string(), p.head.w.data_mut()));
                out.push(("head.b".to_string(), p.head.b.as_mut_slice()));
                out
            }
        }
    }

    /// Logits for a batch of per-example windows plus the backward cache.
    pub fn forward_batch(&self, xs: &[&Matrix]) -> Result<(Vec<f64>, BatchCache)> {
        if xs.is_empty() {
            return Err(Error::EmptyBatch);
        }
        match self {
            ModelParams::Fcnn(p) => {
                let batch = flatten_batch(xs, p.input_width())?;
                let (logits, cache) = p.forward(&batch)?;
                Ok((logits, BatchCache::Fcnn(cache)))
            }
            ModelParams::Lstm(p) => {
                let mut logits = Vec::with_capacity(xs.len());
                let mut caches = Vec::with_capacity(xs.len());
                for x in xs {
                    let (logit, cache) = p.forward(x)?;
                    logits.push(logit);
                    caches.push(cache);
                }
                Ok((logits, BatchCache::Lstm(caches)))
            }
        }
    }

    pub fn backward_batch(&self, cache: &BatchCache, d_logits: &[f64]) -> Result<Gradients> {
        match (self, cache) {
            (ModelParams::Fcnn(p), BatchCache::Fcnn(c)) => {
                Ok(Gradients::Fcnn(p.backward(c, d_logits)?))
            }
            (ModelParams::Lstm(p), BatchCache::Lstm(cs)) => {
                if cs.len() != d_logits.len() {
                    return Err(Error::StaleCache("lstm batch cache length"));
                }
                let mut total = LstmGrads::zeros_like(p);
                for (c, &d) in cs.iter().zip(d_logits) {
                    let g = p.backward(c, d)?;
                    accumulate_lstm(&mut total, &g);
                }
                Ok(Gradients::Lstm(total))
            }
            _ => Err(Error::StaleCache("cache architecture does not match params")),
        }
    }

    /// Mean BCE loss of the batch without keeping gradients.
    pub fn batch_loss(&self, xs: &[&Matrix], ys: &[bool], pos_weight: f64) -> Result<f64> {
        let (logits, _) = self.forward_batch(xs)?;
        Ok(bce_with_logits(&logits, ys, pos_weight)?.0)
    }

    /// Mean BCE loss and exact gradients for one mini-batch.
    pub fn batch_grads(
        &self,
        xs: &[&Matrix],
        ys: &[bool],
        pos_weight: f64,
    ) -> Result<(f64, Gradients)> {
        let (logits, cache) = self.forward_batch(xs)?;
        let (loss, d_logits) = bce_with_logits(&logits, ys, pos_weight)?;
        let grads = self.backward_batch(&cache, &d_logits)?;
        Ok((loss, grads))
    }
}

fn fcnn_block_tag(i: usize, n_layers: usize) -> String {
    if i + 1 == n_layers {
        "out".to_string()
    } else {
        format!("fc{}", i + 1)
    }
}

/// Stack per-example windows into one `[n x input_width]` batch,
/// flattening each window row-major (month 0 first).
fn flatten_batch(xs: &[&Matrix], input_width: usize) -> Result<Matrix> {
    let mut data = Vec::with_capacity(xs.len() * input_width);
    for x in xs {
        if x.rows() * x.cols() != input_width {
            return Err(Error::ShapeMismatch {
                context: "fcnn batch",
                expected: format!("{input_width} values per example"),
                got: format!("{}x{}", x.rows(), x.cols()),
            });
        }
        data.extend_from_slice(x.data());
    }
    Matrix::from_vec(xs.len(), input_width, data)
}

fn accumulate_lstm(total: &mut LstmGrads, g: &LstmGrads) {
    for (t, s) in total.layers.iter_mut().zip(&g.layers) {
        for (a, b) in t.w_ih.data_mut().iter_mut().zip(s.w_ih.data()) {
            *a += b;
        }
        for (a, b) in t.w_hh.data_mut().iter_mut().zip(s.w_hh.data()) {
            *a += b;
        }
        for (a, b) in t.b.iter_mut().zip(&s.b) {
            *a += b;
        }
    }
    total.head.add_assign(&g.head);
}

impl Gradients {
    pub fn zeros_like(params: &ModelParams) -> Self {
        match params {
            ModelParams::Fcnn(p) => Gradients::Fcnn(FcnnGrads::zeros_like(p)),
            ModelParams::Lstm(p) => Gradients::Lstm(LstmGrads::zeros_like(p)),
        }
    }

    pub fn blocks(&self) -> Vec<(String, &[f64])> {
        match self {
            Gradients::Fcnn(g) => {
                let n = g.layers.len();
                g.layers
                    .iter()
                    .enumerate()
                    .flat_map(|(i, l)| {
                        let tag = fcnn_block_tag(i, n);
                        [
                            (format!("{tag}.w"), l.w.data()),
                            (format!("{tag}.b"), l.b.as_slice()),
                        ]
                    })
                    .collect()
            }
            Gradients::Lstm(g) => {
                let mut out: Vec<(String, &[f64])> = g
                    .layers
                    .iter()
                    .enumerate()
                    .flat_map(|(i, l)| {
                        [
                            (format!("lstm{}.w_ih", i + 1), l.w_ih.data()),
                            (format!("lstm{}.w_hh", i + 1), l.w_hh.data()),
                            (format!("lstm{}.b", i + 1), l.b.as_slice()),
                        ]
                    })
                    .collect();
                out.push(("head.w".to_string(), g.head.w.data()));
                out.push(("head.b".to_string(), g.head.b.as_slice()));
                out
            }
        }
    }

    pub fn blocks_mut(&mut self) -> Vec<(String, &mut [f64])> {
        match self {
            Gradients::Fcnn(g) => {
                let n = g.layers.len();
                g.layers
                    .iter_mut()
                    .enumerate()
                    .flat_map(|(i, l)| {
                        let tag = fcnn_block_tag(i, n);
                        [
                            (format!("{tag}.w"), l.w.data_mut()),
                            (format!("{tag}.b"), l.b.as_mut_slice()),
                        ]
                    })
                    .collect()
            }
            Gradients::Lstm(g) => {
                let mut out: Vec<(String, &mut [f64])> = g
                    .layers
                    .iter_mut()
                    .enumerate()
                    .flat_map(|(i, l)| {
                        [
                            (format!("lstm{}.w_ih", i + 1), l.w_ih.data_mut()),
                            (format!("lstm{}.w_hh", i + 1), l.w_hh.data_mut()),
                            (format!("lstm{}.b", i + 1), l.b.as_mut_slice()),
                        ]
                    })
                    .collect();
                out.push(("head.w".to_string(), g.head.w.data_mut()));
                out.push(("head.b".to_string(), g.head.b.as_mut_slice()));
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn block_order_is_stable_and_congruent() {
        let mut rng = rng_from_seed(1);
        let params = ModelParams::Lstm(LstmParams::with_shape(3, 2, 2, &mut rng));
        let names: Vec<String> = params.blocks().into_iter().map(|(n, _)| n).collect();
        assert_eq!(
            names,
            vec![
                "lstm1.w_ih",
                "lstm1.w_hh",
                "lstm1.b",
                "lstm2.w_ih",
                "lstm2.w_hh",
                "lstm2.b",
                "head.w",
                "head.b"
            ]
        );
        let grads = Gradients::zeros_like(&params);
        let p_shapes: Vec<usize> = params.blocks().iter().map(|(_, b)| b.len()).collect();
        let g_shapes: Vec<usize> = grads.blocks().iter().map(|(_, b)| b.len()).collect();
        assert_eq!(p_shapes, g_shapes);
    }

    #[test]
    fn fcnn_block_names() {
        let params = ModelParams::Fcnn(FcnnParams::zeros(4, &[3, 2, 2]));
        let names: Vec<String> = params.blocks().into_iter().map(|(n, _)| n).collect();
        assert_eq!(
            names,
            vec!["fc1.w", "fc1.b", "fc2.w", "fc2.b", "fc3.w", "fc3.b", "out.w", "out.b"]
        );
    }

    #[test]
    fn zero_models_predict_half_for_any_input() {
        use crate::nn::activation::sigmoid;
        let fcnn = ModelParams::Fcnn(FcnnParams::zeros(8, &[4, 3, 2]));
        let lstm = ModelParams::Lstm(LstmParams::zeros(4, 3, 2));
        let x_f = Matrix::from_vec(2, 4, vec![0.7; 8]).unwrap();
        let x_l = Matrix::from_vec(5, 4, vec![-1.3; 20]).unwrap();
        let (lf, _) = fcnn.forward_batch(&[&x_f]).unwrap();
        let (ll, _) = lstm.forward_batch(&[&x_l]).unwrap();
        assert_eq!(sigmoid(lf[0]), 0.5);
        assert_eq!(sigmoid(ll[0]), 0.5);
    }

    #[test]
    fn fcnn_batch_rejects_wrong_window_size() {
        let params = ModelParams::Fcnn(FcnnParams::zeros(8, &[4, 3, 2]));
        let x = Matrix::zeros(3, 3);
        assert!(matches!(
            params.forward_batch(&[&x]),
            Err(Error::ShapeMismatch { .. })
        ));
    }
}
