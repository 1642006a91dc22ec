//! Fully connected classifier: three ReLU hidden layers and a single
//! linear output unit producing a logit. The class probability is
//! `sigmoid(logit)`.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nn::activation::{relu, relu_backward};
use crate::nn::dense::{DenseGrad, DenseLayer};

pub const FCNN_HIDDEN: [usize; 3] = [128, 64, 32];

#[derive(Debug, Clone, PartialEq)]
pub struct FcnnParams {
    /// Three hidden layers followed by the 1-unit output layer.
    pub layers: Vec<DenseLayer>,
}

/// Per-layer inputs and pre-activations saved by the forward pass.
#[derive(Debug, Clone)]
pub struct FcnnCache {
    inputs: Vec<Matrix>,
    pres: Vec<Matrix>,
}

#[derive(Debug, Clone)]
pub struct FcnnGrads {
    pub layers: Vec<DenseGrad>,
}

impl FcnnParams {
    /// Paper-architecture network: hidden widths 128, 64, 32.
    pub fn init(input_width: usize, rng: &mut ChaCha8Rng) -> Self {
        Self::with_hidden(input_width, &FCNN_HIDDEN, rng)
    }

    /// He-uniform hidden layers, Glorot-uniform output head, zero biases.
    pub fn with_hidden(input_width: usize, hidden: &[usize], rng: &mut ChaCha8Rng) -> Self {
        let mut layers = Vec::with_capacity(hidden.len() + 1);
        let mut in_dim = input_width;
        for &h in hidden {
            layers.push(DenseLayer::he_uniform(in_dim, h, rng));
            in_dim = h;
        }
        layers.push(DenseLayer::glorot_uniform(in_dim, 1, rng));
        FcnnParams { layers }
    }

    pub fn zeros(input_width: usize, hidden: &[usize]) -> Self {
        let mut layers = Vec::with_capacity(hidden.len() + 1);
        let mut in_dim = input_width;
        for &h in hidden {
            layers.push(DenseLayer::zeros(in_dim, h));
            in_dim = h;
        }
        layers.push(DenseLayer::zeros(in_dim, 1));
        FcnnParams { layers }
    }

    pub fn input_width(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn hidden_widths(&self) -> Vec<usize> {
        self.layers[..self.layers.len() - 1]
            .iter()
            .map(DenseLayer::out_dim)
            .collect()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(DenseLayer::param_count).sum()
    }

    /// Forward pass over a batch `[n x input_width]`. Returns one logit
    /// per row plus the cache needed by `backward`.
    pub fn forward(&self, x: &Matrix) -> Result<(Vec<f64>, FcnnCache)> {
        if x.cols() != self.input_width() {
            return Err(Error::ShapeMismatch {
                context: "fcnn_forward",
                expected: format!("{} input columns", self.input_width()),
                got: format!("{}", x.cols()),
            });
        }
        let n_layers = self.layers.len();
        let mut inputs = Vec::with_capacity(n_layers);
        let mut pres = Vec::with_capacity(n_layers);
        let mut cur = x.clone();
        for (i, layer) in self.layers.iter().enumerate() {
            let pre = layer.forward(&cur)?;
            inputs.push(cur);
            let is_output = i == n_layers - 1;
            cur = if is_output { pre.clone() } else { relu(&pre) };
            pres.push(pre);
        }
        let logits = cur.data().to_vec();
        Ok((logits, FcnnCache { inputs, pres }))
    }

    /// Exact gradients of the scalar mean loss given `d_logits`, the
    /// upstream gradient on each logit (already divided by the batch
    /// size by `bce_with_logits`).
    pub fn backward(&self, cache: &FcnnCache, d_logits: &[f64]) -> Result<FcnnGrads> {
        let n_layers = self.layers.len();
        if cache.inputs.len() != n_layers || cache.pres.len() != n_layers {
            return Err(Error::StaleCache("fcnn cache depth does not match params"));
        }
        for (i, layer) in self.layers.iter().enumerate() {
            if cache.inputs[i].cols() != layer.in_dim() || cache.pres[i].cols() != layer.out_dim() {
                return Err(Error::StaleCache("fcnn cache widths do not match params"));
            }
        }
        let batch = cache.inputs[0].rows();
        if d_logits.len() != batch {
            return Err(Error::StaleCache("upstream gradient length does not match batch"));
        }

        let mut grads: Vec<Option<DenseGrad>> = vec![None; n_layers];
        let mut d_cur = Matrix::from_vec(batch, 1, d_logits.to_vec())?;
        for i in (0..n_layers).rev() {
            let (grad, d_input) = self.layers[i].backward(&cache.inputs[i], &d_cur);
            grads[i] = Some(grad);
            if i > 0 {
                d_cur = relu_backward(&cache.pres[i - 1], &d_input);
            }
        }
        Ok(FcnnGrads {
            layers: grads.into_iter().map(Option::unwrap).collect(),
        })
    }
}

impl FcnnGrads {
    pub fn zeros_like(params: &FcnnParams) -> Self {
        FcnnGrads {
            layers: params.layers.iter().map(DenseLayer::grad_zeros).collect(),
        }
    }
}
