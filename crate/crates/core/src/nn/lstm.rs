//! Stacked LSTM with exact backpropagation-through-time.
//!
//! Gate blocks are ordered (input, forget, cell-candidate, output)
//! within the stacked `4H` dimension of `w_ih`, `w_hh` and `b`; the
//! checkpoint format and the Adam state rely on this order.
//!
//! Cell equations, with `[a_i; a_f; a_g; a_o] = W_ih x_t + W_hh h_prev + b`:
//!
//! ```text
//! i = sigmoid(a_i)    f = sigmoid(a_f)
//! g = tanh(a_g)       o = sigmoid(a_o)
//! c = f .* c_prev + i .* g
//! h = o .* tanh(c)
//! ```

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::nn::activation::sigmoid;
use crate::nn::dense::{DenseGrad, DenseLayer};

pub const LSTM_HIDDEN: usize = 50;
pub const LSTM_LAYERS: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct LstmLayer {
    /// `[4H x D_in]`, gate blocks (i, f, g, o).
    pub w_ih: Matrix,
    /// `[4H x H]`, same block order.
    pub w_hh: Matrix,
    /// `[4H]`.
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams {
    pub layers: Vec<LstmLayer>,
    /// Dense head mapping the final hidden state to one logit.
    pub head: DenseLayer,
}

#[derive(Debug, Clone)]
pub struct LstmLayerGrad {
    pub w_ih: Matrix,
    pub w_hh: Matrix,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct LstmGrads {
    pub layers: Vec<LstmLayerGrad>,
    pub head: DenseGrad,
}

/// Gate activations and cell state for one time step.
#[derive(Debug, Clone)]
pub struct CellStep {
    pub i: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub o: Vec<f64>,
    pub c: Vec<f64>,
    pub tanh_c: Vec<f64>,
}

#[derive(Debug, Clone)]
struct LayerCache {
    /// Layer inputs per step, `T x D_in`.
    xs: Vec<Vec<f64>>,
    /// Hidden states per step.
    hs: Vec<Vec<f64>>,
    steps: Vec<CellStep>,
}

#[derive(Debug, Clone)]
pub struct LstmCache {
    layers: Vec<LayerCache>,
}

impl LstmLayer {
    pub fn hidden(&self) -> usize {
        self.w_hh.cols()
    }

    pub fn in_dim(&self) -> usize {
        self.w_ih.cols()
    }

    pub fn zeros(in_dim: usize, hidden: usize) -> Self {
        LstmLayer {
            w_ih: Matrix::zeros(4 * hidden, in_dim),
            w_hh: Matrix::zeros(4 * hidden, hidden),
            b: vec![0.0; 4 * hidden],
        }
    }

    /// Glorot-uniform matrices (per-gate fan-in/fan-out), zero biases
    /// except the forget-gate block which starts at 1.0.
    pub fn glorot(in_dim: usize, hidden: usize, rng: &mut ChaCha8Rng) -> Self {
        use rand::Rng;
        let mut layer = Self::zeros(in_dim, hidden);
        let lim_ih = (6.0 / (in_dim + hidden) as f64).sqrt();
        for v in layer.w_ih.data_mut() {
            *v = rng.random_range(-lim_ih..lim_ih);
        }
        let lim_hh = (6.0 / (2 * hidden) as f64).sqrt();
        for v in layer.w_hh.data_mut() {
            *v = rng.random_range(-lim_hh..lim_hh);
        }
        for v in &mut layer.b[hidden..2 * hidden] {
            *v = 1.0;
        }
        layer
    }

    pub fn param_count(&self) -> usize {
        self.w_ih.rows() * self.w_ih.cols() + self.w_hh.rows() * self.w_hh.cols() + self.b.len()
    }

    pub fn grad_zeros(&self) -> LstmLayerGrad {
        LstmLayerGrad {
            w_ih: Matrix::zeros(self.w_ih.rows(), self.w_ih.cols()),
            w_hh: Matrix::zeros(self.w_hh.rows(), self.w_hh.cols()),
            b: vec![0.0; self.b.len()],
        }
    }
}

/// One LSTM cell step. Returns the new hidden state, new cell state and
/// the activations needed for the backward pass.
pub fn lstm_cell_forward(
    layer: &LstmLayer,
    x_t: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
) -> Result<(Vec<f64>, Vec<f64>, CellStep)> {
    let hidden = layer.hidden();
    if x_t.len() != layer.in_dim() {
        return Err(Error::ShapeMismatch {
            context: "lstm_cell_forward",
            expected: format!("input of width {}", layer.in_dim()),
            got: format!("{}", x_t.len()),
        });
    }
    if h_prev.len() != hidden || c_prev.len() != hidden {
        return Err(Error::ShapeMismatch {
            context: "lstm_cell_forward",
            expected: format!("state of width {hidden}"),
            got: format!("h {}, c {}", h_prev.len(), c_prev.len()),
        });
    }

    let mut a = layer.w_ih.matvec(x_t);
    let rec = layer.w_hh.matvec(h_prev);
    for ((av, rv), bv) in a.iter_mut().zip(&rec).zip(&layer.b) {
        *av += rv + bv;
    }

    let mut step = CellStep {
        i: vec![0.0; hidden],
        f: vec![0.0; hidden],
        g: vec![0.0; hidden],
        o: vec![0.0; hidden],
        c: vec![0.0; hidden],
        tanh_c: vec![0.0; hidden],
    };
    let mut h = vec![0.0; hidden];
    for j in 0..hidden {
        step.i[j] = sigmoid(a[j]);
        step.f[j] = sigmoid(a[hidden + j]);
        step.g[j] = a[2 * hidden + j].tanh();
        step.o[j] = sigmoid(a[3 * hidden + j]);
        step.c[j] = step.f[j] * c_prev[j] + step.i[j] * step.g[j];
        step.tanh_c[j] = step.c[j].tanh();
        h[j] = step.o[j] * step.tanh_c[j];
    }
    let c = step.c.clone();
    Ok((h, c, step))
}

impl LstmParams {
    /// Paper-architecture network: two layers of 50 units plus a scalar
    /// sigmoid head.
    pub fn init(input_width: usize, rng: &mut ChaCha8Rng) -> Self {
        Self::with_shape(input_width, LSTM_HIDDEN, LSTM_LAYERS, rng)
    }

    pub fn with_shape(
        input_width: usize,
        hidden: usize,
        n_layers: usize,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let mut layers = Vec::with_capacity(n_layers);
        let mut in_dim = input_width;
        for _ in 0..n_layers {
            layers.push(LstmLayer::glorot(in_dim, hidden, rng));
            in_dim = hidden;
        }
        let head = DenseLayer::glorot_uniform(hidden, 1, rng);
        LstmParams { layers, head }
    }

    pub fn zeros(input_width: usize, hidden: usize, n_layers: usize) -> Self {
        let mut layers = Vec::with_capacity(n_layers);
        let mut in_dim = input_width;
        for _ in 0..n_layers {
            layers.push(LstmLayer::zeros(in_dim, hidden));
            in_dim = hidden;
        }
        LstmParams {
            layers,
            head: DenseLayer::zeros(hidden, 1),
        }
    }

    pub fn input_width(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn hidden(&self) -> usize {
        self.layers[0].hidden()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(LstmLayer::param_count).sum::<usize>() + self.head.param_count()
    }

    /// Run the full sequence `[T x input_width]` through the stack and
    /// the head. Initial hidden and cell states are zero. The head reads
    /// the top layer's final hidden state.
    pub fn forward(&self, x: &Matrix) -> Result<(f64, LstmCache)> {
        if x.rows() == 0 {
            return Err(Error::ShapeMismatch {
                context: "lstm_forward",
                expected: "sequence length >= 1".to_string(),
                got: "0".to_string(),
            });
        }
        if x.cols() != self.input_width() {
            return Err(Error::ShapeMismatch {
                context: "lstm_forward",
                expected: format!("{} features", self.input_width()),
                got: format!("{}", x.cols()),
            });
        }
        let t_len = x.rows();
        let mut seq: Vec<Vec<f64>> = (0..t_len).map(|t| x.row(t).to_vec()).collect();
        let mut caches = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let hidden = layer.hidden();
            let mut hs = Vec::with_capacity(t_len);
            let mut steps = Vec::with_capacity(t_len);
            let mut h = vec![0.0; hidden];
            let mut c = vec![0.0; hidden];
            for x_t in &seq {
                let (h_new, c_new, step) = lstm_cell_forward(layer, x_t, &h, &c)?;
                hs.push(h_new.clone());
                steps.push(step);
                h = h_new;
                c = c_new;
            }
            let next_seq = hs.clone();
            caches.push(LayerCache { xs: seq, hs, steps });
            seq = next_seq;
        }
        let last_h = seq.last().expect("non-empty sequence");
        let logit = self
            .head
            .forward(&Matrix::from_vec(1, last_h.len(), last_h.clone())?)?
            .get(0, 0);
        Ok((logit, LstmCache { layers: caches }))
    }

    /// Backpropagation-through-time over the whole sequence. `d_logit`
    /// is the upstream gradient on the scalar logit.
    pub fn backward(&self, cache: &LstmCache, d_logit: f64) -> Result<LstmGrads> {
        if cache.layers.len() != self.layers.len() {
            return Err(Error::StaleCache("lstm cache depth does not match params"));
        }
        for (layer, lc) in self.layers.iter().zip(&cache.layers) {
            if lc.xs.is_empty() || lc.xs.len() != lc.steps.len() || lc.xs.len() != lc.hs.len() {
                return Err(Error::StaleCache("lstm cache is incomplete"));
            }
            if lc.xs[0].len() != layer.in_dim() || lc.hs[0].len() != layer.hidden() {
                return Err(Error::StaleCache("lstm cache widths do not match params"));
            }
        }
        let t_len = cache.layers[0].xs.len();
        let top = cache.layers.last().expect("at least one layer");
        let last_h = top.hs.last().expect("non-empty");
        if self.head.in_dim() != last_h.len() {
            return Err(Error::StaleCache("head width does not match cache"));
        }

        // Head backward by hand: logit = w . h + b.
        let mut head_grad = self.head.grad_zeros();
        for (gw, hv) in head_grad.w.data_mut().iter_mut().zip(last_h) {
            *gw = d_logit * hv;
        }
        head_grad.b[0] = d_logit;
        let d_last_h: Vec<f64> = self.head.w.row(0).iter().map(|w| w * d_logit).collect();

        // Top layer receives the head gradient at the final step only;
        // each lower layer receives the dx sequence of the layer above.
        let mut inject: Vec<Vec<f64>> = vec![vec![0.0; last_h.len()]; t_len];
        *inject.last_mut().expect("non-empty") = d_last_h;

        let mut layer_grads: Vec<Option<LstmLayerGrad>> = vec![None; self.layers.len()];
        for li in (0..self.layers.len()).rev() {
            let (grad, dxs) = layer_backward(&self.layers[li], &cache.layers[li], &inject);
            layer_grads[li] = Some(grad);
            inject = dxs;
        }
        Ok(LstmGrads {
            layers: layer_grads.into_iter().map(Option::unwrap).collect(),
            head: head_grad,
        })
    }
}

/// BPTT through one layer. `inject[t]` is the gradient arriving at h_t
/// from outside the layer (head or the layer above). Returns the layer
/// gradient and the gradient on each input x_t.
fn layer_backward(
    layer: &LstmLayer,
    cache: &LayerCache,
    inject: &[Vec<f64>],
) -> (LstmLayerGrad, Vec<Vec<f64>>) {
    let hidden = layer.hidden();
    let t_len = cache.xs.len();
    let mut grad = layer.grad_zeros();
    let mut dxs = vec![Vec::new(); t_len];
    let mut dh_rec = vec![0.0; hidden];
    let mut dc_rec = vec![0.0; hidden];
    let zero = vec![0.0; hidden];

    for t in (0..t_len).rev() {
        let step = &cache.steps[t];
        let h_prev = if t > 0 { &cache.hs[t - 1] } else { &zero };
        let c_prev = if t > 0 { &cache.steps[t - 1].c } else { &zero };

        let mut da = vec![0.0; 4 * hidden];
        for j in 0..hidden {
            let dh = inject[t][j] + dh_rec[j];
            let (i, f, g, o) = (step.i[j], step.f[j], step.g[j], step.o[j]);
            let tc = step.tanh_c[j];

            let d_o = dh * tc;
            let dc = dc_rec[j] + dh * o * (1.0 - tc * tc);
            let d_i = dc * g;
            let d_g = dc * i;
            let d_f = dc * c_prev[j];
            dc_rec[j] = dc * f;

            da[j] = d_i * i * (1.0 - i);
            da[hidden + j] = d_f * f * (1.0 - f);
            da[2 * hidden + j] = d_g * (1.0 - g * g);
            da[3 * hidden + j] = d_o * o * (1.0 - o);
        }

        add_outer(&mut grad.w_ih, &da, &cache.xs[t]);
        add_outer(&mut grad.w_hh, &da, h_prev);
        for (gb, dav) in grad.b.iter_mut().zip(&da) {
            *gb += dav;
        }
        dxs[t] = layer.w_ih.matvec_t(&da);
        dh_rec = layer.w_hh.matvec_t(&da);
    }
    (grad, dxs)
}

/// `mat[r][c] += u[r] * v[c]`.
fn add_outer(mat: &mut Matrix, u: &[f64], v: &[f64]) {
    let cols = mat.cols();
    let data = mat.data_mut();
    for (r, &uv) in u.iter().enumerate() {
        if uv == 0.0 {
            continue;
        }
        let row = &mut data[r * cols..(r + 1) * cols];
        for (m, &vv) in row.iter_mut().zip(v) {
            *m += uv * vv;
        }
    }
}

impl LstmGrads {
    pub fn zeros_like(params: &LstmParams) -> Self {
        LstmGrads {
            layers: params.layers.iter().map(LstmLayer::grad_zeros).collect(),
            head: params.head.grad_zeros(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::loss::bce_with_logits;
    use crate::rng::rng_from_seed;

    fn random_sequence(t: usize, d: usize, seed: u64) -> Matrix {
        use rand::Rng;
        let mut rng = rng_from_seed(seed);
        Matrix::from_vec(t, d, (0..t * d).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
    }

    #[test]
    fn zero_layer_cell_keeps_state_at_zero() {
        let layer = LstmLayer::zeros(3, 2);
        let (h, c, step) = lstm_cell_forward(&layer, &[1.0, -2.0, 0.5], &[0.0; 2], &[0.0; 2]).unwrap();
        // All gates sit at sigmoid(0) = 0.5 and the candidate at tanh(0) = 0.
        assert_eq!(step.i, vec![0.5, 0.5]);
        assert_eq!(step.f, vec![0.5, 0.5]);
        assert_eq!(step.g, vec![0.0, 0.0]);
        assert_eq!(step.o, vec![0.5, 0.5]);
        assert_eq!(c, vec![0.0, 0.0]);
        assert_eq!(h, vec![0.0, 0.0]);
    }

    #[test]
    fn scalar_cell_hand_evaluation() {
        // H = 1, W_ih = [1;1;1;1], W_hh = 0, b = 0, x = 0, c_prev = 1:
        // all preactivations are 0, so i = f = o = 0.5, g = 0,
        // c = 0.5 * 1 = 0.5, h = 0.5 * tanh(0.5).
        let layer = LstmLayer {
            w_ih: Matrix::from_vec(4, 1, vec![1.0; 4]).unwrap(),
            w_hh: Matrix::zeros(4, 1),
            b: vec![0.0; 4],
        };
        let (h, c, step) = lstm_cell_forward(&layer, &[0.0], &[0.0], &[1.0]).unwrap();
        assert_eq!(step.i, vec![0.5]);
        assert_eq!(step.f, vec![0.5]);
        assert_eq!(step.g, vec![0.0]);
        assert_eq!(step.o, vec![0.5]);
        assert_eq!(c, vec![0.5]);
        let expected = 0.5 * 0.5f64.tanh();
        assert!((h[0] - expected).abs() < 1e-15);
        assert!((h[0] - 0.231_058_578_630_004_9).abs() < 1e-15);
    }

    #[test]
    fn cell_rejects_mismatched_state() {
        let layer = LstmLayer::zeros(4, 50);
        let err = lstm_cell_forward(&layer, &vec![0.0; 4], &vec![0.0; 50], &vec![0.0; 3]);
        assert!(matches!(err, Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn zero_params_give_zero_logit() {
        let params = LstmParams::zeros(5, 4, 2);
        let x = random_sequence(12, 5, 1);
        let (logit, _) = params.forward(&x).unwrap();
        assert_eq!(logit, 0.0);
    }

    #[test]
    fn paper_architecture_parameter_count() {
        let mut rng = rng_from_seed(0);
        let params = LstmParams::init(43, &mut rng);
        // 4*(50*(43+50)+50) + 4*(50*(50+50)+50) + (50+1)
        assert_eq!(params.param_count(), 39_051);
    }

    #[test]
    fn time_order_matters() {
        let mut rng = rng_from_seed(9);
        let params = LstmParams::with_shape(3, 4, 2, &mut rng);
        let x = random_sequence(6, 3, 33);
        let reversed =
            Matrix::from_rows(&(0..6).rev().map(|t| x.row(t).to_vec()).collect::<Vec<_>>()).unwrap();
        let (a, _) = params.forward(&x).unwrap();
        let (b, _) = params.forward(&reversed).unwrap();
        assert!((a - b).abs() > 1e-9, "logit should depend on step order");
    }

    #[test]
    fn rejects_empty_and_wrong_width_sequences() {
        let params = LstmParams::zeros(5, 4, 2);
        assert!(params.forward(&Matrix::zeros(0, 5)).is_err());
        assert!(params.forward(&Matrix::zeros(12, 4)).is_err());
    }

    #[test]
    fn zero_upstream_gradient_gives_zero_grads() {
        let mut rng = rng_from_seed(3);
        let params = LstmParams::with_shape(4, 3, 2, &mut rng);
        let x = random_sequence(5, 4, 8);
        let (_, cache) = params.forward(&x).unwrap();
        let grads = params.backward(&cache, 0.0).unwrap();
        for layer in &grads.layers {
            assert!(layer.w_ih.data().iter().all(|&v| v == 0.0));
            assert!(layer.w_hh.data().iter().all(|&v| v == 0.0));
            assert!(layer.b.iter().all(|&v| v == 0.0));
        }
        assert!(grads.head.w.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn stale_cache_is_detected() {
        let mut rng = rng_from_seed(4);
        let a = LstmParams::with_shape(4, 3, 2, &mut rng);
        let b = LstmParams::with_shape(4, 5, 2, &mut rng);
        let x = random_sequence(5, 4, 8);
        let (_, cache) = a.forward(&x).unwrap();
        assert!(matches!(b.backward(&cache, 1.0), Err(Error::StaleCache(_))));
    }

    /// Central finite differences of the BCE loss, h = 1e-5, checked
    /// against the analytic BPTT gradients at reduced size.
    #[test]
    fn bptt_matches_central_finite_difference() {
        let mut rng = rng_from_seed(21);
        let params = LstmParams::with_shape(5, 4, 2, &mut rng);
        let x = random_sequence(6, 5, 55);
        let label = [true];

        let loss_of = |p: &LstmParams| {
            let (logit, _) = p.forward(&x).unwrap();
            bce_with_logits(&[logit], &label, 1.0).unwrap().0
        };

        let (logit, cache) = params.forward(&x).unwrap();
        let (_, d_logits) = bce_with_logits(&[logit], &label, 1.0).unwrap();
        let grads = params.backward(&cache, d_logits[0]).unwrap();

        let h = 1e-5;
        let mut checked = 0usize;
        for li in 0..params.layers.len() {
            for block in 0..3 {
                let len = match block {
                    0 => grads.layers[li].w_ih.data().len(),
                    1 => grads.layers[li].w_hh.data().len(),
                    _ => grads.layers[li].b.len(),
                };
                for idx in 0..len {
                    let mut plus = params.clone();
                    let mut minus = params.clone();
                    {
                        let (p, m) = (&mut plus.layers[li], &mut minus.layers[li]);
                        match block {
                            0 => {
                                p.w_ih.data_mut()[idx] += h;
                                m.w_ih.data_mut()[idx] -= h;
                            }
                            1 => {
                                p.w_hh.data_mut()[idx] += h;
                                m.w_hh.data_mut()[idx] -= h;
                            }
                            _ => {
                                p.b[idx] += h;
                                m.b[idx] -= h;
                            }
                        }
                    }
                    let numeric = (loss_of(&plus) - loss_of(&minus)) / (2.0 * h);
                    let analytic = match block {
                        0 => grads.layers[li].w_ih.data()[idx],
                        1 => grads.layers[li].w_hh.data()[idx],
                        _ => grads.layers[li].b[idx],
                    };
                    let rel =
                        (numeric - analytic).abs() / (numeric.abs() + analytic.abs()).max(1e-8);
                    assert!(
                        rel < 1e-5,
                        "layer {li} block {block} idx {idx}: {analytic} vs {numeric} (rel {rel})"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 300, "expected to sweep every recurrent parameter");
    }

    /// With W_hh = 0 and T = 1 the network is a single cell plus head;
    /// the BPTT gradients must equal the hand-derived cell gradients.
    #[test]
    fn single_step_without_recurrence_matches_cell_gradients() {
        let mut rng = rng_from_seed(13);
        let mut params = LstmParams::with_shape(3, 2, 1, &mut rng);
        for v in params.layers[0].w_hh.data_mut() {
            *v = 0.0;
        }
        let x = random_sequence(1, 3, 77);
        let (logit, cache) = params.forward(&x).unwrap();
        let d_logit = crate::nn::activation::sigmoid(logit) - 1.0; // BCE, label 1, n = 1
        let grads = params.backward(&cache, d_logit).unwrap();

        // Hand path: a = W_ih x + b; h = o * tanh(c); c = i * g (c_prev = 0).
        let layer = &params.layers[0];
        let hidden = 2usize;
        let x0 = x.row(0);
        let mut a = layer.w_ih.matvec(x0);
        for (av, bv) in a.iter_mut().zip(&layer.b) {
            *av += bv;
        }
        let i: Vec<f64> = (0..hidden).map(|j| sigmoid(a[j])).collect();
        let f: Vec<f64> = (0..hidden).map(|j| sigmoid(a[hidden + j])).collect();
        let g: Vec<f64> = (0..hidden).map(|j| a[2 * hidden + j].tanh()).collect();
        let o: Vec<f64> = (0..hidden).map(|j| sigmoid(a[3 * hidden + j])).collect();
        let c: Vec<f64> = (0..hidden).map(|j| i[j] * g[j]).collect();
        let dh: Vec<f64> = params.head.w.row(0).iter().map(|w| w * d_logit).collect();
        for j in 0..hidden {
            let tc = c[j].tanh();
            let dc = dh[j] * o[j] * (1.0 - tc * tc);
            let da_i = dc * g[j] * i[j] * (1.0 - i[j]);
            let da_f = dc * 0.0 * f[j] * (1.0 - f[j]); // c_prev = 0
            let da_g = dc * i[j] * (1.0 - g[j] * g[j]);
            let da_o = dh[j] * tc * o[j] * (1.0 - o[j]);
            for (k, &xv) in x0.iter().enumerate() {
                assert!((grads.layers[0].w_ih.get(j, k) - da_i * xv).abs() < 1e-14);
                assert!((grads.layers[0].w_ih.get(hidden + j, k) - da_f * xv).abs() < 1e-14);
                assert!((grads.layers[0].w_ih.get(2 * hidden + j, k) - da_g * xv).abs() < 1e-14);
                assert!((grads.layers[0].w_ih.get(3 * hidden + j, k) - da_o * xv).abs() < 1e-14);
            }
            assert!((grads.layers[0].b[j] - da_i).abs() < 1e-14);
            // h_prev = 0, so every recurrent weight gradient vanishes.
            assert!(grads.layers[0].w_hh.row(j).iter().all(|&v| v == 0.0));
        }
    }
}
