//! Dense (affine) layer: `y = x W^T + b`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Weight layout is `[out_dim x in_dim]`, row per output unit.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    pub w: Matrix,
    pub b: Vec<f64>,
}

/// Gradients for one dense layer, shape-congruent with the layer.
#[derive(Debug, Clone)]
pub struct DenseGrad {
    pub w: Matrix,
    pub b: Vec<f64>,
}

impl DenseLayer {
    pub fn zeros(in_dim: usize, out_dim: usize) -> Self {
        DenseLayer {
            w: Matrix::zeros(out_dim, in_dim),
            b: vec![0.0; out_dim],
        }
    }

    /// He-uniform init: U(-sqrt(6/fan_in), +sqrt(6/fan_in)). Used for
    /// ReLU hidden layers.
    pub fn he_uniform(in_dim: usize, out_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let limit = (6.0 / in_dim as f64).sqrt();
        Self::uniform(in_dim, out_dim, limit, rng)
    }

    /// Glorot-uniform init: U(±sqrt(6/(fan_in+fan_out))). Used for the
    /// output head and LSTM matrices.
    pub fn glorot_uniform(in_dim: usize, out_dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let limit = (6.0 / (in_dim + out_dim) as f64).sqrt();
        Self::uniform(in_dim, out_dim, limit, rng)
    }

    fn uniform(in_dim: usize, out_dim: usize, limit: f64, rng: &mut ChaCha8Rng) -> Self {
        let mut layer = Self::zeros(in_dim, out_dim);
        for v in layer.w.data_mut() {
            *v = rng.random_range(-limit..limit);
        }
        layer
    }

    pub fn in_dim(&self) -> usize {
        self.w.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.w.rows()
    }

    pub fn param_count(&self) -> usize {
        self.w.rows() * self.w.cols() + self.b.len()
    }

    /// `x [batch x in] -> x W^T + b [batch x out]`.
    pub fn forward(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.in_dim() {
            return Err(Error::ShapeMismatch {
                context: "dense_forward",
                expected: format!("{} input columns", self.in_dim()),
                got: format!("{}", x.cols()),
            });
        }
        let mut out = x.matmul_bt(&self.w);
        out.add_row_broadcast(&self.b);
        Ok(out)
    }

    /// Backward through the affine map. `x` is the forward input,
    /// `d_out` the gradient on the output. Returns the layer gradient
    /// and the gradient on `x`.
    pub fn backward(&self, x: &Matrix, d_out: &Matrix) -> (DenseGrad, Matrix) {
        let dw = d_out.matmul_at(x);
        let mut db = vec![0.0; self.out_dim()];
        for r in 0..d_out.rows() {
            for (acc, v) in db.iter_mut().zip(d_out.row(r)) {
                *acc += v;
            }
        }
        let dx = d_out.matmul(&self.w);
        (DenseGrad { w: dw, b: db }, dx)
    }

    pub fn grad_zeros(&self) -> DenseGrad {
        DenseGrad {
            w: Matrix::zeros(self.w.rows(), self.w.cols()),
            b: vec![0.0; self.b.len()],
        }
    }
}

impl DenseGrad {
    pub fn add_assign(&mut self, other: &DenseGrad) {
        for (a, b) in self.w.data_mut().iter_mut().zip(other.w.data()) {
            *a += b;
        }
        for (a, b) in self.b.iter_mut().zip(&other.b) {
            *a += b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map() {
        let layer = DenseLayer {
            w: Matrix::from_vec(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap(),
            b: vec![0.0, 0.0],
        };
        let x = Matrix::from_vec(1, 2, vec![3.0, 4.0]).unwrap();
        assert_eq!(layer.forward(&x).unwrap().data(), &[3.0, 4.0]);
    }

    #[test]
    fn hand_multiplied_affine() {
        let layer = DenseLayer {
            w: Matrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap(),
            b: vec![1.0, 1.0],
        };
        let x = Matrix::from_vec(1, 2, vec![1.0, 1.0]).unwrap();
        // rows of W are output units: [1+2, 3+4] + [1, 1] = [4, 8]
        assert_eq!(layer.forward(&x).unwrap().data(), &[4.0, 8.0]);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let layer = DenseLayer::zeros(2, 3);
        let x = Matrix::zeros(1, 3);
        assert!(matches!(
            layer.forward(&x),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn bias_gradient_sums_upstream_rows() {
        let layer = DenseLayer::zeros(2, 1);
        let x = Matrix::from_vec(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let d_out = Matrix::from_vec(3, 1, vec![0.1, 0.2, 0.3]).unwrap();
        let (grad, _) = layer.backward(&x, &d_out);
        assert!((grad.b[0] - 0.6).abs() < 1e-15);
    }
}
