//! Tricubic Catmull-Rom interpolation of samples on a regular 3-D grid.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid shape {shape:?} needs {expected} values, got {got}")]
    Size {
        shape: [usize; 3],
        expected: usize,
        got: usize,
    },
    #[error("grid axis {axis} needs at least 2 samples and lo < hi")]
    Axis { axis: usize },
    #[error("grid value at index {index} is not finite")]
    NonFinite { index: usize },
}

/// Samples `values[(i*n1 + j)*n2 + k]` at `lo + (i, j, k) * step`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid3 {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    pub shape: [usize; 3],
    pub values: Vec<f64>,
}

impl Grid3 {
    pub fn new(lo: [f64; 3], hi: [f64; 3], shape: [usize; 3], values: Vec<f64>) -> Result<Self, GridError> {
        let g = Grid3 { lo, hi, shape, values };
        g.validate()?;
        Ok(g)
    }

    /// Samples `f` at the grid nodes.
    pub fn sample(lo: [f64; 3], hi: [f64; 3], shape: [usize; 3], f: impl Fn([f64; 3]) -> f64) -> Result<Self, GridError> {
        let mut values = Vec::with_capacity(shape[0] * shape[1] * shape[2]);
        for i in 0..shape[0] {
            for j in 0..shape[1] {
                for k in 0..shape[2] {
                    values.push(f(node(lo, hi, shape, [i, j, k])));
                }
            }
        }
        Self::new(lo, hi, shape, values)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        for axis in 0..3 {
            if self.shape[axis] < 2 || !(self.lo[axis] < self.hi[axis]) {
                return Err(GridError::Axis { axis });
            }
        }
        let expected = self.shape.iter().product();
        if self.values.len() != expected {
            return Err(GridError::Size {
                shape: self.shape,
                expected,
                got: self.values.len(),
            });
        }
        if let Some(index) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite { index });
        }
        Ok(())
    }

    fn at(&self, i: isize, j: isize, k: isize) -> f64 {
        let c = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
        let (i, j, k) = (c(i, self.shape[0]), c(j, self.shape[1]), c(k, self.shape[2]));
        self.values[(i * self.shape[1] + j) * self.shape[2] + k]
    }

    fn step(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / (self.shape[axis] - 1) as f64
    }

    /// Interpolated value and gradient. Points outside the grid are clamped.
    pub fn eval_grad(&self, u: [f64; 3]) -> (f64, [f64; 3]) {
        let mut base = [0isize; 3];
        let mut w = [[0.0; 4]; 3];
        let mut dw = [[0.0; 4]; 3];
        let mut inside = [true; 3];
        for a in 0..3 {
            let h = self.step(a);
            let s = (u[a] - self.lo[a]) / h;
            let n = self.shape[a] as f64 - 1.0;
            inside[a] = (0.0..=n).contains(&s);
            let s = s.clamp(0.0, n);
            let cell = (s.floor() as isize).min(self.shape[a] as isize - 2);
            let t = s - cell as f64;
            base[a] = cell - 1;
            w[a] = weights(t);
            dw[a] = dweights(t).map(|x| x / h);
        }
        let mut v = 0.0;
        let mut g = [0.0; 3];
        for (di, (wi, dwi)) in w[0].iter().zip(&dw[0]).enumerate() {
            for (dj, (wj, dwj)) in w[1].iter().zip(&dw[1]).enumerate() {
                for (dk, (wk, dwk)) in w[2].iter().zip(&dw[2]).enumerate() {
                    let f = self.at(base[0] + di as isize, base[1] + dj as isize, base[2] + dk as isize);
                    v += wi * wj * wk * f;
                    g[0] += dwi * wj * wk * f;
                    g[1] += wi * dwj * wk * f;
                    g[2] += wi * wj * dwk * f;
                }
            }
        }
        for a in 0..3 {
            if !inside[a] {
                g[a] = 0.0;
            }
        }
        (v, g)
    }

    pub fn eval(&self, u: [f64; 3]) -> f64 {
        self.eval_grad(u).0
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn node(lo: [f64; 3], hi: [f64; 3], shape: [usize; 3], idx: [usize; 3]) -> [f64; 3] {
    std::array::from_fn(|a| lo[a] + (hi[a] - lo[a]) * idx[a] as f64 / (shape[a] - 1) as f64)
}

/// Catmull-Rom weights for the four nodes around a cell, `t ∈ [0, 1]`.
fn weights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}

fn dweights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    [
        0.5 * (-3.0 * t2 + 4.0 * t - 1.0),
        0.5 * (9.0 * t2 - 10.0 * t),
        0.5 * (-9.0 * t2 + 8.0 * t + 1.0),
        0.5 * (3.0 * t2 - 2.0 * t),
    ]
}
