use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fuchs::{CrossOp, XPoly};
use crate::linalg::CMat;
use crate::scalar::C64;

/// Chebyshev-Gauss-Lobatto collocation on `[0, length]`. Node 0 is `x = 0`
/// and node `n - 1` is `x = length`.
#[derive(Clone, Debug)]
pub struct Discretization {
    length: f64,
    nodes: Vec<f64>,
    diff: DMatrix<f64>,
    weights: Vec<f64>,
}

impl Discretization {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::Shape(format!("collocation needs at least 4 nodes, got {n}")));
        }
        if !(length > 0.0) {
            return Err(Error::Shape(format!("interval length {length} must be positive")));
        }
        let np = n - 1;
        let y: Vec<f64> = (0..n).map(|i| (std::f64::consts::PI * i as f64 / np as f64).cos()).collect();
        let nodes = y.iter().map(|v| length * (1.0 - v) / 2.0).collect();
        let c = |i: usize| if i == 0 || i == np { 2.0 } else { 1.0 };
        let mut d = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    d[(i, j)] = c(i) / c(j) * sign / (y[i] - y[j]);
                }
            }
            let s: f64 = (0..n).filter(|&j| j != i).map(|j| d[(i, j)]).sum();
            d[(i, i)] = -s;
        }
        // d/dx = -(2/L) d/dy
        let diff = d * (-2.0 / length);
        Ok(Discretization { length, nodes, diff, weights: clenshaw_curtis(n, length) })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Clenshaw-Curtis weights for the nodes.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `d`-th derivative matrix.
    pub fn diff(&self, d: usize) -> DMatrix<f64> {
        let n = self.len();
        let mut out = DMatrix::identity(n, n);
        for _ in 0..d {
            out = &self.diff * out;
        }
        out
    }

    /// Collocation matrix of an `m x m` cross-section operator, node-major
    /// unknowns `u[i * m + c]`.
    pub fn collocate(&self, op: &CrossOp<C64>) -> CMat {
        use crate::fuchs::Coeff;
        let m = op.shape().0;
        let n = self.len();
        let mut out = CMat::zeros(n * m, n * m);
        for (d, c) in op.terms().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let dd = self.diff(d);
            for i in 0..n {
                let ci = c.eval(&C64::new(self.nodes[i], 0.0));
                for j in 0..n {
                    let w = dd[(i, j)];
                    if w == 0.0 {
                        continue;
                    }
                    for r in 0..m {
                        for s in 0..m {
                            out[(i * m + r, j * m + s)] += ci[(r, s)] * w;
                        }
                    }
                }
            }
        }
        out
    }

    /// Rows evaluating `gamma_k u = (D_n^k u)` at an endpoint, `m x (n m)`.
    /// `D_n = D_x` on the left and `-D_x` on the right, with `D_x = -i d_x`.
    pub fn trace_rows(&self, k: usize, m: usize, left: bool) -> CMat {
        let n = self.len();
        let dd = self.diff(k);
        let node = if left { 0 } else { n - 1 };
        let factor = if left { C64::new(0.0, -1.0).powu(k as u32) } else { C64::new(0.0, 1.0).powu(k as u32) };
        let mut out = CMat::zeros(m, n * m);
        for j in 0..n {
            for c in 0..m {
                out[(c, j * m + c)] = factor * dd[(node, j)];
            }
        }
        out
    }

    /// Grid values of a vector polynomial, node-major.
    pub fn sample(&self, p: &XPoly<C64>) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.len() * p.shape().0);
        for &x in &self.nodes {
            let v = p.eval(&C64::new(x, 0.0));
            for r in 0..v.rows() {
                out.push(v[(r, 0)]);
            }
        }
        out
    }

    /// Grid values of a function, node-major with `m = 1`.
    pub fn sample_fn(&self, f: impl Fn(f64) -> C64) -> Vec<C64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }
}

/// Clenshaw-Curtis weights on the Chebyshev extreme points mapped to `[0, length]`.
fn clenshaw_curtis(n: usize, length: f64) -> Vec<f64> {
    let np = n - 1;
    let mut w = vec![0.0; n];
    for (i, wi) in w.iter_mut().enumerate() {
        let theta = std::f64::consts::PI * i as f64 / np as f64;
        let mut s = 0.0;
        for j in 1..=np / 2 {
            let b = if 2 * j == np { 1.0 } else { 2.0 };
            s += b / (4.0 * (j * j) as f64 - 1.0) * (2.0 * j as f64 * theta).cos();
        }
        let c = if i == 0 || i == np { 1.0 } else { 2.0 };
        *wi = c / np as f64 * (1.0 - s) * length / 2.0;
    }
    w
}
