use rand::Rng;

use crate::fuchs::{BoundaryCondition, BoundaryPoint, FuchsOp, XPoly};
use crate::linalg::{self, CMat};
use crate::mat::Mat;
use crate::problem::Problem;
use crate::scalar::{binomial, C64};

use super::conjugation::cauchy_data;

/// `sum_a t^a p_a(x)` with `C^m`-valued polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub terms: Vec<(i64, XPoly<C64>)>,
}

impl TestFunction {
    pub fn eval(&self, t: f64, x: f64) -> Vec<C64> {
        let mut acc: Option<Mat<C64>> = None;
        for (a, p) in &self.terms {
            let v = p.eval(&C64::new(x, 0.0)).scale(&C64::new(t.powi(*a as i32), 0.0));
            acc = Some(match acc {
                None => v,
                Some(s) => &s + &v,
            });
        }
        acc.map(|m| m.col(0)).unwrap_or_default()
    }

    /// Scaled to unit norm in `L^2(t^n dt dx)` over `(0, 1) x (0, L)`.
    pub fn normalized(&self, n: i64, length: f64) -> TestFunction {
        let norm = super::green_quad::pairing(self, self, n, length).re.max(0.0).sqrt();
        if norm == 0.0 {
            return self.clone();
        }
        let s = C64::new(1.0 / norm, 0.0);
        TestFunction { terms: self.terms.iter().map(|(a, p)| (*a, p.scale(&s))).collect() }
    }

    /// `A u`, using `delta t^a = -a t^a`.
    pub fn apply(&self, op: &FuchsOp<C64>) -> TestFunction {
        let mu = op.mu() as i64;
        let mut terms = Vec::new();
        for (a, p) in &self.terms {
            for (k, h) in op.series().terms().iter().enumerate() {
                if h.is_zero() {
                    continue;
                }
                let f = h.eval(&C64::new(-*a as f64, 0.0));
                terms.push((a - mu + k as i64, f.apply(p)));
            }
        }
        TestFunction { terms }
    }

    /// Traces `gamma_k u = sum_a t^a (D_n^k p_a)(point)` as `(a, data)` pairs.
    pub fn traces(&self, mu: usize, point: &BoundaryPoint<C64>) -> Vec<(i64, Vec<C64>)> {
        self.terms.iter().map(|(a, p)| (*a, cauchy_data(p, mu, point))).collect()
    }
}

fn random_c<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn scaled_poly(m: usize, coeffs: &[C64], length: f64) -> XPoly<C64> {
    let deg = coeffs.len() / m;
    let cs = (0..deg)
        .map(|i| Mat::from_fn(m, 1, |r, _| coeffs[i * m + r] / length.powi(i as i32)))
        .collect();
    XPoly::from_coeffs(m, 1, cs)
}

/// `t^K (1 - t)^K q(t, x)` with random complex coefficients, `q` of degree
/// `deg_t` in `t` and `deg_x` in `x / L`; flat of order `K` at both ends of `(0, 1)`.
pub fn random_test_function<R: Rng>(rng: &mut R, m: usize, flat: usize, deg_t: usize, deg_x: usize, length: f64) -> TestFunction {
    let q: Vec<XPoly<C64>> = (0..=deg_t)
        .map(|_| {
            let c: Vec<C64> = (0..(deg_x + 1) * m).map(|_| random_c(rng)).collect();
            scaled_poly(m, &c, length)
        })
        .collect();
    let mut terms = Vec::new();
    for i in 0..=flat {
        let w = C64::new((binomial(flat as i64, i as i64) * if i % 2 == 0 { 1 } else { -1 }) as f64, 0.0);
        for (d, p) in q.iter().enumerate() {
            terms.push(((flat + i + d) as i64, p.scale(&w)));
        }
    }
    TestFunction { terms }
}

/// Coefficient of `t^e` in `T_j u` for `u = t^a p`: `sum_k sum_q [a + q - 2j = e] s^{jk}_q(k - a) gamma_k p`.
fn condition_rows(bc: &BoundaryCondition<C64>, a: i64, data: &[C64], m: usize) -> Vec<(usize, i64, C64)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (j, &fj) in bc.dims().iter().enumerate() {
        for k in 0..=j {
            let s = bc.entry(j, k);
            for (q, h) in s.terms().iter().enumerate() {
                let v = h.eval(&C64::new((k as i64 - a) as f64, 0.0));
                let e = a + q as i64 - 2 * j as i64;
                let g = &data[k * m..(k + 1) * m];
                let vals: Vec<C64> = (0..fj).map(|r| (0..m).map(|c| v[(r, c)] * g[c]).sum()).collect();
                for (r, val) in vals.into_iter().enumerate() {
                    out.push((offset + r, e, val));
                }
            }
        }
        offset += fj;
    }
    out
}

/// Random elements of `{u : T u = 0}` of the form `sum_{a=K}^{K+span} t^a p_a(x)`,
/// flat of order `K` at `t = 1`, `deg p_a <= deg_x`.
pub fn kernel_test_functions<R: Rng>(
    rng: &mut R,
    p: &Problem<C64>,
    flat: usize,
    span: usize,
    deg_x: usize,
    count: usize,
) -> Vec<TestFunction> {
    let (mu, m) = (p.mu(), p.m());
    let length = p.length.re;
    let per_power = (deg_x + 1) * m;
    let unknowns = (span + 1) * per_power;
    let power = |u: usize| (flat + u / per_power) as i64;
    let unit = |u: usize| {
        let mut c = vec![C64::new(0.0, 0.0); per_power];
        c[u % per_power] = C64::new(1.0, 0.0);
        scaled_poly(m, &c, length)
    };
    // constraint rows keyed by (endpoint, row, power)
    let mut keyed: std::collections::BTreeMap<(usize, usize, i64), Vec<C64>> = Default::default();
    for (side, (point, bc)) in p.conditions().into_iter().enumerate() {
        for u in 0..unknowns {
            let data = cauchy_data(&unit(u), mu, &point);
            for (r, e, v) in condition_rows(bc, power(u), &data, m) {
                keyed.entry((side, r, e)).or_insert_with(|| vec![C64::new(0.0, 0.0); unknowns])[u] += v;
            }
        }
    }
    let mut rows: Vec<Vec<C64>> = keyed.into_values().collect();
    // d_t^i u (1, x) = 0 for i < K, coefficientwise in x
    for i in 0..flat {
        for c in 0..per_power {
            let mut row = vec![C64::new(0.0, 0.0); unknowns];
            for (u, slot) in row.iter_mut().enumerate() {
                if u % per_power == c {
                    let a = power(u);
                    let falling: i64 = (0..i as i64).map(|s| a - s).product();
                    *slot = C64::new(falling as f64, 0.0);
                }
            }
            rows.push(row);
        }
    }
    let ker: CMat = linalg::null_space(&linalg::from_rows(&rows), 1e-11);
    (0..count)
        .map(|_| {
            let coef: Vec<C64> = (0..ker.ncols()).map(|_| random_c(rng)).collect();
            let x = &ker * CMat::from_column_slice(coef.len(), 1, &coef);
            let terms = (0..=span)
                .map(|s| (flat as i64 + s as i64, scaled_poly(m, &x.as_slice()[s * per_power..(s + 1) * per_power], length)))
                .collect();
            TestFunction { terms }
        })
        .collect()
}
