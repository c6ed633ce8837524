use num_traits::One;

use super::crossop::CrossOp;
use super::mellin::{Coeff, MellinPoly};
use super::xpoly::XPoly;
use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::scalar::{Scalar, C64};

/// `t^{-order} sum_k t^k f_k(delta)` with `delta = -t d_t`, truncated after
/// Taylor index `truncation` when one is set.
#[derive(Clone, Debug, PartialEq)]
pub struct FuchsSeries<C> {
    order: i64,
    shape: (usize, usize),
    terms: Vec<MellinPoly<C>>,
    truncation: Option<usize>,
}

/// Operator-valued Fuchs series on the boundary of the cone.
pub type BoundaryFuchsOp<T> = FuchsSeries<Mat<T>>;

impl<C: Coeff> FuchsSeries<C> {
    pub fn new(order: i64, shape: (usize, usize), mut terms: Vec<MellinPoly<C>>, truncation: Option<usize>) -> Self {
        assert!(terms.iter().all(|h| h.shape() == shape), "Taylor term shape mismatch");
        if let Some(k) = truncation {
            terms.truncate(k + 1);
        }
        while terms.last().is_some_and(|h| h.is_zero()) {
            terms.pop();
        }
        FuchsSeries { order, shape, terms, truncation }
    }

    pub fn zero(order: i64, shape: (usize, usize)) -> Self {
        Self::new(order, shape, Vec::new(), None)
    }

    pub fn identity(n: usize) -> Self {
        Self::new(0, (n, n), vec![MellinPoly::identity(n)], None)
    }

    /// Order zero, t-independent, z-independent coefficient.
    pub fn constant(c: C) -> Self {
        let shape = c.shape();
        Self::new(0, shape, vec![MellinPoly::constant(c)], None)
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn terms(&self) -> &[MellinPoly<C>] {
        &self.terms
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    /// Taylor coefficient `f_k`.
    pub fn term(&self, k: usize) -> MellinPoly<C> {
        self.terms.get(k).cloned().unwrap_or_else(|| MellinPoly::zero(self.shape))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when only the `k = 0` Taylor term is present.
    pub fn is_t_independent(&self) -> bool {
        self.terms.len() <= 1
    }

    pub fn with_truncation(mut self, k: Option<usize>) -> Self {
        self.truncation = k;
        Self::new(self.order, self.shape, std::mem::take(&mut self.terms), k)
    }

    /// `self` after `o`: `g(delta) t^s = t^s g(delta - s)` gives
    /// `f_r = sum_{k+l=r} f_k(z + order_o - l) g_l(z)`.
    pub fn compose(&self, o: &Self) -> Result<Self> {
        if self.shape.1 != o.shape.0 {
            return Err(Error::Shape(format!("compose {:?} after {:?}", self.shape, o.shape)));
        }
        let shape = (self.shape.0, o.shape.1);
        let trunc = match (self.truncation, o.truncation) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let len = if self.terms.is_empty() || o.terms.is_empty() { 0 } else { self.terms.len() + o.terms.len() - 1 };
        let len = trunc.map_or(len, |k| len.min(k + 1));
        let mut out = vec![MellinPoly::zero(shape); len];
        for (k, f) in self.terms.iter().enumerate() {
            for (l, g) in o.terms.iter().enumerate() {
                if k + l >= len {
                    continue;
                }
                let s = C::S::from_i64(o.order - l as i64);
                out[k + l] = out[k + l].add(&f.shift(&s).mul(g));
            }
        }
        Ok(Self::new(self.order + o.order, shape, out, trunc))
    }

    /// Sum; differing orders are aligned by powers of t.
    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.shape, o.shape, "series add shape mismatch");
        let order = self.order.max(o.order);
        let trunc = match (self.truncation, o.truncation) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let da = (order - self.order) as usize;
        let db = (order - o.order) as usize;
        let n = (self.terms.len() + da).max(o.terms.len() + db);
        let terms = (0..n)
            .map(|k| {
                let a = if k >= da { self.term(k - da) } else { MellinPoly::zero(self.shape) };
                let b = if k >= db { o.term(k - db) } else { MellinPoly::zero(self.shape) };
                a.add(&b)
            })
            .collect();
        Self::new(order, self.shape, terms, trunc)
    }

    pub fn scale(&self, s: &C::S) -> Self {
        Self::new(self.order, self.shape, self.terms.iter().map(|h| h.scale(s)).collect(), self.truncation)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-C::S::one()))
    }

    /// Exact (or tolerance-based for floats) operator equality.
    pub fn same_operator(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// Formal adjoint with respect to `t^c dt` times the cross-section pairing:
    /// `delta* = c + 1 - delta`, so the Taylor term `q` is reflected about
    /// `c + 1 + q - order`.
    pub fn adjoint(&self, measure_exponent: i64) -> Self {
        let shape = (self.shape.1, self.shape.0);
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(q, h)| h.reflect(&C::S::from_i64(measure_exponent + 1 + q as i64 - self.order)))
            .collect();
        Self::new(self.order, shape, terms, self.truncation)
    }

    /// Blockwise transformation of the coefficients.
    pub fn map_terms<D: Coeff>(&self, shape: (usize, usize), f: impl Fn(&C) -> D) -> FuchsSeries<D> {
        FuchsSeries::new(self.order, shape, self.terms.iter().map(|h| h.map_coeffs(shape, &f)).collect(), self.truncation)
    }

    pub fn with_order(&self, order: i64) -> Self {
        Self::new(order, self.shape, self.terms.clone(), self.truncation)
    }
}

impl<T: Scalar> BoundaryFuchsOp<T> {
    pub fn to_c64(&self) -> BoundaryFuchsOp<C64> {
        let shape = self.shape();
        self.map_terms(shape, |m| m.to_c64())
    }

    /// Row block `rows` and column block `cols` of every coefficient.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let shape = (rows.len(), cols.len());
        self.map_terms(shape, |m| m.submatrix(rows.clone(), cols.clone()))
    }

    /// Value of `t^order` times the operator on `t^0`-homogeneous data at `(t, z)`:
    /// `sum_k t^k f_k(z)`.
    pub fn eval_at(&self, t: &T, z: &T) -> Mat<T> {
        let mut acc = Mat::zeros(self.shape().0, self.shape().1);
        let mut tk = T::one();
        for h in self.terms() {
            acc = &acc + &h.eval(z).scale(&tk);
            tk = tk * t.clone();
        }
        acc
    }
}

/// Fuchs-type differential operator
/// `A = t^{-mu} sum_{k<=K} t^k op_M(f_k)` on the cone over `[0, L]` with
/// `n = dim` of the cone and `m` bundle rank.
#[derive(Clone, Debug, PartialEq)]
pub struct FuchsOp<T> {
    n: i64,
    mu: usize,
    m: usize,
    series: FuchsSeries<CrossOp<T>>,
}

impl<T: Scalar> FuchsOp<T> {
    /// Checks that the coefficient of `z^j` in every `f_k` has x-order at most `mu - j`.
    pub fn new(n: i64, mu: usize, m: usize, terms: Vec<MellinPoly<CrossOp<T>>>, truncation: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidOperator(format!("cone dimension {n} < 1")));
        }
        for (k, h) in terms.iter().enumerate() {
            if h.shape() != (m, m) {
                return Err(Error::Shape(format!("Taylor term {k} has shape {:?}, expected ({m}, {m})", h.shape())));
            }
            for (j, c) in h.coeffs().iter().enumerate() {
                if j > mu && !c.is_zero() {
                    return Err(Error::InvalidOperator(format!("term {k}: z-degree {j} exceeds order {mu}")));
                }
                if let Some(d) = c.order() {
                    if j + d > mu {
                        return Err(Error::InvalidOperator(format!(
                            "term {k}: coefficient of z^{j} has x-order {d} > {}",
                            mu - j.min(mu)
                        )));
                    }
                }
            }
        }
        Ok(FuchsOp { n, mu, m, series: FuchsSeries::new(mu as i64, (m, m), terms, Some(truncation)) })
    }

    pub fn from_series(n: i64, mu: usize, m: usize, series: FuchsSeries<CrossOp<T>>) -> Result<Self> {
        let k = series.truncation().unwrap_or(mu);
        if series.order() != mu as i64 {
            return Err(Error::InvalidOperator(format!("series order {} differs from {mu}", series.order())));
        }
        Self::new(n, mu, m, series.terms().to_vec(), k)
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn truncation(&self) -> usize {
        self.series.truncation().unwrap_or(self.mu)
    }

    pub fn series(&self) -> &FuchsSeries<CrossOp<T>> {
        &self.series
    }

    /// Conormal symbol of order `-j`, the Taylor coefficient `f_j`.
    pub fn conormal_symbol(&self, j: usize) -> MellinPoly<CrossOp<T>> {
        self.series.term(j)
    }

    pub fn compose(&self, o: &Self) -> Result<Self> {
        if self.n != o.n || self.m != o.m {
            return Err(Error::Shape("operators act on different cones or bundles".into()));
        }
        let s = self.series.compose(&o.series)?;
        Ok(FuchsOp { n: self.n, mu: self.mu + o.mu, m: self.m, series: s })
    }

    /// Formal adjoint in `L^2(t^n dt dx)`.
    pub fn adjoint(&self) -> Self {
        FuchsOp { n: self.n, mu: self.mu, m: self.m, series: self.series.adjoint(self.n) }
    }

    /// D-form coefficient `a_{jl}` of `t^k delta^j D_x^l` in the Taylor term `k`.
    pub fn a_coefficient(&self, k: usize, j: usize, l: usize) -> XPoly<T> {
        self.series.term(k).coeff(j).d_coefficient(l)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> FuchsOp<U> {
        let m = self.m;
        FuchsOp { n: self.n, mu: self.mu, m, series: self.series.map_terms((m, m), |c| c.map(f)) }
    }

    pub fn to_c64(&self) -> FuchsOp<C64> {
        self.map(|x| x.to_c64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cqi, CQ};

    fn scalar_poly(cs: &[i64]) -> MellinPoly<Mat<CQ>> {
        MellinPoly::from_coeffs((1, 1), cs.iter().map(|&c| Mat::scalar(cqi(c))).collect())
    }

    #[test]
    fn composition_shifts_by_inner_order() {
        // (t^{-1} delta)(t^{-1}) = t^{-2} (delta + 1)
        let a = FuchsSeries::new(1, (1, 1), vec![scalar_poly(&[0, 1])], None);
        let b = FuchsSeries::new(1, (1, 1), vec![scalar_poly(&[1])], None);
        let c = a.compose(&b).unwrap();
        assert_eq!(c.order(), 2);
        assert_eq!(c.term(0), scalar_poly(&[1, 1]));
    }

    #[test]
    fn adjoint_reflects_about_measure() {
        // delta in t^c dt has adjoint c + 1 - delta
        let a = FuchsSeries::new(0, (1, 1), vec![scalar_poly(&[0, 1])], None);
        assert_eq!(a.adjoint(2).term(0), scalar_poly(&[3, -1]));
        assert_eq!(a.adjoint(2).adjoint(2), a);
    }

    #[test]
    fn truncation_is_min_of_inputs() {
        let a = FuchsSeries::new(0, (1, 1), vec![scalar_poly(&[1]); 4], Some(3));
        let b = FuchsSeries::new(0, (1, 1), vec![scalar_poly(&[1]); 3], Some(2));
        let c = a.compose(&b).unwrap();
        assert_eq!(c.truncation(), Some(2));
        assert_eq!(c.terms().len(), 3);
        assert_eq!(c.term(2), scalar_poly(&[3]));
    }
}
