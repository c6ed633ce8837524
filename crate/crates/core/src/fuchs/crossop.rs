use super::mellin::Coeff;
use super::xpoly::XPoly;
use crate::mat::Mat;
use crate::scalar::{binomial, Scalar, C64};

/// Differential operator `sum_d c_d(x) d_x^d` on the cross-section with
/// polynomial matrix coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossOp<T> {
    rows: usize,
    cols: usize,
    terms: Vec<XPoly<T>>,
}

impl<T: Scalar> CrossOp<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        CrossOp { rows, cols, terms: Vec::new() }
    }

    pub fn identity(m: usize) -> Self {
        Self::multiplication(XPoly::constant(Mat::identity(m)))
    }

    pub fn multiplication(c: XPoly<T>) -> Self {
        let (r, k) = c.shape();
        Self::from_terms(r, k, vec![c])
    }

    /// Scalar operator `c * d_x^d` for `m = 1`.
    pub fn scalar_term(d: usize, c: XPoly<T>) -> Self {
        let (r, k) = c.shape();
        let mut terms = vec![XPoly::zero(r, k); d];
        terms.push(c);
        Self::from_terms(r, k, terms)
    }

    pub fn from_terms(rows: usize, cols: usize, terms: Vec<XPoly<T>>) -> Self {
        assert!(terms.iter().all(|c| c.shape() == (rows, cols)), "term shape mismatch");
        let mut op = CrossOp { rows, cols, terms };
        while op.terms.last().is_some_and(|c| c.is_zero()) {
            op.terms.pop();
        }
        op
    }

    pub fn terms(&self) -> &[XPoly<T>] {
        &self.terms
    }

    /// Coefficient of `d_x^d`.
    pub fn term(&self, d: usize) -> XPoly<T> {
        self.terms.get(d).cloned().unwrap_or_else(|| XPoly::zero(self.rows, self.cols))
    }

    /// Differential order, `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.terms.len().checked_sub(1)
    }

    /// Coefficient of `D^d` with `D = -i d_x`.
    pub fn d_coefficient(&self, d: usize) -> XPoly<T> {
        self.term(d).scale(&crate::scalar::powi(&T::imag_unit(), d))
    }

    /// The operator written in the inner normal coordinate `x_n = a - x`.
    pub fn reflect(&self, a: &T) -> Self {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(d, c)| {
                let r = c.reflect(a);
                if d % 2 == 1 {
                    r.neg()
                } else {
                    r
                }
            })
            .collect();
        Self::from_terms(self.rows, self.cols, terms)
    }

    /// Apply to a vector-valued polynomial.
    pub fn apply(&self, u: &XPoly<T>) -> XPoly<T> {
        let mut acc = XPoly::zero(self.rows, u.shape().1);
        for (d, c) in self.terms.iter().enumerate() {
            acc = acc.add(&c.mul(&u.derivative(d)));
        }
        acc
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> CrossOp<U> {
        CrossOp::from_terms(self.rows, self.cols, self.terms.iter().map(|c| c.map(f)).collect())
    }

    pub fn to_c64(&self) -> CrossOp<C64> {
        self.map(|x| x.to_c64())
    }
}

impl<T: Scalar> Coeff for CrossOp<T> {
    type S = T;

    fn zero_of((rows, cols): (usize, usize)) -> Self {
        Self::zero(rows, cols)
    }

    fn identity_of(n: usize) -> Self {
        Self::identity(n)
    }

    fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn add(&self, o: &Self) -> Self {
        assert_eq!(self.shape(), o.shape(), "crossop add shape mismatch");
        let n = self.terms.len().max(o.terms.len());
        Self::from_terms(self.rows, self.cols, (0..n).map(|d| self.term(d).add(&o.term(d))).collect())
    }

    /// `(c d^a)(e d^b) = c sum_r C(a,r) e^(r) d^(a-r+b)`.
    fn compose(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "crossop compose shape mismatch");
        let mut out: Vec<XPoly<T>> = Vec::new();
        for (a, c) in self.terms.iter().enumerate() {
            for (b, e) in o.terms.iter().enumerate() {
                for r in 0..=a {
                    let d = a - r + b;
                    if out.len() <= d {
                        out.resize(d + 1, XPoly::zero(self.rows, o.cols));
                    }
                    let w = T::from_i64(binomial(a as i64, r as i64));
                    out[d] = out[d].add(&c.mul(&e.derivative(r)).scale(&w));
                }
            }
        }
        Self::from_terms(self.rows, o.cols, out)
    }

    fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.rows, self.cols, self.terms.iter().map(|c| c.scale(s)).collect())
    }

    /// Formal adjoint in `L^2(dx)`: `(c d^a)* = (-1)^a sum_r C(a,r) (c*)^(r) d^(a-r)`.
    fn adjoint(&self) -> Self {
        let mut out = vec![XPoly::zero(self.cols, self.rows); self.terms.len()];
        for (a, c) in self.terms.iter().enumerate() {
            let cs = c.adjoint();
            let sign = if a % 2 == 0 { T::one() } else { -T::one() };
            for r in 0..=a {
                let w = T::from_i64(binomial(a as i64, r as i64)) * sign.clone();
                out[a - r] = out[a - r].add(&cs.derivative(r).scale(&w));
            }
        }
        Self::from_terms(self.cols, self.rows, out)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cqi, CQ};

    fn xp(cs: &[i64]) -> XPoly<CQ> {
        XPoly::from_scalars(cs.iter().map(|&c| cqi(c)).collect())
    }

    #[test]
    fn composition_follows_leibniz() {
        // d o (x) = x d + 1
        let d = CrossOp::scalar_term(1, xp(&[1]));
        let x = CrossOp::multiplication(xp(&[0, 1]));
        let expect = CrossOp::from_terms(1, 1, vec![xp(&[1]), xp(&[0, 1])]);
        assert_eq!(d.compose(&x), expect);
    }

    #[test]
    fn adjoint_of_first_order() {
        // (x d)* = -d o x = -x d - 1
        let op = CrossOp::scalar_term(1, xp(&[0, 1]));
        let expect = CrossOp::from_terms(1, 1, vec![xp(&[-1]), xp(&[0, -1])]);
        assert_eq!(op.adjoint(), expect);
        assert_eq!(op.adjoint().adjoint(), op);
    }

    #[test]
    fn apply_and_reflect() {
        // (d^2 + x) applied to x^3 = 6x + x^4
        let op = CrossOp::from_terms(1, 1, vec![xp(&[0, 1]), xp(&[]), xp(&[1])]);
        assert_eq!(op.apply(&xp(&[0, 0, 0, 1])), xp(&[0, 6, 0, 0, 1]));
        // x d in x_n = 2 - x becomes -(2 - x_n) d_n
        let r = CrossOp::scalar_term(1, xp(&[0, 1])).reflect(&cqi(2));
        assert_eq!(r, CrossOp::scalar_term(1, xp(&[-2, 1])));
    }
}
