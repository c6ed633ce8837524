use crate::mat::Mat;
use crate::scalar::{binomial, powi, Scalar, C64};

/// Matrix-valued polynomial `sum_p x^p C_p` on the cross-section interval.
#[derive(Clone, Debug, PartialEq)]
pub struct XPoly<T> {
    rows: usize,
    cols: usize,
    coeffs: Vec<Mat<T>>,
}

impl<T: Scalar> XPoly<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        XPoly { rows, cols, coeffs: Vec::new() }
    }

    pub fn constant(c: Mat<T>) -> Self {
        Self::from_coeffs(c.rows(), c.cols(), vec![c])
    }

    pub fn scalar(x: T) -> Self {
        Self::constant(Mat::scalar(x))
    }

    /// `c * x^p`.
    pub fn monomial(p: usize, c: Mat<T>) -> Self {
        let (r, k) = c.shape();
        let mut coeffs = vec![Mat::zeros(r, k); p];
        coeffs.push(c);
        Self::from_coeffs(r, k, coeffs)
    }

    pub fn from_coeffs(rows: usize, cols: usize, coeffs: Vec<Mat<T>>) -> Self {
        assert!(coeffs.iter().all(|c| c.shape() == (rows, cols)), "coefficient shape mismatch");
        let mut p = XPoly { rows, cols, coeffs };
        p.trim();
        p
    }

    /// Scalar polynomial from coefficients in increasing degree.
    pub fn from_scalars(cs: Vec<T>) -> Self {
        Self::from_coeffs(1, 1, cs.into_iter().map(Mat::scalar).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn coeffs(&self) -> &[Mat<T>] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, p: usize) -> Mat<T> {
        self.coeffs.get(p).cloned().unwrap_or_else(|| Mat::zeros(self.rows, self.cols))
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.shape(), o.shape(), "xpoly add shape mismatch");
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs(self.rows, self.cols, (0..n).map(|p| &self.coeff(p) + &o.coeff(p)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_coeffs(self.rows, self.cols, self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "xpoly mul shape mismatch");
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.rows, o.cols);
        }
        let mut out = vec![Mat::zeros(self.rows, o.cols); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(self.rows, o.cols, out)
    }

    /// `k`-th derivative in x.
    pub fn derivative(&self, k: usize) -> Self {
        let coeffs = (k..self.coeffs.len())
            .map(|p| {
                let f: i64 = ((p - k + 1)..=p).map(|v| v as i64).product();
                self.coeffs[p].scale(&T::from_i64(f))
            })
            .collect();
        Self::from_coeffs(self.rows, self.cols, coeffs)
    }

    pub fn eval(&self, x: &T) -> Mat<T> {
        let mut acc = Mat::zeros(self.rows, self.cols);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(x) + c;
        }
        acc
    }

    /// `c(a - x)`, used to pass to the normal coordinate at the right endpoint.
    pub fn reflect(&self, a: &T) -> Self {
        let mut out = vec![Mat::zeros(self.rows, self.cols); self.coeffs.len()];
        for (p, c) in self.coeffs.iter().enumerate() {
            for (i, slot) in out.iter_mut().enumerate().take(p + 1) {
                let sign = if i % 2 == 0 { T::one() } else { -T::one() };
                let w = T::from_i64(binomial(p as i64, i as i64)) * powi(a, p - i) * sign;
                *slot = &*slot + &c.scale(&w);
            }
        }
        Self::from_coeffs(self.rows, self.cols, out)
    }

    /// Pointwise conjugate transpose (x is real).
    pub fn adjoint(&self) -> Self {
        Self::from_coeffs(self.cols, self.rows, self.coeffs.iter().map(|c| c.adjoint()).collect())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> XPoly<U> {
        XPoly::from_coeffs(self.rows, self.cols, self.coeffs.iter().map(|c| c.map(f)).collect())
    }

    pub fn to_c64(&self) -> XPoly<C64> {
        self.map(|x| x.to_c64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cqi, CQ};

    fn p(cs: &[i64]) -> XPoly<CQ> {
        XPoly::from_scalars(cs.iter().map(|&c| cqi(c)).collect())
    }

    #[test]
    fn product_and_derivative() {
        // (1 + x)(1 - x) = 1 - x^2
        assert_eq!(p(&[1, 1]).mul(&p(&[1, -1])), p(&[1, 0, -1]));
        assert_eq!(p(&[0, 0, 0, 1]).derivative(2), p(&[0, 6]));
        assert_eq!(p(&[5]).derivative(1), XPoly::zero(1, 1));
    }

    #[test]
    fn reflection_about_length() {
        // x^2 at (3 - x) = 9 - 6x + x^2
        assert_eq!(p(&[0, 0, 1]).reflect(&cqi(3)), p(&[9, -6, 1]));
        assert_eq!(p(&[0, 0, 1]).eval(&cqi(3)), Mat::scalar(cqi(9)));
    }
}
