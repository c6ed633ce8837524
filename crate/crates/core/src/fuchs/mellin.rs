use std::fmt::Debug;

use crate::mat::Mat;
use num_traits::One;

use crate::scalar::{binomial, powi, Scalar};

/// Operator-valued coefficient ring for Mellin polynomials.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync {
    type S: Scalar;

    fn zero_of(shape: (usize, usize)) -> Self;
    fn identity_of(n: usize) -> Self;
    fn shape(&self) -> (usize, usize);
    fn add(&self, o: &Self) -> Self;
    /// `self` after `o`.
    fn compose(&self, o: &Self) -> Self;
    fn scale(&self, s: &Self::S) -> Self;
    /// Formal adjoint on the cross-section (conjugate transpose for matrices).
    fn adjoint(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Self::S::one()))
    }
}

impl<T: Scalar> Coeff for Mat<T> {
    type S = T;
    fn zero_of((r, c): (usize, usize)) -> Self {
        Mat::zeros(r, c)
    }
    fn identity_of(n: usize) -> Self {
        Mat::identity(n)
    }
    fn shape(&self) -> (usize, usize) {
        Mat::shape(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn compose(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, s: &T) -> Self {
        Mat::scale(self, s)
    }
    fn adjoint(&self) -> Self {
        Mat::adjoint(self)
    }
    fn is_zero(&self) -> bool {
        Mat::is_zero(self)
    }
}

/// Polynomial `h(z) = sum_j z^j C_j` in the Mellin covariable.
#[derive(Clone, Debug, PartialEq)]
pub struct MellinPoly<C> {
    shape: (usize, usize),
    coeffs: Vec<C>,
}

impl<C: Coeff> MellinPoly<C> {
    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn zero(shape: (usize, usize)) -> Self {
        MellinPoly { shape, coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(c.shape(), vec![c])
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(C::identity_of(n))
    }

    pub fn from_coeffs(shape: (usize, usize), coeffs: Vec<C>) -> Self {
        assert!(coeffs.iter().all(|c| c.shape() == shape), "Mellin coefficient shape mismatch");
        let mut h = MellinPoly { shape, coeffs };
        while h.coeffs.last().is_some_and(|c| c.is_zero()) {
            h.coeffs.pop();
        }
        h
    }

    /// Coefficient of `z^j`.
    pub fn coeff(&self, j: usize) -> C {
        self.coeffs.get(j).cloned().unwrap_or_else(|| C::zero_of(self.shape))
    }

    pub fn eval(&self, z: &C::S) -> C {
        let mut acc = C::zero_of(self.shape);
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(z).add(c);
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.shape, o.shape, "Mellin add shape mismatch");
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs(self.shape, (0..n).map(|j| self.coeff(j).add(&o.coeff(j))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-C::S::one()))
    }

    pub fn scale(&self, s: &C::S) -> Self {
        Self::from_coeffs(self.shape, self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    /// Pointwise product `(h g)(z) = h(z) g(z)`.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.shape.1, o.shape.0, "Mellin product shape mismatch");
        let shape = (self.shape.0, o.shape.1);
        if self.is_zero() || o.is_zero() {
            return Self::zero(shape);
        }
        let mut out = vec![C::zero_of(shape); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.compose(b));
            }
        }
        Self::from_coeffs(shape, out)
    }

    /// Left multiplication by a z-independent coefficient.
    pub fn left_apply(&self, c: &C) -> Self {
        let shape = (c.shape().0, self.shape.1);
        Self::from_coeffs(shape, self.coeffs.iter().map(|a| c.compose(a)).collect())
    }

    /// Translation `h(z + s)`.
    pub fn shift(&self, s: &C::S) -> Self {
        let mut out = vec![C::zero_of(self.shape); self.coeffs.len()];
        for (j, c) in self.coeffs.iter().enumerate() {
            for (i, slot) in out.iter_mut().enumerate().take(j + 1) {
                let w = C::S::from_i64(binomial(j as i64, i as i64)) * powi(s, j - i);
                *slot = slot.add(&c.scale(&w));
            }
        }
        Self::from_coeffs(self.shape, out)
    }

    /// `z -> sum_j (c - z)^j C_j*`, the symbol of the adjoint after `delta* = c - delta`.
    pub fn reflect(&self, c: &C::S) -> Self {
        let shape = (self.shape.1, self.shape.0);
        let mut out = vec![C::zero_of(shape); self.coeffs.len()];
        for (j, a) in self.coeffs.iter().enumerate() {
            let adj = a.adjoint();
            for (i, slot) in out.iter_mut().enumerate().take(j + 1) {
                let sign = if i % 2 == 0 { C::S::one() } else { -C::S::one() };
                let w = C::S::from_i64(binomial(j as i64, i as i64)) * powi(c, j - i) * sign;
                *slot = slot.add(&adj.scale(&w));
            }
        }
        Self::from_coeffs(shape, out)
    }

    /// `k`-th derivative in z.
    pub fn derivative(&self, k: usize) -> Self {
        let coeffs = (k..self.coeffs.len())
            .map(|j| {
                let f: i64 = ((j - k + 1)..=j).map(|v| v as i64).product();
                self.coeffs[j].scale(&C::S::from_i64(f))
            })
            .collect();
        Self::from_coeffs(self.shape, coeffs)
    }

    pub fn map_coeffs<D: Coeff>(&self, shape: (usize, usize), f: impl Fn(&C) -> D) -> MellinPoly<D> {
        MellinPoly::from_coeffs(shape, self.coeffs.iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cqi, CQ};

    fn h(cs: &[i64]) -> MellinPoly<Mat<CQ>> {
        MellinPoly::from_coeffs((1, 1), cs.iter().map(|&c| Mat::scalar(cqi(c))).collect())
    }

    #[test]
    fn shift_of_quadratic() {
        // z^2 - z at z - 2 is z^2 - 5z + 6
        assert_eq!(h(&[0, -1, 1]).shift(&cqi(-2)), h(&[6, -5, 1]));
    }

    #[test]
    fn reflection_is_an_involution() {
        let p = h(&[3, -1, 2]);
        assert_eq!(p.reflect(&cqi(5)).reflect(&cqi(5)), p);
        // z^2 - z is invariant under z -> 1 - z
        assert_eq!(h(&[0, -1, 1]).reflect(&cqi(1)), h(&[0, -1, 1]));
    }

    #[test]
    fn product_and_eval() {
        let p = h(&[1, 1]).mul(&h(&[-1, 1]));
        assert_eq!(p, h(&[-1, 0, 1]));
        assert_eq!(p.eval(&cqi(3)), Mat::scalar(cqi(8)));
        assert_eq!(p.derivative(1), h(&[0, 2]));
    }
}
