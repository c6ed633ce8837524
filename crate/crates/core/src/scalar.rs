//! Scalar fields used throughout the crate: floating complex numbers and
//! exact complex rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

pub type C64 = Complex<f64>;
pub type CQ = Complex<BigRational>;

/// A complex field with conjugation, usable both exactly and in floating point.
pub trait Scalar: Clone + Debug + PartialEq + Num + std::ops::Neg<Output = Self> + Send + Sync + 'static {
    /// `true` when arithmetic is exact, so zero tests need no tolerance.
    const EXACT: bool;

    fn conj(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_c64(z: C64) -> Self;
    fn to_c64(&self) -> C64;
    fn imag_unit() -> Self;
    /// Size used for pivot selection.
    fn magnitude(&self) -> f64;
    /// Zero test relative to `scale`; exact types ignore the scale.
    fn is_negligible(&self, scale: f64) -> bool;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }
}

/// Relative tolerance used for floating zero tests.
pub const FLOAT_EPS: f64 = 1e-11;

impl Scalar for C64 {
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }
    fn from_c64(z: C64) -> Self {
        z
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn imag_unit() -> Self {
        Complex::new(0.0, 1.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= FLOAT_EPS * scale.max(1.0)
    }
}

fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

fn rat_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division for huge numerators/denominators.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Scalar for CQ {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }
    fn from_c64(z: C64) -> Self {
        Complex::new(rat_from_f64(z.re), rat_from_f64(z.im))
    }
    fn to_c64(&self) -> C64 {
        Complex::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn magnitude(&self) -> f64 {
        // Cheap and monotone enough for pivoting; any nonzero entry works exactly.
        rat_to_f64(&self.re.abs()) + rat_to_f64(&self.im.abs())
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

/// Exact complex rational `a/b + (c/d) i`.
pub fn cq(re: (i64, i64), im: (i64, i64)) -> CQ {
    Complex::new(
        BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
        BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
    )
}

/// Exact integer as a complex rational.
pub fn cqi(v: i64) -> CQ {
    CQ::from_i64(v)
}

/// Binomial coefficient as `i64`; panics on overflow, which only huge orders reach.
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i64 = 1;
    for i in 0..k {
        r = r.checked_mul(n - i).expect("binomial overflow") / (i + 1);
    }
    r
}

pub fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// Integer power of a scalar.
pub fn powi<T: Scalar>(x: &T, k: usize) -> T {
    let mut r = T::one();
    for _ in 0..k {
        r = r * x.clone();
    }
    r
}
