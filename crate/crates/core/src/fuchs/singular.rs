use super::crossop::CrossOp;
use super::mellin::MellinPoly;
use super::series::FuchsOp;
use super::xpoly::XPoly;
use crate::error::{Error, Result};
use crate::scalar::{binomial, Scalar};

/// Cross-section coefficient of a singular term.
#[derive(Clone, Debug, PartialEq)]
pub enum Section<T> {
    Poly(XPoly<T>),
    /// Values on the collocation grid, node-major.
    Grid(Vec<T>),
}

/// `sigma(x) t^{-exponent} log^{log_power} t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularTerm<T> {
    pub exponent: T,
    pub log_power: usize,
    pub sigma: Section<T>,
}

impl<T: Scalar> SingularTerm<T> {
    pub fn poly(exponent: T, log_power: usize, sigma: XPoly<T>) -> Self {
        SingularTerm { exponent, log_power, sigma: Section::Poly(sigma) }
    }
}

/// `h(delta)` on `sigma t^{-p} log^l t`:
/// `t^{-p} sum_i C(l,i) (-1)^i h^(i)(p)[sigma] log^{l-i} t`.
pub fn apply_mellin<T: Scalar>(h: &MellinPoly<CrossOp<T>>, term: &SingularTerm<T>) -> Result<Vec<SingularTerm<T>>> {
    let sigma = match &term.sigma {
        Section::Poly(s) => s,
        Section::Grid(_) => return Err(Error::GridSection),
    };
    let l = term.log_power;
    let mut out = Vec::new();
    for i in 0..=l {
        let w = T::from_i64(binomial(l as i64, i as i64) * if i % 2 == 0 { 1 } else { -1 });
        let value = h.derivative(i).eval(&term.exponent).apply(sigma).scale(&w);
        if !value.is_zero() {
            out.push(SingularTerm::poly(term.exponent.clone(), l - i, value));
        }
    }
    Ok(out)
}

/// `A` applied to a finite sum of singular terms; the Taylor term `k` maps
/// the exponent `p` to `p + mu - k`. Equal `(exponent, log power)` pairs are merged.
pub fn apply_to_singular<T: Scalar>(a: &FuchsOp<T>, terms: &[SingularTerm<T>]) -> Result<Vec<SingularTerm<T>>> {
    let mut out: Vec<SingularTerm<T>> = Vec::new();
    for term in terms {
        for (k, h) in a.series().terms().iter().enumerate() {
            let shift = T::from_i64(a.mu() as i64 - k as i64);
            for r in apply_mellin(h, term)? {
                push_merged(&mut out, SingularTerm { exponent: r.exponent + shift.clone(), ..r });
            }
        }
    }
    out.retain(|t| !matches!(&t.sigma, Section::Poly(p) if p.is_zero()));
    Ok(out)
}

fn push_merged<T: Scalar>(out: &mut Vec<SingularTerm<T>>, t: SingularTerm<T>) {
    for e in out.iter_mut() {
        if e.exponent == t.exponent && e.log_power == t.log_power {
            if let (Section::Poly(a), Section::Poly(b)) = (&e.sigma, &t.sigma) {
                e.sigma = Section::Poly(a.add(b));
                return;
            }
        }
    }
    out.push(t);
}
