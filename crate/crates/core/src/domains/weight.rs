use crate::error::{Error, Result};
use crate::fuchs::SingularTerm;
use crate::meromorphic::PoleDatum;
use crate::scalar::C64;

/// Points closer than this to a weight line lie on it.
pub const LINE_TOL: f64 = 1e-9;

/// Weight `gamma`, integrability `p_int`, order `mu` and dimension `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightData {
    pub gamma: f64,
    pub p_int: f64,
    pub mu: usize,
    pub n: i64,
}

impl WeightData {
    pub fn new(gamma: f64, p_int: f64, mu: usize, n: i64) -> Result<Self> {
        if !(p_int > 1.0 && p_int.is_finite()) {
            return Err(Error::Weight(format!("integrability exponent {p_int} must lie in (1, inf)")));
        }
        if !gamma.is_finite() {
            return Err(Error::Weight(format!("weight {gamma} is not finite")));
        }
        Ok(WeightData { gamma, p_int, mu, n })
    }

    pub fn gamma_p(&self) -> f64 {
        (self.n + 1) as f64 * (0.5 - 1.0 / self.p_int)
    }

    /// `Re z = (n+1)/2 - gamma`.
    pub fn line(&self) -> f64 {
        (self.n + 1) as f64 / 2.0 - self.gamma
    }

    /// `(line - mu, line)`.
    pub fn strip(&self) -> (f64, f64) {
        (self.line() - self.mu as f64, self.line())
    }

    /// The same data at another weight.
    pub fn with_gamma(&self, gamma: f64) -> Self {
        WeightData { gamma, ..*self }
    }
}

/// No pole within [`LINE_TOL`] of the weight line.
pub fn weight_line_check(poles: &[C64], w: &WeightData) -> bool {
    poles.iter().all(|p| (p.re - w.line()).abs() > LINE_TOL)
}

/// `sum M(r_0, p)` over poles in the open strip. Poles on the weight line or
/// on the line of `gamma + mu` are refused.
pub fn relative_index(poles: &[PoleDatum], w: &WeightData) -> Result<usize> {
    let (lo, hi) = w.strip();
    let mut total = 0;
    for d in poles {
        if (d.p.re - hi).abs() <= LINE_TOL {
            return Err(Error::WeightOnPole { re: d.p.re, im: d.p.im, line: hi });
        }
        if (d.p.re - lo).abs() <= LINE_TOL {
            return Err(Error::EndpointPole { re: d.p.re, im: d.p.im });
        }
        if d.p.re > lo && d.p.re < hi {
            total += d.rank_m;
        }
    }
    Ok(total)
}

/// Weighted space `H^{s,gamma}_p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Space {
    pub s: f64,
    pub gamma: f64,
    pub p_int: f64,
}

/// `omega sigma t^{-q} log^l t` lies in `H^{s,gamma}_p` iff `Re q < (n+1)/2 - gamma`.
pub fn membership(term: &SingularTerm<C64>, space: &Space, n: i64) -> bool {
    term.exponent.re < (n + 1) as f64 / 2.0 - space.gamma
}

/// A finite sum lies in the space iff each of its terms does.
pub fn membership_all(terms: &[SingularTerm<C64>], space: &Space, n: i64) -> bool {
    terms.iter().all(|t| membership(t, space, n))
}

/// Target indices `(s - j - 1/p, gamma - 1/2)` of the trace `gamma_j`.
pub fn trace_weight(s: f64, gamma: f64, p_int: f64, j: usize) -> Result<(f64, f64)> {
    if !(s > 1.0 / p_int + j as f64) {
        return Err(Error::Weight(format!("trace of order {j} undefined on H^{{{s},{gamma}}}_{p_int}")));
    }
    Ok((s - j as f64 - 1.0 / p_int, gamma - 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchs::Section;

    fn term(q: f64, l: usize) -> SingularTerm<C64> {
        SingularTerm { exponent: C64::new(q, 0.0), log_power: l, sigma: Section::Grid(vec![C64::new(1.0, 0.0)]) }
    }

    #[test]
    fn weight_lines() {
        let w = WeightData::new(0.0, 2.0, 2, 2).unwrap();
        assert_eq!(w.line(), 1.5);
        assert_eq!(w.strip(), (-0.5, 1.5));
        assert_eq!(w.gamma_p(), 0.0);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(weight_line_check(&[C64::new(phi, 0.0), C64::new(1.0 - phi, 0.0)], &w));
        assert!(!weight_line_check(&[C64::new(phi, 0.0)], &w.with_gamma(1.5 - phi)));
        assert!(weight_line_check(&[], &w));
    }

    #[test]
    fn membership_thresholds() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let sp = |gamma| Space { s: 0.0, gamma, p_int: 2.0 };
        assert!(membership(&term(phi, 0), &sp(-0.5), 2));
        assert!(!membership(&term(phi, 0), &sp(1.5 - phi), 2));
        assert!(membership(&term(0.0, 1), &sp(1.0), 2));
    }

    #[test]
    fn traces() {
        assert_eq!(trace_weight(2.0, 0.0, 2.0, 0).unwrap(), (1.5, -0.5));
        assert_eq!(trace_weight(2.0, 1.0, 2.0, 1).unwrap(), (0.5, 0.5));
        assert!(trace_weight(2.0, 0.0, 2.0, 2).is_err());
        assert!(trace_weight(1.5, 0.0, 2.0, 1).is_err());
    }
}
