use std::ops::Range;

use super::discretization::Discretization;
use crate::error::{Error, Result};
use crate::fuchs::BoundaryCondition;
use crate::linalg::{self, CMat};
use crate::problem::Problem;
use crate::scalar::C64;

/// Discretized holomorphic family `F(z) = sum_p z^p F_p` of one Taylor index:
/// collocation of `f_q(z)` on interior rows and the boundary symbol rows
/// `sum_k g_q^{jk}(z + k) gamma_k` in place of the rows nearest each endpoint.
#[derive(Clone, Debug)]
pub struct ConormalFamily {
    disc: Discretization,
    m: usize,
    coeffs: Vec<CMat>,
    left_rows: Range<usize>,
    right_rows: Range<usize>,
    log_row_scale: f64,
}

fn boundary_block(bc: &BoundaryCondition<C64>, q: usize, disc: &Discretization, left: bool) -> Vec<CMat> {
    let (mu, m) = (bc.mu(), bc.m());
    let size = disc.len() * m;
    let rows = bc.row_count();
    let traces: Vec<CMat> = (0..mu).map(|k| disc.trace_rows(k, m, left)).collect();
    let mut coeffs: Vec<CMat> = Vec::new();
    let mut r0 = 0;
    for j in 0..mu {
        let fj = bc.dims()[j];
        for (k, trace) in traces.iter().enumerate().take(j + 1) {
            let h = bc.entry(j, k).term(q).shift(&C64::new(k as f64, 0.0));
            for (p, g) in h.coeffs().iter().enumerate() {
                while coeffs.len() <= p {
                    coeffs.push(CMat::zeros(rows, size));
                }
                let block = g.to_dmatrix() * trace;
                let mut view = coeffs[p].view_mut((r0, 0), (fj, size));
                view += &block;
            }
        }
        r0 += fj;
    }
    coeffs
}

impl ConormalFamily {
    /// Family of Taylor index `q` (the conormal symbol for `q = 0`).
    pub fn assemble(problem: &Problem<C64>, q: usize, disc: &Discretization) -> Result<Self> {
        let m = problem.m();
        let size = disc.len() * m;
        let (rl, rr) = (problem.left.row_count(), problem.right.row_count());
        if rl + rr >= size {
            return Err(Error::Shape(format!("{} boundary rows do not fit a grid of {} unknowns", rl + rr, size)));
        }
        let f = problem.op.conormal_symbol(q);
        let mut coeffs: Vec<CMat> = f.coeffs().iter().map(|c| disc.collocate(c)).collect();
        let left = boundary_block(&problem.left, q, disc, true);
        let right = boundary_block(&problem.right, q, disc, false);
        let deg = coeffs.len().max(left.len()).max(right.len());
        coeffs.resize(deg, CMat::zeros(size, size));
        let left_rows = 0..rl;
        let right_rows = size - rr..size;
        for (p, c) in coeffs.iter_mut().enumerate() {
            c.view_mut((0, 0), (rl, size)).fill(C64::new(0.0, 0.0));
            c.view_mut((size - rr, 0), (rr, size)).fill(C64::new(0.0, 0.0));
            if let Some(b) = left.get(p) {
                c.view_mut((0, 0), (rl, size)).copy_from(b);
            }
            if let Some(b) = right.get(p) {
                c.view_mut((size - rr, 0), (rr, size)).copy_from(b);
            }
        }
        let log_row_scale = (0..size)
            .map(|i| {
                let s = coeffs.iter().map(|c| c.row(i).iter().map(|v| v.norm()).fold(0.0, f64::max)).fold(0.0, f64::max);
                if s > 0.0 {
                    s.ln()
                } else {
                    0.0
                }
            })
            .sum();
        Ok(ConormalFamily { disc: disc.clone(), m, coeffs, left_rows, right_rows, log_row_scale })
    }

    /// The conormal symbol `F_0` on a grid of `grid_n` nodes.
    pub fn conormal(problem: &Problem<C64>, grid_n: usize) -> Result<Self> {
        let disc = Discretization::new(grid_n, problem.length.re)?;
        Self::assemble(problem, 0, &disc)
    }

    /// The family multiplied by a real constant.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for m in out.coeffs.iter_mut() {
            *m *= C64::new(c, 0.0);
        }
        if c != 0.0 {
            out.log_row_scale += self.size() as f64 * c.abs().ln();
        }
        out
    }

    pub fn discretization(&self) -> &Discretization {
        &self.disc
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.disc.len() * self.m
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|v| *v == C64::new(0.0, 0.0)))
    }

    pub fn interior_rows(&self) -> Vec<usize> {
        (self.left_rows.end..self.right_rows.start).collect()
    }

    pub fn boundary_rows(&self) -> Vec<usize> {
        self.left_rows.clone().chain(self.right_rows.clone()).collect()
    }

    pub fn matrix(&self, z: C64) -> CMat {
        let n = self.size();
        let mut acc = CMat::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    /// `F'(z)`.
    pub fn derivative(&self, z: C64) -> CMat {
        let n = self.size();
        let mut acc = CMat::zeros(n, n);
        for (p, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc *= z;
            acc += c * C64::new(p as f64, 0.0);
        }
        acc
    }

    /// `det F(z)` divided by the product of the row scales.
    pub fn delta(&self, z: C64) -> C64 {
        match linalg::log_det(&self.matrix(z)) {
            Some(l) => (l - self.log_row_scale).exp(),
            None => C64::new(0.0, 0.0),
        }
    }

    /// `Delta'/Delta = tr(F^{-1} F')`.
    pub fn log_derivative(&self, z: C64) -> Result<C64> {
        let lu = self.matrix(z).lu();
        let x = lu.solve(&self.derivative(z)).ok_or_else(|| Error::Singular(format!("F({z}) is singular")))?;
        let tr = x.trace();
        if tr.re.is_finite() && tr.im.is_finite() {
            Ok(tr)
        } else {
            Err(Error::Singular(format!("F({z}) is numerically singular")))
        }
    }

    pub fn inverse(&self, z: C64) -> Option<CMat> {
        self.matrix(z).try_inverse()
    }

    /// Columns of a full inverse belonging to interior rows: the `r_0` part.
    pub fn r0_block(&self, full: &CMat) -> CMat {
        let cols = self.interior_rows();
        CMat::from_fn(full.nrows(), cols.len(), |i, j| full[(i, cols[j])])
    }

    /// Columns belonging to boundary rows: the `k_0` part.
    pub fn k0_block(&self, full: &CMat) -> CMat {
        let cols = self.boundary_rows();
        CMat::from_fn(full.nrows(), cols.len(), |i, j| full[(i, cols[j])])
    }

    /// Median of `|Delta|` on a circle, the reference scale for singularity tests.
    pub fn det_scale(&self, center: C64, radius: f64) -> f64 {
        let mut v: Vec<f64> = (0..32)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 32.0;
                self.delta(center + C64::from_polar(radius, th)).norm()
            })
            .collect();
        v.sort_by(f64::total_cmp);
        (v[15] + v[16]) / 2.0
    }

    /// `1 / ||r_0(z)||` in the quadrature-weighted `L^2` norms, an approximation of
    /// the smallest singular value of the continuous symbol on its domain.
    pub fn smallest_singular_value(&self, z: C64) -> f64 {
        let Some(inv) = self.inverse(z) else { return 0.0 };
        let r0 = self.r0_block(&inv);
        let w: Vec<f64> = self.disc.weights().iter().flat_map(|&w| std::iter::repeat_n(w.sqrt(), self.m)).collect();
        let rows = self.interior_rows();
        let scaled = CMat::from_fn(r0.nrows(), r0.ncols(), |i, j| r0[(i, j)] * (w[i] / w[rows[j]]));
        1.0 / linalg::max_singular_value(&scaled)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn m1_symbol_is_singular_at_closed_form_poles() {
        let f = ConormalFamily::conormal(&models::m1::<C64>(), 24).unwrap();
        for p in models::m1_poles(4.0) {
            let z = C64::new(p, 0.0);
            let ratio = f.delta(z).norm() / f.det_scale(z, 0.25);
            assert!(ratio < 1e-8, "pole {p}: {ratio}");
            assert!(f.smallest_singular_value(z) < 1e-8);
        }
        let z = C64::new(0.3, 0.7);
        assert!(f.delta(z).norm() / f.det_scale(z, 0.25) > 1e-2);
        assert!(f.smallest_singular_value(z) > 1e-3);
    }

    #[test]
    fn log_derivative_matches_difference_quotient() {
        let f = ConormalFamily::conormal(&models::m2::<C64>(), 20).unwrap();
        let z = C64::new(0.4, 0.3);
        let h = 1e-6;
        let fd = (f.delta(z + h).ln() - f.delta(z - h).ln()) / (2.0 * h);
        let ld = f.log_derivative(z).unwrap();
        assert!((fd - ld).norm() < 1e-5 * ld.norm().max(1.0), "{fd} {ld}");
    }

    #[test]
    fn boundary_rows_replace_endpoint_rows() {
        let f = ConormalFamily::conormal(&models::m1::<C64>(), 12).unwrap();
        assert_eq!(f.boundary_rows(), vec![0, 11]);
        assert_eq!(f.interior_rows().len(), 10);
        assert_eq!(f.degree(), 2);
    }
}
