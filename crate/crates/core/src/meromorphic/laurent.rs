use std::f64::consts::PI;

use super::scan::Pole;
use crate::cross_section::ConormalFamily;
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::par::Exec;
use crate::scalar::C64;

/// Nodes of the trapezoidal rule on the Laurent circle.
pub const LAURENT_NODES: usize = 128;
/// Relative threshold for ranks and for deciding that a coefficient vanishes.
pub const RANK_TOL: f64 = 1e-8;

/// Principal part of an inverted family at one pole.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleDatum {
    pub p: C64,
    /// Multiplicity of the zero of `Delta` from the argument principle.
    pub order: usize,
    /// Highest `k` with `R_k` nonzero on the interior columns.
    pub n_p: usize,
    /// `R_0 ..= R_{order - 1}` of the full inverse, coefficients of `(z - p)^{-k-1}`.
    pub r: Vec<CMat>,
    /// Columns of the inverse that belong to interior data.
    pub interior: Vec<usize>,
    pub rank_m: usize,
    pub radius: f64,
    /// `order` reached the size of the discretized family.
    pub saturated: bool,
}

impl PoleDatum {
    /// `R_k` restricted to the interior columns.
    pub fn r0(&self, k: usize) -> CMat {
        restrict(&self.r[k], &self.interior)
    }

    /// The block Hankel matrix `C_p` with blocks `R_{j+k}` for `j + k <= n_p`.
    pub fn hankel(&self) -> CMat {
        hankel(&(0..=self.n_p).map(|k| self.r0(k)).collect::<Vec<_>>())
    }
}

fn restrict(m: &CMat, cols: &[usize]) -> CMat {
    CMat::from_fn(m.nrows(), cols.len(), |i, j| m[(i, cols[j])])
}

/// Upper-left block Hankel matrix `(c_jk)`, `c_jk = r_{j+k}` when `j + k < len`, else `0`.
pub fn hankel(r: &[CMat]) -> CMat {
    let n = r.len();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let (h, w) = r[0].shape();
    let mut out = CMat::zeros(n * h, n * w);
    for j in 0..n {
        for k in 0..n - j {
            out.view_mut((j * h, k * w), (h, w)).copy_from(&r[j + k]);
        }
    }
    out
}

/// `(1/2 pi i) oint (z - p)^k eval(z) dz` for `k < count` on the circle of the
/// given radius, by the trapezoidal rule.
pub fn contour_coefficients<E>(eval: &E, p: C64, radius: f64, count: usize, exec: Exec) -> Result<Vec<CMat>>
where
    E: Fn(C64) -> Option<CMat> + Sync + ?Sized,
{
    let values = exec.map_range(LAURENT_NODES, |j| {
        let th = 2.0 * PI * j as f64 / LAURENT_NODES as f64;
        let w = C64::from_polar(radius, th);
        eval(p + w).map(|m| (w, m))
    });
    let mut out: Vec<CMat> = Vec::with_capacity(count);
    for (j, v) in values.into_iter().enumerate() {
        let (w, m) = v.ok_or_else(|| Error::Laurent(format!("inverse not computable on the circle at node {j}")))?;
        let mut wk = w / LAURENT_NODES as f64;
        for k in 0..count {
            if out.len() <= k {
                out.push(CMat::zeros(m.nrows(), m.ncols()));
            }
            out[k] += &m * wk;
            wk *= w;
        }
    }
    Ok(out)
}

/// Default circle radius: a third of the distance to the nearest other pole, at most `0.1`.
pub fn default_radius(p: C64, others: &[C64]) -> f64 {
    let sep = others
        .iter()
        .map(|q| (q - p).norm())
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    (sep / 3.0).min(0.1)
}

/// Laurent data of a general evaluator at a pole of known multiplicity.
pub fn laurent_data<E>(eval: &E, pole: Pole, interior: &[usize], radius: f64, max_order: usize, exec: Exec) -> Result<PoleDatum>
where
    E: Fn(C64) -> Option<CMat> + Sync + ?Sized,
{
    let r = contour_coefficients(eval, pole.z, radius, pole.order + 1, exec)?;
    let norms: Vec<f64> = r.iter().map(|m| m.norm()).collect();
    let top = norms.iter().copied().fold(0.0, f64::max);
    if norms[pole.order] > RANK_TOL * top {
        return Err(Error::Laurent(format!(
            "another pole inside the circle of radius {radius} around {}: R_{} does not vanish",
            pole.z, pole.order
        )));
    }
    let mut r = r;
    r.truncate(pole.order);
    let r0_norms: Vec<f64> = r.iter().map(|m| restrict(m, interior).norm()).collect();
    let n_p = r0_norms.iter().rposition(|&v| v > RANK_TOL * top).unwrap_or(0);
    let mut datum = PoleDatum {
        p: pole.z,
        order: pole.order,
        n_p,
        r,
        interior: interior.to_vec(),
        rank_m: 0,
        radius,
        saturated: pole.order >= max_order,
    };
    let c = datum.hankel();
    datum.rank_m = if c.norm() > RANK_TOL * top { linalg::numerical_rank(&c, RANK_TOL) } else { 0 };
    Ok(datum)
}

/// Laurent data of `F^{-1}` at a located pole.
pub fn laurent_coeffs(f: &ConormalFamily, pole: Pole, radius: f64, exec: Exec) -> Result<PoleDatum> {
    laurent_data(&|z| f.inverse(z), pole, &f.interior_rows(), radius, f.size(), exec)
}
