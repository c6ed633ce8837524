use crate::error::{Error, Result};
use crate::fuchs::green::in_normal_coordinate;
use crate::fuchs::{BoundaryCondition, BoundaryPoint};
use crate::linalg::{self, CMat};
use crate::problem::Problem;
use crate::scalar::C64;

/// t-values at which ellipticity is sampled.
pub fn t_samples() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

/// Outcome of a symbol check: the smallest singular value seen and where.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolReport {
    pub min_singular_value: f64,
    pub worst_t: f64,
    pub worst_x: f64,
}

/// `sum_k t^k a_{jl,k}(x)` for the D-form coefficients of `delta^j D^l`,
/// in the coordinate fixed by `point` (none for the interior).
fn a_coefficient(problem: &Problem<C64>, j: usize, l: usize, t: f64, x: f64, point: Option<&BoundaryPoint<C64>>) -> CMat {
    let m = problem.m();
    let mut acc = CMat::zeros(m, m);
    let mut tk = 1.0;
    for h in problem.op.series().terms() {
        let c = h.coeff(j);
        let c = match point {
            Some(p) => in_normal_coordinate(&c, p),
            None => c,
        };
        acc += c.d_coefficient(l).eval(&C64::new(x, 0.0)).to_dmatrix() * C64::new(tk, 0.0);
        tk *= t;
    }
    acc
}

/// Rescaled principal symbol `sum_{j+l=mu} a_jl(t, x) (-i tau)^j xi^l`
/// sampled on `t in {0, 0.1, .., 1}`, an x-grid and the unit circle in `(tau, xi)`.
pub fn principal_symbol_check(problem: &Problem<C64>) -> Result<SymbolReport> {
    let mu = problem.mu();
    let length = problem.length.re;
    let xs: Vec<f64> = (0..=16).map(|i| length * i as f64 / 16.0).collect();
    let angles: Vec<(f64, f64)> = if problem.n() == 1 {
        vec![(1.0, 0.0), (-1.0, 0.0)]
    } else {
        (0..64).map(|k| (2.0 * std::f64::consts::PI * k as f64 / 64.0).sin_cos()).map(|(s, c)| (c, s)).collect()
    };
    let mut worst = SymbolReport { min_singular_value: f64::INFINITY, worst_t: 0.0, worst_x: 0.0 };
    let mut scale: f64 = 0.0;
    for t in t_samples() {
        for &x in &xs {
            let a: Vec<CMat> = (0..=mu).map(|j| a_coefficient(problem, j, mu - j, t, x, None)).collect();
            for &(tau, xi) in &angles {
                let mut s = CMat::zeros(problem.m(), problem.m());
                for (j, aj) in a.iter().enumerate() {
                    s += aj * (C64::new(0.0, -tau).powu(j as u32) * C64::new(xi.powi((mu - j) as i32), 0.0));
                }
                scale = scale.max(linalg::max_singular_value(&s));
                let v = linalg::min_singular_value(&s);
                if v < worst.min_singular_value {
                    worst = SymbolReport { min_singular_value: v, worst_t: t, worst_x: x };
                }
            }
        }
    }
    if worst.min_singular_value <= 1e-10 * scale.max(1.0) {
        return Err(Error::PrincipalSymbol(format!(
            "symbol degenerates at t = {}, x = {}",
            worst.worst_t, worst.worst_x
        )));
    }
    Ok(worst)
}

/// Outcome of the boundary check at one endpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct LopatinskijReport {
    pub point: String,
    pub decaying_dimension: usize,
    pub min_singular_value: f64,
}

/// Shapiro-Lopatinskij condition at both endpoints for `tau = +-1` and the
/// sampled t-values.
pub fn lopatinskij_check(problem: &Problem<C64>) -> Result<Vec<LopatinskijReport>> {
    problem.conditions().iter().map(|(p, bc)| lopatinskij_at(problem, p, bc)).collect()
}

fn lopatinskij_at(problem: &Problem<C64>, point: &BoundaryPoint<C64>, bc: &BoundaryCondition<C64>) -> Result<LopatinskijReport> {
    let (mu, m) = (problem.mu(), problem.m());
    let rows = bc.row_count();
    let mut report = LopatinskijReport { point: point.label().into(), decaying_dimension: 0, min_singular_value: f64::INFINITY };
    for t in t_samples() {
        for tau in [1.0, -1.0] {
            let sym = C64::new(0.0, -tau);
            // polynomial in xi: sum_l P_l xi^l with P_l = a_{mu-l, l}(t, 0) (-i tau)^{mu-l}
            let p: Vec<CMat> = (0..=mu)
                .map(|l| a_coefficient(problem, mu - l, l, t, 0.0, Some(point)) * sym.powu((mu - l) as u32))
                .collect();
            let lead_inv = p[mu].clone().try_inverse().ok_or_else(|| {
                Error::CharacteristicBoundary { point: point.label().into() }
            })?;
            let mut comp = CMat::zeros(mu * m, mu * m);
            for k in 0..mu - 1 {
                comp.view_mut((k * m, (k + 1) * m), (m, m)).copy_from(&CMat::identity(m, m));
            }
            for l in 0..mu {
                let block = -(&lead_inv * &p[l]);
                comp.view_mut(((mu - 1) * m, l * m), (m, m)).copy_from(&block);
            }
            let eig = comp.clone().schur().unpack().1.diagonal();
            let scale = eig.iter().map(|e| e.norm()).fold(1.0, f64::max);
            if let Some(e) = eig.iter().find(|e| e.im.abs() <= 1e-10 * scale) {
                return Err(Error::NotProperlyElliptic(format!(
                    "real root {:.6} of the boundary symbol at the {} endpoint, t = {t}, tau = {tau}",
                    e.re,
                    point.label()
                )));
            }
            let sign = linalg::sign_function(&(&comp * C64::new(0.0, -1.0)))
                .ok_or_else(|| Error::Lopatinskij("sign iteration failed".into()))?;
            let proj = (CMat::identity(mu * m, mu * m) + sign) * C64::new(0.5, 0.0);
            let vplus = linalg::column_space(&proj, 1e-8);
            report.decaying_dimension = vplus.ncols();
            if vplus.ncols() != rows {
                return Err(Error::Lopatinskij(format!(
                    "{} decaying solutions but {rows} boundary rows at the {} endpoint",
                    vplus.ncols(),
                    point.label()
                )));
            }
            if rows == 0 {
                continue;
            }
            let b = boundary_principal_symbol(bc, t, tau);
            let bv = &b * &vplus;
            let smin = linalg::min_singular_value(&bv);
            let smax = linalg::max_singular_value(&b).max(1.0);
            report.min_singular_value = report.min_singular_value.min(smin / smax);
            if smin <= 1e-10 * smax {
                return Err(Error::Lopatinskij(format!(
                    "boundary symbol not injective on decaying solutions at the {} endpoint, t = {t}, tau = {tau}",
                    point.label()
                )));
            }
        }
    }
    Ok(report)
}

/// Rows `sum_k g^_jk(t) (-i tau)^{j-k}` on Cauchy data, where `g^_jk` is the
/// coefficient of `z^{j-k}` in `S_jk`.
pub fn boundary_principal_symbol(bc: &BoundaryCondition<C64>, t: f64, tau: f64) -> CMat {
    let (mu, m) = (bc.mu(), bc.m());
    let mut out = CMat::zeros(bc.row_count(), mu * m);
    let mut r0 = 0;
    for j in 0..mu {
        let fj = bc.dims()[j];
        for k in 0..=j {
            let s = bc.entry(j, k);
            let mut g = CMat::zeros(fj, m);
            let mut tq = 1.0;
            for h in s.terms() {
                g += h.coeff(j - k).to_dmatrix() * C64::new(tq, 0.0);
                tq *= t;
            }
            let w = C64::new(0.0, -tau).powu((j - k) as u32);
            out.view_mut((r0, k * m), (fj, m)).copy_from(&(g * w));
        }
        r0 += fj;
    }
    out
}
