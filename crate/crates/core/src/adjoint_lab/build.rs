use crate::cross_section::{lopatinskij_check, principal_symbol_check, ConormalFamily};
use crate::domains::{AnalysisSettings, WeightData, LINE_TOL};
use crate::error::Result;
use crate::fuchs::boundary::Block;
use crate::fuchs::green::in_normal_coordinate;
use crate::fuchs::{adjoint_condition, green_matrix, triangular_invert, BoundaryCondition, BoundaryFuchsOp, FuchsOp, MellinPoly};
use crate::linalg;
use crate::meromorphic::scan_strip;
use crate::problem::Problem;
use crate::scalar::{Scalar, C64};

/// Formal adjoint `A^t` with the adjoint conditions, plus the Green blocks and
/// the complements `C'` they were built from (left endpoint first).
#[derive(Clone, Debug)]
pub struct AdjointProblem<T> {
    pub problem: Problem<T>,
    pub green: [Block<T>; 2],
    pub c_prime: [Block<T>; 2],
}

impl<T: Scalar> AdjointProblem<T> {
    pub fn a_t(&self) -> &FuchsOp<T> {
        &self.problem.op
    }

    pub fn t_tilde(&self) -> [&BoundaryCondition<T>; 2] {
        [&self.problem.left, &self.problem.right]
    }
}

/// Adjoint of `(A, T)` with respect to `H^{0,0}_2`. Needs normal conditions and a
/// non-characteristic boundary at both endpoints.
pub fn build_adjoint<T: Scalar>(p: &Problem<T>) -> Result<AdjointProblem<T>> {
    let mut conds = Vec::with_capacity(2);
    let mut green = Vec::with_capacity(2);
    let mut c_prime = Vec::with_capacity(2);
    for (point, bc) in p.conditions() {
        conds.push(adjoint_condition(bc, &p.op, &point)?);
        green.push(green_matrix(&p.op, &point));
        c_prime.push(triangular_invert(bc)?.c_prime);
    }
    let right = conds.pop().expect("two endpoints");
    let left = conds.pop().expect("two endpoints");
    let problem = Problem::new(format!("{}^t", p.name), p.op.adjoint(), p.length.clone(), left, right)?;
    let [gl, gr]: [Block<T>; 2] = green.try_into().expect("two endpoints");
    let [cl, cr]: [Block<T>; 2] = c_prime.try_into().expect("two endpoints");
    Ok(AdjointProblem { problem, green: [gl, gr], c_prime: [cl, cr] })
}

/// Largest distance between the Cauchy-data kernels of the two conditions'
/// conormal symbols over the sample points; zero for equivalent conditions.
pub fn condition_distance(a: &BoundaryCondition<C64>, b: &BoundaryCondition<C64>, zs: &[C64]) -> f64 {
    zs.iter()
        .map(|z| {
            let ka = linalg::null_space(&a.symbol(0, z).to_dmatrix(), 1e-10);
            let kb = linalg::null_space(&b.symbol(0, z).to_dmatrix(), 1e-10);
            linalg::subspace_distance(&ka, &kb)
        })
        .fold(0.0, f64::max)
}

/// Anti-diagonal Green blocks minus `i s_{0 mu}` taken at the endpoint, where
/// `s_{0 mu}` is the coefficient of `D_n^mu` in the `z^0` term of every Taylor
/// coefficient. Returns the offending `(endpoint, j)` pairs; empty when exact.
pub fn anti_diagonal_defect<T: Scalar>(p: &Problem<T>) -> Vec<(&'static str, usize)> {
    let (mu, m) = (p.mu(), p.m());
    let mut out = Vec::new();
    for (point, _) in p.conditions() {
        let g = green_matrix(&p.op, &point);
        let terms: Vec<MellinPoly<_>> = p
            .op
            .series()
            .terms()
            .iter()
            .map(|h| {
                let s = in_normal_coordinate(&h.coeff(0), &point).d_coefficient(mu).eval(&T::zero());
                MellinPoly::constant(s.scale(&T::imag_unit()))
            })
            .collect();
        let expected = BoundaryFuchsOp::new(0, (m, m), terms, None);
        for j in 0..mu {
            if !g[j][mu - 1 - j].same_operator(&expected) {
                out.push((point.label(), j));
            }
        }
    }
    out
}

/// Ellipticity data of the adjoint at the weight `-gamma + mu`.
#[derive(Clone, Debug)]
pub struct AdjointEllipticity {
    pub weight: WeightData,
    pub principal_symbol: bool,
    pub lopatinskij: bool,
    /// No pole of the adjoint's inverted conormal symbol on its weight line.
    pub line_clear: bool,
}

impl AdjointEllipticity {
    pub fn passed(&self) -> bool {
        self.principal_symbol && self.lopatinskij && self.line_clear
    }
}

fn line_clear(p: &Problem<C64>, w: &WeightData, settings: &AnalysisSettings) -> Result<bool> {
    let fam = ConormalFamily::conormal(p, settings.grid_n)?;
    let line = w.line();
    let scan = scan_strip(&|z| fam.log_derivative(z), (line - 0.5, line + 0.5), settings.imag_box, &settings.scan)?;
    Ok(scan.all.iter().all(|q| q.z.im.abs() > settings.imag_box || (q.z.re - line).abs() > LINE_TOL))
}

/// Checks the adjoint at `-gamma + mu`. `None` when the original problem has a
/// pole on its own weight line, so the precondition fails.
pub fn adjoint_ellipticity(
    original: &Problem<C64>,
    adjoint: &Problem<C64>,
    w: &WeightData,
    settings: &AnalysisSettings,
) -> Result<Option<AdjointEllipticity>> {
    if !line_clear(original, w, settings)? {
        return Ok(None);
    }
    let weight = w.with_gamma(-w.gamma + w.mu as f64);
    Ok(Some(AdjointEllipticity {
        weight,
        principal_symbol: principal_symbol_check(adjoint).is_ok(),
        lopatinskij: lopatinskij_check(adjoint).is_ok(),
        line_clear: line_clear(adjoint, &weight, settings)?,
    }))
}
