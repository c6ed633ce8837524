use crate::fuchs::{green_matrix_x, BoundaryPoint, XPoly};
use crate::linalg::{self, CMat};
use crate::mat::Mat;
use crate::par::Exec;
use crate::problem::Problem;
use crate::quad::gauss_legendre_on;
use crate::scalar::{powi, C64};

/// Degree of the polynomial sections used to test the identity.
const DEGREE: usize = 10;

/// `n + 1 - mu`: the conormal symbol of the adjoint at `z` is the adjoint of the
/// original symbol at `n + 1 - mu - conj(z)`.
pub fn reflection_offset(p: &Problem<C64>) -> f64 {
    (p.n() + 1 - p.mu() as i64) as f64
}

/// Cauchy data `(D_n^k u)(point)`, `k < mu`, stacked by `k`.
pub fn cauchy_data(u: &XPoly<C64>, mu: usize, point: &BoundaryPoint<C64>) -> Vec<C64> {
    let q = match point {
        BoundaryPoint::Left => u.clone(),
        BoundaryPoint::Right { length } => u.reflect(length),
    };
    let mi = C64::new(0.0, -1.0);
    let zero = C64::new(0.0, 0.0);
    (0..mu)
        .flat_map(|k| {
            let v = q.derivative(k).eval(&zero);
            let w = powi(&mi, k);
            (0..v.rows()).map(move |r| v[(r, 0)] * w).collect::<Vec<_>>()
        })
        .collect()
}

/// Orthonormal (in coefficient space) basis of the `C^m`-valued polynomials of
/// degree at most `degree` in `x / L` whose Cauchy data lie in the kernel of the
/// conormal boundary symbol at `z` at both endpoints.
pub fn admissible_sections(p: &Problem<C64>, z: C64, degree: usize) -> Vec<XPoly<C64>> {
    let (mu, m) = (p.mu(), p.m());
    let l = p.length;
    let monomial = |i: usize, r: usize| {
        let mut coeffs = vec![Mat::zeros(m, 1); i + 1];
        coeffs[i][(r, 0)] = C64::new(1.0, 0.0) / l.powu(i as u32);
        XPoly::from_coeffs(m, 1, coeffs)
    };
    let count = (degree + 1) * m;
    let basis: Vec<XPoly<C64>> = (0..count).map(|c| monomial(c / m, c % m)).collect();
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (point, bc) in p.conditions() {
        let sym = bc.symbol(0, &z).to_dmatrix();
        let data = CMat::from_fn(mu * m, count, |i, c| cauchy_data(&basis[c], mu, &point)[i]);
        let con = sym * data;
        for i in 0..con.nrows() {
            rows.push(con.row(i).iter().copied().collect());
        }
    }
    let k = if rows.is_empty() { CMat::identity(count, count) } else { linalg::null_space(&linalg::from_rows(&rows), 1e-10) };
    (0..k.ncols())
        .map(|j| {
            let mut acc = XPoly::zero(m, 1);
            for (c, b) in basis.iter().enumerate() {
                acc = acc.add(&b.scale(&k[(c, j)]));
            }
            acc
        })
        .collect()
}

fn inner(a: &XPoly<C64>, b: &XPoly<C64>, nodes: &[f64], weights: &[f64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(weights) {
        let (u, v) = (a.eval(&C64::new(*x, 0.0)), b.eval(&C64::new(*x, 0.0)));
        for r in 0..u.rows() {
            acc += u[(r, 0)] * v[(r, 0)].conj() * *w;
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjugationReport {
    pub offset: f64,
    /// `|(f(w) u, v) - (u, f~(z) v)|` relative to the norms, `u`, `v` admissible.
    pub pairing: f64,
    /// Distance between the Cauchy-data kernel of the adjoint condition and the
    /// annihilator of `G ker T(w)` under the Green form.
    pub kernel: f64,
}

impl ConjugationReport {
    pub fn max_residual(&self) -> f64 {
        self.pairing.max(self.kernel)
    }
}

/// Compares the conormal symbol of `adjoint` at each `z` with the adjoint of the
/// symbol of `problem` at `w = offset - conj(z)`.
pub fn conjugation_check(problem: &Problem<C64>, adjoint: &Problem<C64>, zs: &[C64], offset: f64, exec: Exec) -> ConjugationReport {
    let mu = problem.mu();
    let (nodes, weights) = gauss_legendre_on(64, 0.0, problem.length.re);
    let per_z = exec.map(zs, |&z| {
        let w = C64::new(offset, 0.0) - z.conj();
        let f = problem.op.conormal_symbol(0).eval(&w);
        let g = adjoint.op.conormal_symbol(0).eval(&z);
        let us = admissible_sections(problem, w, DEGREE);
        let vs = admissible_sections(adjoint, z, DEGREE);
        let fus: Vec<_> = us.iter().map(|u| f.apply(u)).collect();
        let gvs: Vec<_> = vs.iter().map(|v| g.apply(v)).collect();
        let norm = |a: &XPoly<C64>| inner(a, a, &nodes, &weights).re.max(0.0).sqrt();
        let mut pairing: f64 = 0.0;
        for (u, fu) in us.iter().zip(&fus) {
            for (v, gv) in vs.iter().zip(&gvs) {
                let d = inner(fu, v, &nodes, &weights) - inner(u, gv, &nodes, &weights);
                let scale = norm(fu) * norm(v) + norm(u) * norm(gv);
                if scale > 0.0 {
                    pairing = pairing.max(d.norm() / scale);
                }
            }
        }
        let mut kernel: f64 = 0.0;
        for ((point, bc), (_, bt)) in problem.conditions().into_iter().zip(adjoint.conditions()) {
            let green = green_matrix_x(&f, mu, &point).to_dmatrix();
            let ker = linalg::null_space(&bc.symbol(0, &w).to_dmatrix(), 1e-10);
            let image = linalg::column_space(&(green * ker), 1e-10);
            let expected = linalg::orthogonal_complement(&image, 1e-10);
            let actual = linalg::null_space(&bt.symbol(0, &z).to_dmatrix(), 1e-10);
            kernel = kernel.max(linalg::subspace_distance(&expected, &actual));
        }
        (pairing, kernel)
    });
    let pairing = per_z.iter().map(|r| r.0).fold(0.0, f64::max);
    let kernel = per_z.iter().map(|r| r.1).fold(0.0, f64::max);
    ConjugationReport { offset, pairing, kernel }
}
