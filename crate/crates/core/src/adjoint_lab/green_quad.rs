use crate::fuchs::boundary::Block;
use crate::fuchs::green_matrix;
use crate::par::Exec;
use crate::problem::Problem;
use crate::quad::gauss_legendre_on;
use crate::scalar::C64;

use super::testfn::TestFunction;

/// Gauss-Legendre nodes per axis.
pub const QUAD_NODES: usize = 64;

struct Rule {
    t: (Vec<f64>, Vec<f64>),
    x: (Vec<f64>, Vec<f64>),
}

impl Rule {
    fn new(length: f64) -> Self {
        Rule { t: gauss_legendre_on(QUAD_NODES, 0.0, 1.0), x: gauss_legendre_on(QUAD_NODES, 0.0, length) }
    }

    fn t_power(&self, e: i64) -> f64 {
        self.t.0.iter().zip(&self.t.1).map(|(t, w)| w * t.powi(e as i32)).sum()
    }

    fn x_inner(&self, a: &crate::fuchs::XPoly<C64>, b: &crate::fuchs::XPoly<C64>) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (x, w) in self.x.0.iter().zip(&self.x.1) {
            let (u, v) = (a.eval(&C64::new(*x, 0.0)), b.eval(&C64::new(*x, 0.0)));
            for r in 0..u.rows() {
                acc += u[(r, 0)] * v[(r, 0)].conj() * *w;
            }
        }
        acc
    }

    fn pairing(&self, u: &TestFunction, v: &TestFunction, n: i64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (a, p) in &u.terms {
            for (b, q) in &v.terms {
                acc += self.x_inner(p, q) * self.t_power(a + b + n);
            }
        }
        acc
    }
}

/// `<u, v>` in `L^2(t^n dt dx)` over `(0, 1) x (0, L)`.
pub fn pairing(u: &TestFunction, v: &TestFunction, n: i64, length: f64) -> C64 {
    Rule::new(length).pairing(u, v, n)
}

/// Terms of the Green identity for one pair of test functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenResidual {
    pub au_v: C64,
    pub u_atv: C64,
    /// `<G rho u, rho v>` summed over both endpoints.
    pub boundary: C64,
}

impl GreenResidual {
    fn scale(&self) -> f64 {
        let s = self.au_v.norm().max(self.u_atv.norm()).max(self.boundary.norm());
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }

    /// `|<Au,v> - <u,A^t v> - <G rho u, rho v>|` relative to the largest of the three terms.
    pub fn residual(&self) -> f64 {
        (self.au_v - self.u_atv - self.boundary).norm() / self.scale()
    }

    /// The same with the boundary form dropped, a control that must not vanish in general.
    pub fn residual_without_boundary(&self) -> f64 {
        (self.au_v - self.u_atv).norm() / self.scale()
    }
}

/// `sum_jk <t^{-j} G_jk t^{-k} gamma_k u, gamma_j v>` in `L^2(t^{n-1} dt)`.
fn boundary_form(rule: &Rule, problem: &Problem<C64>, green: &[Block<C64>; 2], u: &TestFunction, v: &TestFunction) -> C64 {
    let (mu, m, n) = (problem.mu(), problem.m(), problem.n());
    let mut acc = C64::new(0.0, 0.0);
    for ((point, _), g) in problem.conditions().into_iter().zip(green) {
        let tu = u.traces(mu, &point);
        let tv = v.traces(mu, &point);
        for (j, row) in g.iter().enumerate() {
            for (k, entry) in row.iter().enumerate() {
                for (q, h) in entry.terms().iter().enumerate() {
                    for (a, cu) in &tu {
                        let mat = h.eval(&C64::new(-(*a - k as i64) as f64, 0.0));
                        let gc: Vec<C64> =
                            (0..m).map(|r| (0..m).map(|c| mat[(r, c)] * cu[k * m + c]).sum()).collect();
                        for (b, dv) in &tv {
                            let s: C64 = (0..m).map(|r| gc[r] * dv[j * m + r].conj()).sum();
                            acc += s * rule.t_power(a + b + q as i64 + n - mu as i64);
                        }
                    }
                }
            }
        }
    }
    acc
}

/// Evaluates both sides of the Green identity for each pair.
pub fn green_identity_quadrature(problem: &Problem<C64>, pairs: &[(TestFunction, TestFunction)], exec: Exec) -> Vec<GreenResidual> {
    let rule = Rule::new(problem.length.re);
    let adj = problem.op.adjoint();
    let green: [Block<C64>; 2] = [green_matrix(&problem.op, &problem.point_left()), green_matrix(&problem.op, &problem.point_right())];
    let n = problem.n();
    exec.map(pairs, |(u, v)| GreenResidual {
        au_v: rule.pairing(&u.apply(&problem.op), v, n),
        u_atv: rule.pairing(u, &v.apply(&adj), n),
        boundary: boundary_form(&rule, problem, &green, u, v),
    })
}
