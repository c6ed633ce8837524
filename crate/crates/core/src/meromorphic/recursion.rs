use crate::cross_section::{ConormalFamily, Discretization};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::problem::Problem;
use crate::scalar::C64;

/// Families `F_0, .., F_{mu-1}` of the Taylor coefficients `(f_q; s_q)` and the
/// recursion for `X_j = (r_j k_j)`:
/// `X_j(z) = -F_0(z - j)^{-1} sum_{l<j} F_{j-l}(z - l) X_l(z)`.
#[derive(Clone, Debug)]
pub struct Recursion {
    families: Vec<ConormalFamily>,
}

impl Recursion {
    pub fn new(problem: &Problem<C64>, disc: &Discretization) -> Result<Self> {
        let families = (0..problem.mu()).map(|q| ConormalFamily::assemble(problem, q, disc)).collect::<Result<_>>()?;
        Ok(Recursion { families })
    }

    pub fn from_families(families: Vec<ConormalFamily>) -> Result<Self> {
        match families.first() {
            None => Err(Error::Shape("the recursion needs at least the conormal family".into())),
            Some(f) if families.iter().any(|g| g.size() != f.size()) => {
                Err(Error::Shape("families of different sizes".into()))
            }
            _ => Ok(Recursion { families }),
        }
    }

    pub fn families(&self) -> &[ConormalFamily] {
        &self.families
    }

    /// Highest index the recursion is defined for.
    pub fn max_index(&self) -> usize {
        self.families.len() - 1
    }

    fn shifted_inverse(&self, z: C64, j: usize) -> Result<CMat> {
        let w = z - j as f64;
        self.families[0]
            .inverse(w)
            .ok_or_else(|| Error::Singular(format!("shifted evaluation at {w} lands on a pole")))
    }

    /// `X_0(z), .., X_j(z)`, full inverses split later into `(r_l, k_l)`.
    pub fn eval(&self, j: usize, z: C64) -> Result<Vec<CMat>> {
        if j > self.max_index() {
            return Err(Error::Shape(format!("recursion index {j} exceeds {}", self.max_index())));
        }
        let mut xs = vec![self.shifted_inverse(z, 0)?];
        for i in 1..=j {
            let n = self.families[0].size();
            let mut acc = CMat::zeros(n, n);
            for (l, x) in xs.iter().enumerate() {
                let f = &self.families[i - l];
                if !f.is_zero() {
                    acc += f.matrix(z - l as f64) * x;
                }
            }
            xs.push(-(self.shifted_inverse(z, i)? * acc));
        }
        Ok(xs)
    }

    /// `(r_j(z), k_j(z))`.
    pub fn blocks(&self, j: usize, z: C64) -> Result<(CMat, CMat)> {
        let x = self.eval(j, z)?.pop().expect("nonempty");
        let f = &self.families[0];
        Ok((f.r0_block(&x), f.k0_block(&x)))
    }

    /// Largest entry of `sum_{l<=j} F_{j-l}(z - l) X_l(z) - delta_{j0} I` over `j <= max_j`,
    /// relative to the largest entry among the summands.
    pub fn residual(&self, max_j: usize, z: C64) -> Result<f64> {
        let xs = self.eval(max_j, z)?;
        let n = self.families[0].size();
        let mut worst: f64 = 0.0;
        for j in 0..=max_j {
            let mut acc = if j == 0 { -CMat::identity(n, n) } else { CMat::zeros(n, n) };
            let mut scale: f64 = 1.0;
            for (l, x) in xs.iter().enumerate().take(j + 1) {
                let f = self.families[j - l].matrix(z - l as f64);
                let term = &f * x;
                scale = scale.max(term.camax());
                acc += term;
            }
            worst = worst.max(acc.camax() / scale);
        }
        Ok(worst)
    }

    /// Candidate poles of `X_j`: `p + l` for poles `p` of `F_0^{-1}` and `l <= j`.
    pub fn candidate_poles(j: usize, poles: &[C64]) -> Vec<C64> {
        (0..=j).flat_map(|l| poles.iter().map(move |p| p + l as f64)).collect()
    }
}
