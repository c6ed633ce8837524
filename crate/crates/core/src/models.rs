//! Reference problems on the cone over `[0, pi]` with `n = 2`, `mu = 2`, `m = 1`.
//!
//! * `M1`: `f_0 = z^2 - z + d_x^2` with Dirichlet conditions. Poles of the
//!   inverted conormal symbol: `(1 +- sqrt(1 + 4k^2)) / 2`, `k >= 1`.
//! * `M2`: the same operator with Neumann conditions; adds the poles `0` and `1`.
//! * `M3`: `f_0 = z^2 + d_x^2` with Neumann conditions; a double pole at `0`
//!   and simple poles at `+-k`.

use crate::fuchs::{BoundaryCondition, BoundaryFuchsOp, CrossOp, FuchsOp, MellinPoly, XPoly};
use crate::mat::Mat;
use crate::problem::Problem;
use crate::scalar::{Scalar, C64};

fn constant<T: Scalar>(v: i64) -> CrossOp<T> {
    CrossOp::multiplication(XPoly::scalar(T::from_i64(v)))
}

fn d2<T: Scalar>() -> CrossOp<T> {
    CrossOp::scalar_term(2, XPoly::scalar(T::one()))
}

pub fn length<T: Scalar>() -> T {
    T::from_c64(C64::new(std::f64::consts::PI, 0.0))
}

/// `gamma_0 u = 0` for a second-order scalar problem.
pub fn dirichlet<T: Scalar>() -> BoundaryCondition<T> {
    BoundaryCondition::new(2, 1, vec![1, 0], vec![(0, 0, BoundaryFuchsOp::constant(Mat::scalar(T::one())))])
        .expect("dirichlet condition")
}

/// `t^{-1} gamma_0 D_n u = 0` for a second-order scalar problem.
pub fn neumann<T: Scalar>() -> BoundaryCondition<T> {
    BoundaryCondition::new(2, 1, vec![0, 1], vec![(1, 1, BoundaryFuchsOp::constant(Mat::scalar(T::one())))])
        .expect("neumann condition")
}

/// `f_0 = z^2 - z + d_x^2`.
pub fn m1_symbol<T: Scalar>() -> MellinPoly<CrossOp<T>> {
    MellinPoly::from_coeffs((1, 1), vec![d2(), constant(-1), constant(1)])
}

/// `f_0 = z^2 + d_x^2`.
pub fn m3_symbol<T: Scalar>() -> MellinPoly<CrossOp<T>> {
    MellinPoly::from_coeffs((1, 1), vec![d2(), CrossOp::zero(1, 1), constant(1)])
}

fn build<T: Scalar>(name: &str, f0: MellinPoly<CrossOp<T>>, bc: BoundaryCondition<T>) -> Problem<T> {
    let op = FuchsOp::new(2, 2, 1, vec![f0], 2).expect("model operator");
    Problem::new(name, op, length(), bc.clone(), bc).expect("model problem")
}

pub fn m1<T: Scalar>() -> Problem<T> {
    build("M1", m1_symbol(), dirichlet())
}

pub fn m2<T: Scalar>() -> Problem<T> {
    build("M2", m1_symbol(), neumann())
}

pub fn m3<T: Scalar>() -> Problem<T> {
    build("M3", m3_symbol(), neumann())
}

/// `M1` with lower-order terms: `f_1 = z + x d_x`, `f_2 = 1` and the left
/// condition `(1 + t) gamma_0`.
pub fn m1_perturbed<T: Scalar>() -> Problem<T> {
    let x_d = CrossOp::scalar_term(1, XPoly::from_scalars(vec![T::zero(), T::one()]));
    let f1 = MellinPoly::from_coeffs((1, 1), vec![x_d, constant(1)]);
    let f2 = MellinPoly::constant(constant(1));
    let op = FuchsOp::new(2, 2, 1, vec![m1_symbol(), f1, f2], 2).expect("perturbed operator");
    let one = MellinPoly::constant(Mat::scalar(T::one()));
    let s00 = BoundaryFuchsOp::new(0, (1, 1), vec![one.clone(), one], None);
    let left = BoundaryCondition::new(2, 1, vec![1, 0], vec![(0, 0, s00)]).expect("perturbed condition");
    Problem::new("M1t", op, length(), left, dirichlet()).expect("perturbed problem")
}

/// Model by name: `M1`, `M2`, `M3` or `M1t`.
pub fn by_name<T: Scalar>(name: &str) -> Option<Problem<T>> {
    match name.to_ascii_uppercase().as_str() {
        "M1" => Some(m1()),
        "M2" => Some(m2()),
        "M3" => Some(m3()),
        "M1T" => Some(m1_perturbed()),
        _ => None,
    }
}

/// Closed-form poles of `M1` with `|Re| <= bound`, sorted.
pub fn m1_poles(bound: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 1.. {
        let r = (1.0 + 4.0 * (k * k) as f64).sqrt();
        let (a, b) = ((1.0 - r) / 2.0, (1.0 + r) / 2.0);
        if a < -bound && b > bound {
            break;
        }
        out.extend([a, b].into_iter().filter(|p| p.abs() <= bound));
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Closed-form poles of `M2`: those of `M1` plus `0` and `1`.
pub fn m2_poles(bound: f64) -> Vec<f64> {
    let mut out = m1_poles(bound);
    out.extend([0.0f64, 1.0].into_iter().filter(|p| p.abs() <= bound));
    out.sort_by(f64::total_cmp);
    out
}

/// Closed-form poles of `M3` with multiplicities: `(0, 2)` and `(+-k, 1)`.
pub fn m3_poles(bound: f64) -> Vec<(f64, usize)> {
    let b = bound.floor() as i64;
    (-b..=b).map(|k| (k as f64, if k == 0 { 2 } else { 1 })).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CQ;

    #[test]
    fn closed_form_counts() {
        assert_eq!(m1_poles(6.0).len(), 11);
        assert_eq!(m2_poles(6.0).len(), 13);
        assert_eq!(m3_poles(6.0).len(), 13);
    }

    #[test]
    fn models_build_exactly() {
        for name in ["M1", "M2", "M3", "M1t"] {
            let p: Problem<CQ> = by_name(name).unwrap();
            assert_eq!(p.mu(), 2);
        }
    }
}
