//! Seeded random symbolic instances with small exact coefficients.

use rand::Rng;

use crate::fuchs::{BoundaryCondition, BoundaryFuchsOp, CrossOp, FuchsOp, MellinPoly, SingularTerm, XPoly};
use crate::mat::Mat;
use crate::scalar::{cq, CQ};

pub fn small_cq<R: Rng>(rng: &mut R) -> CQ {
    cq((rng.random_range(-3..=3), rng.random_range(1..=3)), (rng.random_range(-2..=2), rng.random_range(1..=2)))
}

pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Mat<CQ> {
    Mat::from_fn(rows, cols, |_, _| small_cq(rng))
}

pub fn xpoly<R: Rng>(rng: &mut R, rows: usize, cols: usize, degree: usize) -> XPoly<CQ> {
    XPoly::from_coeffs(rows, cols, (0..=degree).map(|_| matrix(rng, rows, cols)).collect())
}

/// Cross-section operator of order at most `order` with coefficients of degree at most 1.
pub fn cross_op<R: Rng>(rng: &mut R, m: usize, order: usize) -> CrossOp<CQ> {
    CrossOp::from_terms(
        m,
        m,
        (0..=order)
            .map(|_| {
                let d = rng.random_range(0..=1);
                xpoly(rng, m, m, d)
            })
            .collect(),
    )
}

/// Fuchs operator with `taylor + 1` Taylor terms, each of z-degree `mu`.
pub fn fuchs_op<R: Rng>(rng: &mut R, n: i64, mu: usize, m: usize, taylor: usize, truncation: usize) -> FuchsOp<CQ> {
    let terms = (0..=taylor)
        .map(|_| MellinPoly::from_coeffs((m, m), (0..=mu).map(|j| cross_op(rng, m, mu - j)).collect()))
        .collect();
    FuchsOp::new(n, mu, m, terms, truncation).expect("orders respect the z-degree")
}

/// Full-row-rank `rows x m` matrix.
fn surjective<R: Rng>(rng: &mut R, rows: usize, m: usize) -> Mat<CQ> {
    loop {
        let s = matrix(rng, rows, m);
        if s.rank() == rows {
            return s;
        }
    }
}

/// Normal lower-triangular condition with constant diagonal and
/// `t`-dependent off-diagonal entries.
pub fn normal_condition<R: Rng>(rng: &mut R, mu: usize, m: usize) -> BoundaryCondition<CQ> {
    let dims: Vec<usize> = (0..mu).map(|_| rng.random_range(0..=m)).collect();
    let mut entries = Vec::new();
    for j in 0..mu {
        entries.push((j, j, BoundaryFuchsOp::constant(surjective(rng, dims[j], m))));
        for k in 0..j {
            let terms = (0..=rng.random_range(0..=1))
                .map(|_| MellinPoly::from_coeffs((dims[j], m), (0..=j - k).map(|_| matrix(rng, dims[j], m)).collect()))
                .collect();
            entries.push((j, k, BoundaryFuchsOp::new((j - k) as i64, (dims[j], m), terms, None)));
        }
    }
    BoundaryCondition::new(mu, m, dims, entries).expect("triangular entries")
}

pub fn singular_term<R: Rng>(rng: &mut R, m: usize) -> SingularTerm<CQ> {
    let (q, l, d) = (small_cq(rng), rng.random_range(0..=2), rng.random_range(0..=2));
    SingularTerm::poly(q, l, xpoly(rng, m, 1, d))
}
