//! Floating-point linear algebra helpers on top of nalgebra.

use nalgebra::DMatrix;

use crate::scalar::C64;

pub type CMat = DMatrix<C64>;

fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn numerical_rank(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&v| v > rel_tol * top).count(),
        _ => 0,
    }
}

/// Number of singular values above an absolute threshold.
pub fn rank_abs(m: &CMat, abs_tol: f64) -> usize {
    singular_values(m).iter().filter(|&&v| v > abs_tol).count()
}

/// Smallest singular value (zero for empty matrices).
pub fn min_singular_value(m: &CMat) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

pub fn max_singular_value(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Orthonormal basis of the column space, singular values above `rel_tol * max`.
pub fn column_space(m: &CMat, rel_tol: f64) -> CMat {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| top > 0.0 && svd.singular_values[i] > rel_tol * top)
        .collect();
    CMat::from_fn(m.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Orthonormal basis of the right nullspace, relative threshold.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    let n = m.ncols();
    if m.nrows() == 0 {
        return CMat::identity(n, n);
    }
    // Pad with zero rows so the SVD returns a full right basis.
    let padded = if m.nrows() < n {
        let mut p = CMat::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let null: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| top == 0.0 || svd.singular_values[i] <= rel_tol * top)
        .collect();
    CMat::from_fn(n, null.len(), |i, j| vt[(null[j], i)].conj())
}

/// Orthogonal projector onto the span of orthonormal columns.
pub fn projector(q: &CMat) -> CMat {
    q * q.adjoint()
}

/// Distance `||P_a - P_b||_2` between subspaces with orthonormal bases.
pub fn subspace_distance(a: &CMat, b: &CMat) -> f64 {
    if a.ncols() != b.ncols() {
        return 1.0;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    max_singular_value(&(projector(a) - projector(b)))
}

/// Orthonormal basis of the orthogonal complement of the column span.
pub fn orthogonal_complement(q: &CMat, rel_tol: f64) -> CMat {
    null_space(&q.adjoint(), rel_tol)
}

/// Matrix sign function by the scaled Newton iteration.
pub fn sign_function(m: &CMat) -> Option<CMat> {
    let n = m.nrows();
    let mut x = m.clone();
    for _ in 0..100 {
        let inv = x.clone().try_inverse()?;
        let det_scale = {
            let d = x.clone().lu().determinant().norm();
            if d > 0.0 && d.is_finite() {
                d.powf(-1.0 / n as f64)
            } else {
                1.0
            }
        };
        let next = (x.clone() * C64::new(det_scale, 0.0) + inv.clone() * C64::new(1.0 / det_scale, 0.0)) * C64::new(0.5, 0.0);
        let diff = (&next - &x).norm();
        x = next;
        if diff <= 1e-13 * x.norm() {
            return Some(x);
        }
    }
    let check = (&x * &x - CMat::identity(n, n)).norm();
    (check < 1e-8).then_some(x)
}

/// `log det` from an LU factorization, `None` for an exactly singular matrix.
pub fn log_det(m: &CMat) -> Option<C64> {
    let lu = m.clone().lu();
    let u = lu.u();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..u.nrows() {
        let d = u[(i, i)];
        if d.norm() == 0.0 {
            return None;
        }
        acc += d.ln();
    }
    let sign: C64 = lu.p().determinant();
    if sign.re < 0.0 {
        acc += C64::new(0.0, std::f64::consts::PI);
    }
    Some(acc)
}

/// Dense matrix from row vectors.
pub fn from_rows(rows: &[Vec<C64>]) -> CMat {
    let r = rows.len();
    let c = rows.first().map_or(0, |v| v.len());
    CMat::from_fn(r, c, |i, j| rows[i][j])
}
