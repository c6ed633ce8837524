use super::boundary::{block_mul, triangular_invert, Block, BoundaryCondition, BoundaryPoint};
use super::crossop::CrossOp;
use super::mellin::{Coeff, MellinPoly};
use super::series::{BoundaryFuchsOp, FuchsOp};
use crate::error::{Error, Result};
use crate::linalg;
use crate::mat::Mat;
use crate::scalar::{binomial, powi, Scalar};

/// The operator in the inner normal coordinate of `point`.
pub fn in_normal_coordinate<T: Scalar>(p: &CrossOp<T>, point: &BoundaryPoint<T>) -> CrossOp<T> {
    match point {
        BoundaryPoint::Left => p.clone(),
        BoundaryPoint::Right { length } => p.reflect(length),
    }
}

/// Green matrix of the cross-section operator `P = sum_l s_l(x_n) D_n^l` of order
/// at most `mu`:
/// `G_jk = sum_{l >= j+k+1} i C(l-1-k, j) ((-D_n)^{l-1-k-j} s_l)(0)`,
/// so that `(Pu, v) - (u, P* v) = sum_jk (G_jk gamma_k u, gamma_j v)` at this endpoint.
pub fn green_matrix_x<T: Scalar>(p: &CrossOp<T>, mu: usize, point: &BoundaryPoint<T>) -> Mat<T> {
    let m = Coeff::shape(p).0;
    let q = in_normal_coordinate(p, point);
    let i = T::imag_unit();
    let zero = T::zero();
    let mut g: Mat<T> = Mat::zeros(mu * m, mu * m);
    for j in 0..mu {
        for k in 0..mu - j {
            for l in (j + k + 1)..=mu {
                let a = l - 1 - k - j;
                // s_l = i^l c_l and (-D)^a = (i d)^a
                let val = q.term(l).derivative(a).eval(&zero);
                let w = i.clone() * T::from_i64(binomial((l - 1 - k) as i64, j as i64)) * powi(&i, l + a);
                let block = val.scale(&w);
                for r in 0..m {
                    for c in 0..m {
                        g[(j * m + r, k * m + c)] = g[(j * m + r, k * m + c)].clone() + block[(r, c)].clone();
                    }
                }
            }
        }
    }
    g
}

/// Green matrix of a Fuchs operator at one endpoint: the entry
/// `G_jk = t^{-(mu-1-j-k)} sum_q t^q sum_m G_X[c_{q,m}]_jk (delta - k)^m`,
/// so that the boundary term is `sum (t^{-j} G_jk t^{-k} gamma_k u, gamma_j v)`
/// in `L^2(t^{n-1} dt)`.
pub fn green_matrix<T: Scalar>(a: &FuchsOp<T>, point: &BoundaryPoint<T>) -> Block<T> {
    let (mu, m) = (a.mu(), a.m());
    let mut out: Block<T> = (0..mu)
        .map(|j| (0..mu).map(|k| BoundaryFuchsOp::zero(mu as i64 - 1 - j as i64 - k as i64, (m, m))).collect())
        .collect();
    let taylor = a.series().terms();
    for j in 0..mu {
        for k in 0..mu - j {
            let mut terms = Vec::with_capacity(taylor.len());
            for h in taylor {
                let mut poly: MellinPoly<Mat<T>> = MellinPoly::zero((m, m));
                for (mm, c) in h.coeffs().iter().enumerate() {
                    let g = green_matrix_x(c, mu, point).submatrix(j * m..(j + 1) * m, k * m..(k + 1) * m);
                    if g.is_zero() {
                        continue;
                    }
                    // (z - k)^mm with matrix coefficient g
                    let shifted = MellinPoly::from_coeffs(
                        (m, m),
                        (0..=mm)
                            .map(|i| {
                                let w = T::from_i64(binomial(mm as i64, i as i64)) * powi(&T::from_i64(-(k as i64)), mm - i);
                                g.scale(&w)
                            })
                            .collect(),
                    );
                    poly = poly.add(&shifted);
                }
                terms.push(poly);
            }
            out[j][k] = BoundaryFuchsOp::new(mu as i64 - 1 - j as i64 - k as i64, (m, m), terms, None);
        }
    }
    out
}

/// Boundary condition of the formal adjoint problem at one endpoint:
/// `S~_jk = ((G C')_{k, mu-1-j})^t`, the transpose being the formal adjoint in
/// `L^2(t^{n-1} dt)`. Row `j` takes values in `Z_{mu-1-j}`.
pub fn adjoint_condition<T: Scalar>(
    bc: &BoundaryCondition<T>,
    a: &FuchsOp<T>,
    point: &BoundaryPoint<T>,
) -> Result<BoundaryCondition<T>> {
    let (mu, m) = (a.mu(), a.m());
    if bc.mu() != mu || bc.m() != m {
        return Err(Error::Shape("boundary condition does not match the operator".into()));
    }
    let g = green_matrix(a, point);
    check_noncharacteristic(&g[0][mu - 1], point)?;
    let inv = triangular_invert(bc)?;
    let p = block_mul(&g, &inv.c_prime)?;
    let z = inv.normality.kernel_dims();
    let mut entries = Vec::new();
    for j in 0..mu {
        for k in 0..=j {
            let e = p[k][mu - 1 - j].adjoint(a.n() - 1);
            entries.push((j, k, e.with_order(j as i64 - k as i64)));
        }
    }
    let dims: Vec<usize> = (0..mu).map(|j| z[mu - 1 - j]).collect();
    BoundaryCondition::new(mu, m, dims, entries)
}

/// The leading block `G_{0,mu-1} = i s_{0 mu}(t, 0)` must be invertible at the
/// tip and on the sampled t-values.
pub fn check_noncharacteristic<T: Scalar>(lead: &BoundaryFuchsOp<T>, point: &BoundaryPoint<T>) -> Result<()> {
    let err = || Error::CharacteristicBoundary { point: point.label().to_string() };
    let at_tip = lead.term(0).coeff(0);
    if at_tip.inverse().is_none() {
        return Err(err());
    }
    for t in super::boundary::default_t_samples() {
        let v = lead.to_c64().eval_at(&crate::scalar::C64::new(t, 0.0), &crate::scalar::C64::new(0.0, 0.0));
        if linalg::numerical_rank(&v.to_dmatrix(), 1e-10) < v.rows() {
            return Err(err());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchs::xpoly::XPoly;
    use crate::scalar::{cqi, CQ};

    #[test]
    fn second_order_scalar_green_matrix() {
        // P = d^2 = -D^2 on the left: G = [[0, -i], [-i, 0]]
        let p: CrossOp<CQ> = CrossOp::scalar_term(2, XPoly::scalar(cqi(1)));
        let g = green_matrix_x(&p, 2, &BoundaryPoint::Left);
        let mi = -CQ::imag_unit();
        assert_eq!(g, Mat::from_rows(vec![vec![cqi(0), mi.clone()], vec![mi, cqi(0)]]));
    }

    #[test]
    fn first_order_right_endpoint_flips_sign() {
        // P = D_x = -i d: (Pu, v) - (u, Pv) = -i u(L) v(L)^* + i u(0) v(0)^*
        let p: CrossOp<CQ> = CrossOp::scalar_term(1, XPoly::scalar(-CQ::imag_unit()));
        let left = green_matrix_x(&p, 1, &BoundaryPoint::Left);
        let right = green_matrix_x(&p, 1, &BoundaryPoint::Right { length: cqi(3) });
        assert_eq!(left, Mat::scalar(CQ::imag_unit()));
        assert_eq!(right, Mat::scalar(-CQ::imag_unit()));
    }
}
