use super::mellin::MellinPoly;
use super::series::BoundaryFuchsOp;
use crate::error::{Error, Result};
use crate::linalg;
use crate::mat::Mat;
use crate::scalar::{Scalar, C64};

/// Endpoint of the cross-section `[0, L]`. The inner normal coordinate is
/// `x_n = x` on the left and `x_n = L - x` on the right.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryPoint<T> {
    Left,
    Right { length: T },
}

impl<T: Scalar> BoundaryPoint<T> {
    pub fn label(&self) -> &'static str {
        match self {
            BoundaryPoint::Left => "left",
            BoundaryPoint::Right { .. } => "right",
        }
    }

    pub fn to_c64(&self) -> BoundaryPoint<C64> {
        match self {
            BoundaryPoint::Left => BoundaryPoint::Left,
            BoundaryPoint::Right { length } => BoundaryPoint::Right { length: length.to_c64() },
        }
    }
}

/// Lower-triangular boundary condition `T = (t^{-j} S_jk t^{-k})` acting on the
/// traces `gamma_k = gamma_0 D_n^k`, `k < mu`, at one endpoint. The entry
/// `S_jk` is a boundary Fuchs operator of order `j - k` from `E` to `F_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCondition<T> {
    mu: usize,
    m: usize,
    dims: Vec<usize>,
    entries: Vec<Vec<BoundaryFuchsOp<T>>>,
}

/// Block matrix of boundary Fuchs operators.
pub type Block<T> = Vec<Vec<BoundaryFuchsOp<T>>>;

impl<T: Scalar> BoundaryCondition<T> {
    /// `entries` lists `(j, k, S_jk)`; missing entries are zero.
    pub fn new(mu: usize, m: usize, dims: Vec<usize>, entries: Vec<(usize, usize, BoundaryFuchsOp<T>)>) -> Result<Self> {
        if dims.len() != mu {
            return Err(Error::InvalidBoundary(format!("{} row dimensions given for order {mu}", dims.len())));
        }
        let mut table: Block<T> = (0..mu)
            .map(|j| (0..mu).map(|k| BoundaryFuchsOp::zero(j as i64 - k as i64, (dims[j], m))).collect())
            .collect();
        for (j, k, s) in entries {
            if j >= mu || k > j {
                return Err(Error::InvalidBoundary(format!("entry ({j}, {k}) is not lower triangular for order {mu}")));
            }
            if s.shape() != (dims[j], m) {
                return Err(Error::InvalidBoundary(format!(
                    "entry ({j}, {k}) has shape {:?}, expected ({}, {m})",
                    s.shape(),
                    dims[j]
                )));
            }
            let s = s.with_order(j as i64 - k as i64);
            for (q, h) in s.terms().iter().enumerate() {
                if h.degree().is_some_and(|d| d > j - k) {
                    return Err(Error::InvalidBoundary(format!(
                        "entry ({j}, {k}) Taylor term {q} has z-degree above {}",
                        j - k
                    )));
                }
            }
            table[j][k] = table[j][k].add(&s);
        }
        Ok(BoundaryCondition { mu, m, dims, entries: table })
    }

    pub fn from_block(mu: usize, m: usize, dims: Vec<usize>, block: Block<T>) -> Result<Self> {
        let mut entries = Vec::new();
        for (j, row) in block.into_iter().enumerate() {
            for (k, s) in row.into_iter().enumerate() {
                if k > j {
                    if !s.is_zero() {
                        return Err(Error::InvalidBoundary(format!("nonzero entry ({j}, {k}) above the diagonal")));
                    }
                    continue;
                }
                entries.push((j, k, s));
            }
        }
        Self::new(mu, m, dims, entries)
    }

    /// Empty condition for `mu` traces of an `m`-bundle.
    pub fn void(mu: usize, m: usize) -> Self {
        Self::new(mu, m, vec![0; mu], Vec::new()).expect("void condition")
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimensions of the target bundles `F_j`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn row_count(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_void(&self) -> bool {
        self.row_count() == 0
    }

    pub fn entry(&self, j: usize, k: usize) -> &BoundaryFuchsOp<T> {
        &self.entries[j][k]
    }

    pub fn block(&self) -> &Block<T> {
        &self.entries
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> BoundaryCondition<U> {
        BoundaryCondition {
            mu: self.mu,
            m: self.m,
            dims: self.dims.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|s| s.map_terms(s.shape(), |c| c.map(f))).collect())
                .collect(),
        }
    }

    pub fn to_c64(&self) -> BoundaryCondition<C64> {
        self.map(|x| x.to_c64())
    }

    /// Row `j` of the conormal symbol of Taylor index `q` on Cauchy data:
    /// `sum_k g_q^{jk}(z + k) gamma_k`, an `f_j x (mu m)` matrix.
    pub fn symbol_row(&self, j: usize, q: usize, z: &T) -> Mat<T> {
        let mut row = Mat::zeros(self.dims[j], self.mu * self.m);
        for k in 0..=j {
            let shift = T::from_i64(k as i64);
            let val = self.entries[j][k].term(q).eval(&(z.clone() + shift));
            for r in 0..self.dims[j] {
                for c in 0..self.m {
                    row[(r, k * self.m + c)] = val[(r, c)].clone();
                }
            }
        }
        row
    }

    /// Full conormal symbol of Taylor index `q` on Cauchy data, `(sum f_j) x (mu m)`.
    pub fn symbol(&self, q: usize, z: &T) -> Mat<T> {
        let mut out = Mat::zeros(0, self.mu * self.m);
        for j in 0..self.mu {
            out = out.vstack(&self.symbol_row(j, q, z));
        }
        out
    }

    /// Highest Taylor index present in any entry.
    pub fn taylor_len(&self) -> usize {
        self.entries.iter().flatten().map(|s| s.terms().len()).max().unwrap_or(0)
    }
}

/// Result of [`normality_check`]: kernel bases `B_k` of the diagonal entries at `t = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Normality<T> {
    pub kernels: Vec<Mat<T>>,
}

impl<T: Scalar> Normality<T> {
    pub fn kernel_dims(&self) -> Vec<usize> {
        self.kernels.iter().map(|b| b.cols()).collect()
    }
}

/// Default t-samples on `(0, 1]` used for checks away from the tip.
pub fn default_t_samples() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}

fn diagonal_at<T: Scalar>(s: &BoundaryFuchsOp<T>, t: f64) -> nalgebra::DMatrix<C64> {
    let (r, c) = s.shape();
    let mut acc = nalgebra::DMatrix::zeros(r, c);
    let mut tk = 1.0;
    for h in s.terms() {
        acc += h.coeff(0).to_dmatrix() * C64::new(tk, 0.0);
        tk *= t;
    }
    acc
}

/// Checks that every diagonal `S_kk` is surjective at `t = 0` (exactly for
/// rational data) and on the sample points.
pub fn normality_check<T: Scalar>(bc: &BoundaryCondition<T>, samples: &[f64]) -> Result<Normality<T>> {
    let mut kernels = Vec::with_capacity(bc.mu);
    for k in 0..bc.mu {
        let s = bc.entry(k, k);
        let s0 = s.term(0).coeff(0);
        if s0.rank() < bc.dims[k] {
            return Err(Error::NotNormal { k });
        }
        for &t in samples {
            let v = diagonal_at(s, t);
            if linalg::numerical_rank(&v, 1e-10) < bc.dims[k] {
                return Err(Error::NormalityLostAwayFromTip { k, t });
            }
        }
        kernels.push(s0.nullspace());
    }
    Ok(Normality { kernels })
}

/// `(C, C')` with `S C = 1`, `S C' = 0`, `S' C = 0`, `S' C' = 1`, where
/// `S'` is the coordinate projection onto the kernels `Z_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularInverse<T> {
    pub c: Block<T>,
    pub c_prime: Block<T>,
    /// Diagonal of `S'`: `(B_k* B_k)^{-1} B_k*`.
    pub s_prime: Vec<Mat<T>>,
    pub normality: Normality<T>,
}

fn zero_block<T: Scalar>(mu: usize, shape: impl Fn(usize, usize) -> (usize, usize)) -> Block<T> {
    (0..mu)
        .map(|j| (0..mu).map(|k| BoundaryFuchsOp::zero(j as i64 - k as i64, shape(j, k))).collect())
        .collect()
}

/// Block product with orders adding along each path.
pub fn block_mul<T: Scalar>(a: &Block<T>, b: &Block<T>) -> Result<Block<T>> {
    let n = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = Vec::with_capacity(n);
    for row in a.iter() {
        let mut out_row = Vec::with_capacity(cols);
        for k in 0..cols {
            let mut acc = row[0].compose(&b[0][k])?;
            for l in 1..inner {
                acc = acc.add(&row[l].compose(&b[l][k])?);
            }
            out_row.push(acc);
        }
        out.push(out_row);
    }
    Ok(out)
}

fn stack_rows<T: Scalar>(top: &BoundaryFuchsOp<T>, bottom: &BoundaryFuchsOp<T>) -> BoundaryFuchsOp<T> {
    let order = top.order().max(bottom.order());
    let (a, b) = (top.with_order(order), bottom.with_order(order));
    let cols = top.shape().1;
    let shape = (top.shape().0 + bottom.shape().0, cols);
    let n = a.terms().len().max(b.terms().len());
    let terms = (0..n)
        .map(|q| {
            let (ha, hb) = (a.term(q), b.term(q));
            let deg = ha.coeffs().len().max(hb.coeffs().len());
            MellinPoly::from_coeffs(shape, (0..deg).map(|j| ha.coeff(j).vstack(&hb.coeff(j))).collect())
        })
        .collect();
    BoundaryFuchsOp::new(order, shape, terms, None)
}

/// Inverts the triangular system built from `S` and the kernel projections.
/// Requires t-independent diagonal entries.
pub fn triangular_invert<T: Scalar>(bc: &BoundaryCondition<T>) -> Result<TriangularInverse<T>> {
    let normality = normality_check(bc, &default_t_samples())?;
    let (mu, m) = (bc.mu, bc.m);
    for k in 0..mu {
        if !bc.entry(k, k).is_t_independent() {
            return Err(Error::NonConstantDiagonal { k });
        }
    }
    let mut s_prime = Vec::with_capacity(mu);
    let mut d_inv = Vec::with_capacity(mu);
    for k in 0..mu {
        let b = &normality.kernels[k];
        let p = if b.cols() == 0 {
            Mat::zeros(0, m)
        } else {
            let g = (&b.adjoint() * b).inverse().ok_or_else(|| Error::Singular("kernel Gram matrix".into()))?;
            &g * &b.adjoint()
        };
        let s = bc.entry(k, k).term(0).coeff(0);
        let s_plus = if bc.dims[k] == 0 {
            Mat::zeros(m, 0)
        } else {
            let g = (&s * &s.adjoint()).inverse().ok_or_else(|| Error::Singular("diagonal Gram matrix".into()))?;
            &s.adjoint() * &g
        };
        d_inv.push(s_plus.hstack(b));
        s_prime.push(p);
    }
    // M_jk = [S_jk ; delta_jk P_k], all blocks m x m.
    let m_block: Block<T> = (0..mu)
        .map(|j| {
            (0..mu)
                .map(|k| {
                    let bottom = if j == k {
                        BoundaryFuchsOp::constant(s_prime[k].clone())
                    } else {
                        BoundaryFuchsOp::zero(j as i64 - k as i64, (normality.kernels[j].cols(), m))
                    };
                    stack_rows(bc.entry(j, k), &bottom.with_order(j as i64 - k as i64))
                })
                .collect()
        })
        .collect();
    // V = -D^{-1}(M - D), strictly lower.
    let mut v = zero_block::<T>(mu, |_, _| (m, m));
    for j in 0..mu {
        for k in 0..j {
            let dj = BoundaryFuchsOp::constant(d_inv[j].clone());
            v[j][k] = dj.compose(&m_block[j][k])?.scale(&-T::one());
        }
    }
    let ident: Block<T> = (0..mu)
        .map(|j| {
            (0..mu)
                .map(|k| if j == k { BoundaryFuchsOp::identity(m) } else { BoundaryFuchsOp::zero(j as i64 - k as i64, (m, m)) })
                .collect()
        })
        .collect();
    let mut power = ident.clone();
    let mut sum = ident;
    for _ in 1..mu {
        power = block_mul(&v, &power)?;
        for j in 0..mu {
            for k in 0..mu {
                sum[j][k] = sum[j][k].add(&power[j][k]);
            }
        }
    }
    let mut c = zero_block::<T>(mu, |_, k| (m, bc.dims[k]));
    let mut c_prime = zero_block::<T>(mu, |_, k| (m, normality.kernels[k].cols()));
    for j in 0..mu {
        for k in 0..mu {
            let full = sum[j][k].compose(&BoundaryFuchsOp::constant(d_inv[k].clone()))?;
            c[j][k] = full.block(0..m, 0..bc.dims[k]);
            c_prime[j][k] = full.block(0..m, bc.dims[k]..m);
        }
    }
    Ok(TriangularInverse { c, c_prime, s_prime, normality })
}

impl<T: Scalar> TriangularInverse<T> {
    /// `S'` as a block-diagonal matrix of boundary operators.
    pub fn s_prime_block(&self) -> Block<T> {
        let mu = self.s_prime.len();
        let m = self.s_prime.first().map_or(0, |p| p.cols());
        (0..mu)
            .map(|j| {
                (0..mu)
                    .map(|k| {
                        if j == k {
                            BoundaryFuchsOp::constant(self.s_prime[k].clone())
                        } else {
                            BoundaryFuchsOp::zero(j as i64 - k as i64, (self.s_prime[j].rows(), m))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Checks the four block identities of the inverse.
    pub fn verify(&self, bc: &BoundaryCondition<T>) -> Result<bool> {
        let s = bc.block().clone();
        let sp = self.s_prime_block();
        let checks = [
            (block_mul(&s, &self.c)?, true),
            (block_mul(&s, &self.c_prime)?, false),
            (block_mul(&sp, &self.c)?, false),
            (block_mul(&sp, &self.c_prime)?, true),
        ];
        Ok(checks.iter().all(|(b, ident)| is_identity_block(b, *ident)))
    }
}

/// True when the block matrix is the identity (`ident`) or zero.
pub fn is_identity_block<T: Scalar>(b: &Block<T>, ident: bool) -> bool {
    b.iter().enumerate().all(|(j, row)| {
        row.iter().enumerate().all(|(k, s)| {
            if ident && j == k {
                let (r, c) = s.shape();
                r != c || s.same_operator(&BoundaryFuchsOp::identity(r))
            } else {
                s.is_zero()
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cqi, CQ};

    fn scalar(v: i64) -> Mat<CQ> {
        Mat::scalar(cqi(v))
    }

    #[test]
    fn dirichlet_inverse_is_trivial() {
        let bc = BoundaryCondition::new(2, 1, vec![1, 0], vec![(0, 0, BoundaryFuchsOp::constant(scalar(1)))]).unwrap();
        let inv = triangular_invert(&bc).unwrap();
        assert!(inv.verify(&bc).unwrap());
        assert_eq!(inv.normality.kernel_dims(), vec![0, 1]);
    }

    #[test]
    fn coupled_condition_inverts_exactly() {
        // rows: gamma_0 u and t^{-1}(gamma_1 + (delta + 2) gamma_0)
        let s10 = BoundaryFuchsOp::new(1, (1, 1), vec![MellinPoly::from_coeffs((1, 1), vec![scalar(2), scalar(1)])], None);
        let bc = BoundaryCondition::new(
            2,
            1,
            vec![1, 1],
            vec![(0, 0, BoundaryFuchsOp::constant(scalar(1))), (1, 0, s10), (1, 1, BoundaryFuchsOp::constant(scalar(1)))],
        )
        .unwrap();
        let inv = triangular_invert(&bc).unwrap();
        assert!(inv.verify(&bc).unwrap());
        assert!(!inv.c[1][0].is_zero());
    }

    #[test]
    fn singular_diagonal_is_not_normal() {
        let bc = BoundaryCondition::new(1, 1, vec![1], vec![(0, 0, BoundaryFuchsOp::constant(scalar(0)))]).unwrap();
        assert_eq!(normality_check(&bc, &[]).unwrap_err(), Error::NotNormal { k: 0 });
    }

    #[test]
    fn lost_normality_is_located() {
        // S_00 = 1 - 2t vanishes at t = 1/2
        let s = BoundaryFuchsOp::new(
            0,
            (1, 1),
            vec![MellinPoly::constant(scalar(1)), MellinPoly::constant(scalar(-2))],
            None,
        );
        let bc = BoundaryCondition::new(1, 1, vec![1], vec![(0, 0, s)]).unwrap();
        let err = normality_check(&bc, &default_t_samples()).unwrap_err();
        assert!(matches!(err, Error::NormalityLostAwayFromTip { k: 0, .. }));
    }
}
