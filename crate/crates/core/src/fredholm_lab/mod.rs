//! Finite-dimensional instances of the index and surjectivity theorems for
//! boundary value problems `(A; T): H -> E + F`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, CMat};
use crate::par::Exec;
use crate::scalar::C64;

/// Absolute singular-value threshold on unit-scaled matrices.
pub const RANK_TOL: f64 = 1e-10;

/// `A: H -> E` and `T: H -> F` as matrices with `h` columns.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteBVP {
    pub a: CMat,
    pub t: CMat,
}

fn unit_scaled(m: &CMat) -> CMat {
    let s = m.camax();
    if s > 0.0 {
        m.unscale(s)
    } else {
        m.clone()
    }
}

fn rank(m: &CMat) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    linalg::rank_abs(&unit_scaled(m), RANK_TOL)
}

/// Orthonormal kernel basis with the same threshold as [`rank`].
fn kernel(m: &CMat) -> CMat {
    let n = m.ncols();
    if m.nrows() == 0 || m.camax() == 0.0 {
        return CMat::identity(n, n);
    }
    let s = unit_scaled(m);
    let padded = if s.nrows() < n { s.clone().insert_rows(s.nrows(), n - s.nrows(), C64::new(0.0, 0.0)) } else { s };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let idx: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] <= RANK_TOL).collect();
    CMat::from_fn(n, idx.len(), |i, j| vt[(idx[j], i)].conj())
}

impl FiniteBVP {
    pub fn new(a: CMat, t: CMat) -> Self {
        assert_eq!(a.ncols(), t.ncols(), "A and T act on the same space");
        FiniteBVP { a, t }
    }

    /// `(h, e, f)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.a.ncols(), self.a.nrows(), self.t.nrows())
    }

    /// `(A; T)`.
    pub fn stacked(&self) -> CMat {
        let (h, e, f) = self.dims();
        CMat::from_fn(e + f, h, |i, j| if i < e { self.a[(i, j)] } else { self.t[(i - e, j)] })
    }

    /// Kernel of `T` as orthonormal columns.
    pub fn ker_t(&self) -> CMat {
        kernel(&self.t)
    }

    /// `A_T = A` restricted to `ker T`, in the basis of [`Self::ker_t`].
    pub fn a_t(&self) -> CMat {
        &self.a * self.ker_t()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexData {
    pub ind_full: i64,
    pub ind_a_t: i64,
    pub codim_im_t: i64,
    pub dim_ker_full: usize,
    pub dim_ker_a_t: usize,
}

impl IndexData {
    /// `ind (A; T) = ind A_T - codim im T`.
    pub fn identity_holds(&self) -> bool {
        self.ind_full == self.ind_a_t - self.codim_im_t
    }
}

/// Indices from ranks: `ind = dim ker - codim im`.
pub fn index_data(inst: &FiniteBVP) -> IndexData {
    let (h, e, f) = inst.dims();
    let r_full = rank(&inst.stacked());
    let r_t = rank(&inst.t);
    let k = inst.ker_t();
    let a_t = &inst.a * &k;
    let r_at = rank(&a_t);
    let dim_ker_full = h - r_full;
    let dim_ker_a_t = k.ncols() - r_at;
    IndexData {
        ind_full: dim_ker_full as i64 - (e + f - r_full) as i64,
        ind_a_t: dim_ker_a_t as i64 - (e - r_at) as i64,
        codim_im_t: (f - r_t) as i64,
        dim_ker_full,
        dim_ker_a_t,
    }
}

/// `ker (A; T) = ker A cap ker T` as subspaces: distance between the kernel of
/// the stacked map and `ker T` mapped through `ker A_T`.
pub fn kernel_identity_defect(inst: &FiniteBVP) -> f64 {
    let direct = kernel(&inst.stacked());
    let k = inst.ker_t();
    let inner = kernel(&(&inst.a * &k));
    let via = &k * inner;
    let via = if via.ncols() > 0 { linalg::column_space(&via, 1e-12) } else { via };
    linalg::subspace_distance(&direct, &via)
}

/// Both sides of the surjectivity lemma and the invertibility corollary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurjectivityCheck {
    pub full_surjective: bool,
    pub t_surjective: bool,
    pub a_t_surjective: bool,
    pub full_invertible: bool,
    pub a_t_invertible: bool,
}

impl SurjectivityCheck {
    /// `(A; T)` onto iff `T` and `A_T` are onto; invertible iff additionally `A_T` is injective.
    pub fn holds(&self) -> bool {
        self.full_surjective == (self.t_surjective && self.a_t_surjective)
            && self.full_invertible == (self.t_surjective && self.a_t_invertible)
    }
}

pub fn check_lemma_surjectivity(inst: &FiniteBVP) -> SurjectivityCheck {
    let (h, e, f) = inst.dims();
    let r_full = rank(&inst.stacked());
    let r_t = rank(&inst.t);
    let k = inst.ker_t();
    let r_at = rank(&(&inst.a * &k));
    let full_surjective = r_full == e + f;
    let a_t_surjective = r_at == e;
    SurjectivityCheck {
        full_surjective,
        t_surjective: r_t == f,
        a_t_surjective,
        full_invertible: full_surjective && r_full == h,
        a_t_invertible: a_t_surjective && r_at == k.ncols(),
    }
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Random matrix of rank at most `r`.
fn low_rank<R: Rng>(rng: &mut R, rows: usize, cols: usize, r: usize) -> CMat {
    random_matrix(rng, rows, r) * random_matrix(rng, r, cols)
}

/// Instance with dimensions in `1..=max_dim`; about half of the factors are
/// rank deficient and some are built so that `(A; T)` is invertible.
pub fn random_instance<R: Rng>(rng: &mut R, max_dim: usize) -> FiniteBVP {
    let h = rng.random_range(1..=max_dim);
    if h >= 2 && rng.random_bool(0.2) {
        // invertible (A; T): split an invertible h x h matrix
        let f = rng.random_range(1..h);
        let m = random_matrix(rng, h, h);
        let a = m.rows(0, h - f).into_owned();
        let t = m.rows(h - f, f).into_owned();
        return FiniteBVP::new(a, t);
    }
    let e = rng.random_range(1..=max_dim);
    let f = rng.random_range(1..=max_dim);
    let pick = |rows: usize, rng: &mut R| {
        let full = rows.min(h);
        if rng.random_bool(0.5) {
            random_matrix(rng, rows, h)
        } else {
            let r = rng.random_range(0..=full);
            low_rank(rng, rows, h, r)
        }
    };
    let a = pick(e, rng);
    let t = pick(f, rng);
    FiniteBVP::new(a, t)
}

/// Outcome of a seeded batch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BatchSummary {
    pub total: usize,
    pub index_identity: usize,
    pub kernel_identity: usize,
    pub lemma: usize,
    pub surjective_cases: usize,
    pub invertible_cases: usize,
}

impl BatchSummary {
    pub fn all_pass(&self) -> bool {
        self.index_identity == self.total && self.kernel_identity == self.total && self.lemma == self.total
    }
}

/// Runs `count` instances drawn from `ChaCha8Rng` seeded with `seed`; instance
/// `i` uses its own stream so the result does not depend on the execution order.
pub fn run_batch(seed: u64, count: usize, max_dim: usize, exec: Exec) -> BatchSummary {
    let results = exec.map_range(count, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let inst = random_instance(&mut rng, max_dim);
        let idx = index_data(&inst);
        let sur = check_lemma_surjectivity(&inst);
        [idx.identity_holds(), kernel_identity_defect(&inst) < 1e-8, sur.holds(), sur.full_surjective, sur.full_invertible]
    });
    let count_true = |k: usize| results.iter().filter(|r| r[k]).count();
    BatchSummary {
        total: count,
        index_identity: count_true(0),
        kernel_identity: count_true(1),
        lemma: count_true(2),
        surjective_cases: count_true(3),
        invertible_cases: count_true(4),
    }
}
