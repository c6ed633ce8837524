use super::weight::{WeightData, LINE_TOL};
use crate::cross_section::ConormalFamily;
use crate::error::Result;
use crate::fuchs::{Section, SingularTerm};
use crate::linalg::{self, CMat};
use crate::meromorphic::{contour_coefficients, default_radius, PoleDatum, Recursion, RANK_TOL};
use crate::par::Exec;
use crate::scalar::C64;

/// Distance from the strip lines that separates the sub-strips; poles are
/// either on a line or farther away than this.
pub const SUBSTRIP_EPS: f64 = 1e-7;
const SAME_POINT: f64 = 1e-8;

/// `omega sum_terms sigma t^{-q} log^l t`, one element of the singular basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularFunction {
    pub terms: Vec<SingularTerm<C64>>,
    /// Exponent of the pivot term, the most singular one.
    pub exponent: C64,
    pub log_power: usize,
    /// Some term sits on the line of `gamma + mu`; directness is not decided.
    pub endpoint: bool,
}

impl SingularFunction {
    pub fn term(&self, exponent: C64, log_power: usize) -> Option<&SingularTerm<C64>> {
        self.terms
            .iter()
            .find(|t| t.log_power == log_power && (t.exponent - exponent).norm() <= SAME_POINT * exponent.norm().max(1.0))
    }

    /// Grid values of a term, empty if absent.
    pub fn coefficient(&self, exponent: C64, log_power: usize) -> Vec<C64> {
        match self.term(exponent, log_power).map(|t| &t.sigma) {
            Some(Section::Grid(v)) => v.clone(),
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularBasis {
    pub functions: Vec<SingularFunction>,
    pub flags: Vec<String>,
}

/// Laurent principal part of one `r_l` at a point, restricted to interior columns.
struct Contribution {
    l: usize,
    r: Vec<CMat>,
}

fn same(a: C64, b: C64) -> bool {
    (a - b).norm() <= SAME_POINT * a.norm().max(1.0)
}

fn substrip(k: usize, w: &WeightData) -> (f64, f64) {
    let lo = w.strip().0;
    let lower = if k == 0 { lo + SUBSTRIP_EPS } else { lo + k as f64 - SUBSTRIP_EPS };
    (lower, lo + k as f64 + 1.0 - SUBSTRIP_EPS)
}

fn r_l_laurent(rec: &Recursion, l: usize, q: C64, others: &[C64], bound: usize, exec: Exec) -> Result<Option<Contribution>> {
    let radius = default_radius(q, others);
    let family = &rec.families()[0];
    let interior = family.interior_rows();
    let eval = |z: C64| rec.eval(l, z).ok().and_then(|mut xs| xs.pop());
    let r = contour_coefficients(&eval, q, radius, bound, exec)?;
    let scale = (0..4)
        .filter_map(|i| eval(q + C64::from_polar(radius, 0.3 + i as f64 * std::f64::consts::FRAC_PI_2)))
        .map(|m| m.norm())
        .fold(0.0, f64::max);
    let r: Vec<CMat> = r
        .iter()
        .map(|m| CMat::from_fn(m.nrows(), interior.len(), |i, j| m[(i, interior[j])]))
        .collect();
    let last = r
        .iter()
        .enumerate()
        .rposition(|(k, m)| m.norm() > RANK_TOL * radius.powi(k as i32 + 1) * scale);
    Ok(last.map(|n| Contribution { l, r: r[..=n].to_vec() }))
}

/// Generators `h -> sum_l sum_m (-1)^m / m! (sum_i R^(l)_{m+i} h_i) t^{-(q-l)} log^m t`
/// of one point, as `(slots, column space)`.
fn generators(q: C64, parts: &[Contribution]) -> (Vec<(C64, usize)>, CMat) {
    let size = parts[0].r[0].nrows();
    let width = parts[0].r[0].ncols();
    let n_h = parts.iter().map(|c| c.r.len()).max().unwrap_or(0);
    let mut slots = Vec::new();
    for c in parts {
        for m in 0..c.r.len() {
            slots.push((q - c.l as f64, m));
        }
    }
    let mut big = CMat::zeros(slots.len() * size, n_h * width);
    let mut row = 0;
    for c in parts {
        let n = c.r.len();
        for m in 0..n {
            let f = if m % 2 == 0 { 1.0 } else { -1.0 } / (1..=m).map(|v| v as f64).product::<f64>();
            for i in 0..n - m {
                big.view_mut((row * size, i * width), (size, width)).copy_from(&(&c.r[m + i] * C64::new(f, 0.0)));
            }
            row += 1;
        }
    }
    (slots, linalg::column_space(&big, RANK_TOL))
}

/// Reduced echelon form with block pivoting: within each slot the largest
/// remaining entry becomes a pivot and is cleared from every other vector.
fn echelon(mut rows: Vec<Vec<C64>>, blocks: &[std::ops::Range<usize>], tol: f64) -> Vec<(Vec<C64>, usize, usize)> {
    let mut out: Vec<(Vec<C64>, usize, usize)> = Vec::new();
    for (b, range) in blocks.iter().enumerate() {
        loop {
            let mut best = (0.0, 0, 0);
            for (i, r) in rows.iter().enumerate() {
                for c in range.clone() {
                    if r[c].norm() > best.0 {
                        best = (r[c].norm(), i, c);
                    }
                }
            }
            if best.0 <= tol {
                break;
            }
            let (_, i, c) = best;
            let mut pivot = rows.remove(i);
            let pv = pivot[c];
            for v in pivot.iter_mut() {
                *v /= pv;
            }
            for r in rows.iter_mut().chain(out.iter_mut().map(|o| &mut o.0)) {
                let f = r[c];
                if f != C64::new(0.0, 0.0) {
                    for (x, y) in r.iter_mut().zip(&pivot) {
                        *x -= f * y;
                    }
                }
            }
            out.push((pivot, b, c));
        }
    }
    out
}

/// Singular functions spanning `E` modulo the flat part: residues of the
/// `r_l` between the sub-strip lines, `t^l`-shifted, as in the operators `G_kl`.
/// `r0_poles` must hold Laurent data of every pole of `r_0` in the closed strip;
/// the shifted poles `p + j` of the `r_l` that matter all come from those.
pub fn singular_basis(rec: &Recursion, r0_poles: &[PoleDatum], w: &WeightData, exec: Exec) -> Result<SingularBasis> {
    let mu = w.mu;
    let lo = w.strip().0;
    let positions: Vec<C64> = r0_poles.iter().map(|d| d.p).collect();
    let t_dependent = rec.families().iter().skip(1).any(|f| !f.is_zero());
    let mut flags = Vec::new();
    let mut groups: Vec<(C64, Vec<Contribution>)> = Vec::new();
    for k in 0..mu {
        let (a, b) = substrip(k, w);
        let inside = |z: C64| z.re > a && z.re < b;
        let mut points: Vec<C64> = positions.iter().copied().filter(|&p| inside(p)).collect();
        if t_dependent {
            for l in 1..=k {
                for j in 0..=l {
                    for p in &positions {
                        let q = p + j as f64;
                        if !inside(q) {
                            continue;
                        }
                        if j > 0 && positions.iter().any(|&x| same(x, q)) {
                            let note = format!(
                                "shifted pole {q:.6} of r_{l} coincides with a pole of r_0; log-order bookkeeping should be reviewed"
                            );
                            if !flags.contains(&note) {
                                flags.push(note);
                            }
                        }
                        if !points.iter().any(|&x| same(x, q)) {
                            points.push(q);
                        }
                    }
                }
            }
        }
        let mut candidates: Vec<C64> = positions.clone();
        for j in 1..mu {
            candidates.extend(positions.iter().map(|p| p + j as f64));
        }
        for q in points {
            let mut parts = Vec::new();
            if let Some(d) = r0_poles.iter().find(|d| same(d.p, q)) {
                if d.rank_m > 0 {
                    parts.push(Contribution { l: 0, r: (0..=d.n_p).map(|i| d.r0(i)).collect() });
                }
            }
            if t_dependent {
                for l in 1..=k {
                    let bound: usize = (0..=l)
                        .flat_map(|j| r0_poles.iter().filter(move |d| same(d.p + j as f64, q)))
                        .map(|d| d.order)
                        .sum::<usize>()
                        + 1;
                    let others: Vec<C64> = candidates.iter().copied().filter(|&c| !same(c, q)).collect();
                    if let Some(c) = r_l_laurent(rec, l, q, &others, bound, exec)? {
                        parts.push(c);
                    }
                }
            }
            if !parts.is_empty() {
                groups.push((q, parts));
            }
        }
    }
    // global slots
    let size = rec.families()[0].size();
    let mut slots: Vec<(C64, usize)> = Vec::new();
    let mut gens: Vec<(Vec<(C64, usize)>, CMat)> = Vec::new();
    for (q, parts) in &groups {
        let (s, g) = generators(*q, parts);
        for &(e, m) in &s {
            if e.re >= lo - SUBSTRIP_EPS && !slots.iter().any(|&(f, n)| n == m && same(e, f)) {
                slots.push((e, m));
            }
        }
        gens.push((s, g));
    }
    // most singular first so that each pivot is a leading term
    slots.sort_by(|a, b| b.0.re.total_cmp(&a.0.re).then(a.0.im.total_cmp(&b.0.im)).then(b.1.cmp(&a.1)));
    let slot_of = |e: C64, m: usize| slots.iter().position(|&(f, n)| n == m && same(e, f));
    let mut touched = vec![0usize; slots.len()];
    let mut columns: Vec<Vec<C64>> = Vec::new();
    for (s, g) in &gens {
        let mut hit = vec![false; slots.len()];
        for c in 0..g.ncols() {
            let mut v = vec![C64::new(0.0, 0.0); slots.len() * size];
            for (i, &(e, m)) in s.iter().enumerate() {
                if let Some(j) = slot_of(e, m) {
                    hit[j] = true;
                    for r in 0..size {
                        v[j * size + r] += g[(i * size + r, c)];
                    }
                }
            }
            columns.push(v);
        }
        for (t, h) in touched.iter_mut().zip(hit) {
            *t += h as usize;
        }
    }
    for (j, &t) in touched.iter().enumerate() {
        if t > 1 {
            flags.push(format!("exponent {:.6} receives terms from several poles", slots[j].0));
        }
    }
    if columns.is_empty() {
        return Ok(SingularBasis { functions: Vec::new(), flags });
    }
    let all = CMat::from_fn(slots.len() * size, columns.len(), |i, j| columns[j][i]);
    let q = linalg::column_space(&all, RANK_TOL);
    let rows: Vec<Vec<C64>> = (0..q.ncols()).map(|j| q.column(j).iter().copied().collect()).collect();
    let blocks: Vec<_> = (0..slots.len()).map(|j| j * size..(j + 1) * size).collect();
    let reduced = echelon(rows, &blocks, 1e-8);
    let functions = reduced
        .into_iter()
        .map(|(v, b, _)| {
            let terms: Vec<SingularTerm<C64>> = slots
                .iter()
                .enumerate()
                .filter_map(|(j, &(e, m))| {
                    let vals = v[j * size..(j + 1) * size].to_vec();
                    let top = vals.iter().map(|x| x.norm()).fold(0.0, f64::max);
                    (top > 1e-10).then_some(SingularTerm { exponent: e, log_power: m, sigma: Section::Grid(vals) })
                })
                .collect();
            let endpoint = terms.iter().any(|t| (t.exponent.re - lo).abs() <= LINE_TOL);
            SingularFunction { terms, exponent: slots[b].0, log_power: slots[b].1, endpoint }
        })
        .collect();
    Ok(SingularBasis { functions, flags })
}

/// `|f_0(q) sigma|` on interior rows relative to `|f_0(q)| |sigma|` for the
/// leading term of a function: zero when `sigma t^{-q}` solves the indicial equation.
pub fn indicial_residual(family: &ConormalFamily, f: &SingularFunction) -> f64 {
    let sigma = f.coefficient(f.exponent, f.log_power);
    if sigma.is_empty() {
        return f64::INFINITY;
    }
    let v = CMat::from_column_slice(sigma.len(), 1, &sigma);
    let m = family.matrix(f.exponent);
    let rows = family.interior_rows();
    let fm = CMat::from_fn(rows.len(), m.ncols(), |i, j| m[(rows[i], j)]);
    (&fm * &v).norm() / (fm.norm() * v.norm())
}
