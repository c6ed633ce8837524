//! Problem files.
//!
//! A problem file is TOML with the sections `[problem]`, `[[operator]]`,
//! `[boundary.left]`, `[boundary.right]`, `[weights]` and `[solver]`:
//!
//! ```toml
//! [problem]
//! name = "M1"
//! n = 2
//! mu = 2
//! m = 1
//! L = "pi"
//!
//! # t^{-mu} sum_k t^k f_k(-t d_t) with f_k(z) = sum_j z^j c_jk
//! [[operator]]
//! t_pow = 0
//! z_pow = 0
//! expr = "d^2"
//!
//! [boundary.left]
//! dims = [1, 0]
//! [[boundary.left.entry]]
//! j = 0
//! k = 0
//! matrix = "1"
//! ```
//!
//! Boundary entry `(j, k)` is the term `t^t_pow z^z_pow matrix` of `S_jk`,
//! a boundary operator of order `j - k` acting on the trace `gamma_k`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use conebvp::domains::AnalysisSettings;
use conebvp::fuchs::{BoundaryCondition, BoundaryFuchsOp, Coeff, CrossOp, FuchsOp, MellinPoly};
use conebvp::meromorphic::ScanSettings;
use conebvp::scalar::C64;
use conebvp::{Mat, Problem};
use serde::Deserialize;
use toml::Spanned;

use crate::expr::{self, ExprError};

/// Parse or validation error at a line and column of the input (both 1-based).
#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, col)
}

struct Source<'a>(&'a str);

impl Source<'_> {
    fn error(&self, span: Range<usize>, message: impl Into<String>) -> ParseError {
        let (line, col) = position(self.0, span.start);
        ParseError { line, col, message: message.into() }
    }

    /// Maps an offset inside a string value to the file, skipping the opening quotes.
    fn expr_error(&self, span: Range<usize>, what: &str, e: ExprError) -> ParseError {
        let rest = &self.0[span.start.min(self.0.len())..];
        let quote = if rest.starts_with("\"\"\"") || rest.starts_with("'''") {
            3
        } else if rest.starts_with('"') || rest.starts_with('\'') {
            1
        } else {
            0
        };
        self.error(span.start + quote + e.offset..span.end, format!("{what}: {}", e.message))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: RawProblem,
    #[serde(default)]
    operator: Vec<RawTerm>,
    boundary: Spanned<RawBoundaries>,
    #[serde(default)]
    weights: RawWeights,
    #[serde(default)]
    solver: RawSolver,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    name: String,
    n: Spanned<i64>,
    mu: Spanned<usize>,
    m: Spanned<usize>,
    #[serde(rename = "L")]
    length: Spanned<toml::Value>,
    truncation: Option<Spanned<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    t_pow: Spanned<usize>,
    z_pow: Spanned<usize>,
    expr: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBoundaries {
    left: Spanned<RawBoundary>,
    right: Spanned<RawBoundary>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBoundary {
    dims: Spanned<Vec<usize>>,
    #[serde(default)]
    entry: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    j: Spanned<usize>,
    k: Spanned<usize>,
    #[serde(default)]
    t_pow: usize,
    #[serde(default)]
    z_pow: usize,
    matrix: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    #[serde(default)]
    gamma: Vec<f64>,
    #[serde(default = "default_p")]
    p: Spanned<f64>,
}

impl Default for RawWeights {
    fn default() -> Self {
        RawWeights { gamma: Vec::new(), p: default_p() }
    }
}

fn default_p() -> Spanned<f64> {
    Spanned::new(0..0, 2.0)
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    grid_n: Option<usize>,
    imag_box: Option<f64>,
    seed: Option<u64>,
    quad_tol: Option<f64>,
    cluster_tol: Option<f64>,
    newton_tol: Option<f64>,
}

/// Solver settings of a problem file.
#[derive(Clone, Copy, Debug)]
pub struct Solver {
    pub analysis: AnalysisSettings,
    pub seed: u64,
}

/// A parsed and validated problem file.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub problem: Problem<C64>,
    pub gammas: Vec<f64>,
    pub p_int: f64,
    pub solver: Solver,
    /// Non-fatal findings such as truncated Taylor terms.
    pub warnings: Vec<String>,
}

pub const DEFAULT_SEED: u64 = 2024;

pub fn parse(src: &str) -> Result<ProblemSpec, ParseError> {
    let source = Source(src);
    let raw: RawConfig = toml::from_str(src).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        source.error(span, e.message().trim().to_string())
    })?;
    let mut warnings = Vec::new();
    let p = &raw.problem;
    let (n, mu, m) = (*p.n.get_ref(), *p.mu.get_ref(), *p.m.get_ref());
    if n < 1 {
        return Err(source.error(p.n.span(), "n must be at least 1"));
    }
    if mu < 1 {
        return Err(source.error(p.mu.span(), "mu must be at least 1"));
    }
    if m < 1 {
        return Err(source.error(p.m.span(), "m must be at least 1"));
    }
    let length = match p.length.get_ref() {
        toml::Value::Integer(v) => *v as f64,
        toml::Value::Float(v) => *v,
        toml::Value::String(s) => expr::scalar(s).map_err(|e| source.expr_error(p.length.span(), "L", e))?,
        _ => return Err(source.error(p.length.span(), "L must be a number or an expression such as \"pi\"")),
    };
    if !(length > 0.0 && length.is_finite()) {
        return Err(source.error(p.length.span(), "L must be positive"));
    }
    let truncation = match &p.truncation {
        Some(k) if *k.get_ref() > mu => {
            warnings.push(format!("truncation {} exceeds mu = {mu}; truncated to {mu}", k.get_ref()));
            mu
        }
        Some(k) => *k.get_ref(),
        None => mu,
    };

    let mut taylor: BTreeMap<usize, BTreeMap<usize, CrossOp<C64>>> = BTreeMap::new();
    for term in &raw.operator {
        let (t, z) = (*term.t_pow.get_ref(), *term.z_pow.get_ref());
        if z > mu {
            return Err(source.error(term.z_pow.span(), format!("z_pow {z} exceeds mu = {mu}")));
        }
        let op = expr::cross_op(term.expr.get_ref(), m, m).map_err(|e| source.expr_error(term.expr.span(), "expr", e))?;
        if op.order().is_some_and(|d| d + z > mu) {
            return Err(source.error(
                term.expr.span(),
                format!("coefficient of z^{z} has x-order {} > {}", op.order().unwrap_or(0), mu - z),
            ));
        }
        if t > truncation {
            warnings.push(format!("operator term t^{t} z^{z} lies beyond truncation {truncation} and is dropped"));
            continue;
        }
        let slot = taylor.entry(t).or_default().entry(z).or_insert_with(|| CrossOp::zero(m, m));
        *slot = slot.add(&op);
    }
    if taylor.is_empty() {
        return Err(source.error(0..0, "no [[operator]] terms"));
    }
    let top = *taylor.keys().max().unwrap_or(&0);
    let terms = (0..=top)
        .map(|t| {
            let zs = taylor.remove(&t).unwrap_or_default();
            let deg = zs.keys().max().copied().unwrap_or(0);
            MellinPoly::from_coeffs((m, m), (0..=deg).map(|z| zs.get(&z).cloned().unwrap_or_else(|| CrossOp::zero(m, m))).collect())
        })
        .collect();
    let op = FuchsOp::new(n, mu, m, terms, truncation).map_err(|e| source.error(0..0, e.to_string()))?;

    let left = boundary(&source, raw.boundary.get_ref().left.get_ref(), mu, m)?;
    let right = boundary(&source, raw.boundary.get_ref().right.get_ref(), mu, m)?;
    let problem = Problem::new(p.name.clone(), op, C64::new(length, 0.0), left, right)
        .map_err(|e| source.error(raw.boundary.span(), e.to_string()))?;

    let p_int = *raw.weights.p.get_ref();
    if !(p_int > 1.0 && p_int.is_finite()) {
        return Err(source.error(raw.weights.p.span(), "p must lie in (1, inf)"));
    }
    let s = &raw.solver;
    let defaults = AnalysisSettings::default();
    let scan = ScanSettings {
        quad_tol: s.quad_tol.unwrap_or(defaults.scan.quad_tol),
        cluster_tol: s.cluster_tol.unwrap_or(defaults.scan.cluster_tol),
        newton_tol: s.newton_tol.unwrap_or(defaults.scan.newton_tol),
        ..defaults.scan
    };
    let analysis = AnalysisSettings {
        grid_n: s.grid_n.unwrap_or(defaults.grid_n),
        imag_box: s.imag_box.unwrap_or(defaults.imag_box),
        scan,
    };
    Ok(ProblemSpec {
        problem,
        gammas: raw.weights.gamma.clone(),
        p_int,
        solver: Solver { analysis, seed: s.seed.unwrap_or(DEFAULT_SEED) },
        warnings,
    })
}

fn boundary(source: &Source, raw: &RawBoundary, mu: usize, m: usize) -> Result<BoundaryCondition<C64>, ParseError> {
    let dims = raw.dims.get_ref().clone();
    if dims.len() != mu {
        return Err(source.error(raw.dims.span(), format!("dims needs {mu} entries, one per trace order")));
    }
    // (j, k) -> t_pow -> z_pow -> matrix
    type Terms = BTreeMap<usize, BTreeMap<usize, Mat<C64>>>;
    let mut parts: BTreeMap<(usize, usize), Terms> = BTreeMap::new();
    for e in &raw.entry {
        let (j, k) = (*e.j.get_ref(), *e.k.get_ref());
        if j >= mu {
            return Err(source.error(e.j.span(), format!("row {j} out of range 0..{mu}")));
        }
        if k > j {
            return Err(source.error(e.k.span(), format!("entry ({j}, {k}) lies above the diagonal")));
        }
        if e.z_pow > j - k {
            return Err(source.error(e.matrix.span(), format!("z_pow {} exceeds the order {} of entry ({j}, {k})", e.z_pow, j - k)));
        }
        let mat = expr::constant_matrix(e.matrix.get_ref(), dims[j], m)
            .map_err(|err| source.expr_error(e.matrix.span(), "matrix", err))?;
        let slot = parts
            .entry((j, k))
            .or_default()
            .entry(e.t_pow)
            .or_default()
            .entry(e.z_pow)
            .or_insert_with(|| Mat::zeros(dims[j], m));
        *slot = &*slot + &mat;
    }
    let entries = parts
        .into_iter()
        .map(|((j, k), by_t)| {
            let top = *by_t.keys().max().unwrap_or(&0);
            let terms = (0..=top)
                .map(|t| {
                    let zs = by_t.get(&t).cloned().unwrap_or_default();
                    let deg = zs.keys().max().copied().unwrap_or(0);
                    let coeffs = (0..=deg).map(|z| zs.get(&z).cloned().unwrap_or_else(|| Mat::zeros(dims[j], m))).collect();
                    MellinPoly::from_coeffs((dims[j], m), coeffs)
                })
                .collect();
            (j, k, BoundaryFuchsOp::new((j - k) as i64, (dims[j], m), terms, None))
        })
        .collect();
    BoundaryCondition::new(mu, m, dims, entries).map_err(|e| source.error(raw.dims.span(), e.to_string()))
}

/// Problem file text that parses back to `problem`.
pub fn dump(problem: &Problem<C64>, gammas: &[f64], p_int: f64) -> String {
    const TOL: f64 = 1e-13;
    let mut out = String::new();
    out.push_str("[problem]\n");
    out.push_str(&format!("name = {:?}\n", problem.name));
    out.push_str(&format!("n = {}\nmu = {}\nm = {}\n", problem.n(), problem.mu(), problem.m()));
    out.push_str(&format!("L = {:?}\n", problem.length.re));
    out.push_str(&format!("truncation = {}\n", problem.op.truncation()));
    for (t, f) in problem.op.series().terms().iter().enumerate() {
        for (z, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out.push_str(&format!("\n[[operator]]\nt_pow = {t}\nz_pow = {z}\nexpr = {:?}\n", expr::format_cross_op(c, TOL)));
        }
    }
    for (side, bc) in [("left", &problem.left), ("right", &problem.right)] {
        out.push_str(&format!("\n[boundary.{side}]\ndims = {:?}\n", bc.dims()));
        for (j, row) in bc.block().iter().enumerate() {
            for (k, s) in row.iter().enumerate() {
                for (t, h) in s.terms().iter().enumerate() {
                    for (z, c) in h.coeffs().iter().enumerate() {
                        if c.rows() == 0 || c.max_abs() <= TOL {
                            continue;
                        }
                        out.push_str(&format!(
                            "[[boundary.{side}.entry]]\nj = {j}\nk = {k}\nt_pow = {t}\nz_pow = {z}\nmatrix = {:?}\n",
                            expr::format_matrix(c, TOL)
                        ));
                    }
                }
            }
        }
    }
    out.push_str("\n[weights]\n");
    out.push_str(&format!("gamma = {gammas:?}\np = {p_int:?}\n"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const M1: &str = r#"
[problem]
name = "M1"
n = 2
mu = 2
m = 1
L = "pi"

[[operator]]
t_pow = 0
z_pow = 0
expr = "d^2"

[[operator]]
t_pow = 0
z_pow = 1
expr = "-1"

[[operator]]
t_pow = 0
z_pow = 2
expr = "1"

[boundary.left]
dims = [1, 0]
[[boundary.left.entry]]
j = 0
k = 0
matrix = "1"

[boundary.right]
dims = [1, 0]
[[boundary.right.entry]]
j = 0
k = 0
matrix = "1"

[weights]
gamma = [0.0, -0.5]
"#;

    #[test]
    fn parses_the_dirichlet_model() {
        let spec = parse(M1).unwrap();
        let model = conebvp::models::m1::<C64>();
        assert!(spec.problem.op.series().same_operator(model.op.series()));
        assert_eq!(spec.problem.left, model.left);
        assert_eq!(spec.problem.right, model.right);
        assert!((spec.problem.length.re - std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(spec.gammas, vec![0.0, -0.5]);
        assert_eq!(spec.p_int, 2.0);
        assert_eq!(spec.solver.analysis.grid_n, 48);
        assert!(spec.warnings.is_empty());
    }

    #[test]
    fn dump_parses_back() {
        let spec = parse(M1).unwrap();
        let again = parse(&dump(&spec.problem, &spec.gammas, spec.p_int)).unwrap();
        assert!(again.problem.op.series().same_operator(spec.problem.op.series()));
        assert_eq!(again.problem.left, spec.problem.left);
        assert_eq!(again.gammas, spec.gammas);
    }

    #[test]
    fn expression_errors_point_into_the_string() {
        let src = M1.replace("expr = \"d^2\"", "expr = \"d^2 + y\"");
        let e = parse(&src).unwrap_err();
        let line = src.lines().position(|l| l.contains("d^2 + y")).unwrap() + 1;
        assert_eq!((e.line, e.col), (line, 15));
        assert!(e.message.contains("unknown name"));
    }

    #[test]
    fn syntax_and_validation_errors_carry_positions() {
        let e = parse("[problem]\nname = \"x\"\nn = = 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse(&M1.replace("dims = [1, 0]\n[[boundary.left", "dims = [1]\n[[boundary.left")).unwrap_err();
        assert!(e.message.contains("dims needs 2 entries"), "{e}");
        let e = parse(&M1.replace("z_pow = 2\nexpr = \"1\"", "z_pow = 2\nexpr = \"d\"")).unwrap_err();
        assert!(e.message.contains("x-order"), "{e}");
        let e = parse(&M1.replace("name = \"M1\"", "name = \"M1\"\ncolour = 1")).unwrap_err();
        assert_eq!(e.line, 4);
    }

    #[test]
    fn terms_beyond_the_truncation_are_dropped_with_a_warning() {
        let src = M1.replace("L = \"pi\"", "L = \"pi\"\ntruncation = 5")
            + "\n[[operator]]\nt_pow = 3\nz_pow = 0\nexpr = \"1\"\n";
        let spec = parse(&src).unwrap();
        assert_eq!(spec.warnings.len(), 2, "{:?}", spec.warnings);
        assert_eq!(spec.problem.op.truncation(), 2);
        assert_eq!(spec.problem.op.series().terms().len(), 1);
    }
}
