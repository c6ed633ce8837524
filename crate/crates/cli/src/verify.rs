//! Built-in verification suites against the reference models.

use conebvp::adjoint_lab::{
    anti_diagonal_defect, build_adjoint, conjugation_check, green_identity_quadrature, random_test_function,
    reflection_offset,
};
use conebvp::cross_section::{ConormalFamily, Discretization};
use conebvp::domains::{domain_report, pole_table, AnalysisSettings, WeightData};
use conebvp::fredholm_lab::run_batch;
use conebvp::meromorphic::{PoleDatum, Recursion};
use conebvp::scalar::{C64, CQ};
use conebvp::{models, Exec, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

pub fn table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out: String = checks
        .iter()
        .map(|c| format!("{:<width$}  {}  {}\n", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail))
        .collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!("{passed}/{} checks pass\n", checks.len()));
    out
}

/// Closed-form poles with the rank of their residue, `|Re| <= bound`.
fn oracle(name: &str, bound: f64) -> Vec<(f64, usize)> {
    match name {
        "M1" => models::m1_poles(bound).into_iter().map(|p| (p, 1)).collect(),
        "M2" => models::m2_poles(bound).into_iter().map(|p| (p, 1)).collect(),
        _ => models::m3_poles(bound),
    }
}

fn pole_check(p: &Problem<C64>, settings: &AnalysisSettings) -> Check {
    const BOUND: f64 = 5.5;
    let name = format!("{} poles in |Re z| < {BOUND}", p.name);
    let family = match ConormalFamily::conormal(p, settings.grid_n) {
        Ok(f) => f,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let table = match pole_table(&family, (-BOUND, BOUND), settings) {
        Ok(t) => t,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let found: Vec<&PoleDatum> = table.poles.iter().filter(|d| d.p.re.abs() <= BOUND).collect();
    let expected = oracle(&p.name, BOUND);
    let mut err = 0.0f64;
    let mut structure = found.len() == expected.len();
    for &(q, mult) in &expected {
        match found.iter().min_by(|a, b| (a.p - q).norm().total_cmp(&(b.p - q).norm())) {
            Some(d) => {
                err = err.max((d.p - q).norm());
                structure &= d.order == mult && d.rank_m == mult;
            }
            None => structure = false,
        }
    }
    Check::new(
        name,
        structure && err < 1e-8,
        format!("{} found, {} expected, max error {err:.2e}", found.len(), expected.len()),
    )
}

fn index_check(p: &Problem<C64>, gamma: f64, settings: &AnalysisSettings) -> Check {
    let name = format!("{} relative index at gamma = {gamma}", p.name);
    let w = match WeightData::new(gamma, 2.0, p.mu(), p.n()) {
        Ok(w) => w,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let (lo, hi) = w.strip();
    let expected: usize = oracle(&p.name, 20.0).iter().filter(|(q, _)| *q > lo && *q < hi).map(|(_, r)| r).sum();
    match domain_report(p, &w, settings) {
        Ok(r) => Check::new(
            name,
            r.relative_index == Some(expected) && r.membership_ok,
            format!("{:?}, closed form {expected}, membership {}", r.relative_index, r.membership_ok),
        ),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn sine_mode_check(settings: &AnalysisSettings) -> Check {
    let name = "M1 singular function at gamma = -0.5";
    let p = models::m1::<C64>();
    let run = || -> conebvp::Result<f64> {
        let r = domain_report(&p, &WeightData::new(-0.5, 2.0, 2, 2)?, settings)?;
        let [f] = r.basis.as_slice() else { return Ok(f64::INFINITY) };
        let disc = Discretization::new(settings.grid_n, p.length.re)?;
        let sine = disc.sample_fn(|x| C64::new(x.sin(), 0.0));
        let c = f.coefficient(f.exponent, 0);
        let scale = |v: &[C64]| {
            let top = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
            v.iter().map(|x| x / top).collect::<Vec<_>>()
        };
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let shape = scale(&c).iter().zip(scale(&sine)).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        Ok(shape.max((f.exponent - phi).norm()))
    };
    match run() {
        Ok(err) => Check::new(name, err < 1e-6, format!("distance to sin(x) t^(-phi) {err:.2e}")),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn log_term_check(settings: &AnalysisSettings) -> Check {
    let name = "M3 log term at the double pole 0";
    let run = || -> conebvp::Result<(bool, bool)> {
        let r = domain_report(&models::m3::<C64>(), &WeightData::new(0.25, 2.0, 2, 2)?, settings)?;
        let at_zero: Vec<usize> = r.basis.iter().filter(|f| f.exponent.norm() < 1e-6).map(|f| f.log_power).collect();
        Ok((at_zero.contains(&0) && at_zero.contains(&1) && at_zero.len() == 2, r.membership_ok))
    };
    match run() {
        Ok((logs, member)) => {
            Check::new(name, logs && member, format!("constant and log t present: {logs}, membership {member}"))
        }
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn recursion_check(seed: u64, grid_n: usize) -> Check {
    let name = "M1t recursion identities at 10 points";
    let p = models::m1_perturbed::<C64>();
    let run = || -> conebvp::Result<f64> {
        let rec = Recursion::new(&p, &Discretization::new(grid_n, p.length.re)?)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let z = C64::new(rng.random_range(-3.0..3.0), rng.random_range(0.2..3.0));
            worst = worst.max(rec.residual(rec.max_index(), z)?);
        }
        Ok(worst)
    };
    match run() {
        Ok(r) => Check::new(name, r < 1e-8, format!("max residual {r:.2e}")),
        Err(e) => Check::new(name, false, e.to_string()),
    }
}

fn conjugation(p: &Problem<C64>, seed: u64) -> Check {
    let name = format!("{} adjoint conjugation", p.name);
    let adj = match build_adjoint(p) {
        Ok(a) => a.problem,
        Err(e) => return Check::new(name, false, e.to_string()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zs: Vec<C64> = (0..10).map(|_| C64::new(rng.random_range(-3.0..3.0), rng.random_range(0.2..3.0))).collect();
    let c = reflection_offset(p);
    let good = conjugation_check(p, &adj, &zs, c, Exec::default()).max_residual();
    let bad = conjugation_check(p, &adj, &zs, c - 1.0, Exec::default()).max_residual();
    Check::new(name, good < 1e-6 && bad > 0.1, format!("residual {good:.2e}, wrong reflection {bad:.2e}"))
}

pub fn oracle_suite(settings: &AnalysisSettings, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    for p in [models::m1::<C64>(), models::m2(), models::m3()] {
        checks.push(pole_check(&p, settings));
    }
    for (p, gammas) in [
        (models::m1::<C64>(), &[0.0, -0.5, -1.0][..]),
        (models::m2(), &[0.0, 0.25][..]),
        (models::m3(), &[0.25, -0.6][..]),
    ] {
        for &g in gammas {
            checks.push(index_check(&p, g, settings));
        }
    }
    checks.push(sine_mode_check(settings));
    checks.push(log_term_check(settings));
    checks.push(recursion_check(seed, settings.grid_n));
    for p in [models::m1::<C64>(), models::m2()] {
        checks.push(conjugation(&p, seed));
    }
    for p in [models::m1::<CQ>(), models::m2(), models::m3(), models::m1_perturbed()] {
        let defect = anti_diagonal_defect(&p);
        checks.push(Check::new(format!("{} Green anti-diagonal", p.name), defect.is_empty(), format!("mismatches {defect:?}")));
    }
    checks
}

pub fn fredholm_suite(seed: u64) -> Vec<Check> {
    let s = run_batch(seed, 1000, 8, Exec::default());
    vec![
        Check::new("index identity", s.index_identity == s.total, format!("{}/{} pass", s.index_identity, s.total)),
        Check::new("kernel identity", s.kernel_identity == s.total, format!("{}/{} pass", s.kernel_identity, s.total)),
        Check::new(
            "surjectivity and invertibility",
            s.lemma == s.total,
            format!(
                "{}/{} pass ({} surjective, {} invertible)",
                s.lemma, s.total, s.surjective_cases, s.invertible_cases
            ),
        ),
    ]
}

pub fn green_suite(seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    for p in [models::m1::<C64>(), models::m2(), models::m1_perturbed()] {
        let (n, len) = (p.n(), p.length.re);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<_> = (0..20)
            .map(|_| {
                let u = random_test_function(&mut rng, p.m(), p.mu() + 2, 3, 5, len).normalized(n, len);
                let v = random_test_function(&mut rng, p.m(), p.mu() + 2, 3, 5, len).normalized(n, len);
                (u, v)
            })
            .collect();
        for (i, r) in green_identity_quadrature(&p, &pairs, Exec::default()).iter().enumerate() {
            let res = r.residual();
            checks.push(Check::new(format!("{} pair {i:02}", p.name), res < 1e-6, format!("residual {res:.3e}")));
        }
    }
    checks
}
