//! One test per acceptance criterion. Each prints `criterion N: PASS|FAIL <detail>`.

use std::time::Instant;

use conebvp::adjoint_lab::{
    anti_diagonal_defect, build_adjoint, conjugation_check, green_identity_quadrature, random_test_function,
    reflection_offset,
};
use conebvp::cross_section::{ConormalFamily, Discretization};
use conebvp::domains::{domain_report, membership_all, pole_table, AnalysisSettings, Space, WeightData};
use conebvp::fredholm_lab::run_batch;
use conebvp::fuchs::triangular_invert;
use conebvp::meromorphic::{laurent_coeffs, Pole, Recursion, ScanSettings};
use conebvp::scalar::{cqi, C64, CQ};
use conebvp::{models, random, Exec, Problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(n: usize, pass: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n}: {detail}");
}

fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

fn weight(gamma: f64) -> WeightData {
    WeightData::new(gamma, 2.0, 2, 2).unwrap()
}

fn settings(grid_n: usize) -> AnalysisSettings {
    AnalysisSettings { grid_n, imag_box: 10.0, ..Default::default() }
}

fn samples(seed: u64, count: usize) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| C64::new(rng.random_range(-3.0..3.0), rng.random_range(0.2..3.0))).collect()
}

#[test]
fn criterion_01_pole_oracle() {
    let start = Instant::now();
    let family = ConormalFamily::conormal(&models::m1::<C64>(), 48).unwrap();
    let table = pole_table(&family, (-6.0, 6.0), &settings(48)).unwrap();
    let found: Vec<_> = table.poles.iter().filter(|d| d.p.re.abs() <= 6.0 && d.p.im.abs() <= 10.0).collect();
    let oracle = models::m1_poles(6.0);
    let err = oracle
        .iter()
        .map(|&q| found.iter().map(|d| (d.p - q).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let orders_ranks = found.iter().all(|d| d.order == 1 && d.rank_m == 1);
    let secs = start.elapsed().as_secs_f64();
    let pass = found.len() == oracle.len() && err < 1e-8 && orders_ranks && secs < 30.0;
    verdict(
        1,
        pass,
        format!(
            "{} poles (oracle {}), max error {err:.2e}, orders and ranks 1: {orders_ranks}, {secs:.1} s",
            found.len(),
            oracle.len()
        ),
    );
}

#[test]
fn criterion_02_relative_index() {
    let cases: [(&str, Problem<C64>, f64, usize); 4] = [
        ("M1 gamma=0", models::m1(), 0.0, 0),
        ("M1 gamma=-0.5", models::m1(), -0.5, 1),
        ("M2 gamma=0", models::m2(), 0.0, 2),
        ("M3 gamma=0.25", models::m3(), 0.25, 2),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (label, p, gamma, expected) in cases {
        let r = domain_report(&p, &weight(gamma), &settings(48)).unwrap();
        let ok = r.relative_index == Some(expected);
        pass &= ok;
        detail.push(format!("{label}: {:?} (expected {expected})", r.relative_index));
        if p.name == "M3" {
            let log = r.basis.iter().any(|f| f.log_power == 1 && f.exponent.norm() < 1e-6);
            pass &= log;
            detail.push(format!("log term emitted: {log}"));
        }
    }
    verdict(2, pass, detail.join("; "));
}

#[test]
fn criterion_03_singular_basis() {
    let p = models::m1::<C64>();
    let w = weight(-0.5);
    let r = domain_report(&p, &w, &settings(48)).unwrap();
    let fam = ConormalFamily::conormal(&p, 48).unwrap();
    let normalize = |v: &[C64]| {
        let top = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        v.iter().map(|x| x / top).collect::<Vec<_>>()
    };
    let sine = normalize(&fam.discretization().sample_fn(|x| C64::new(x.sin(), 0.0)));
    let m1_err = match r.basis.as_slice() {
        [f] if (f.exponent - golden()).norm() < 1e-9 && f.terms.len() == 1 => normalize(&f.coefficient(f.exponent, 0))
            .iter()
            .zip(&sine)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max),
        _ => f64::INFINITY,
    };
    let mut membership = r.membership_ok;

    let m3 = domain_report(&models::m3::<C64>(), &weight(0.25), &settings(48)).unwrap();
    membership &= m3.membership_ok;
    let mut logs: Vec<usize> = m3.basis.iter().map(|f| f.log_power).collect();
    logs.sort();
    let m3_exact = m3.basis.len() == 2 && m3.basis.iter().all(|f| f.exponent.norm() < 1e-6) && logs == [0, 1];
    let m3_desc: Vec<String> = m3
        .basis
        .iter()
        .map(|f| format!("exponent {:.3} log^{}", f.exponent.re + 0.0, f.log_power))
        .collect();

    for (rep, w) in [(&r, w), (&m3, weight(0.25))] {
        let lower = Space { s: 0.0, gamma: w.gamma, p_int: w.p_int };
        let upper = Space { s: 0.0, gamma: w.gamma + 2.0, p_int: w.p_int };
        membership &= rep
            .basis
            .iter()
            .all(|f| membership_all(&f.terms, &lower, 2) && !membership_all(&f.terms, &upper, 2));
    }
    let pass = m1_err < 1e-6 && m3_exact && membership;
    verdict(
        3,
        pass,
        format!("M1 sine error {m1_err:.2e}; M3 basis [{}] (expected exactly 1 and log t); membership {membership}", m3_desc.join(", ")),
    );
}

#[test]
fn criterion_04_recursion_consistency() {
    let p = models::m1_perturbed::<C64>();
    let disc = Discretization::new(48, p.length.re).unwrap();
    let rec = Recursion::new(&p, &disc).unwrap();
    let worst = samples(4, 10)
        .into_iter()
        .map(|z| rec.residual(rec.max_index(), z).unwrap())
        .fold(0.0, f64::max);
    verdict(4, worst < 1e-8, format!("max residual {worst:.2e} over 10 points"));
}

#[test]
fn criterion_05_adjoint_conjugation() {
    let zs = samples(5, 10);
    let mut pass = true;
    let mut detail = Vec::new();
    for p in [models::m1::<C64>(), models::m2()] {
        let adj = build_adjoint(&p).unwrap().problem;
        let c = reflection_offset(&p);
        let good = conjugation_check(&p, &adj, &zs, c, Exec::default()).max_residual();
        let bad = conjugation_check(&p, &adj, &zs, c - 1.0, Exec::default()).max_residual();
        pass &= good < 1e-6 && bad > 0.1;
        detail.push(format!("{}: residual {good:.2e}, wrong offset {bad:.2e}", p.name));
    }
    verdict(5, pass, detail.join("; "));
}

#[test]
fn criterion_06_green_identity() {
    let p = models::m1::<C64>();
    let (n, len) = (p.n(), p.length.re);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let pairs: Vec<_> = (0..20)
        .map(|_| {
            let u = random_test_function(&mut rng, 1, 4, 3, 5, len).normalized(n, len);
            let v = random_test_function(&mut rng, 1, 4, 3, 5, len).normalized(n, len);
            (u, v)
        })
        .collect();
    let worst = green_identity_quadrature(&p, &pairs, Exec::default())
        .iter()
        .map(|r| r.residual())
        .fold(0.0, f64::max);
    let defect = anti_diagonal_defect(&models::m1::<CQ>());
    verdict(
        6,
        worst < 1e-6 && defect.is_empty(),
        format!("max residual {worst:.2e} over 20 pairs; anti-diagonal mismatches {defect:?}"),
    );
}

#[test]
fn criterion_07_adjoint_index_symmetry() {
    let mut pass = true;
    let mut detail = Vec::new();
    for (p, gammas) in [(models::m1::<C64>(), vec![0.0, -0.5, -1.0]), (models::m2(), vec![0.0, 0.25])] {
        let adj = build_adjoint(&p).unwrap().problem;
        for gamma in gammas {
            let a = domain_report(&p, &weight(gamma), &settings(48)).unwrap().relative_index;
            let b = domain_report(&adj, &weight(-gamma + 2.0), &settings(48)).unwrap().relative_index;
            pass &= a.is_some() && a == b;
            detail.push(format!("{} gamma={gamma}: {a:?} vs adjoint {b:?}", p.name));
        }
    }
    verdict(7, pass, detail.join("; "));
}

#[test]
fn criterion_08_fredholm_lab() {
    let s = run_batch(2024, 1000, 8, Exec::default());
    verdict(
        8,
        s.all_pass() && s.total == 1000,
        format!(
            "{}/{} index identity, {}/{} kernel identity, {}/{} surjectivity lemma",
            s.index_identity, s.total, s.kernel_identity, s.total, s.lemma, s.total
        ),
    );
}

type Integers = (Vec<(usize, usize, usize)>, Option<usize>, usize);

fn integer_outputs(p: &Problem<C64>, gamma: f64, grid_n: usize) -> Integers {
    let r = domain_report(p, &weight(gamma), &settings(grid_n)).unwrap();
    let poles = r.table.poles.iter().map(|d| (d.order, d.n_p, d.rank_m)).collect();
    (poles, r.relative_index, r.basis.len())
}

#[test]
fn criterion_09_stability() {
    let cases: [(Problem<C64>, f64); 4] =
        [(models::m1(), 0.0), (models::m1(), -0.5), (models::m2(), 0.0), (models::m3(), 0.25)];
    let mut pass = true;
    let mut detail = Vec::new();
    for (p, gamma) in &cases {
        let a = integer_outputs(p, *gamma, 48);
        let b = integer_outputs(p, *gamma, 56);
        let same = a == b;
        pass &= same;
        detail.push(format!("{} gamma={gamma}: N 48 vs 56 equal {same}", p.name));
    }
    let scan = ScanSettings::default();
    for p in [models::m1::<C64>(), models::m2(), models::m3()] {
        let fam = ConormalFamily::conormal(&p, 48).unwrap();
        let table = pole_table(&fam, (-3.0, 3.0), &settings(48)).unwrap();
        let mut changed = 0;
        for d in &table.poles {
            let h = laurent_coeffs(&fam, Pole { z: d.p, order: d.order }, d.radius / 2.0, scan.exec).unwrap();
            if (h.order, h.n_p, h.rank_m) != (d.order, d.n_p, d.rank_m) {
                changed += 1;
            }
        }
        pass &= changed == 0;
        detail.push(format!("{}: {changed}/{} poles change under radius halving", p.name, table.poles.len()));
    }
    verdict(9, pass, detail.join("; "));
}

#[test]
fn criterion_10_symbolic_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut composition, mut inversion) = (0, 0);
    for _ in 0..50 {
        let mu_a = rng.random_range(0..=2);
        let mu_b = rng.random_range(0..=4 - mu_a);
        let m = rng.random_range(1..=2);
        let a = random::fuchs_op(&mut rng, 2, mu_a, m, 1, 1);
        let b = random::fuchs_op(&mut rng, 2, mu_b, m, 1, 1);
        let ab = a.compose(&b).unwrap();
        let law = a.conormal_symbol(0).shift(&cqi(mu_b as i64)).mul(&b.conormal_symbol(0));
        if ab.conormal_symbol(0) == law {
            composition += 1;
        }
        let mu = rng.random_range(1..=4);
        let bc = random::normal_condition(&mut rng, mu, m);
        if triangular_invert(&bc).and_then(|inv| inv.verify(&bc)).unwrap_or(false) {
            inversion += 1;
        }
    }
    verdict(
        10,
        composition == 50 && inversion == 50,
        format!("shift-composition {composition}/50, triangular inversion {inversion}/50"),
    );
}
