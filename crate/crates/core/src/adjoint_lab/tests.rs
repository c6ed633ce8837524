use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cross_section::ConormalFamily;
use crate::domains::{AnalysisSettings, WeightData};
use crate::error::Error;
use crate::fuchs::{BoundaryCondition, BoundaryFuchsOp, CrossOp, FuchsOp, MellinPoly, XPoly};
use crate::mat::Mat;
use crate::meromorphic::{locate_poles, ScanSettings};
use crate::models;
use crate::par::Exec;
use crate::problem::Problem;
use crate::scalar::{C64, CQ};

fn samples() -> Vec<C64> {
    [(0.3, 0.7), (-1.2, 0.4), (2.5, -1.1), (0.9, 2.2), (-0.4, -0.8), (1.7, 0.1), (3.3, 1.5), (-2.1, -2.0), (0.05, 3.1), (1.1, -0.35)]
        .iter()
        .map(|&(a, b)| C64::new(a, b))
        .collect()
}

/// `M1` operator with lower-order terms and Dirichlet conditions.
fn perturbed_dirichlet() -> Problem<C64> {
    let p = models::m1_perturbed::<C64>();
    Problem::new("M1t-D", p.op, p.length, models::dirichlet(), models::dirichlet()).unwrap()
}

/// `t^{-1}(delta + d_x)` on the cone over `[0, 1]`, Dirichlet on the left only.
fn transport() -> Problem<CQ> {
    let one = || XPoly::scalar(crate::scalar::cqi(1));
    let f0 = MellinPoly::from_coeffs((1, 1), vec![CrossOp::scalar_term(1, one()), CrossOp::multiplication(one())]);
    let op = FuchsOp::new(1, 1, 1, vec![f0], 1).unwrap();
    let left = BoundaryCondition::new(1, 1, vec![1], vec![(0, 0, BoundaryFuchsOp::constant(Mat::scalar(crate::scalar::cqi(1))))]).unwrap();
    Problem::new("transport", op, crate::scalar::cqi(1), left, BoundaryCondition::void(1, 1)).unwrap()
}

#[test]
fn m1_is_formally_self_adjoint_with_dirichlet_adjoint_condition() {
    let p = models::m1::<CQ>();
    let adj = build_adjoint(&p).unwrap();
    assert!(adj.a_t().series().same_operator(p.op.series()));
    let d = models::dirichlet::<C64>();
    for bc in adj.t_tilde() {
        assert_eq!(bc.dims(), &[1, 0]);
        assert!(condition_distance(&bc.to_c64(), &d, &samples()) < 1e-12);
    }
}

#[test]
fn neumann_adjoint_is_neumann() {
    let adj = build_adjoint(&models::m2::<CQ>()).unwrap();
    let ne = models::neumann::<C64>();
    for bc in adj.t_tilde() {
        assert!(condition_distance(&bc.to_c64(), &ne, &samples()) < 1e-12);
    }
}

#[test]
fn transport_adjoint_moves_the_condition() {
    let adj = build_adjoint(&transport()).unwrap();
    let [l, r] = adj.t_tilde();
    assert!(l.is_void());
    assert_eq!(r.row_count(), 1);
}

#[test]
fn double_adjoint_returns_the_problem() {
    for p in [models::m1::<C64>(), models::m2(), models::m3(), perturbed_dirichlet()] {
        let twice = build_adjoint(&build_adjoint(&p).unwrap().problem).unwrap().problem;
        assert!(twice.op.series().sub(p.op.series()).terms().iter().all(|h| h.coeffs().iter().all(|c| {
            c.terms().iter().all(|x| x.coeffs().iter().all(|m| m.max_abs() < 1e-12))
        })));
        assert!(condition_distance(&twice.left, &p.left, &samples()) < 1e-10, "{}", p.name);
        assert!(condition_distance(&twice.right, &p.right, &samples()) < 1e-10, "{}", p.name);
    }
}

#[test]
fn characteristic_boundary_is_refused() {
    let x_d2 = CrossOp::scalar_term(2, XPoly::from_scalars(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]));
    let f0 = MellinPoly::from_coeffs((1, 1), vec![x_d2, CrossOp::zero(1, 1), CrossOp::multiplication(XPoly::scalar(C64::new(1.0, 0.0)))]);
    let op = FuchsOp::new(2, 2, 1, vec![f0], 2).unwrap();
    let p = Problem::new("char", op, models::length(), models::dirichlet(), models::dirichlet()).unwrap();
    assert!(matches!(build_adjoint(&p), Err(Error::CharacteristicBoundary { .. })));
}

#[test]
fn conjugation_holds_and_wrong_reflection_is_detected() {
    for p in [models::m1::<C64>(), models::m2(), models::m3(), perturbed_dirichlet()] {
        let adj = build_adjoint(&p).unwrap().problem;
        let c = reflection_offset(&p);
        let good = conjugation_check(&p, &adj, &samples(), c, Exec::default());
        assert!(good.max_residual() < 1e-6, "{} {:?}", p.name, good);
        let bad = conjugation_check(&p, &adj, &samples(), c - 1.0, Exec::default());
        assert!(bad.max_residual() > 0.1, "{} {:?}", p.name, bad);
    }
}

#[test]
fn anti_diagonal_is_the_leading_coefficient() {
    for p in [models::m1::<CQ>(), models::m2(), models::m3(), models::m1_perturbed()] {
        assert!(anti_diagonal_defect(&p).is_empty(), "{}", p.name);
    }
}

fn random_pairs(p: &Problem<C64>, count: usize, seed: u64) -> Vec<(TestFunction, TestFunction)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u = random_test_function(&mut rng, p.m(), p.mu() + 2, 3, 5, p.length.re).normalized(p.n(), p.length.re);
            let v = random_test_function(&mut rng, p.m(), p.mu() + 2, 3, 5, p.length.re).normalized(p.n(), p.length.re);
            (u, v)
        })
        .collect()
}

#[test]
fn green_identity_on_random_pairs() {
    for p in [models::m1::<C64>(), models::m2(), models::m1_perturbed()] {
        let res = green_identity_quadrature(&p, &random_pairs(&p, 20, 7), Exec::default());
        let worst = res.iter().map(|r| r.residual()).fold(0.0, f64::max);
        assert!(worst < 1e-6, "{} {worst}", p.name);
        let control = res.iter().map(|r| r.residual_without_boundary()).fold(0.0, f64::max);
        assert!(control > 1e-3, "{} {control}", p.name);
    }
}

#[test]
fn green_identity_with_equal_arguments() {
    let p = models::m1::<C64>();
    let pairs: Vec<_> = random_pairs(&p, 5, 11).into_iter().map(|(u, _)| (u.clone(), u)).collect();
    for r in green_identity_quadrature(&p, &pairs, Exec::default()) {
        assert!(r.residual() < 1e-6);
        // M1 is symmetric, so <Au,u> - <u,Au> is purely imaginary
        assert!((r.au_v - r.u_atv).re.abs() < 1e-8 * r.au_v.norm().max(1.0));
    }
}

#[test]
fn adjoint_pairing_on_kernels() {
    for p in [models::m1::<C64>(), models::m2(), perturbed_dirichlet()] {
        let adj = build_adjoint(&p).unwrap().problem;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let unit = |u: TestFunction| u.normalized(p.n(), p.length.re);
        let us: Vec<_> = kernel_test_functions(&mut rng, &p, 4, 6, 6, 5).into_iter().map(unit).collect();
        let vs: Vec<_> = kernel_test_functions(&mut rng, &adj, 4, 6, 6, 5).into_iter().map(unit).collect();
        for (u, v) in us.iter().zip(&vs) {
            let lhs = pairing(&u.apply(&p.op), v, p.n(), p.length.re);
            let rhs = pairing(u, &v.apply(&adj.op), p.n(), p.length.re);
            assert!(lhs.norm() > 1e-3);
            assert!((lhs - rhs).norm() < 1e-6 * lhs.norm().max(1.0), "{} {lhs} {rhs}", p.name);
        }
    }
}

#[test]
fn adjoint_is_elliptic_at_the_reflected_weight() {
    let settings = AnalysisSettings { grid_n: 32, imag_box: 5.0, ..Default::default() };
    for (p, gamma) in [(models::m1::<C64>(), 0.0), (models::m2(), 0.25)] {
        let adj = build_adjoint(&p).unwrap().problem;
        let w = WeightData::new(gamma, 2.0, 2, 2).unwrap();
        let e = adjoint_ellipticity(&p, &adj, &w, &settings).unwrap().unwrap();
        assert!((e.weight.gamma - (2.0 - gamma)).abs() < 1e-15);
        assert!(e.passed(), "{} {e:?}", p.name);
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let p = models::m1::<C64>();
    let adj = build_adjoint(&p).unwrap().problem;
    let w = WeightData::new(1.5 - phi, 2.0, 2, 2).unwrap();
    assert!(adjoint_ellipticity(&p, &adj, &w, &settings).unwrap().is_none());
}

#[test]
fn adjoint_poles_are_reflected() {
    for p in [models::m1::<C64>(), models::m2(), models::m3()] {
        let adj = build_adjoint(&p).unwrap().problem;
        let c = reflection_offset(&p);
        let s = ScanSettings::default();
        let orig = locate_poles(&ConormalFamily::conormal(&p, 32).unwrap(), (-2.2, 3.2), 4.0, &s).unwrap();
        let refl = locate_poles(&ConormalFamily::conormal(&adj, 32).unwrap(), (c - 3.2, c + 2.2), 4.0, &s).unwrap();
        assert_eq!(orig.poles.len(), refl.poles.len(), "{}", p.name);
        for q in &orig.poles {
            let target = C64::new(c, 0.0) - q.z.conj();
            let hit = refl.poles.iter().find(|r| (r.z - target).norm() < 1e-8);
            assert_eq!(hit.map(|r| r.order), Some(q.order), "{} {}", p.name, q.z);
        }
    }
}

