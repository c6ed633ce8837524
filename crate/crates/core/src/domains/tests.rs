use super::*;
use crate::cross_section::ConormalFamily;
use crate::error::Error;
use crate::models;
use crate::scalar::C64;

fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

fn settings() -> AnalysisSettings {
    AnalysisSettings { grid_n: 32, imag_box: 5.0, ..Default::default() }
}

fn weight(gamma: f64) -> WeightData {
    WeightData::new(gamma, 2.0, 2, 2).unwrap()
}

fn normalized(v: &[C64]) -> Vec<C64> {
    let top = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
    v.iter().map(|x| x / top).collect()
}

#[test]
fn m1_at_gamma_zero_has_equal_domains() {
    let r = domain_report(&models::m1(), &weight(0.0), &settings()).unwrap();
    assert!(r.is_elliptic());
    assert_eq!(r.relative_index, Some(0));
    assert!(r.basis.is_empty());
    assert_eq!(r.min_domain, "H^{2,2}_2(D,E)_T");
    assert_eq!(r.max_domain, "D_min");
}

#[test]
fn m1_below_zero_emits_the_sine_mode() {
    let p = models::m1::<C64>();
    let r = domain_report(&p, &weight(-0.5), &settings()).unwrap();
    assert_eq!(r.relative_index, Some(1));
    assert_eq!(r.basis.len(), 1);
    let f = &r.basis[0];
    assert!((f.exponent - golden()).norm() < 1e-9);
    assert_eq!(f.terms.len(), 1);
    let fam = ConormalFamily::conormal(&p, 32).unwrap();
    let sine = normalized(&fam.discretization().sample_fn(|x| C64::new(x.sin(), 0.0)));
    let got = normalized(&f.coefficient(f.exponent, 0));
    let err = got.iter().zip(&sine).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-6, "{err}");
    assert!(r.membership_ok);
    assert!(indicial_residual(&fam, f) < 1e-8);
}

#[test]
fn m2_has_constant_modes_at_zero_and_one() {
    let r = domain_report(&models::m2(), &weight(0.0), &settings()).unwrap();
    assert_eq!(r.relative_index, Some(2));
    assert_eq!(r.basis.len(), 2);
    for (f, q) in r.basis.iter().zip([1.0, 0.0]) {
        assert!((f.exponent - q).norm() < 1e-9);
        let c = normalized(&f.coefficient(f.exponent, 0));
        assert!(c.iter().all(|v| (v - 1.0).norm() < 1e-8));
    }
}

#[test]
fn m3_double_pole_gives_constant_and_log() {
    // any strip of width 2 around 0 also holds one of the simple poles at +-1
    let r = domain_report(&models::m3(), &weight(0.25), &settings()).unwrap();
    assert_eq!(r.relative_index, Some(3));
    let at_zero: Vec<_> = r.basis.iter().filter(|f| f.exponent.norm() < 1e-6).collect();
    assert_eq!(at_zero.len(), 2);
    assert_eq!(at_zero[0].log_power, 1);
    assert_eq!(at_zero[0].terms.len(), 1);
    assert_eq!(at_zero[1].log_power, 0);
    assert_eq!(at_zero[1].terms.len(), 1);
    assert!(r.membership_ok);
}

#[test]
fn weight_through_a_pole_fails_the_conormal_check() {
    let r = domain_report(&models::m1(), &weight(1.5 - golden()), &settings()).unwrap();
    assert!(!r.conormal.passed);
    assert!(r.conormal.detail.contains("weight on pole"));
    assert_eq!(r.relative_index, None);
}

#[test]
fn pole_on_the_lower_line_is_an_endpoint() {
    let r = domain_report(&models::m1(), &weight(-0.5 - golden()), &settings()).unwrap();
    assert!(r.conormal.passed);
    assert_eq!(r.relative_index, None);
    assert!(r.flags.iter().any(|f| f.contains("endpoint pole")));
    let table = r.table.poles.clone();
    assert!(matches!(relative_index(&table, &r.weight), Err(Error::EndpointPole { .. })));
}

#[test]
fn t_dependent_model_adds_shifted_terms() {
    let r = domain_report(&models::m1_perturbed(), &weight(-0.5), &settings()).unwrap();
    assert_eq!(r.relative_index, Some(1));
    assert_eq!(r.basis.len(), 1);
    let f = &r.basis[0];
    assert!((f.exponent - golden()).norm() < 1e-9);
    assert_eq!(f.terms.len(), 2);
    assert!(f.terms.iter().any(|t| (t.exponent - (golden() - 1.0)).norm() < 1e-9));
    let fam = ConormalFamily::conormal(&models::m1_perturbed::<C64>(), 32).unwrap();
    assert!(indicial_residual(&fam, f) < 1e-8);
    assert!(r.membership_ok);
}

