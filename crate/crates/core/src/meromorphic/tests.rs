use super::*;
use crate::cross_section::{ConormalFamily, Discretization};
use crate::linalg::{self, CMat};
use crate::models;
use crate::par::Exec;
use crate::scalar::C64;

fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

fn m1(n: usize) -> ConormalFamily {
    ConormalFamily::conormal(&models::m1::<C64>(), n).unwrap()
}

#[test]
fn m1_strip_one_two_holds_the_golden_ratio() {
    let scan = locate_poles(&m1(32), (1.0, 2.0), 5.0, &ScanSettings::default()).unwrap();
    assert_eq!(scan.poles.len(), 1);
    assert!((scan.poles[0].z - golden()).norm() < 1e-10);
    assert_eq!(scan.poles[0].order, 1);
}

#[test]
fn m1_strip_around_the_weight_line_is_empty() {
    let scan = locate_poles(&m1(32), (-0.5, 1.5), 5.0, &ScanSettings::default()).unwrap();
    assert!(scan.poles.is_empty());
}

#[test]
fn m3_has_a_double_pole_at_zero() {
    let f = ConormalFamily::conormal(&models::m3::<C64>(), 32).unwrap();
    let inv = invert_family(&f, (-0.5, 0.5), 5.0, &ScanSettings::default()).unwrap();
    assert_eq!(inv.poles().len(), 1);
    let d = &inv.poles()[0];
    assert!(d.p.norm() < 1e-8, "{}", d.p);
    assert_eq!(d.order, 2);
    assert_eq!(d.n_p, 1);
    assert_eq!(d.rank_m, 2);
    // R_1 is a rank-one map onto the constants
    let q = linalg::column_space(&d.r0(1), RANK_TOL);
    assert_eq!(q.ncols(), 1);
    let spread = q.column(0).iter().map(|v| (v - q[(0, 0)]).norm()).fold(0.0, f64::max);
    assert!(spread < 1e-8);
}

#[test]
fn m1_residue_at_golden_ratio_is_the_sine_mode() {
    let f = m1(32);
    let inv = invert_family(&f, (1.0, 2.0), 5.0, &ScanSettings::default()).unwrap();
    let d = &inv.poles()[0];
    assert_eq!((d.n_p, d.rank_m), (0, 1));
    assert_eq!(linalg::numerical_rank(&d.r0(0), RANK_TOL), 1);
    let q = linalg::column_space(&d.r0(0), RANK_TOL);
    let s = f.discretization().sample_fn(|x| C64::new(x.sin(), 0.0));
    let s = CMat::from_column_slice(s.len(), 1, &s);
    let s = s.unscale(s.norm());
    let overlap = (s.adjoint() * &q)[(0, 0)].norm();
    assert!((overlap - 1.0).abs() < 1e-8, "{overlap}");
}

#[test]
fn holomorphic_perturbation_leaves_laurent_data() {
    let f = m1(24);
    let pole = Pole { z: C64::new(golden(), 0.0), order: 1 };
    let a = laurent_coeffs(&f, pole, 0.1, Exec::default()).unwrap();
    let n = f.size();
    let shifted = |z: C64| f.inverse(z).map(|m| m + CMat::identity(n, n) * (z / 100.0));
    let b = laurent_data(&shifted, pole, &f.interior_rows(), 0.1, n, Exec::default()).unwrap();
    for (x, y) in a.r.iter().zip(&b.r) {
        assert!((x - y).camax() < 1e-8);
    }
}

#[test]
fn laurent_data_does_not_depend_on_the_radius() {
    let f = m1(24);
    let pole = Pole { z: C64::new(golden(), 0.0), order: 1 };
    let a = laurent_coeffs(&f, pole, 0.1, Exec::default()).unwrap();
    let b = laurent_coeffs(&f, pole, 0.05, Exec::default()).unwrap();
    assert!((&a.r[0] - &b.r[0]).camax() < 1e-8 * a.r[0].camax().max(1.0));
    assert_eq!(a.rank_m, b.rank_m);
}

#[test]
fn second_pole_inside_the_circle_is_detected() {
    let f = m1(24);
    // -0.618 and 1.618 are more than 2 apart; a radius of 2.3 around 1.618 encloses both
    let pole = Pole { z: C64::new(golden(), 0.0), order: 1 };
    assert!(laurent_coeffs(&f, pole, 2.3, Exec::default()).is_err());
}

#[test]
fn inverse_blocks_invert_the_family() {
    let f = m1(20);
    let inv = invert_family(&f, (-0.5, 1.5), 3.0, &ScanSettings::default()).unwrap();
    for z in [C64::new(0.2, 0.4), C64::new(-1.3, 2.0), C64::new(3.1, -0.7)] {
        let full = inv.full(z).unwrap();
        let res = f.matrix(z) * &full - CMat::identity(f.size(), f.size());
        assert!(res.camax() < 1e-10, "{}", res.camax());
        let (r0, _) = inv.eval(z).unwrap();
        let boundary = f.boundary_rows();
        let fz = f.matrix(z);
        let t_rows = CMat::from_fn(boundary.len(), fz.ncols(), |i, j| fz[(boundary[i], j)]);
        assert!((t_rows * r0).camax() < 1e-10);
    }
}

#[test]
fn inverse_refuses_located_poles() {
    let f = m1(20);
    let inv = invert_family(&f, (1.0, 2.0), 3.0, &ScanSettings::default()).unwrap();
    assert!(inv.eval(inv.poles()[0].p).is_err());
}

#[test]
fn delta_is_holomorphic() {
    let f = m1(20);
    let z = C64::new(0.37, 0.81);
    let h = 1e-5;
    let dx = (char_determinant(&f, z + h) - char_determinant(&f, z - h)) / (2.0 * h);
    let dy = (char_determinant(&f, z + C64::new(0.0, h)) - char_determinant(&f, z - C64::new(0.0, h))) / (2.0 * h);
    // Cauchy-Riemann: d/dy = i d/dx
    assert!((dy - C64::i() * dx).norm() < 1e-6 * dx.norm().max(1.0));
}

#[test]
fn t_independent_models_have_vanishing_lower_terms() {
    let p = models::m1::<C64>();
    let disc = Discretization::new(16, std::f64::consts::PI).unwrap();
    let rec = Recursion::new(&p, &disc).unwrap();
    let (r1, k1) = rec.blocks(1, C64::new(0.3, 0.2)).unwrap();
    assert_eq!(r1.camax(), 0.0);
    assert_eq!(k1.camax(), 0.0);
}

#[test]
fn perturbed_recursion_satisfies_identities() {
    let p = models::m1_perturbed::<C64>();
    let disc = Discretization::new(20, std::f64::consts::PI).unwrap();
    let rec = Recursion::new(&p, &disc).unwrap();
    for z in [C64::new(0.3, 0.2), C64::new(-0.9, 1.1), C64::new(2.2, -0.4)] {
        assert!(rec.residual(1, z).unwrap() < 1e-8);
        let (r1, _) = rec.blocks(1, z).unwrap();
        assert!(r1.camax() > 1e-6);
    }
}

#[test]
fn recursion_is_linear_in_the_first_coefficient() {
    let p = models::m1_perturbed::<C64>();
    let disc = Discretization::new(16, std::f64::consts::PI).unwrap();
    let rec = Recursion::new(&p, &disc).unwrap();
    let mut fams = rec.families().to_vec();
    let doubled = ConormalFamily::assemble(&p, 1, &disc).unwrap();
    fams[1] = doubled.scaled(2.0);
    let rec2 = Recursion::from_families(fams).unwrap();
    let z = C64::new(0.45, 0.3);
    let a = rec.blocks(1, z).unwrap().0;
    let b = rec2.blocks(1, z).unwrap().0;
    assert!((b - a.scale(2.0)).camax() < 1e-10 * a.camax().max(1.0));
}
