//! The strip of the adjoint at weight `-gamma` is the reflection of the strip
//! of the problem at weight `gamma`, so both relative indices agree.

use conebvp::adjoint_lab::build_adjoint;
use conebvp::domains::{domain_report, AnalysisSettings, WeightData};
use conebvp::scalar::C64;
use conebvp::{models, Problem};

fn index(p: &Problem<C64>, gamma: f64) -> Option<usize> {
    let settings = AnalysisSettings { grid_n: 32, imag_box: 5.0, ..Default::default() };
    let w = WeightData::new(gamma, 2.0, p.mu(), p.n()).unwrap();
    domain_report(p, &w, &settings).unwrap().relative_index
}

#[test]
fn adjoint_index_at_negated_weight() {
    let cases: [(Problem<C64>, &[f64]); 3] = [
        (models::m1(), &[0.0, -0.5, -1.0]),
        (models::m2(), &[0.0, 0.25]),
        (models::m3(), &[0.25, -0.6]),
    ];
    for (p, gammas) in cases {
        let adj = build_adjoint(&p).unwrap().problem;
        for &gamma in gammas {
            let a = index(&p, gamma);
            assert!(a.is_some());
            assert_eq!(a, index(&adj, -gamma), "{} gamma={gamma}", p.name);
        }
    }
}
