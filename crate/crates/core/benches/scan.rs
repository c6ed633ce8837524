use std::hint::black_box;

use conebvp::cross_section::ConormalFamily;
use conebvp::meromorphic::{locate_poles, ScanSettings};
use conebvp::scalar::C64;
use conebvp::{models, Exec};
use criterion::{criterion_group, criterion_main, Criterion};

fn pole_search(c: &mut Criterion) {
    let family = ConormalFamily::conormal(&models::m1::<C64>(), 32).unwrap();
    let mut group = c.benchmark_group("locate_poles_m1");
    group.sample_size(10);
    for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        let settings = ScanSettings { exec, ..Default::default() };
        group.bench_function(label, |b| {
            b.iter(|| locate_poles(black_box(&family), (-3.0, 3.0), 5.0, &settings).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, pole_search);
criterion_main!(benches);
