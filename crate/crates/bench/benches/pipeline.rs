use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nvmag_core::bath::CorrelationWindow;
use nvmag_core::coupling::{couple_pair, solve_resonance, NVParams};
use nvmag_core::dynamics::{build_liouvillian, evolve, steady_state, NamedState};
use nvmag_core::magnonics::{MaterialParams, StripGeometry};
use nvmag_core::measures::concurrence;
use nvmag_core::system::{Coherence, DeviceConfig};
use nvmag_core::TwoQubitState;

fn tuned() -> DeviceConfig {
    let mut c = DeviceConfig::reference();
    c.nv.height = 5e-9;
    c.electric = 0.157_241e9;
    c.coherence = Coherence::Epsilon(0.2);
    c.nv.t1 = Some(1e-3);
    c
}

fn couplings(c: &mut Criterion) {
    let mat = MaterialParams::yig();
    let geo = StripGeometry::reference(&mat);
    let nv = NVParams::reference(&geo);
    c.bench_function("solve_resonance", |b| {
        b.iter(|| solve_resonance(black_box(&nv), &mat, &geo, nv.positions[0]).unwrap())
    });
    let b0 = solve_resonance(&nv, &mat, &geo, nv.positions[0]).unwrap();
    c.bench_function("couple_pair/N=1000", |b| b.iter(|| couple_pair(black_box(&nv), &mat, &geo, b0).unwrap()));
    c.bench_function("resolve/reference", |b| {
        let cfg = DeviceConfig::reference();
        b.iter(|| black_box(&cfg).resolve().unwrap())
    });
}

fn dynamics(c: &mut Criterion) {
    let r = tuned().resolve().unwrap();
    let p = r.master_eq_params();
    let l = build_liouvillian(&p).unwrap();
    let rho0 = TwoQubitState::named(NamedState::PlusMinus);
    let times: Vec<f64> = (0..200).map(|i| 1e-5 * i as f64).collect();

    c.bench_function("build_liouvillian", |b| b.iter(|| build_liouvillian(black_box(&p)).unwrap()));
    c.bench_function("steady_state", |b| b.iter(|| steady_state(black_box(&l), Some(&rho0)).unwrap()));
    c.bench_function("evolve/200", |b| b.iter(|| evolve(black_box(&rho0), &l, &times).unwrap()));
    let end = evolve(&rho0, &l, &[1e-3]).unwrap().states[0].clone();
    c.bench_function("concurrence", |b| b.iter(|| concurrence(black_box(&end))));
}

fn bath(c: &mut Criterion) {
    let r = DeviceConfig::reference().resolve().unwrap();
    let window = CorrelationWindow::default();
    let mut g = c.benchmark_group("bath");
    g.sample_size(10);
    g.bench_function("correlation/default_window", |b| b.iter(|| r.correlation(black_box(&window)).unwrap()));
    g.finish();
}

criterion_group!(benches, couplings, dynamics, bath);
criterion_main!(benches);
