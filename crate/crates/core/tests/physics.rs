use nvmag_core::bath::{correlation_series, CorrelationWindow};
use nvmag_core::coupling::{couple_pair, dipolar_site_coefficients, NVParams};
use nvmag_core::dynamics::{build_liouvillian, evolve, steady_state, MasterEqParams, NamedState, Propagator};
use nvmag_core::magnonics::{MaterialParams, StripGeometry};
use nvmag_core::measures::{concurrence, detect_esd, dfs_fidelities, l1_coherence, ESD_FLOOR};
use nvmag_core::system::{Coherence, DeviceConfig};
use nvmag_core::TwoQubitState;

fn log_times(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    let (a, b) = (t0.ln(), t1.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn tuned(height: f64) -> DeviceConfig {
    let mut c = DeviceConfig::reference();
    c.nv.height = height;
    c.electric = 0.157_241_2e9;
    c
}

#[test]
fn public_bath_long_time_state() {
    let r = DeviceConfig::reference().resolve().unwrap();
    let l = r.liouvillian().unwrap();
    let rho0 = TwoQubitState::named(NamedState::PlusMinus);
    let t_end = 40.0 / r.bath.kappa;
    let traj = evolve(&rho0, &l, &log_times(1e-6, t_end, 120)).unwrap();
    let last = traj.last().unwrap();
    let p = last.populations();
    assert!(p[0].abs() < 1e-6);
    assert!((p[3] - 0.5).abs() < 1e-3);
    assert!((p[1] - 0.25).abs() < 1e-3 && (p[2] - 0.25).abs() < 1e-3);
    assert!((last.get(1, 2).norm() - 0.25).abs() < 1e-3);
    assert!((dfs_fidelities(last).0 - 0.5).abs() < 1e-3);

    // block structure along the whole run
    for s in &traj.states {
        for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)] {
            assert!(s.get(i, j).norm() < 1e-10);
        }
        assert!(s.get(1, 2).re <= 1e-12);
    }
    let ss = steady_state(&l, Some(&rho0)).unwrap();
    assert!(ss.kernel_dimension > 1);
    assert!(ss.state.trace_distance(last) < 1e-3);
    assert!((concurrence(&ss.state) - 0.5).abs() < 1e-9);
    assert!((l1_coherence(&ss.state) - 0.5).abs() < 1e-9);
}

#[test]
fn dark_state_protection_any_epsilon() {
    for eps in [0.0, 0.2, 0.5] {
        let mut c = tuned(5e-9);
        c.coherence = Coherence::Epsilon(eps);
        let l = c.resolve().unwrap().liouvillian().unwrap();
        let rho0 = TwoQubitState::named(NamedState::Dfs1);
        let traj = evolve(&rho0, &l, &log_times(1e-9, 1.0, 60)).unwrap();
        assert!(traj.concurrence.iter().all(|c| (c - 1.0).abs() < 1e-6));
    }
}

#[test]
fn x_form_steady_state() {
    for eps in [0.0, 0.3] {
        let mut c = tuned(5e-9);
        c.coherence = Coherence::Epsilon(eps);
        c.nv.t1 = Some(1e-3);
        let p = c.resolve().unwrap().master_eq_params();
        // dissipators alone: exactly X-shaped
        let undriven = build_liouvillian(&MasterEqParams { eta0: 0.0, ..p.clone() }).unwrap();
        let x = steady_state(&undriven, None).unwrap().state;
        for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            assert!(x.get(i, j).norm() < 1e-8);
        }
        if eps > 0.0 {
            assert!(x.get(0, 3).norm() > 1e-6);
        } else {
            assert!(x.get(0, 3).norm() < 1e-8);
        }
        // the σ^y drive leaks weight off the X at the η0 ε / κ scale
        let full = steady_state(&build_liouvillian(&p).unwrap(), None).unwrap().state;
        let leak = eps * p.eta0.abs() / p.kappa;
        for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            assert!(full.get(i, j).norm() <= 2.0 * leak + 1e-12, "{eps} {i} {j} {}", full.get(i, j));
        }
        assert!((concurrence(&full) - concurrence(&x)).abs() < 1e-4);
    }
}

#[test]
fn stiff_generator_uses_spectral_path() {
    let mut c = tuned(5e-9);
    c.coherence = Coherence::Epsilon(0.2);
    c.nv.t1 = Some(1e-3);
    c.nv.t2 = Some(1e-3);
    let r = c.resolve().unwrap();
    assert!(r.bath.kappa > 1e7, "{}", r.bath.kappa);
    let l = r.liouvillian().unwrap();
    assert!(Propagator::new(&l).is_spectral());
}

#[test]
fn sudden_death_and_revival() {
    let mut c = tuned(5e-9);
    c.coherence = Coherence::Epsilon(0.2);
    c.nv.t1 = Some(1e-3);
    c.nv.t2 = Some(1e-3);
    let l = c.resolve().unwrap().liouvillian().unwrap();
    let traj = evolve(&TwoQubitState::named(NamedState::PlusMinus), &l, &log_times(1e-9, 0.1, 600)).unwrap();
    let r = detect_esd(&traj, ESD_FLOOR).unwrap();
    assert!(!r.death_times.is_empty());
    assert!(!r.revival_times.is_empty());
    assert!(r.revival_times[0] > r.death_times[0]);
    assert!(r.c_ss > 0.0);
}

#[test]
fn epsilon_zero_has_no_revival() {
    let mut c = tuned(5e-9);
    c.nv.t1 = Some(1e-3);
    c.nv.t2 = Some(1e-3);
    let l = c.resolve().unwrap().liouvillian().unwrap();
    let traj = evolve(&TwoQubitState::named(NamedState::PlusMinus), &l, &log_times(1e-9, 0.1, 400)).unwrap();
    let r = detect_esd(&traj, ESD_FLOOR).unwrap();
    assert_eq!(r.death_times.len(), 1);
    assert!(r.revival_times.is_empty());
    assert!(r.c_ss < 1e-9, "{}", r.c_ss);
}

#[test]
fn dephasing_alone_gives_no_steady_entanglement() {
    for eps in [0.1, 0.2, 0.4, 0.6] {
        let mut c = tuned(5e-9);
        c.coherence = Coherence::Epsilon(eps);
        c.nv.t2 = Some(1e-3);
        let l = c.resolve().unwrap().liouvillian().unwrap();
        let ss = steady_state(&l, Some(&TwoQubitState::named(NamedState::PlusMinus))).unwrap();
        assert!(concurrence(&ss.state) < 1e-9, "{eps}");
    }
}

#[test]
fn short_range_truncation() {
    let mat = MaterialParams::yig();
    let geo = StripGeometry::reference(&mat);
    let check = |height: f64, with_alpha: bool| {
        let mut nv = NVParams::reference(&geo);
        nv.height = height;
        let x = nv.positions[1];
        let full = dipolar_site_coefficients(x, &nv, &mat, &geo).unwrap();
        let near: Vec<usize> = (0..full.positions.len())
            .filter(|&j| (x - full.positions[j]).abs() <= 50.0 * height)
            .collect();
        let sum = |v: &[f64], idx: Option<&[usize]>| -> f64 {
            match idx {
                Some(ix) => ix.iter().map(|&j| v[j]).sum(),
                None => v.iter().sum(),
            }
        };
        let rel = |a: f64, b: f64| ((a - b) / a).abs();
        let beta = rel(sum(&full.b, None), sum(&full.b, Some(&near)));
        // η0 in the φ ≈ 0 frame is the sum of C
        let eta = rel(sum(&full.c, None), sum(&full.c, Some(&near)));
        assert!(beta < 1e-3 && eta < 1e-3, "{height} {beta} {eta}");
        if with_alpha {
            let alpha = rel(sum(&full.a, None), sum(&full.a, Some(&near)));
            assert!(alpha < 1e-3, "{height} {alpha}");
        }
    };
    check(20e-9, true);
    check(5e-9, false);
}

#[test]
fn zone_center_relations() {
    let mat = MaterialParams::yig();
    let geo = StripGeometry::reference(&mat);
    let nv = NVParams::reference(&geo);
    let pair = couple_pair(&nv, &mat, &geo, 51.16e-3).unwrap();
    let ks = &pair.kspace[1];
    let scale = ks.eta0.abs();
    assert!(ks.xi0.abs() < 0.05 * scale);
    assert!((ks.eta0 + ks.zeta0).abs() < 0.05 * scale);
}

#[test]
fn markov_diagnostics_reference() {
    let r = DeviceConfig::reference().resolve().unwrap();
    let m = r.markov_report(CorrelationWindow::default()).unwrap();
    assert!(m.first_crossing.unwrap() <= 10e-9);
    assert!(m.tau_s >= 1e-3);
    assert!(m.dense_spectrum);
    assert_eq!(m.mode_spacing_ratio, std::f64::consts::PI / 2000.0);
}

#[test]
fn correlation_dips_within_ten_ns() {
    let r = DeviceConfig::reference().resolve().unwrap();
    let times: Vec<f64> = (0..=2000).map(|i| 10e-9 * i as f64 / 2000.0).collect();
    let g = correlation_series(&times, &r.pair.kspace[0].eta_weights(), &r.dispersion().unwrap());
    assert!(g.iter().any(|z| z.norm() < 0.2 * g[0].norm()));
}

#[test]
fn amplitude_damping_rate() {
    let k = 1e3;
    let l = build_liouvillian(&MasterEqParams { kappa_nv: k, ..Default::default() }).unwrap();
    let times = log_times(1e-6, 1e-2, 50);
    let traj = evolve(&TwoQubitState::named(NamedState::PlusMinus), &l, &times).unwrap();
    for (t, s) in times.iter().zip(&traj.states) {
        assert!((s.get(1, 1).re - (-k * t).exp()).abs() < 1e-12);
    }
}
