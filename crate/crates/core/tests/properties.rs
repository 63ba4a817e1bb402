use nalgebra::{Matrix2, Vector2, Vector4};
use nvmag_core::dynamics::{build_liouvillian, evolve, steady_state, Frame, MasterEqParams, NamedState};
use nvmag_core::linalg::Op4;
use nvmag_core::measures::{concurrence, l1_coherence};
use nvmag_core::{TwoQubitState, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn params() -> impl Strategy<Value = MasterEqParams> {
    (
        0.0..1e3f64,
        0.0..0.5f64,
        0.0..0.8f64,
        -1e3..1e3f64,
        0.01..10.0f64,
        0.0..10.0f64,
    )
        .prop_map(|(kappa, nbar0, epsilon, eta0, kappa_nv, kappa_deph)| MasterEqParams {
            kappa,
            nbar0,
            epsilon,
            eta0,
            omega: 0.0,
            kappa_nv,
            kappa_deph,
            frame: Frame::Rotating,
        })
}

fn state() -> impl Strategy<Value = TwoQubitState> {
    prop::collection::vec(-1.0..1.0f64, 32).prop_map(|v| {
        let g = Op4::from_fn(|i, j| c(v[4 * i + j], v[16 + 4 * i + j]));
        let m = g * g.adjoint();
        let tr = m.trace();
        TwoQubitState::new(m.map(|z| z / tr)).unwrap()
    })
}

fn unitary2(v: &[f64]) -> Matrix2<C64> {
    let g = Matrix2::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]), c(v[6], v[7]));
    g.qr().q()
}

fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Op4 {
    Op4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

fn cptp(s: &TwoQubitState) -> bool {
    s.hermiticity_error() <= 1e-10 && (s.trace() - 1.0).norm() <= 1e-9 && s.min_eigenvalue() >= -1e-8
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn generator_is_trace_preserving_and_dissipative(p in params(), lab in any::<bool>(), omega in 0.0..100.0f64) {
        let p = MasterEqParams { omega, frame: if lab { Frame::Lab } else { Frame::Rotating }, ..p };
        let l = build_liouvillian(&p).unwrap();
        let n = l.norm();
        prop_assert!(l.trace_defect() < 1e-9 * n);
        prop_assert!(l.max_real_eigenvalue().unwrap() <= 1e-9 * n);
    }

    #[test]
    fn trajectories_stay_physical(p in params(), rho in state()) {
        let l = build_liouvillian(&p).unwrap();
        let times: Vec<f64> = (0..30).map(|i| 1e-3 * 1.5f64.powi(i)).collect();
        let traj = evolve(&rho, &l, &times).unwrap();
        for s in &traj.states {
            prop_assert!(cptp(s));
        }
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(rho in state(), u in prop::collection::vec(-1.0..1.0f64, 16)) {
        let u = kron2(&unitary2(&u[..8]), &unitary2(&u[8..]));
        let rotated = TwoQubitState::new(u * rho.matrix() * u.adjoint()).unwrap();
        prop_assert!((concurrence(&rho) - concurrence(&rotated)).abs() < 1e-9);
    }

    #[test]
    fn separable_mixtures_have_zero_concurrence(v in prop::collection::vec(-1.0..1.0f64, 4 * 8 + 4)) {
        let mut m = Op4::zeros();
        let weights: Vec<f64> = v[32..].iter().map(|w| w.abs() + 0.05).collect();
        let total: f64 = weights.iter().sum();
        for (i, w) in weights.iter().enumerate() {
            let a = Vector2::new(c(v[8 * i], v[8 * i + 1]), c(v[8 * i + 2], v[8 * i + 3])).normalize();
            let b = Vector2::new(c(v[8 * i + 4], v[8 * i + 5]), c(v[8 * i + 6], v[8 * i + 7])).normalize();
            let k = Vector4::from_fn(|j, _| a[j / 2] * b[j % 2]);
            m += k * k.adjoint() * c(w / total, 0.0);
        }
        let s = TwoQubitState::new(m).unwrap();
        prop_assert!(concurrence(&s) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn steady_state_matches_long_time_evolution(p in params(), rho in state()) {
        let l = build_liouvillian(&p).unwrap();
        let ss = steady_state(&l, Some(&rho)).unwrap();
        prop_assert_eq!(ss.kernel_dimension, 1);
        let t = 20.0 / ss.slowest_rate.unwrap();
        let traj = evolve(&rho, &l, &[t]).unwrap();
        prop_assert!(ss.state.trace_distance(&traj.states[0]) < 1e-6);
    }
}

#[test]
fn werner_closed_form() {
    let singlet = TwoQubitState::named(NamedState::Dfs1);
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        let m = singlet.matrix() * c(p, 0.0) + Op4::identity() * c((1.0 - p) / 4.0, 0.0);
        let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
        assert!((concurrence(&TwoQubitState::new(m).unwrap()) - expected).abs() < 1e-9);
    }
}

#[test]
fn frame_consistency_at_small_omega() {
    let base = MasterEqParams {
        kappa: 2.0,
        nbar0: 0.05,
        epsilon: 0.0,
        eta0: 3.0,
        omega: 7.0,
        kappa_nv: 0.3,
        kappa_deph: 0.2,
        frame: Frame::Rotating,
    };
    let rot = build_liouvillian(&base).unwrap();
    let lab = build_liouvillian(&MasterEqParams { frame: Frame::Lab, ..base }).unwrap();
    let times: Vec<f64> = (0..200).map(|i| 0.05 * i as f64).collect();
    for init in [NamedState::PlusMinus, NamedState::BellPlus, NamedState::Dfs2] {
        let rho0 = TwoQubitState::named(init);
        let a = evolve(&rho0, &rot, &times).unwrap();
        let b = evolve(&rho0, &lab, &times).unwrap();
        for i in 0..times.len() {
            let (x, y) = (&a.states[i], &b.states[i]);
            for k in 0..4 {
                assert!((x.get(k, k).re - y.get(k, k).re).abs() < 1e-6);
            }
            assert!((x.get(1, 2).norm() - y.get(1, 2).norm()).abs() < 1e-6);
            assert!((x.get(0, 3).norm() - y.get(0, 3).norm()).abs() < 1e-6);
            assert!((a.concurrence[i] - b.concurrence[i]).abs() < 1e-6);
            assert!((l1_coherence(x) - l1_coherence(y)).abs() < 1e-6);
        }
    }
}
