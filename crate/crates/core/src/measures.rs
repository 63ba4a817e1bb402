//! Entanglement and coherence measures on two-qubit states and
//! trajectories.

use nalgebra::{Matrix4, SymmetricEigen, SVD};
use serde::{Deserialize, Serialize};

use crate::dynamics::{NamedState, Trajectory, TwoQubitState};
use crate::error::{Error, Result};
use crate::linalg::{Op4, C64};

/// `σ^y ⊗ σ^y`; real in this basis.
fn yy() -> Op4 {
    let mut m = Op4::zeros();
    m[(0, 3)] = C64::new(-1.0, 0.0);
    m[(3, 0)] = C64::new(-1.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m[(2, 1)] = C64::new(1.0, 0.0);
    m
}

fn sqrt_psd(m: &Op4) -> Op4 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    // round-off below this would otherwise leak in at its square root
    let floor = 64.0 * f64::EPSILON * eig.eigenvalues.amax();
    let d = Matrix4::from_diagonal(&eig.eigenvalues.map(|x| C64::new(if x > floor { x.sqrt() } else { 0.0 }, 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Wootters concurrence. The square roots of the eigenvalues of `ρ ρ̃` are
/// taken as the singular values of `√ρ √ρ̃`, which avoids square roots of
/// round-off for rank-deficient states.
pub fn concurrence(state: &TwoQubitState) -> f64 {
    let s = sqrt_psd(state.matrix());
    let y = yy();
    let s_tilde = y * s.conjugate() * y;
    let mut sv: Vec<f64> = SVD::new(s * s_tilde, false, false).singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    (sv[0] - sv[1] - sv[2] - sv[3]).max(0.0)
}

/// Sum of off-diagonal magnitudes in the standard basis.
pub fn l1_coherence(state: &TwoQubitState) -> f64 {
    let m = state.matrix();
    let mut acc = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                acc += m[(i, j)].norm();
            }
        }
    }
    acc
}

/// Overlaps with the singlet and with `(|++⟩ − |−−⟩)/√2`.
pub fn dfs_fidelities(state: &TwoQubitState) -> (f64, f64) {
    let f = |n: NamedState| {
        let k = n.ket();
        (k.adjoint() * state.matrix() * k)[(0, 0)].re
    };
    (f(NamedState::Dfs1), f(NamedState::Dfs2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsdReport {
    pub death_times: Vec<f64>,
    pub revival_times: Vec<f64>,
    /// Largest concurrence before the first death (over the whole run when
    /// there is none).
    pub transient_peak: f64,
    pub c_ss: f64,
    pub c1_ss: f64,
}

pub const ESD_FLOOR: f64 = 1e-4;
pub const STEADY_SPREAD: f64 = 1e-6;
/// Fraction of trailing samples used for the steady values.
pub const STEADY_TAIL: f64 = 0.1;

pub fn detect_esd(traj: &Trajectory, floor: f64) -> Result<EsdReport> {
    detect_esd_series(&traj.times, &traj.concurrence, &traj.l1, floor)
}

/// Sudden-death events of a concurrence series.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EsdEvents {
    pub death_times: Vec<f64>,
    pub revival_times: Vec<f64>,
    pub transient_peak: f64,
}

/// Death: `C` drops below `floor` after having exceeded `2·floor`.
/// Revival: `C` climbs back to `2·floor`.
pub fn esd_events(times: &[f64], c: &[f64], floor: f64) -> EsdEvents {
    let mut ev = EsdEvents::default();
    let mut alive = false;
    for (&t, &x) in times.iter().zip(c) {
        if ev.death_times.is_empty() {
            ev.transient_peak = ev.transient_peak.max(x);
        }
        if alive {
            if x < floor {
                ev.death_times.push(t);
                alive = false;
            }
        } else if x >= 2.0 * floor {
            if !ev.death_times.is_empty() {
                ev.revival_times.push(t);
            }
            alive = true;
        }
    }
    ev
}

/// [`esd_events`] plus steady values, which must have settled over the
/// final samples.
pub fn detect_esd_series(times: &[f64], c: &[f64], c1: &[f64], floor: f64) -> Result<EsdReport> {
    let n = times.len().min(c.len()).min(c1.len());
    if n == 0 {
        return Err(Error::invalid("trajectory", "no samples"));
    }
    let ev = esd_events(&times[..n], &c[..n], floor);
    let tail = ((n as f64 * STEADY_TAIL).ceil() as usize).clamp(1, n);
    let spread = |v: &[f64]| {
        let s = &v[n - tail..n];
        let (lo, hi) = s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        hi - lo
    };
    let worst = spread(c).max(spread(c1));
    if worst >= STEADY_SPREAD {
        return Err(Error::NotSteady { spread: worst });
    }
    Ok(EsdReport {
        death_times: ev.death_times,
        revival_times: ev.revival_times,
        transient_peak: ev.transient_peak,
        c_ss: c[n - 1],
        c1_ss: c1[n - 1],
    })
}

/// Indices where `C > C1` beyond `tol`.
pub fn concurrence_bound_violations(traj: &Trajectory, tol: f64) -> Vec<usize> {
    traj.concurrence
        .iter()
        .zip(&traj.l1)
        .enumerate()
        .filter(|(_, (c, c1))| **c > **c1 + tol)
        .map(|(i, _)| i)
        .collect()
}
