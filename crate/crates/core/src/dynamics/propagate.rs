use log::{debug, warn};
use nalgebra::DVector;
use serde::Serialize;

use super::liouvillian::Liouvillian;
use super::state::{TwoQubitState, POSITIVITY_SLACK};
use crate::error::{Error, Result};
use crate::linalg::{unvec, vec_of, SuperOp, Spectral, C64};
use crate::measures::{concurrence, dfs_fidelities, l1_coherence};

/// Eigenvector condition number above which propagation switches to the
/// matrix exponential.
pub const MAX_CONDITION: f64 = 1e12;
/// Hard positivity limit; anything below signals a broken generator.
pub const POSITIVITY_FAILURE: f64 = 1e-6;

/// `exp(L t)` either through the eigendecomposition or by Padé scaling and
/// squaring.
#[derive(Debug, Clone)]
pub enum Propagator {
    Spectral(Spectral),
    Pade(SuperOp),
}

impl Propagator {
    pub fn new(l: &Liouvillian) -> Self {
        match Spectral::new(&l.matrix) {
            Ok(s) if s.is_well_conditioned(MAX_CONDITION) => {
                debug!("spectral propagator, cond(V) = {:.3e}", s.condition);
                Propagator::Spectral(s)
            }
            Ok(s) => {
                debug!(
                    "eigenvectors ill-conditioned (cond {:.3e}, residual {:.3e}); using Pade",
                    s.condition, s.residual
                );
                Propagator::Pade(l.matrix.clone())
            }
            Err(e) => {
                debug!("eigendecomposition failed ({e}); using Pade");
                Propagator::Pade(l.matrix.clone())
            }
        }
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self, Propagator::Spectral(_))
    }

    /// `exp(L t) v`.
    pub fn apply(&self, v: &DVector<C64>, t: f64) -> DVector<C64> {
        match self {
            Propagator::Spectral(s) => {
                let c = &s.inverse * v;
                let scaled = DVector::from_iterator(
                    c.len(),
                    c.iter().zip(s.values.iter()).map(|(ci, l)| ci * (l * t).exp()),
                );
                &s.vectors * scaled
            }
            Propagator::Pade(l) => {
                if t == 0.0 {
                    return v.clone();
                }
                (l * C64::new(t, 0.0)).exp() * v
            }
        }
    }
}

/// Time series of states with the derived measures.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<TwoQubitState>,
    pub concurrence: Vec<f64>,
    pub l1: Vec<f64>,
    pub dfs: Vec<(f64, f64)>,
    /// Largest trace drift removed by renormalization.
    pub max_trace_drift: f64,
    /// Smallest eigenvalue seen along the run.
    pub min_eigenvalue: f64,
}

impl Trajectory {
    pub fn from_states(times: Vec<f64>, states: Vec<TwoQubitState>) -> Self {
        let concurrence = states.iter().map(concurrence).collect();
        let l1 = states.iter().map(l1_coherence).collect();
        let dfs = states.iter().map(dfs_fidelities).collect();
        let min_eigenvalue = states
            .iter()
            .map(|s| s.min_eigenvalue())
            .fold(f64::INFINITY, f64::min);
        Trajectory {
            times,
            states,
            concurrence,
            l1,
            dfs,
            max_trace_drift: 0.0,
            min_eigenvalue,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&TwoQubitState> {
        self.states.last()
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::invalid("times", "at least one sample is required"));
    }
    if !times.iter().all(|t| t.is_finite() && *t >= 0.0) {
        return Err(Error::invalid("times", "sample times must be finite and non-negative"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("times", "sample times must be strictly increasing"));
    }
    Ok(())
}

/// Propagates `rho0` to each of `times`.
pub fn evolve(rho0: &TwoQubitState, l: &Liouvillian, times: &[f64]) -> Result<Trajectory> {
    check_times(times)?;
    let prop = Propagator::new(l);
    let v0 = vec_of(rho0.matrix());
    let mut states = Vec::with_capacity(times.len());
    let mut max_drift: f64 = 0.0;
    for &t in times {
        let state = if t == 0.0 {
            rho0.clone()
        } else {
            let (s, drift) = TwoQubitState::cleaned(unvec(&prop.apply(&v0, t)));
            max_drift = max_drift.max(drift);
            let m = s.min_eigenvalue();
            if m < -POSITIVITY_FAILURE {
                return Err(Error::Positivity { time: t, min_eigenvalue: m });
            }
            if m < -POSITIVITY_SLACK {
                warn!("eigenvalue {m:e} at t = {t:e} s exceeds the positivity slack");
            }
            s
        };
        states.push(state);
    }
    if max_drift > 1e-12 {
        debug!("trace drift up to {max_drift:e} removed by renormalization");
    }
    let mut traj = Trajectory::from_states(times.to_vec(), states);
    traj.max_trace_drift = max_drift;
    Ok(traj)
}
