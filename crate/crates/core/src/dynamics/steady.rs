use serde::{Deserialize, Serialize};

use super::liouvillian::Liouvillian;
use super::state::TwoQubitState;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, C64, kernel_bases, oblique_projector, unvec, vec_of};

/// Eigenvalues with `|λ| < KERNEL_TOLERANCE · ‖L‖_F` count as zero.
pub const KERNEL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SteadyMethod {
    /// Unique fixed point.
    Unique,
    /// Projection of the initial state onto a degenerate kernel.
    Projected,
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub state: TwoQubitState,
    pub kernel_dimension: usize,
    pub method: SteadyMethod,
    /// Slowest nonzero relaxation rate `min |Re λ|` over the non-kernel
    /// spectrum, when there is one.
    pub slowest_rate: Option<f64>,
}

/// Fixed point of `L`. A degenerate kernel needs `rho0` and returns the
/// `t → ∞` limit of the flow started there.
pub fn steady_state(l: &Liouvillian, rho0: Option<&TwoQubitState>) -> Result<SteadyState> {
    let norm = l.norm();
    let ev = eigenvalues(&l.matrix)?;
    let tol = KERNEL_TOLERANCE * norm;
    let (zero, rest): (Vec<C64>, Vec<C64>) = ev.iter().partition(|z| z.norm() <= tol);
    let slowest_rate = rest
        .iter()
        .map(|z| z.re.abs())
        .filter(|r| *r > 0.0)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.min(r))));
    let dim = zero.len().max(1);
    if norm == 0.0 {
        let rho = rho0.ok_or(Error::DegenerateKernel { dimension: 16 })?;
        return Ok(SteadyState {
            state: rho.clone(),
            kernel_dimension: 16,
            method: SteadyMethod::Projected,
            slowest_rate: None,
        });
    }
    let (right, left) = kernel_bases(&l.matrix, dim)?;
    if dim == 1 {
        let rho = unvec(&right.column(0).into_owned());
        let tr = rho.trace();
        let (state, _) = TwoQubitState::cleaned(rho.map(|z| z / tr));
        return Ok(SteadyState {
            state,
            kernel_dimension: 1,
            method: SteadyMethod::Unique,
            slowest_rate,
        });
    }
    let rho0 = rho0.ok_or(Error::DegenerateKernel { dimension: dim })?;
    let p = oblique_projector(&right, &left)?;
    let (state, _) = TwoQubitState::cleaned(unvec(&(p * vec_of(rho0.matrix()))));
    Ok(SteadyState {
        state,
        kernel_dimension: dim,
        method: SteadyMethod::Projected,
        slowest_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::liouvillian::{build_liouvillian, MasterEqParams};
    use crate::dynamics::state::NamedState;

    #[test]
    fn private_decay_goes_to_ground() {
        let l = build_liouvillian(&MasterEqParams { kappa_nv: 2.0, ..Default::default() }).unwrap();
        let ss = steady_state(&l, None).unwrap();
        assert_eq!(ss.kernel_dimension, 1);
        assert!(ss.state.trace_distance(&TwoQubitState::named(NamedState::Ground)) < 1e-12);
    }

    #[test]
    fn dark_state_is_kept() {
        let l = build_liouvillian(&MasterEqParams { kappa: 5.0, ..Default::default() }).unwrap();
        assert!(matches!(steady_state(&l, None), Err(Error::DegenerateKernel { .. })));
        let s = TwoQubitState::named(NamedState::Dfs1);
        let ss = steady_state(&l, Some(&s)).unwrap();
        assert!(ss.kernel_dimension > 1);
        assert!(ss.state.trace_distance(&s) < 1e-10);
    }

    #[test]
    fn public_bath_mixture() {
        let l = build_liouvillian(&MasterEqParams { kappa: 40.0, ..Default::default() }).unwrap();
        let ss = steady_state(&l, Some(&TwoQubitState::named(NamedState::PlusMinus))).unwrap();
        let p = ss.state.populations();
        assert!(p[0].abs() < 1e-10);
        assert!((p[3] - 0.5).abs() < 1e-10);
        assert!((p[1] - 0.25).abs() < 1e-10 && (p[2] - 0.25).abs() < 1e-10);
        assert!((ss.state.get(1, 2).re + 0.25).abs() < 1e-10);
    }
}
