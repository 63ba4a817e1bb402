use std::fmt;
use std::str::FromStr;

use nalgebra::Vector4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, Op4, C64};

/// Two-qubit density matrix in the basis `|11⟩, |10⟩, |01⟩, |00⟩` with
/// `1` the excited level.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: Op4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedState {
    PlusMinus,
    /// Singlet `(|+−⟩ − |−+⟩)/√2`.
    Dfs1,
    /// `(|++⟩ − |−−⟩)/√2`.
    Dfs2,
    /// `(|++⟩ + |−−⟩)/√2`.
    BellPlus,
    Ground,
}

impl NamedState {
    pub const ALL: [NamedState; 5] = [
        NamedState::PlusMinus,
        NamedState::Dfs1,
        NamedState::Dfs2,
        NamedState::BellPlus,
        NamedState::Ground,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedState::PlusMinus => "plus-minus",
            NamedState::Dfs1 => "dfs1",
            NamedState::Dfs2 => "dfs2",
            NamedState::BellPlus => "bell-plus",
            NamedState::Ground => "ground",
        }
    }

    pub fn ket(self) -> Vector4<C64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = match self {
            NamedState::PlusMinus => [0.0, 1.0, 0.0, 0.0],
            NamedState::Dfs1 => [0.0, h, -h, 0.0],
            NamedState::Dfs2 => [h, 0.0, 0.0, -h],
            NamedState::BellPlus => [h, 0.0, 0.0, h],
            NamedState::Ground => [0.0, 0.0, 0.0, 1.0],
        };
        Vector4::from_iterator(v.iter().map(|&x| C64::new(x, 0.0)))
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedState::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| Error::invalid("initial_state", format!("unknown named state '{s}'")))
    }
}

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_SLACK: f64 = 1e-8;

impl TwoQubitState {
    /// Validated state.
    pub fn new(rho: Op4) -> Result<Self> {
        let s = TwoQubitState { rho };
        s.check()?;
        Ok(s)
    }

    /// Wraps a matrix without checks.
    pub fn from_matrix_unchecked(rho: Op4) -> Self {
        TwoQubitState { rho }
    }

    pub fn pure(ket: &Vector4<C64>) -> Self {
        let norm = ket.norm();
        let k = ket.unscale(norm);
        TwoQubitState { rho: &k * k.adjoint() }
    }

    pub fn named(n: NamedState) -> Self {
        Self::pure(&n.ket())
    }

    pub fn maximally_mixed() -> Self {
        TwoQubitState {
            rho: Op4::identity() * C64::new(0.25, 0.0),
        }
    }

    pub fn matrix(&self) -> &Op4 {
        &self.rho
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.rho[(i, j)]
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.rho)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Checks Hermiticity, unit trace and positivity with numerical slack.
    pub fn check(&self) -> Result<()> {
        let h = self.hermiticity_error();
        if !(h <= HERMITIAN_TOL) {
            return Err(Error::invalid("rho", format!("not Hermitian (deviation {h:e})")));
        }
        let tr = self.trace();
        if !((tr - 1.0).norm() <= TRACE_TOL) {
            return Err(Error::invalid("rho", format!("trace {tr} differs from 1")));
        }
        let m = self.min_eigenvalue();
        if m < -POSITIVITY_SLACK {
            return Err(Error::invalid("rho", format!("eigenvalue {m:e} is negative")));
        }
        Ok(())
    }

    /// `(ρ + ρ†)/2` scaled to unit trace; returns the state and the trace
    /// drift `|tr ρ - 1|` that was removed.
    pub fn cleaned(rho: Op4) -> (Self, f64) {
        let h = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
        let tr = h.trace().re;
        let drift = (rho.trace() - 1.0).norm();
        (TwoQubitState { rho: h.unscale(tr) }, drift)
    }

    /// `½ Σ |λ_i(ρ − σ)|`.
    pub fn trace_distance(&self, other: &TwoQubitState) -> f64 {
        0.5 * hermitian_eigenvalues(&(self.rho - other.rho))
            .iter()
            .map(|x| x.abs())
            .sum::<f64>()
    }

    pub fn populations(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.rho[(i, i)].re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_states_are_valid() {
        for n in NamedState::ALL {
            let s = TwoQubitState::named(n);
            s.check().unwrap();
            assert_eq!(n.name().parse::<NamedState>().unwrap(), n);
        }
        assert!("up-down".parse::<NamedState>().is_err());
        let pm = TwoQubitState::named(NamedState::PlusMinus);
        assert_eq!(pm.populations(), [0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_invalid() {
        let mut m = Op4::zeros();
        m[(0, 0)] = C64::new(1.2, 0.0);
        m[(1, 1)] = C64::new(-0.2, 0.0);
        assert!(TwoQubitState::new(m).is_err());
        m[(1, 1)] = C64::new(0.0, 0.0);
        assert!(TwoQubitState::new(m).is_err());
    }

    #[test]
    fn distance() {
        let a = TwoQubitState::named(NamedState::Dfs1);
        let b = TwoQubitState::named(NamedState::Dfs2);
        assert!((a.trace_distance(&b) - 1.0).abs() < 1e-12);
        assert!(a.trace_distance(&a) < 1e-15);
    }
}
