use serde::{Deserialize, Serialize};

use crate::bath::dissipator_rates;
use crate::error::{Error, Result};
use crate::linalg::{frobenius, sandwich, vec_of, Op4, SuperOp, C64, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// Frame co-rotating with the qubits; the bare qubit Hamiltonian drops out.
    #[default]
    Rotating,
    /// Keeps `(Ω/2) Σ σ^z`.
    Lab,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MasterEqParams {
    pub kappa: f64,
    pub nbar0: f64,
    pub epsilon: f64,
    pub eta0: f64,
    /// Common dressed qubit frequency (rad/s).
    pub omega: f64,
    /// `1/T1` (1/s).
    pub kappa_nv: f64,
    /// `1/T2` (1/s).
    pub kappa_deph: f64,
    pub frame: Frame,
}

impl Default for MasterEqParams {
    fn default() -> Self {
        MasterEqParams {
            kappa: 0.0,
            nbar0: 0.0,
            epsilon: 0.0,
            eta0: 0.0,
            omega: 0.0,
            kappa_nv: 0.0,
            kappa_deph: 0.0,
            frame: Frame::Rotating,
        }
    }
}

impl MasterEqParams {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("kappa", self.kappa),
            ("nbar0", self.nbar0),
            ("epsilon", self.epsilon),
            ("kappa_nv", self.kappa_nv),
            ("kappa_deph", self.kappa_deph),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(field, format!("must be finite and non-negative, got {v}")));
            }
        }
        if !self.eta0.is_finite() || !self.omega.is_finite() {
            return Err(Error::invalid("eta0", "eta0 and omega must be finite"));
        }
        Ok(())
    }
}

/// Single-qubit operators embedded in the two-qubit space; qubit 1 is the
/// left Kronecker factor.
#[derive(Debug, Clone)]
pub struct QubitOps {
    pub plus: [Op4; 2],
    pub minus: [Op4; 2],
    pub z: [Op4; 2],
    pub y: [Op4; 2],
}

fn embed(single: [[C64; 2]; 2], qubit: usize) -> Op4 {
    let id = [[ONE, ZERO], [ZERO, ONE]];
    let (l, r) = if qubit == 0 { (single, id) } else { (id, single) };
    Op4::from_fn(|i, j| l[i / 2][j / 2] * r[i % 2][j % 2])
}

pub fn qubit_ops() -> QubitOps {
    let sp = [[ZERO, ONE], [ZERO, ZERO]];
    let sm = [[ZERO, ZERO], [ONE, ZERO]];
    let sz = [[ONE, ZERO], [ZERO, -ONE]];
    // σ^y = -i(σ⁺ − σ⁻)
    let sy = [[ZERO, -I], [I, ZERO]];
    QubitOps {
        plus: [embed(sp, 0), embed(sp, 1)],
        minus: [embed(sm, 0), embed(sm, 1)],
        z: [embed(sz, 0), embed(sz, 1)],
        y: [embed(sy, 0), embed(sy, 1)],
    }
}

/// `ρ ↦ 2 A ρ B − B A ρ − ρ B A`.
pub fn dissipator(a: &Op4, b: &Op4) -> SuperOp {
    let ba = b * a;
    let id = Op4::identity();
    sandwich(a, b) * C64::new(2.0, 0.0) - sandwich(&ba, &id) - sandwich(&id, &ba)
}

fn commutator(h: &Op4) -> SuperOp {
    let id = Op4::identity();
    (sandwich(h, &id) - sandwich(&id, h)) * (-I)
}

#[derive(Debug, Clone)]
pub struct Liouvillian {
    pub matrix: SuperOp,
    pub params: MasterEqParams,
}

pub fn build_liouvillian(p: &MasterEqParams) -> Result<Liouvillian> {
    p.validate()?;
    let ops = qubit_ops();
    let sp = ops.plus[0] + ops.plus[1];
    let sm = ops.minus[0] + ops.minus[1];
    let sy = ops.y[0] + ops.y[1];

    let mut h = sy * C64::new(-p.eta0 * p.epsilon, 0.0);
    if p.frame == Frame::Lab {
        h += (ops.z[0] + ops.z[1]) * C64::new(0.5 * p.omega, 0.0);
    }
    let mut l = commutator(&h);

    let rates = dissipator_rates(p.kappa, p.nbar0, p.epsilon);
    let re = |x: f64| C64::new(x, 0.0);
    if rates.squeeze != 0.0 {
        l -= (dissipator(&sp, &sp) + dissipator(&sm, &sm)) * re(rates.squeeze);
    }
    if rates.emission != 0.0 {
        l += dissipator(&sm, &sp) * re(rates.emission);
    }
    if rates.absorption != 0.0 {
        l += dissipator(&sp, &sm) * re(rates.absorption);
    }

    for q in 0..2 {
        if p.kappa_nv != 0.0 {
            l += dissipator(&ops.minus[q], &ops.plus[q]) * re(0.5 * p.kappa_nv * (p.nbar0 + 1.0));
            if p.nbar0 != 0.0 {
                l += dissipator(&ops.plus[q], &ops.minus[q]) * re(0.5 * p.kappa_nv * p.nbar0);
            }
        }
        if p.kappa_deph != 0.0 {
            let z = &ops.z[q];
            let id = SuperOp::identity(16, 16);
            l += (sandwich(z, z) - id) * re(0.5 * p.kappa_deph);
        }
    }
    Ok(Liouvillian { matrix: l, params: *p })
}

impl Liouvillian {
    pub fn norm(&self) -> f64 {
        frobenius(&self.matrix)
    }

    pub fn apply(&self, rho: &Op4) -> Op4 {
        crate::linalg::unvec(&(&self.matrix * vec_of(rho)))
    }

    /// `‖L†(vec I)‖`, zero for a trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        let id = vec_of(&Op4::identity());
        (self.matrix.adjoint() * id).norm()
    }

    /// Largest real part over the spectrum of `L`.
    pub fn max_real_eigenvalue(&self) -> Result<f64> {
        let ev = crate::linalg::eigenvalues(&self.matrix)?;
        Ok(ev.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::state::{NamedState, TwoQubitState};
    use crate::linalg::unvec;

    fn basis(i: usize, j: usize) -> Op4 {
        let mut m = Op4::zeros();
        m[(i, j)] = ONE;
        m
    }

    #[test]
    fn zero_generator() {
        let l = build_liouvillian(&MasterEqParams { eta0: 5e4, omega: 1e9, ..Default::default() }).unwrap();
        assert!(l.matrix.iter().all(|z| *z == ZERO));
    }

    #[test]
    fn operator_conventions() {
        let ops = qubit_ops();
        // σ⁺ on qubit 1 maps |01⟩ (index 2) to |11⟩ (index 0)
        assert_eq!(ops.plus[0][(0, 2)], ONE);
        assert_eq!(ops.plus[1][(0, 1)], ONE);
        let y = ops.y[0];
        let expect = (ops.plus[0] - ops.minus[0]) * (-I);
        assert_eq!(y, expect);
    }

    #[test]
    fn singlet_is_dark() {
        let p = MasterEqParams {
            kappa: 3.0,
            nbar0: 0.2,
            epsilon: 0.4,
            eta0: 7.0,
            ..Default::default()
        };
        let l = build_liouvillian(&p).unwrap();
        let s = TwoQubitState::named(NamedState::Dfs1);
        let out = l.apply(s.matrix());
        assert!(out.norm() < 1e-12);
    }

    #[test]
    fn squeeze_matrix_element() {
        // ⟨++| L(|−−⟩⟨−−|) |−−⟩ picks up only the same-sign dissipators
        let (kappa, eps) = (2.5, 0.3);
        let p = MasterEqParams { kappa, epsilon: eps, ..Default::default() };
        let l = build_liouvillian(&p).unwrap();
        let out = unvec(&(&l.matrix * vec_of(&basis(3, 3))));
        let got = out[(0, 3)];
        assert!((got - C64::new(kappa * eps * eps, 0.0)).norm() < 1e-14, "{got}");
        let p2 = MasterEqParams { epsilon: 2.0 * eps, ..p };
        let out2 = unvec(&(&build_liouvillian(&p2).unwrap().matrix * vec_of(&basis(3, 3))));
        assert!((out2[(0, 3)] - got * 4.0).norm() < 1e-13);
    }

    #[test]
    fn trace_preserving() {
        let p = MasterEqParams {
            kappa: 1e3,
            nbar0: 0.3,
            epsilon: 0.5,
            eta0: 2e2,
            omega: 50.0,
            kappa_nv: 10.0,
            kappa_deph: 7.0,
            frame: Frame::Lab,
        };
        let l = build_liouvillian(&p).unwrap();
        assert!(l.trace_defect() < 1e-9 * l.norm());
        assert!(l.max_real_eigenvalue().unwrap() <= 1e-9 * l.norm());
    }

    #[test]
    fn validation() {
        assert!(build_liouvillian(&MasterEqParams { kappa: -1.0, ..Default::default() }).is_err());
        assert!(build_liouvillian(&MasterEqParams { epsilon: f64::NAN, ..Default::default() }).is_err());
    }
}
