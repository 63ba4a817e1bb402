//! Dipolar coupling between the NV qubits and the spin chain.
//!
//! Per-site coefficients `A, B, C` follow from the dipole geometry of a
//! qubit at height `z_NV` above site `j`. Summing them dresses the qubit
//! (frequency shift plus a basis rotation by `φ`), after which the rotated
//! coefficients `ξ, ζ, η` are transformed to the magnon `k` basis.

use std::f64::consts::{FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, MU_0, TWO_PI};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::magnonics::{k_grid, MaterialParams, StripGeometry};
use crate::roots::{find_root, RootOptions};

/// NV-center parameters shared by both qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NVParams {
    /// Zero-field splitting `D` (rad/s).
    pub zero_field_splitting: f64,
    /// NV gyromagnetic ratio (rad/(s·T)).
    pub gamma_nv: f64,
    /// Height above the chain (m).
    pub height: f64,
    pub positions: [f64; 2],
    /// Longitudinal relaxation time (s); `None` means no private decay.
    pub t1: Option<f64>,
    /// Dephasing time (s); `None` means no private dephasing.
    pub t2: Option<f64>,
}

impl NVParams {
    /// Qubits at `±L/4`, 20 nm above the strip, no private channels.
    pub fn reference(geo: &StripGeometry) -> Self {
        NVParams {
            zero_field_splitting: TWO_PI * 2.87e9,
            gamma_nv: TWO_PI * 28.02e9,
            height: 20e-9,
            positions: [-geo.length / 4.0, geo.length / 4.0],
            t1: None,
            t2: None,
        }
    }

    pub fn validate(&self, geo: &StripGeometry) -> Result<()> {
        if !(self.height.is_finite() && self.height > 0.0) {
            return Err(Error::invalid("height", "must be positive"));
        }
        if !(self.zero_field_splitting > 0.0 && self.gamma_nv > 0.0) {
            return Err(Error::invalid("zero_field_splitting", "D and gamma_NV must be positive"));
        }
        let half = geo.length / 2.0;
        for x in self.positions {
            if !(x.is_finite() && x.abs() <= half) {
                return Err(Error::invalid(
                    "positions",
                    format!("{x:e} m lies outside [-L/2, L/2]"),
                ));
            }
        }
        for (field, t) in [("t1", self.t1), ("t2", self.t2)] {
            if let Some(t) = t {
                if !(t > 0.0) {
                    return Err(Error::invalid(field, format!("must be positive, got {t}")));
                }
            }
        }
        Ok(())
    }

    pub fn kappa_nv(&self) -> f64 {
        self.t1.map_or(0.0, |t| 1.0 / t)
    }

    pub fn kappa_dephasing(&self) -> f64 {
        self.t2.map_or(0.0, |t| 1.0 / t)
    }
}

/// Chain site coordinates `(j - sign(j)/2) a` for `j = -N/2..=N/2`,
/// `j ≠ 0`, in increasing order.
pub fn site_positions(sites: usize, lattice_constant: f64) -> Result<Vec<f64>> {
    if sites < 2 || sites % 2 != 0 {
        return Err(Error::invalid(
            "sites",
            format!("must be an even integer >= 2, got {sites}"),
        ));
    }
    let half = (sites / 2) as i64;
    Ok((-half..=half)
        .filter(|&j| j != 0)
        .map(|j| (j as f64 - 0.5 * j.signum() as f64) * lattice_constant)
        .collect())
}

/// Dipolar frequency `ħ μ0 γ_NV γ0 / (8π z³)`.
pub fn dipolar_frequency(nv: &NVParams, mat: &MaterialParams) -> f64 {
    HBAR * MU_0 * nv.gamma_nv * mat.gamma0 / (8.0 * PI * nv.height.powi(3))
}

/// Unrotated per-site coefficients of one qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DipolarCouplings {
    pub qubit_x: f64,
    pub d: f64,
    pub positions: Vec<f64>,
    pub theta: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

pub fn dipolar_site_coefficients(
    qubit_x: f64,
    nv: &NVParams,
    mat: &MaterialParams,
    geo: &StripGeometry,
) -> Result<DipolarCouplings> {
    if !(nv.height > 0.0) {
        return Err(Error::invalid("height", "must be positive"));
    }
    let positions = site_positions(geo.sites, mat.lattice_constant)?;
    let d = dipolar_frequency(nv, mat);
    let root = (2.0 * mat.spin).sqrt();
    let n = positions.len();
    let (mut theta, mut a, mut b, mut c) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for &xj in &positions {
        // z > 0 keeps atan2 inside (0, π)
        let th = nv.height.atan2(qubit_x - xj);
        let (s, co) = th.sin_cos();
        let s3 = s * s * s;
        theta.push(th);
        a.push(-d * (3.0 * root / 4.0) * s3 * (2.0 * th).sin());
        b.push(-d * (root / 2.0) * s3 * (3.0 * co * co - 2.0));
        c.push(-d * (3.0 * root / 2.0) * s3 * co * co);
    }
    Ok(DipolarCouplings {
        qubit_x,
        d,
        positions,
        theta,
        a,
        b,
        c,
    })
}

/// Static dressing of one qubit by the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitDressing {
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
    /// Shifted frequency `ω_NV - sqrt(2s) β`.
    pub omega: f64,
    /// Dressed frequency `sqrt(ω² + 8 s α²)`.
    pub big_omega: f64,
}

/// Sums of the site coefficients, `(α, β) = (Σ A, Σ 2B)`.
pub fn coefficient_sums(dip: &DipolarCouplings) -> (f64, f64) {
    (dip.a.iter().sum(), 2.0 * dip.b.iter().sum::<f64>())
}

/// Dresses a qubit at bias `b0`. The rotation angle solves
/// `tan 2φ = 2 sqrt(2s) α / (sqrt(2s) β - ω_NV)` with `2φ` taken in
/// `(-π/2, π/2]`.
pub fn dress_qubit(dip: &DipolarCouplings, nv: &NVParams, spin: f64, b0: f64) -> QubitDressing {
    let (alpha, beta) = coefficient_sums(dip);
    dress_from_sums(alpha, beta, nv, spin, b0)
}

fn dress_from_sums(alpha: f64, beta: f64, nv: &NVParams, spin: f64, b0: f64) -> QubitDressing {
    let root = (2.0 * spin).sqrt();
    let omega_nv = nv.zero_field_splitting - nv.gamma_nv * b0;
    let num = 2.0 * root * alpha;
    let den = root * beta - omega_nv;
    let phi = if num == 0.0 {
        0.0
    } else if den == 0.0 {
        FRAC_PI_4
    } else {
        0.5 * (num / den).atan()
    };
    let omega = omega_nv - root * beta;
    QubitDressing {
        alpha,
        beta,
        phi,
        omega,
        big_omega: (omega * omega + 8.0 * spin * alpha * alpha).sqrt(),
    }
}

/// Rotated per-site coefficients of one qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteCouplings {
    pub qubit_x: f64,
    pub positions: Vec<f64>,
    pub xi: Vec<f64>,
    pub zeta: Vec<f64>,
    pub eta: Vec<f64>,
}

pub fn rotated_site_coefficients(dip: &DipolarCouplings, dressing: &QubitDressing) -> SiteCouplings {
    let (s2, c2) = (2.0 * dressing.phi).sin_cos();
    let n = dip.a.len();
    let (mut xi, mut zeta, mut eta) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for j in 0..n {
        let (a, b, c) = (dip.a[j], dip.b[j], dip.c[j]);
        let even = 0.5 * (b + c) * c2 - a * s2;
        xi.push(a * c2 + 0.5 * (b + c) * s2);
        zeta.push(even + 0.5 * (b - c));
        eta.push(even - 0.5 * (b - c));
    }
    SiteCouplings {
        qubit_x: dip.qubit_x,
        positions: dip.positions.clone(),
        xi,
        zeta,
        eta,
    }
}

/// Rotated coefficients of one qubit on the discrete `k` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSpaceCouplings {
    pub k: Vec<f64>,
    pub xi: Vec<C64>,
    pub zeta: Vec<C64>,
    pub eta: Vec<C64>,
    pub xi0: f64,
    pub zeta0: f64,
    pub eta0: f64,
}

impl KSpaceCouplings {
    pub fn zero_index(&self) -> usize {
        self.k.len() / 2
    }

    /// Copy with every coefficient multiplied by `e^{i k x0}`, i.e. the site
    /// phases measured from `x0` instead of the chain center.
    pub fn phase_referenced(&self, x0: f64) -> Self {
        let shift = |v: &Vec<C64>| -> Vec<C64> {
            v.iter()
                .zip(&self.k)
                .map(|(f, &k)| f * C64::from_polar(1.0, k * x0))
                .collect()
        };
        KSpaceCouplings {
            k: self.k.clone(),
            xi: shift(&self.xi),
            zeta: shift(&self.zeta),
            eta: shift(&self.eta),
            ..*self
        }
    }

    pub fn eta_weights(&self) -> Vec<f64> {
        self.eta.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Unitary transform `f_k = N^{-1/2} Σ_j f_j e^{-i k x_j}`.
pub fn transform(values: &[f64], positions: &[f64], k: &[f64]) -> Vec<C64> {
    let norm = 1.0 / (positions.len() as f64).sqrt();
    k.par_iter()
        .map(|&kk| {
            let mut acc = C64::new(0.0, 0.0);
            for (&f, &x) in values.iter().zip(positions) {
                acc += f * C64::from_polar(1.0, -kk * x);
            }
            acc * norm
        })
        .collect()
}

pub fn to_k_space(site: &SiteCouplings, k: &[f64]) -> KSpaceCouplings {
    let norm = 1.0 / (site.positions.len() as f64).sqrt();
    let at_zero = |v: &[f64]| v.iter().sum::<f64>() * norm;
    KSpaceCouplings {
        k: k.to_vec(),
        xi: transform(&site.xi, &site.positions, k),
        zeta: transform(&site.zeta, &site.positions, k),
        eta: transform(&site.eta, &site.positions, k),
        xi0: at_zero(&site.xi),
        zeta0: at_zero(&site.zeta),
        eta0: at_zero(&site.eta),
    }
}

/// Lower and upper bias bracket of the resonance search (T).
pub const RESONANCE_BRACKET: (f64, f64) = (1e-3, 0.2);
/// Largest accepted `|γ0 B0 - Ω|` at the returned bias (rad/s).
pub const RESONANCE_TOLERANCE: f64 = TWO_PI * 1e3;

/// Bias at which the `k = 0` magnon frequency `γ0 B0` equals the dressed
/// qubit frequency of a qubit at `qubit_x`.
pub fn solve_resonance(
    nv: &NVParams,
    mat: &MaterialParams,
    geo: &StripGeometry,
    qubit_x: f64,
) -> Result<f64> {
    solve_resonance_in(nv, mat, geo, qubit_x, RESONANCE_BRACKET, None)
}

pub fn solve_resonance_in(
    nv: &NVParams,
    mat: &MaterialParams,
    geo: &StripGeometry,
    qubit_x: f64,
    bracket: (f64, f64),
    seed: Option<f64>,
) -> Result<f64> {
    let dip = dipolar_site_coefficients(qubit_x, nv, mat, geo)?;
    let (alpha, beta) = coefficient_sums(&dip);
    let g = |b0: f64| Ok(mat.gamma0 * b0 - dress_from_sums(alpha, beta, nv, mat.spin, b0).big_omega);
    let opts = RootOptions {
        coarse_width: 1e-7,
        xtol: 1e-15,
        ftol: 0.0,
        max_iter: 300,
    };
    let b0 = find_root(g, bracket.0, bracket.1, seed, opts)?;
    let residual = g(b0)?;
    if residual.abs() >= RESONANCE_TOLERANCE {
        return Err(Error::NoConvergence { iterations: opts.max_iter });
    }
    Ok(b0)
}

/// Couplings of both qubits at a fixed bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitPair {
    pub dipolar: [DipolarCouplings; 2],
    pub dressing: [QubitDressing; 2],
    pub sites: [SiteCouplings; 2],
    pub kspace: [KSpaceCouplings; 2],
}

pub fn couple_pair(
    nv: &NVParams,
    mat: &MaterialParams,
    geo: &StripGeometry,
    b0: f64,
) -> Result<QubitPair> {
    let k = k_grid(geo.sites, mat.lattice_constant);
    let one = |x: f64| -> Result<(DipolarCouplings, QubitDressing, SiteCouplings, KSpaceCouplings)> {
        let dip = dipolar_site_coefficients(x, nv, mat, geo)?;
        let dr = dress_qubit(&dip, nv, mat.spin, b0);
        let site = rotated_site_coefficients(&dip, &dr);
        let ks = to_k_space(&site, &k);
        Ok((dip, dr, site, ks))
    };
    let (d1, r1, s1, k1) = one(nv.positions[0])?;
    let (d2, r2, s2, k2) = one(nv.positions[1])?;
    Ok(QubitPair {
        dipolar: [d1, d2],
        dressing: [r1, r2],
        sites: [s1, s2],
        kspace: [k1, k2],
    })
}
