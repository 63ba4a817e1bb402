//! Magnon dispersion, density of states and thermal occupation.
//!
//! Two models live here. The infinite nearest-neighbour chain gives the
//! textbook cosine band used for bandwidth and mode-spacing estimates. The
//! finite-thickness strip adds the magnetostatic form factor and the linear
//! electric-field term `-v_E k`, and is what the bath correlation function
//! and the band-edge DOS are computed from.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::{E_CHARGE, HBAR, K_B, MU_0, TWO_PI};
use crate::error::{Error, Result};

/// YIG crystal parameters in the effective simple-cubic spin description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Nearest-neighbour exchange frequency `J` (rad/s).
    pub exchange: f64,
    /// Effective spin per cubic block.
    pub spin: f64,
    /// Lattice constant `a` (m).
    pub lattice_constant: f64,
    /// Magnetization frequency `γ0 μ0 M_s` (rad/s).
    pub omega_m: f64,
    /// Exchange stiffness `A` (J/m).
    pub stiffness: f64,
    /// Spin-orbit energy scale (J).
    pub spin_orbit_energy: f64,
    /// Electron gyromagnetic ratio (rad/(s·T)).
    pub gamma0: f64,
    pub g_factor: f64,
    /// Saturation magnetization (A/m).
    pub saturation_magnetization: f64,
}

impl MaterialParams {
    /// Bulk YIG values used throughout the reference calculations.
    ///
    /// `J/2π = 33.42 GHz` is the quoted exchange frequency; it is not
    /// recomputed from the stiffness. `M_s = 140 kA/m` is the block
    /// magnetization `gμ_B s / a³` rounded as quoted, and `ω_M` uses
    /// `μ0 M_s = 175 mT`.
    pub fn yig() -> Self {
        let gamma0 = TWO_PI * 28.02e9;
        MaterialParams {
            exchange: TWO_PI * 33.42e9,
            spin: 14.2,
            lattice_constant: 12.376e-10,
            omega_m: gamma0 * 0.175,
            stiffness: 3.7e-12,
            spin_orbit_energy: 19.0 * E_CHARGE,
            gamma0,
            g_factor: 2.0,
            saturation_magnetization: 140e3,
        }
    }

    /// Builds the exchange frequency from the stiffness through
    /// `J = A a / (ħ s²)`, and `ω_M` from `μ0 M_s`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_stiffness(
        stiffness: f64,
        spin: f64,
        lattice_constant: f64,
        saturation_magnetization: f64,
        spin_orbit_energy: f64,
        gamma0: f64,
        g_factor: f64,
    ) -> Result<Self> {
        let m = MaterialParams {
            exchange: stiffness * lattice_constant / (HBAR * spin * spin),
            spin,
            lattice_constant,
            omega_m: gamma0 * MU_0 * saturation_magnetization,
            stiffness,
            spin_orbit_energy,
            gamma0,
            g_factor,
            saturation_magnetization,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("exchange", self.exchange),
            ("spin", self.spin),
            ("lattice_constant", self.lattice_constant),
            ("omega_m", self.omega_m),
            ("spin_orbit_energy", self.spin_orbit_energy),
            ("gamma0", self.gamma0),
            ("saturation_magnetization", self.saturation_magnetization),
        ];
        for (field, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(field, format!("must be positive, got {v}")));
            }
        }
        if !(self.stiffness.is_finite() && self.stiffness >= 0.0) {
            return Err(Error::invalid("stiffness", "must be non-negative"));
        }
        Ok(())
    }

    /// Full magnon bandwidth `8 J s` of the chain.
    pub fn bandwidth(&self) -> f64 {
        8.0 * self.exchange * self.spin
    }
}

/// Strip dimensions. The long axis is `x`, the thickness is along `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripGeometry {
    /// Number of chain sites (even).
    pub sites: usize,
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
    /// Transverse standing-wave index `n_y`.
    pub transverse_mode: u32,
}

impl StripGeometry {
    /// Strip whose length is `(N-1) a`.
    pub fn for_chain(sites: usize, lattice_constant: f64, width: f64, thickness: f64) -> Self {
        StripGeometry {
            sites,
            length: (sites.saturating_sub(1)) as f64 * lattice_constant,
            width,
            thickness,
            transverse_mode: 0,
        }
    }

    /// 1000-site strip, 120 nm wide and 20 nm thick.
    pub fn reference(mat: &MaterialParams) -> Self {
        Self::for_chain(1000, mat.lattice_constant, 120e-9, 20e-9)
    }

    pub fn validate(&self, mat: &MaterialParams) -> Result<()> {
        if self.sites < 2 || self.sites % 2 != 0 {
            return Err(Error::invalid(
                "sites",
                format!("must be an even integer >= 2, got {}", self.sites),
            ));
        }
        let expected = (self.sites - 1) as f64 * mat.lattice_constant;
        if !((self.length - expected).abs() <= 0.01 * expected) {
            return Err(Error::invalid(
                "length",
                format!("{:e} m differs from (N-1)a = {:e} m by more than 1%", self.length, expected),
            ));
        }
        if !(self.thickness > 0.0 && self.thickness < self.width && self.width < self.length) {
            return Err(Error::invalid(
                "thickness",
                "require 0 < thickness < width < length",
            ));
        }
        Ok(())
    }
}

/// Applied static fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    /// Bias field along `z` (T).
    pub bias: f64,
    /// Coherence-injection field along `-y` (T).
    pub coherence: f64,
    /// Transverse electric field (V/m).
    pub electric: f64,
}

/// Largest `B1` before the strip saturates along `y`.
pub const SATURATION_FIELD: f64 = 0.5;

impl FieldConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.bias.is_finite() && self.bias > 0.0) {
            return Err(Error::invalid("bias", "must be positive"));
        }
        if !(self.coherence >= 0.0 && self.coherence <= SATURATION_FIELD) {
            return Err(Error::invalid(
                "coherence_field",
                format!("must lie in [0, {SATURATION_FIELD}] T, got {}", self.coherence),
            ));
        }
        if !(self.electric.is_finite() && self.electric >= 0.0) {
            return Err(Error::invalid("electric", "must be non-negative"));
        }
        Ok(())
    }
}

fn check_zone(k: f64, a: f64) -> Result<()> {
    if !k.is_finite() || k.abs() * a > PI * (1.0 + 1e-12) {
        return Err(Error::Domain {
            what: "k",
            value: k,
            reason: "|k| a must not exceed pi",
        });
    }
    Ok(())
}

/// Chain dispersion `ω0 + 4Js(1 - cos ka)` with `ω0 = γ0 B0`.
pub fn chain_dispersion(k: f64, mat: &MaterialParams, bias: f64) -> Result<f64> {
    check_zone(k, mat.lattice_constant)?;
    let omega0 = mat.gamma0 * bias;
    Ok(omega0 + 4.0 * mat.exchange * mat.spin * (1.0 - (k * mat.lattice_constant).cos()))
}

/// Electrical length `L_E = 4 γ0 A |e| E / (ω_M M_s E_SO)`.
pub fn electrical_length(electric: f64, mat: &MaterialParams) -> Result<f64> {
    if !(electric.is_finite() && electric >= 0.0) {
        return Err(Error::Domain {
            what: "E",
            value: electric,
            reason: "electric field must be non-negative",
        });
    }
    Ok(4.0 * mat.gamma0 * mat.stiffness * E_CHARGE * electric
        / (mat.omega_m * mat.saturation_magnetization * mat.spin_orbit_energy))
}

/// Below this `k L_z` the form factor switches to its Taylor series.
const FORM_FACTOR_SERIES: f64 = 1e-4;

/// Thin-film form factor `1 - (1 - e^{-x}) / x` for `x >= 0`.
pub fn form_factor(x: f64) -> f64 {
    if x.abs() < FORM_FACTOR_SERIES {
        x / 2.0 - x * x / 6.0 + x.powi(3) / 24.0 - x.powi(4) / 120.0
    } else {
        1.0 + (-x).exp_m1() / x
    }
}

/// Strip dispersion `sqrt(ω_a ω_b) - v_E k` for transverse mode `n_y`.
pub fn strip_dispersion(
    k: f64,
    transverse_mode: u32,
    mat: &MaterialParams,
    geo: &StripGeometry,
    fields: &FieldConfig,
) -> Result<f64> {
    check_zone(k, mat.lattice_constant)?;
    let omega0 = mat.gamma0 * fields.bias;
    let ky = transverse_mode as f64 * PI / geo.width;
    let kn2 = k * k + ky * ky;
    let kn = kn2.sqrt();
    let exch = 2.0 * mat.exchange * mat.spin * mat.lattice_constant.powi(2) * kn2;
    let omega_a = omega0 + exch;
    let omega_b = omega_a + mat.omega_m * form_factor(kn * geo.thickness);
    let v_e = mat.omega_m * electrical_length(fields.electric, mat)?;
    Ok((omega_a * omega_b).sqrt() - v_e * k)
}

/// Which closed form to use for the DOS at the `k = 0` band edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandEdgeDos {
    /// `2 L_x / v_g(0+)` with the one-sided group velocity of
    /// [`strip_dispersion`], `v_g(0+) = ω_M (L_z/4 - L_E)`.
    #[default]
    Dispersion,
    /// `8 L_x / (ω_M (L_z - L_E))`, the closed form with the electrical
    /// length subtracted from the full thickness.
    Nominal,
}

/// `8 L_x / (ω_M (L_z - L_E))`.
pub fn strip_dos_band_edge(
    mat: &MaterialParams,
    geo: &StripGeometry,
    fields: &FieldConfig,
) -> Result<f64> {
    let le = electrical_length(fields.electric, mat)?;
    let effective = geo.thickness - le;
    if effective <= 0.0 {
        return Err(Error::PastBandEdge {
            thickness: geo.thickness,
            effective,
        });
    }
    Ok(8.0 * geo.length / (mat.omega_m * effective))
}

/// One-sided group velocity `dω/dk` at `k → 0+` of the `n_y = 0` strip
/// branch: `ω_M L_z / 4 - v_E`.
pub fn band_edge_group_velocity(
    mat: &MaterialParams,
    geo: &StripGeometry,
    fields: &FieldConfig,
) -> Result<f64> {
    let le = electrical_length(fields.electric, mat)?;
    Ok(mat.omega_m * (geo.thickness / 4.0 - le))
}

/// `2 L_x / v_g(0+) = 8 L_x / (ω_M (L_z - 4 L_E))`.
pub fn strip_dos_from_dispersion(
    mat: &MaterialParams,
    geo: &StripGeometry,
    fields: &FieldConfig,
) -> Result<f64> {
    let le = electrical_length(fields.electric, mat)?;
    let effective = geo.thickness - 4.0 * le;
    if effective <= 0.0 {
        return Err(Error::PastBandEdge {
            thickness: geo.thickness,
            effective,
        });
    }
    Ok(8.0 * geo.length / (mat.omega_m * effective))
}

pub fn band_edge_dos(
    model: BandEdgeDos,
    mat: &MaterialParams,
    geo: &StripGeometry,
    fields: &FieldConfig,
) -> Result<f64> {
    match model {
        BandEdgeDos::Dispersion => strip_dos_from_dispersion(mat, geo, fields),
        BandEdgeDos::Nominal => strip_dos_band_edge(mat, geo, fields),
    }
}

/// Chain DOS in seconds, `(4/a) L / (sqrt(ω-ω0) sqrt(8Js-ω+ω0))` with
/// `L = (N-1) a`, or its long-wavelength form `2N / sqrt(2Js) / sqrt(ω-ω0)`
/// when `long_wavelength` is set.
pub fn chain_dos(
    omega: f64,
    mat: &MaterialParams,
    bias: f64,
    sites: usize,
    long_wavelength: bool,
) -> Result<f64> {
    let omega0 = mat.gamma0 * bias;
    let js = mat.exchange * mat.spin;
    let detuning = omega - omega0;
    if !(detuning > 0.0 && detuning < 8.0 * js) {
        return Err(Error::Domain {
            what: "omega",
            value: omega,
            reason: "outside the open magnon band (omega0, omega0 + 8Js)",
        });
    }
    if long_wavelength {
        Ok(2.0 * sites as f64 / (2.0 * js).sqrt() / detuning.sqrt())
    } else {
        let length_in_cells = sites.saturating_sub(1) as f64;
        Ok(4.0 * length_in_cells / (detuning.sqrt() * (8.0 * js - detuning).sqrt()))
    }
}

/// Bose-Einstein occupation; exactly zero at `T = 0`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega / (K_B * temperature);
    1.0 / x.exp_m1()
}

/// Temperature at which a mode of frequency `omega` reaches occupation
/// `nbar`.
pub fn temperature_for_occupation(omega: f64, nbar: f64) -> f64 {
    HBAR * omega / (K_B * (1.0 + 1.0 / nbar).ln())
}

/// Occupation at which the `|+1⟩` NV level counts as frozen out.
pub const FROZEN_OCCUPATION: f64 = 0.1;

/// Highest temperature keeping the `|0⟩ → |+1⟩` transition at
/// `ω = D + γ_NV B0` below [`FROZEN_OCCUPATION`].
pub fn two_level_temperature_bound(zero_field_splitting: f64, gamma_nv: f64, bias: f64) -> f64 {
    temperature_for_occupation(zero_field_splitting + gamma_nv * bias, FROZEN_OCCUPATION)
}

/// DOS from a one-sided finite difference of [`strip_dispersion`] on the
/// `k > 0` branch, `2 L_x |dk/dω|`, evaluated at wavenumber `k`.
pub fn strip_dos_numerical(
    k: f64,
    mat: &MaterialParams,
    geo: &StripGeometry,
    fields: &FieldConfig,
) -> Result<f64> {
    let h = 1e-3 * k;
    let slope = (strip_dispersion(k + h, 0, mat, geo, fields)?
        - strip_dispersion(k - h, 0, mat, geo, fields)?)
        / (2.0 * h);
    Ok(2.0 * geo.length / slope.abs())
}

/// Discrete wavenumbers `2π m / (N a)` for `m = -N/2 .. N/2-1`.
pub fn k_grid(sites: usize, lattice_constant: f64) -> Vec<f64> {
    let n = sites as i64;
    (-n / 2..n / 2)
        .map(|m| TWO_PI * m as f64 / (sites as f64 * lattice_constant))
        .collect()
}

/// Mode spacing relative to the chain bandwidth, `sin(ka) π / (2N)`.
pub fn mode_spacing_ratio(ka: f64, sites: usize) -> f64 {
    ka.sin() * PI / (2.0 * sites as f64)
}
