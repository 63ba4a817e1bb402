//! Resolution of a physical device description into master-equation
//! parameters: resonance bias, couplings, bath statistics and rates.

use serde::{Deserialize, Serialize};

use crate::bath::{
    coherence_profile, correlation_series, epsilon_from_fields, markov_report_from_series, BathParams, CorrelationWindow,
    MarkovReport,
};
use crate::coupling::{couple_pair, solve_resonance, NVParams, QubitPair};
use crate::dynamics::{build_liouvillian, collective_rate, Frame, Liouvillian, MasterEqParams};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::magnonics::{
    band_edge_dos, electrical_length, strip_dispersion, thermal_occupation, two_level_temperature_bound,
    BandEdgeDos, FieldConfig, MaterialParams, StripGeometry,
};

/// How the coherence parameter is specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coherence {
    Epsilon(f64),
    /// Derived from `B1` with an effective spin (default: the material's).
    Field { b1: f64, spin: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceConfig {
    pub material: MaterialParams,
    pub geometry: StripGeometry,
    pub nv: NVParams,
    /// Bias field (T); solved from the resonance condition when absent.
    pub bias: Option<f64>,
    /// Transverse electric field (V/m).
    pub electric: f64,
    pub coherence: Coherence,
    pub temperature: f64,
    pub band_edge: BandEdgeDos,
    pub frame: Frame,
}

/// Largest tolerated `|Ω₁ − Ω₂| / Ω`.
pub const SYMMETRY_TOLERANCE: f64 = 1e-6;

impl DeviceConfig {
    pub fn reference() -> Self {
        let material = MaterialParams::yig();
        let geometry = StripGeometry::reference(&material);
        let nv = NVParams::reference(&geometry);
        DeviceConfig {
            material,
            geometry,
            nv,
            bias: None,
            electric: 0.0,
            coherence: Coherence::Epsilon(0.0),
            temperature: 1e-3,
            band_edge: BandEdgeDos::default(),
            frame: Frame::Rotating,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        self.geometry.validate(&self.material)?;
        self.nv.validate(&self.geometry)?;
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(Error::invalid("temperature", "must be non-negative"));
        }
        match self.coherence {
            Coherence::Epsilon(e) if !(e.is_finite() && e >= 0.0) => {
                Err(Error::invalid("epsilon", "must be non-negative"))
            }
            Coherence::Field { spin: Some(s), .. } if !(s > 0.0) => {
                Err(Error::invalid("spin", "effective spin must be positive"))
            }
            _ => Ok(()),
        }
    }

    pub fn resolve(&self) -> Result<ResolvedSystem> {
        self.validate()?;
        let (mat, geo, nv) = (&self.material, &self.geometry, &self.nv);
        let b0 = match self.bias {
            Some(b) => b,
            None => solve_resonance(nv, mat, geo, nv.positions[0])?,
        };
        let b1 = match self.coherence {
            Coherence::Field { b1, .. } => b1,
            Coherence::Epsilon(_) => 0.0,
        };
        let fields = FieldConfig {
            bias: b0,
            coherence: b1,
            electric: self.electric,
        };
        fields.validate()?;
        let epsilon = match self.coherence {
            Coherence::Epsilon(e) => e,
            Coherence::Field { b1, spin } => {
                epsilon_from_fields(b1, b0, spin.unwrap_or(mat.spin), geo.sites)?
            }
        };

        let pair = couple_pair(nv, mat, geo, b0)?;
        let (o1, o2) = (pair.dressing[0].big_omega, pair.dressing[1].big_omega);
        if (o1 - o2).abs() > SYMMETRY_TOLERANCE * o1.abs().max(o2.abs()) {
            return Err(Error::invalid(
                "positions",
                format!("dressed frequencies differ ({o1:e} vs {o2:e} rad/s); place the qubits symmetrically"),
            ));
        }
        let eta0 = pair.kspace[0].eta0;
        let omega0 = mat.gamma0 * b0;
        let nbar0 = thermal_occupation(omega0, self.temperature);
        let d0 = band_edge_dos(self.band_edge, mat, geo, &fields)?;
        let kappa = collective_rate(d0, eta0);
        let epsilon_k = coherence_profile(epsilon, &pair.kspace[0])?;
        let bath = BathParams {
            temperature: self.temperature,
            nbar0,
            epsilon,
            epsilon_k,
            d0,
            kappa,
        };
        Ok(ResolvedSystem {
            config: self.clone(),
            b0,
            fields,
            electrical_length: electrical_length(self.electric, mat)?,
            eta0,
            omega: o1,
            bath,
            two_level_bound: two_level_temperature_bound(nv.zero_field_splitting, nv.gamma_nv, b0),
            pair,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ResolvedSystem {
    pub config: DeviceConfig,
    pub b0: f64,
    pub fields: FieldConfig,
    pub electrical_length: f64,
    pub eta0: f64,
    /// Dressed qubit frequency (rad/s).
    pub omega: f64,
    pub bath: BathParams,
    /// Temperature below which the `|+1⟩` level stays frozen out (K).
    pub two_level_bound: f64,
    pub pair: QubitPair,
}

impl ResolvedSystem {
    pub fn master_eq_params(&self) -> MasterEqParams {
        MasterEqParams {
            kappa: self.bath.kappa,
            nbar0: self.bath.nbar0,
            epsilon: self.bath.epsilon,
            eta0: self.eta0,
            omega: self.omega,
            kappa_nv: self.config.nv.kappa_nv(),
            kappa_deph: self.config.nv.kappa_dephasing(),
            frame: self.config.frame,
        }
    }

    pub fn liouvillian(&self) -> Result<Liouvillian> {
        build_liouvillian(&self.master_eq_params())
    }

    /// `ω(k)` of the `n_y = 0` strip branch on the coupling grid.
    pub fn dispersion(&self) -> Result<Vec<f64>> {
        let c = &self.config;
        self.pair.kspace[0]
            .k
            .iter()
            .map(|&k| strip_dispersion(k, 0, &c.material, &c.geometry, &self.fields))
            .collect()
    }

    /// `G_ηη(t)` of the first qubit sampled on `window`.
    pub fn correlation(&self, window: &CorrelationWindow) -> Result<Vec<C64>> {
        let omegas = self.dispersion()?;
        Ok(correlation_series(&window.times(), &self.pair.kspace[0].eta_weights(), &omegas))
    }

    pub fn markov_report(&self, window: CorrelationWindow) -> Result<MarkovReport> {
        let g = self.correlation(&window)?;
        Ok(markov_report_from_series(
            &window.times(),
            &g,
            self.config.geometry.sites,
            self.bath.kappa,
            self.config.nv.t1,
            self.config.nv.t2,
        ))
    }
}
