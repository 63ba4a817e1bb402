//! JSON run configuration. Every block is optional and defaults to the YIG
//! reference device.

use std::fmt;
use std::str::FromStr;

use nvmag_core::bath::CorrelationWindow;
use nvmag_core::dynamics::NamedState;
use nvmag_core::linalg::Op4;
use nvmag_core::system::Coherence;
use nvmag_core::{BandEdgeDos, DeviceConfig, Frame, MaterialParams, NVParams, StripGeometry, TwoQubitState, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::units::{si_opt, Dimension as D, Quantity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Couplings,
    Dispersion,
    Resonance,
    Evolve,
    Steady,
    Sweep,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Couplings,
        Scenario::Dispersion,
        Scenario::Resonance,
        Scenario::Evolve,
        Scenario::Steady,
        Scenario::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Couplings => "couplings",
            Scenario::Dispersion => "dispersion",
            Scenario::Resonance => "resonance",
            Scenario::Evolve => "evolve",
            Scenario::Steady => "steady",
            Scenario::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown scenario '{s}'"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialBlock {
    pub exchange: Option<Quantity>,
    pub spin: Option<Quantity>,
    pub lattice_constant: Option<Quantity>,
    pub omega_m: Option<Quantity>,
    pub stiffness: Option<Quantity>,
    pub spin_orbit_energy: Option<Quantity>,
    pub gamma0: Option<Quantity>,
    pub g_factor: Option<Quantity>,
    pub saturation_magnetization: Option<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    pub sites: Option<usize>,
    /// Defaults to `(N-1) a`.
    pub length: Option<Quantity>,
    pub width: Option<Quantity>,
    pub thickness: Option<Quantity>,
    pub transverse_mode: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NvBlock {
    pub zero_field_splitting: Option<Quantity>,
    pub gamma_nv: Option<Quantity>,
    pub height: Option<Quantity>,
    /// Defaults to `±L/4`.
    pub positions: Option<[Quantity; 2]>,
    pub t1: Option<Quantity>,
    pub t2: Option<Quantity>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldsBlock {
    /// Solved from the resonance condition when absent.
    pub bias: Option<Quantity>,
    pub electric: Option<Quantity>,
    pub epsilon: Option<Quantity>,
    /// Alternative to `epsilon`.
    pub b1: Option<Quantity>,
    pub effective_spin: Option<Quantity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Named(NamedState),
    /// Rows of `[re, im]` pairs.
    Matrix { matrix: Vec<Vec<[f64; 2]>> },
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Named(NamedState::PlusMinus)
    }
}

impl InitialState {
    pub fn state(&self) -> CliResult<TwoQubitState> {
        match self {
            InitialState::Named(n) => Ok(TwoQubitState::named(*n)),
            InitialState::Matrix { matrix } => {
                if matrix.len() != 4 || matrix.iter().any(|r| r.len() != 4) {
                    return Err(CliError::config("initial_state.matrix", "must be 4x4"));
                }
                let m = Op4::from_fn(|i, j| C64::new(matrix[i][j][0], matrix[i][j][1]));
                TwoQubitState::new(m).map_err(|e| CliError::config("initial_state.matrix", e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_max: Quantity,
    /// First sample; 0 for linear grids when absent, required for log grids.
    pub t_min: Option<Quantity>,
    pub samples: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl TimeGrid {
    pub fn times(&self) -> CliResult<Vec<f64>> {
        let t_max = self.t_max.si(D::Time, "time_grid.t_max")?;
        let t_min = si_opt(&self.t_min, D::Time, "time_grid.t_min")?;
        if self.samples < 2 {
            return Err(CliError::config("time_grid.samples", "need at least 2 samples"));
        }
        let n = self.samples;
        let frac = |i: usize| i as f64 / (n - 1) as f64;
        match self.spacing {
            Spacing::Linear => {
                let t0 = t_min.unwrap_or(0.0);
                if !(t0 >= 0.0 && t_max > t0) {
                    return Err(CliError::config("time_grid", "require 0 <= t_min < t_max"));
                }
                Ok((0..n).map(|i| t0 + (t_max - t0) * frac(i)).collect())
            }
            Spacing::Log => {
                let t0 = t_min.ok_or_else(|| CliError::config("time_grid.t_min", "required for log spacing"))?;
                if !(t0 > 0.0 && t_max > t0) {
                    return Err(CliError::config("time_grid", "require 0 < t_min < t_max"));
                }
                let (a, b) = (t0.ln(), t_max.ln());
                Ok((0..n).map(|i| (a + (b - a) * frac(i)).exp()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Dotted path to a scalar leaf, e.g. `fields.epsilon` or `nv.t1`.
    pub parameter: String,
    /// Plain numbers replace the leaf's `value` and keep its unit; full
    /// `{value, unit}` objects replace the leaf.
    pub values: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkovBlock {
    pub t_max: Quantity,
    pub samples: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub description: Option<String>,
    pub scenario: Option<Scenario>,
    #[serde(default)]
    pub material: MaterialBlock,
    #[serde(default)]
    pub geometry: GeometryBlock,
    #[serde(default)]
    pub nv: NvBlock,
    #[serde(default)]
    pub fields: FieldsBlock,
    /// Defaults to 1 mK.
    pub temperature: Option<Quantity>,
    #[serde(default)]
    pub band_edge: BandEdgeDos,
    #[serde(default)]
    pub frame: Frame,
    #[serde(default)]
    pub initial_state: InitialState,
    pub time_grid: Option<TimeGrid>,
    pub sweep: Option<SweepSpec>,
    pub markov: Option<MarkovBlock>,
    pub esd_floor: Option<f64>,
}

pub const DEFAULT_TEMPERATURE: f64 = 1e-3;

impl RunConfig {
    pub fn from_value(v: &Value) -> CliResult<Self> {
        Ok(RunConfig::deserialize(v)?)
    }

    pub fn material(&self) -> CliResult<MaterialParams> {
        let b = &self.material;
        let mut m = MaterialParams::yig();
        let set = |slot: &mut f64, q: &Option<Quantity>, dim, name| -> CliResult<()> {
            if let Some(v) = si_opt(q, dim, name)? {
                *slot = v;
            }
            Ok(())
        };
        set(&mut m.exchange, &b.exchange, D::Frequency, "material.exchange")?;
        set(&mut m.spin, &b.spin, D::Dimensionless, "material.spin")?;
        set(&mut m.lattice_constant, &b.lattice_constant, D::Length, "material.lattice_constant")?;
        set(&mut m.omega_m, &b.omega_m, D::Frequency, "material.omega_m")?;
        set(&mut m.stiffness, &b.stiffness, D::Stiffness, "material.stiffness")?;
        set(&mut m.spin_orbit_energy, &b.spin_orbit_energy, D::Energy, "material.spin_orbit_energy")?;
        set(&mut m.gamma0, &b.gamma0, D::Gyromagnetic, "material.gamma0")?;
        set(&mut m.g_factor, &b.g_factor, D::Dimensionless, "material.g_factor")?;
        set(
            &mut m.saturation_magnetization,
            &b.saturation_magnetization,
            D::Magnetization,
            "material.saturation_magnetization",
        )?;
        Ok(m)
    }

    pub fn device(&self) -> CliResult<DeviceConfig> {
        let material = self.material()?;
        let g = &self.geometry;
        let reference = StripGeometry::reference(&material);
        let sites = g.sites.unwrap_or(reference.sites);
        let mut geometry = StripGeometry::for_chain(
            sites,
            material.lattice_constant,
            si_opt(&g.width, D::Length, "geometry.width")?.unwrap_or(reference.width),
            si_opt(&g.thickness, D::Length, "geometry.thickness")?.unwrap_or(reference.thickness),
        );
        if let Some(l) = si_opt(&g.length, D::Length, "geometry.length")? {
            geometry.length = l;
        }
        geometry.transverse_mode = g.transverse_mode.unwrap_or(0);

        let n = &self.nv;
        let mut nv = NVParams::reference(&geometry);
        if let Some(v) = si_opt(&n.zero_field_splitting, D::Frequency, "nv.zero_field_splitting")? {
            nv.zero_field_splitting = v;
        }
        if let Some(v) = si_opt(&n.gamma_nv, D::Gyromagnetic, "nv.gamma_nv")? {
            nv.gamma_nv = v;
        }
        if let Some(v) = si_opt(&n.height, D::Length, "nv.height")? {
            nv.height = v;
        }
        if let Some([a, b]) = &n.positions {
            nv.positions = [a.si(D::Length, "nv.positions")?, b.si(D::Length, "nv.positions")?];
        }
        nv.t1 = si_opt(&n.t1, D::Time, "nv.t1")?;
        nv.t2 = si_opt(&n.t2, D::Time, "nv.t2")?;

        let f = &self.fields;
        let coherence = match (&f.epsilon, &f.b1) {
            (Some(_), Some(_)) => return Err(CliError::config("fields", "give either epsilon or b1, not both")),
            (Some(e), None) => Coherence::Epsilon(e.si(D::Dimensionless, "fields.epsilon")?),
            (None, Some(b1)) => Coherence::Field {
                b1: b1.si(D::Field, "fields.b1")?,
                spin: si_opt(&f.effective_spin, D::Dimensionless, "fields.effective_spin")?,
            },
            (None, None) => Coherence::Epsilon(0.0),
        };
        if f.effective_spin.is_some() && f.b1.is_none() {
            return Err(CliError::config("fields.effective_spin", "only meaningful together with b1"));
        }

        let device = DeviceConfig {
            material,
            geometry,
            nv,
            bias: si_opt(&f.bias, D::Field, "fields.bias")?,
            electric: si_opt(&f.electric, D::ElectricField, "fields.electric")?.unwrap_or(0.0),
            coherence,
            temperature: si_opt(&self.temperature, D::Temperature, "temperature")?.unwrap_or(DEFAULT_TEMPERATURE),
            band_edge: self.band_edge,
            frame: self.frame,
        };
        device.validate()?;
        Ok(device)
    }

    pub fn correlation_window(&self) -> CliResult<CorrelationWindow> {
        match &self.markov {
            None => Ok(CorrelationWindow::default()),
            Some(m) => {
                let t_max = m.t_max.si(D::Time, "markov.t_max")?;
                if !(t_max > 0.0) || m.samples < 2 {
                    return Err(CliError::config("markov", "need t_max > 0 and at least 2 samples"));
                }
                Ok(CorrelationWindow {
                    t_max,
                    samples: m.samples,
                })
            }
        }
    }

    pub fn esd_floor(&self) -> CliResult<f64> {
        match self.esd_floor {
            None => Ok(nvmag_core::measures::ESD_FLOOR),
            Some(f) if f > 0.0 && f < 0.5 => Ok(f),
            Some(_) => Err(CliError::config("esd_floor", "must lie in (0, 0.5)")),
        }
    }

    /// Checks everything that can be checked without running the physics.
    pub fn validate(&self) -> CliResult<()> {
        self.device()?;
        self.initial_state.state()?;
        if let Some(g) = &self.time_grid {
            g.times()?;
        }
        self.correlation_window()?;
        self.esd_floor()?;
        Ok(())
    }
}

/// Replaces the leaf at a dotted `path` in `root`. A bare number keeps the
/// unit of an existing `{value, unit}` leaf.
pub fn set_path(root: &mut Value, path: &str, value: &Value) -> CliResult<()> {
    let field = format!("sweep.parameter ({path})");
    let mut cur = root;
    let parts: Vec<&str> = path.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::config(&field, "empty path segment"));
    }
    for p in &parts[..parts.len() - 1] {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| CliError::config(&field, format!("'{p}' is not inside an object")))?;
        cur = obj.entry(p.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    let leaf = parts[parts.len() - 1];
    let obj = cur
        .as_object_mut()
        .ok_or_else(|| CliError::config(&field, "parent is not an object"))?;
    match (obj.get_mut(leaf), value) {
        (Some(Value::Object(q)), Value::Number(_)) if q.contains_key("unit") => {
            q.insert("value".into(), value.clone());
        }
        (Some(Value::Object(_)), Value::Number(_)) => {
            return Err(CliError::config(&field, "leaf is not a scalar"));
        }
        (Some(Value::Array(_)), _) => return Err(CliError::config(&field, "leaf is not a scalar")),
        _ => {
            obj.insert(leaf.to_string(), value.clone());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn empty_config_is_reference_device() {
        let c = RunConfig::from_value(&json!({})).unwrap();
        assert_eq!(c.device().unwrap(), DeviceConfig::reference());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_value(&json!({"nv": {"hieght": {"value": 5, "unit": "nm"}}})).is_err());
    }

    #[test]
    fn odd_sites_names_the_field() {
        let c = RunConfig::from_value(&json!({"geometry": {"sites": 999}})).unwrap();
        let err = c.device().unwrap_err();
        assert_eq!(err.record().field.as_deref(), Some("sites"));
    }

    #[test]
    fn epsilon_and_b1_are_exclusive() {
        let c = RunConfig::from_value(&json!({"fields": {
            "epsilon": {"value": 0.2, "unit": "dimensionless"},
            "b1": {"value": 1, "unit": "mT"}
        }}))
        .unwrap();
        assert!(c.device().is_err());
    }

    #[test]
    fn initial_state_forms() {
        let c = RunConfig::from_value(&json!({"initial_state": "dfs1"})).unwrap();
        assert_eq!(c.initial_state, InitialState::Named(NamedState::Dfs1));
        let mut rows = vec![vec![[0.0, 0.0]; 4]; 4];
        rows[3][3] = [1.0, 0.0];
        let c = RunConfig::from_value(&json!({"initial_state": {"matrix": rows}})).unwrap();
        assert_eq!(c.initial_state.state().unwrap(), TwoQubitState::named(NamedState::Ground));
    }

    #[test]
    fn log_grid() {
        let g = TimeGrid {
            t_max: Quantity::new(1.0, "s"),
            t_min: Some(Quantity::new(1.0, "ms")),
            samples: 4,
            spacing: Spacing::Log,
        };
        let t = g.times().unwrap();
        assert!((t[1] - 1e-2).abs() < 1e-15 && (t[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn set_path_keeps_units() {
        let mut v = json!({"nv": {"t1": {"value": 1, "unit": "ms"}}});
        set_path(&mut v, "nv.t1", &json!(2.0)).unwrap();
        assert_eq!(v["nv"]["t1"], json!({"value": 2.0, "unit": "ms"}));
        set_path(&mut v, "fields.epsilon", &json!({"value": 0.3, "unit": "dimensionless"})).unwrap();
        assert_eq!(v["fields"]["epsilon"]["value"], json!(0.3));
        assert!(set_path(&mut v, "nv", &json!(1.0)).is_err());
    }
}
