//! Scenario pipelines and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use nvmag_core::bath::{markov_report_from_series, CorrelationWindow};
use nvmag_core::coupling::QubitDressing;
use nvmag_core::dynamics::{evolve, steady_state, Propagator, SteadyMethod};
use nvmag_core::magnonics::chain_dispersion;
use nvmag_core::measures::{
    concurrence, concurrence_bound_violations, detect_esd, dfs_fidelities, esd_events, l1_coherence, EsdEvents,
};
use nvmag_core::{EsdReport, MarkovReport, ResolvedSystem, TwoQubitState};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{set_path, RunConfig, Scenario, SweepSpec};
use crate::error::{CliError, CliResult};
use crate::output::{self, num, opt_num, Table};

pub const TOOL: &str = "nvmag";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Sweep worker threads; all cores when absent.
    pub workers: Option<usize>,
}

/// Derived parameters, SI with angular frequencies in rad/s.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedParams {
    pub b0_t: f64,
    pub bias_from_resonance: bool,
    pub epsilon: f64,
    pub temperature_k: f64,
    pub nbar0: f64,
    pub d0_s: f64,
    pub kappa_per_s: f64,
    pub eta0_rad_per_s: f64,
    pub omega_rad_per_s: f64,
    pub dipolar_frequency_rad_per_s: f64,
    pub electrical_length_m: f64,
    pub kappa_nv_per_s: f64,
    pub kappa_dephasing_per_s: f64,
    pub two_level_bound_k: f64,
    pub dressing: [QubitDressing; 2],
}

impl ResolvedParams {
    pub fn new(r: &ResolvedSystem) -> Self {
        let p = r.master_eq_params();
        ResolvedParams {
            b0_t: r.b0,
            bias_from_resonance: r.config.bias.is_none(),
            epsilon: r.bath.epsilon,
            temperature_k: r.bath.temperature,
            nbar0: r.bath.nbar0,
            d0_s: r.bath.d0,
            kappa_per_s: r.bath.kappa,
            eta0_rad_per_s: r.eta0,
            omega_rad_per_s: r.omega,
            dipolar_frequency_rad_per_s: r.pair.dipolar[0].d,
            electrical_length_m: r.electrical_length,
            kappa_nv_per_s: p.kappa_nv,
            kappa_dephasing_per_s: p.kappa_deph,
            two_level_bound_k: r.two_level_bound,
            dressing: r.pair.dressing,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub scenario: Scenario,
    /// SHA-256 of the canonical (key-sorted, compact) config JSON.
    pub config_hash: String,
    pub config: Value,
    pub resolved: Option<ResolvedParams>,
    pub correlation_window: CorrelationWindow,
    pub markov: Option<MarkovReport>,
    pub results: Value,
    pub files: Vec<String>,
}

pub fn config_hash(raw: &Value) -> String {
    let bytes = serde_json::to_vec(raw).expect("JSON values always serialize");
    hex::encode(Sha256::digest(&bytes))
}

pub fn load_config(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Measures of a single state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StateMeasures {
    pub c: f64,
    pub c1: f64,
    pub f_dfs1: f64,
    pub f_dfs2: f64,
}

impl StateMeasures {
    pub fn new(s: &TwoQubitState) -> Self {
        let (f_dfs1, f_dfs2) = dfs_fidelities(s);
        StateMeasures {
            c: concurrence(s),
            c1: l1_coherence(s),
            f_dfs1,
            f_dfs2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SteadySummary {
    pub kernel_dimension: usize,
    pub method: SteadyMethod,
    pub slowest_rate: Option<f64>,
    #[serde(flatten)]
    pub measures: StateMeasures,
}

/// Everything a sweep row reports, also used by the `steady` scenario.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub resolved: ResolvedParams,
    pub steady: SteadySummary,
    pub state: TwoQubitState,
    pub esd: Option<EsdEvents>,
}

pub fn run_point(cfg: &RunConfig) -> CliResult<PointResult> {
    let r = cfg.device()?.resolve()?;
    let l = r.liouvillian()?;
    let rho0 = cfg.initial_state.state()?;
    let ss = steady_state(&l, Some(&rho0))?;
    let esd = match &cfg.time_grid {
        Some(g) => {
            let traj = evolve(&rho0, &l, &g.times()?)?;
            Some(esd_events(&traj.times, &traj.concurrence, cfg.esd_floor()?))
        }
        None => None,
    };
    Ok(PointResult {
        resolved: ResolvedParams::new(&r),
        steady: SteadySummary {
            kernel_dimension: ss.kernel_dimension,
            method: ss.method,
            slowest_rate: ss.slowest_rate,
            measures: StateMeasures::new(&ss.state),
        },
        state: ss.state,
        esd,
    })
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: Value,
    pub result: Result<PointResult, String>,
}

/// One independent [`run_point`] per value, returned in input order.
pub fn sweep_rows(raw: &Value, spec: &SweepSpec, workers: Option<usize>) -> CliResult<Vec<SweepRow>> {
    let mut base = raw.clone();
    if let Some(obj) = base.as_object_mut() {
        obj.remove("sweep");
        obj.remove("scenario");
    }
    let point = |v: &Value| -> SweepRow {
        let mut cfg = base.clone();
        if let Err(e) = set_path(&mut cfg, &spec.parameter, v) {
            return SweepRow {
                value: v.clone(),
                result: Err(e.to_string()),
            };
        }
        // the leaf as it ended up, so bare numbers report their unit
        let leaf = cfg.pointer(&format!("/{}", spec.parameter.replace('.', "/"))).cloned();
        let result = RunConfig::from_value(&cfg)
            .and_then(|c| run_point(&c))
            .map_err(|e| e.to_string());
        SweepRow {
            value: leaf.unwrap_or_else(|| v.clone()),
            result,
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::config("workers", e.to_string()))?;
    Ok(pool.install(|| {
        spec.values
            .par_iter()
            .map(point)
            .collect()
    }))
}

fn value_and_unit(v: &Value) -> (String, String) {
    match v {
        Value::Number(n) => (n.as_f64().map(num).unwrap_or_else(|| n.to_string()), String::new()),
        Value::Object(o) => (
            o.get("value").and_then(Value::as_f64).map(num).unwrap_or_default(),
            o.get("unit").and_then(Value::as_str).unwrap_or_default().to_string(),
        ),
        other => (other.to_string(), String::new()),
    }
}

pub fn write_sweep(dir: &Path, rows: &[SweepRow]) -> CliResult<PathBuf> {
    let mut t = Table::create(
        dir,
        "sweep.csv",
        &[
            "index",
            "value",
            "unit",
            "B0 [T]",
            "epsilon",
            "nbar0",
            "D0 [s]",
            "kappa [1/s]",
            "eta0 [rad/s]",
            "C_ss",
            "C1_ss",
            "F_dfs1",
            "F_dfs2",
            "kernel_dimension",
            "deaths",
            "revivals",
            "first_death [s]",
            "first_revival [s]",
            "transient_peak",
            "error",
        ],
    )?;
    for (i, row) in rows.iter().enumerate() {
        let (value, unit) = value_and_unit(&row.value);
        let mut fields = vec![i.to_string(), value, unit];
        match &row.result {
            Ok(p) => {
                let (r, s) = (&p.resolved, &p.steady);
                fields.extend([
                    num(r.b0_t),
                    num(r.epsilon),
                    num(r.nbar0),
                    num(r.d0_s),
                    num(r.kappa_per_s),
                    num(r.eta0_rad_per_s),
                    num(s.measures.c),
                    num(s.measures.c1),
                    num(s.measures.f_dfs1),
                    num(s.measures.f_dfs2),
                    s.kernel_dimension.to_string(),
                ]);
                match &p.esd {
                    Some(e) => fields.extend([
                        e.death_times.len().to_string(),
                        e.revival_times.len().to_string(),
                        opt_num(e.death_times.first().copied()),
                        opt_num(e.revival_times.first().copied()),
                        num(e.transient_peak),
                    ]),
                    None => fields.extend(std::iter::repeat_n(String::new(), 5)),
                }
                fields.push(String::new());
            }
            Err(e) => {
                fields.extend(std::iter::repeat_n(String::new(), 16));
                fields.push(e.clone());
            }
        }
        t.row(fields)?;
    }
    t.finish()
}

fn file_names(paths: &[PathBuf]) -> Vec<String> {
    paths
        .iter()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .collect()
}

#[derive(Debug, Serialize)]
struct EvolveResults {
    samples: usize,
    propagator: &'static str,
    final_state: StateMeasures,
    esd: Option<EsdReport>,
    esd_error: Option<String>,
    max_trace_drift: f64,
    min_eigenvalue: f64,
    /// Samples where `C > C1`; flagged for review.
    concurrence_bound_violations: usize,
}

/// Runs `scenario` (the config's own when `None`) and writes its outputs
/// plus `manifest.json` into `opts.out`.
pub fn run(raw: &Value, scenario: Option<Scenario>, opts: &RunOptions) -> CliResult<RunManifest> {
    let cfg = RunConfig::from_value(raw)?;
    let scenario = scenario
        .or(cfg.scenario)
        .ok_or_else(|| CliError::config("scenario", "not given on the command line or in the config"))?;
    if let Some(s) = cfg.scenario.filter(|s| *s != scenario) {
        warn!("config scenario '{s}' overridden by '{scenario}'");
    }
    cfg.validate()?;
    let window = cfg.correlation_window()?;
    fs::create_dir_all(&opts.out).map_err(|e| CliError::io(&opts.out, e))?;
    let dir = opts.out.as_path();
    let mut files = Vec::new();

    // the sweep base point may itself be invalid; rows report their own errors
    let base = cfg.device()?.resolve();
    let resolved = match (&base, scenario) {
        (Err(e), Scenario::Sweep) => {
            warn!("base configuration does not resolve: {e}");
            None
        }
        (Err(e), _) => return Err(e.clone().into()),
        (Ok(r), _) => Some(r),
    };
    let markov = match resolved {
        Some(r) => {
            let g = r.correlation(&window)?;
            files.push(output::write_correlation(dir, &window, &g)?);
            let times = window.times();
            let c = &r.config;
            Some(markov_report_from_series(&times, &g, c.geometry.sites, r.bath.kappa, c.nv.t1, c.nv.t2))
        }
        None => None,
    };
    if let Some(m) = &markov {
        for w in &m.warnings {
            warn!("{w}");
        }
    }

    let results = match scenario {
        Scenario::Resonance => {
            let r = resolved.expect("resolved above");
            json!({ "b0_t": r.b0, "b0_mt": r.b0 * 1e3 })
        }
        Scenario::Couplings => {
            let r = resolved.expect("resolved above");
            files.extend(output::write_couplings(dir, &r.pair)?);
            json!({
                "eta0_rad_per_s": [r.pair.kspace[0].eta0, r.pair.kspace[1].eta0],
                "zeta0_rad_per_s": [r.pair.kspace[0].zeta0, r.pair.kspace[1].zeta0],
                "xi0_rad_per_s": [r.pair.kspace[0].xi0, r.pair.kspace[1].xi0],
            })
        }
        Scenario::Dispersion => {
            let r = resolved.expect("resolved above");
            let k = &r.pair.kspace[0].k;
            let strip = r.dispersion()?;
            let chain = k
                .iter()
                .map(|&k| chain_dispersion(k, &r.config.material, r.b0))
                .collect::<nvmag_core::Result<Vec<_>>>()?;
            files.push(output::write_dispersion(dir, k, &strip, &chain)?);
            json!({ "modes": k.len() })
        }
        Scenario::Evolve => {
            let r = resolved.expect("resolved above");
            let grid = cfg
                .time_grid
                .as_ref()
                .ok_or_else(|| CliError::config("time_grid", "required for evolve"))?;
            let l = r.liouvillian()?;
            let traj = evolve(&cfg.initial_state.state()?, &l, &grid.times()?)?;
            files.push(output::write_trajectory(dir, &traj)?);
            let last = traj.last().expect("at least two samples");
            let (esd, esd_error) = match detect_esd(&traj, cfg.esd_floor()?) {
                Ok(e) => (Some(e), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let violations = concurrence_bound_violations(&traj, 1e-9).len();
            if violations > 0 {
                warn!("{violations} samples with C > C1");
            }
            serde_json::to_value(EvolveResults {
                samples: traj.len(),
                propagator: if Propagator::new(&l).is_spectral() { "spectral" } else { "pade" },
                final_state: StateMeasures::new(last),
                esd,
                esd_error,
                max_trace_drift: traj.max_trace_drift,
                min_eigenvalue: traj.min_eigenvalue,
                concurrence_bound_violations: violations,
            })?
        }
        Scenario::Steady => {
            let p = run_point(&cfg)?;
            files.push(output::write_steady(dir, &p.state, p.steady.kernel_dimension)?);
            json!({ "steady": p.steady, "esd": p.esd })
        }
        Scenario::Sweep => {
            let spec = cfg
                .sweep
                .as_ref()
                .ok_or_else(|| CliError::config("sweep", "required for the sweep scenario"))?;
            let rows = sweep_rows(raw, spec, opts.workers)?;
            files.push(write_sweep(dir, &rows)?);
            let failed = rows.iter().filter(|r| r.result.is_err()).count();
            if failed > 0 {
                warn!("{failed} of {} sweep rows failed", rows.len());
            }
            json!({ "parameter": spec.parameter, "rows": rows.len(), "failed_rows": failed })
        }
    };

    let manifest_path = dir.join("manifest.json");
    files.push(manifest_path.clone());
    let manifest = RunManifest {
        tool: TOOL,
        version: VERSION,
        scenario,
        config_hash: config_hash(raw),
        config: raw.clone(),
        resolved: resolved.map(ResolvedParams::new),
        correlation_window: window,
        markov,
        results,
        files: file_names(&files),
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    fs::write(&manifest_path, text + "\n").map_err(|e| CliError::io(&manifest_path, e))?;
    info!("wrote {} files to {}", manifest.files.len(), dir.display());
    Ok(manifest)
}
