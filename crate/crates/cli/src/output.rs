//! CSV tables with unit-annotated headers and 17 significant digits.

use std::fs::File;
use std::path::{Path, PathBuf};

use csv::{Terminator, Writer, WriterBuilder};
use nvmag_core::bath::CorrelationWindow;
use nvmag_core::coupling::QubitPair;
use nvmag_core::measures::{concurrence, dfs_fidelities, l1_coherence};
use nvmag_core::{Trajectory, TwoQubitState, C64};

use crate::error::{CliError, CliResult};

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub struct Table {
    path: PathBuf,
    writer: Writer<File>,
}

impl Table {
    pub fn create(dir: &Path, name: &str, header: &[&str]) -> CliResult<Self> {
        let path = dir.join(name);
        let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut writer = WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(file);
        writer.write_record(header)?;
        Ok(Table { path, writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        Ok(self.writer.write_record(fields)?)
    }

    pub fn finish(mut self) -> CliResult<PathBuf> {
        self.writer.flush().map_err(|e| CliError::io(&self.path, e))?;
        Ok(self.path)
    }
}

/// `rho_ij_re, rho_ij_im` labels in row-major order, 1-based.
fn rho_header() -> Vec<String> {
    let mut h = Vec::with_capacity(32);
    for i in 1..=4 {
        for j in 1..=4 {
            h.push(format!("rho{i}{j}_re"));
            h.push(format!("rho{i}{j}_im"));
        }
    }
    h
}

fn state_fields(s: &TwoQubitState) -> Vec<String> {
    let mut out = Vec::with_capacity(36);
    for i in 0..4 {
        for j in 0..4 {
            let z = s.get(i, j);
            out.push(num(z.re));
            out.push(num(z.im));
        }
    }
    let (f1, f2) = dfs_fidelities(s);
    out.extend([num(concurrence(s)), num(l1_coherence(s)), num(f1), num(f2)]);
    out
}

fn with_state_columns(first: &[&str]) -> Vec<String> {
    let mut h: Vec<String> = first.iter().map(|s| s.to_string()).collect();
    h.extend(rho_header());
    h.extend(["C", "C1", "F_dfs1", "F_dfs2"].map(String::from));
    h
}

pub fn write_trajectory(dir: &Path, traj: &Trajectory) -> CliResult<PathBuf> {
    let header = with_state_columns(&["t [s]"]);
    let refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut t = Table::create(dir, "trajectory.csv", &refs)?;
    for (time, s) in traj.times.iter().zip(&traj.states) {
        let mut row = vec![num(*time)];
        row.extend(state_fields(s));
        t.row(row)?;
    }
    t.finish()
}

pub fn write_steady(dir: &Path, s: &TwoQubitState, kernel_dimension: usize) -> CliResult<PathBuf> {
    let header = with_state_columns(&["kernel_dimension"]);
    let refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut t = Table::create(dir, "steady.csv", &refs)?;
    let mut row = vec![kernel_dimension.to_string()];
    row.extend(state_fields(s));
    t.row(row)?;
    t.finish()
}

pub fn write_couplings(dir: &Path, pair: &QubitPair) -> CliResult<Vec<PathBuf>> {
    let mut t = Table::create(
        dir,
        "couplings.csv",
        &[
            "qubit", "j", "x_j [m]", "theta [rad]", "A [rad/s]", "B [rad/s]", "C [rad/s]", "xi [rad/s]",
            "zeta [rad/s]", "eta [rad/s]",
        ],
    )?;
    for q in 0..2 {
        let (d, s) = (&pair.dipolar[q], &pair.sites[q]);
        for j in 0..d.positions.len() {
            t.row([
                (q + 1).to_string(),
                j.to_string(),
                num(d.positions[j]),
                num(d.theta[j]),
                num(d.a[j]),
                num(d.b[j]),
                num(d.c[j]),
                num(s.xi[j]),
                num(s.zeta[j]),
                num(s.eta[j]),
            ])?;
        }
    }
    let couplings = t.finish()?;

    let mut t = Table::create(
        dir,
        "kspace.csv",
        &[
            "qubit", "k [1/m]", "xi_re [rad/s]", "xi_im [rad/s]", "zeta_re [rad/s]", "zeta_im [rad/s]",
            "eta_re [rad/s]", "eta_im [rad/s]",
        ],
    )?;
    for q in 0..2 {
        let ks = &pair.kspace[q];
        for i in 0..ks.k.len() {
            let (x, z, e) = (ks.xi[i], ks.zeta[i], ks.eta[i]);
            t.row([(q + 1).to_string(), num(ks.k[i]), num(x.re), num(x.im), num(z.re), num(z.im), num(e.re), num(e.im)])?;
        }
    }
    Ok(vec![couplings, t.finish()?])
}

pub fn write_dispersion(dir: &Path, k: &[f64], strip: &[f64], chain: &[f64]) -> CliResult<PathBuf> {
    let mut t = Table::create(dir, "dispersion.csv", &["k [1/m]", "omega_strip [rad/s]", "omega_chain [rad/s]"])?;
    for i in 0..k.len() {
        t.row([num(k[i]), num(strip[i]), num(chain[i])])?;
    }
    t.finish()
}

pub fn write_correlation(dir: &Path, window: &CorrelationWindow, g: &[C64]) -> CliResult<PathBuf> {
    let mut t = Table::create(dir, "correlation.csv", &["t [s]", "G_re [rad^2/s^2]", "G_im [rad^2/s^2]"])?;
    for (time, z) in window.times().iter().zip(g) {
        t.row([num(*time), num(z.re), num(z.im)])?;
    }
    t.finish()
}
