//! The displaced thermal magnon bath: coherence profile, correlation
//! function, correlation time and Markov diagnostics.

use std::f64::consts::{E, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::KSpaceCouplings;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::magnonics::mode_spacing_ratio;

/// Resolved bath statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    pub temperature: f64,
    pub nbar0: f64,
    pub epsilon: f64,
    #[serde(skip)]
    pub epsilon_k: Vec<C64>,
    /// Band-edge density of states (s).
    pub d0: f64,
    /// Collective rate `D0 η0²` (1/s).
    pub kappa: f64,
}

/// `ε_k = -i ε η_k / η0`.
pub fn coherence_profile(epsilon: f64, ks: &KSpaceCouplings) -> Result<Vec<C64>> {
    if ks.eta0 == 0.0 {
        return Err(Error::ZeroEta0);
    }
    let scale = C64::new(0.0, -epsilon / ks.eta0);
    Ok(ks.eta.iter().map(|e| scale * e).collect())
}

/// `(B1 / B0) sqrt(s / 2N)`.
pub fn epsilon_from_fields(b1: f64, b0: f64, spin: f64, sites: usize) -> Result<f64> {
    if !(b0 > 0.0) {
        return Err(Error::Domain {
            what: "B0",
            value: b0,
            reason: "bias field must be positive",
        });
    }
    Ok(b1 / b0 * (spin / (2.0 * sites as f64)).sqrt())
}

/// `G(t) = Σ_k w_k e^{i ω_k t}` with weights `w_k = |η_k|²`.
pub fn bath_correlation(t: f64, weights: &[f64], omegas: &[f64]) -> C64 {
    weights
        .iter()
        .zip(omegas)
        .map(|(&w, &om)| w * C64::from_polar(1.0, om * t))
        .sum()
}

pub fn correlation_series(times: &[f64], weights: &[f64], omegas: &[f64]) -> Vec<C64> {
    // the carrier at the lowest frequency does not change |G|; removing it keeps phases small
    let shift = omegas.iter().cloned().fold(f64::INFINITY, f64::min);
    let shifted: Vec<f64> = omegas.iter().map(|w| w - shift).collect();
    times
        .par_iter()
        .map(|&t| bath_correlation(t, weights, &shifted) * C64::from_polar(1.0, shift * t))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTime {
    pub tau: f64,
    /// Upper end of the window `[τ, 10τ]` over which `|G| < |G(0)|/e` held.
    pub window: f64,
}

pub const WINDOW_FACTOR: f64 = 10.0;

/// First sample time `τ > 0` after which `|G|/|G(0)|` stays below `1/e`
/// over `[τ, 10τ]`. `times[0]` must be 0.
pub fn correlation_time(times: &[f64], g: &[C64]) -> Result<CorrelationTime> {
    let n = times.len().min(g.len());
    let t_max = times.get(n.wrapping_sub(1)).copied().unwrap_or(0.0);
    if n < 2 || times[0] != 0.0 || g[0].norm() == 0.0 {
        return Err(Error::NoDecay { window: t_max });
    }
    let g0 = g[0].norm();
    let threshold = 1.0 / E;
    // next_above[i]: first index >= i with |G| at or above threshold
    let mut next_above = vec![usize::MAX; n + 1];
    for i in (0..n).rev() {
        next_above[i] = if g[i].norm() / g0 >= threshold { i } else { next_above[i + 1] };
    }
    for i in 1..n {
        let tau = times[i];
        let window = WINDOW_FACTOR * tau;
        if window > t_max {
            break;
        }
        let na = next_above[i];
        if na == usize::MAX || times[na] > window {
            return Ok(CorrelationTime { tau, window });
        }
    }
    Err(Error::NoDecay { window: t_max })
}

/// First sample time at which `|G|/|G(0)|` drops below `level`.
pub fn first_crossing(times: &[f64], g: &[C64], level: f64) -> Option<f64> {
    let g0 = g.first()?.norm();
    if g0 == 0.0 {
        return None;
    }
    times.iter().zip(g).skip(1).find(|(_, z)| z.norm() / g0 < level).map(|(t, _)| *t)
}

/// Markov-validity diagnostics. Never fails; problems show up as flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovReport {
    /// `δω/Δω` at `ka = π/2`.
    pub mode_spacing_ratio: f64,
    pub tau_b: Option<f64>,
    pub tau_b_window: Option<f64>,
    /// First drop of `|G|/|G(0)|` below `1/e`, ignoring later revivals.
    pub first_crossing: Option<f64>,
    /// Largest `|G|/|G(0)|` over the second half of the window.
    pub revival_level: f64,
    /// `1/κ`, infinite when `κ = 0`.
    pub tau_s: f64,
    /// `τ_B < 0.01 τ_s` and `τ_B < 0.01 min(T1, T2)`.
    pub separated_time_scales: bool,
    /// `δω/Δω < 0.01`.
    pub dense_spectrum: bool,
    pub markov: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationWindow {
    pub t_max: f64,
    pub samples: usize,
}

impl Default for CorrelationWindow {
    fn default() -> Self {
        CorrelationWindow {
            t_max: 100e-9,
            samples: 20_001,
        }
    }
}

impl CorrelationWindow {
    pub fn times(&self) -> Vec<f64> {
        let n = self.samples.max(2);
        (0..n).map(|i| self.t_max * i as f64 / (n - 1) as f64).collect()
    }
}

pub fn markov_report(
    weights: &[f64],
    omegas: &[f64],
    sites: usize,
    kappa: f64,
    t1: Option<f64>,
    t2: Option<f64>,
    window: CorrelationWindow,
) -> MarkovReport {
    let times = window.times();
    let g = correlation_series(&times, weights, omegas);
    markov_report_from_series(&times, &g, sites, kappa, t1, t2)
}

/// [`markov_report`] on an already sampled `G(t)`.
pub fn markov_report_from_series(
    times: &[f64],
    g: &[C64],
    sites: usize,
    kappa: f64,
    t1: Option<f64>,
    t2: Option<f64>,
) -> MarkovReport {
    let mut warnings = Vec::new();
    let (tau_b, tau_b_window) = match correlation_time(times, g) {
        Ok(ct) => (Some(ct.tau), Some(ct.window)),
        Err(e) => {
            warnings.push(e.to_string());
            (None, None)
        }
    };
    let first = first_crossing(times, g, 1.0 / E);
    let g0 = g[0].norm();
    let revival_level = if g0 > 0.0 {
        g[g.len() / 2..].iter().map(|z| z.norm() / g0).fold(0.0, f64::max)
    } else {
        0.0
    };
    if tau_b.is_none() && revival_level >= 1.0 / E {
        warnings.push(format!(
            "correlation revives to {revival_level:.2} of its initial value; the discrete spectrum is resolved within the window"
        ));
    }
    let tau_s = if kappa > 0.0 { 1.0 / kappa } else { f64::INFINITY };
    let ratio = mode_spacing_ratio(PI / 2.0, sites);
    let private = [t1, t2].into_iter().flatten().fold(f64::INFINITY, f64::min);
    let separated = tau_b.is_some_and(|tb| tb < 0.01 * tau_s && tb < 0.01 * private);
    let dense = ratio < 0.01;
    if tau_b.is_some() && !separated {
        warnings.push("bath correlation time is not well below the system time scales".into());
    }
    MarkovReport {
        mode_spacing_ratio: ratio,
        tau_b,
        tau_b_window,
        first_crossing: first,
        revival_level,
        tau_s,
        separated_time_scales: separated,
        dense_spectrum: dense,
        markov: separated && dense,
        warnings,
    }
}

/// First and second moments of a displaced thermal state with occupation
/// `nbar` and displacements `ε_k`.
#[derive(Debug, Clone)]
pub struct DisplacedMoments<'a> {
    pub nbar: f64,
    pub eps: &'a [C64],
}

impl DisplacedMoments<'_> {
    /// `⟨m_k⟩`.
    pub fn mean(&self, k: usize) -> C64 {
        self.eps[k]
    }

    /// `⟨m_k m_q⟩`.
    pub fn mm(&self, k: usize, q: usize) -> C64 {
        self.eps[k] * self.eps[q]
    }

    /// `⟨m_k† m_q⟩`.
    pub fn mdag_m(&self, k: usize, q: usize) -> C64 {
        let th = if k == q { self.nbar } else { 0.0 };
        self.eps[k].conj() * self.eps[q] + th
    }

    /// `⟨m_k m_q†⟩`.
    pub fn m_mdag(&self, k: usize, q: usize) -> C64 {
        let th = if k == q { self.nbar + 1.0 } else { 0.0 };
        self.eps[k] * self.eps[q].conj() + th
    }
}

/// Prefactors of the collective dissipators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DissipatorRates {
    /// `κ ε² / 2`, weight of the same-sign (squeezing-like) terms.
    pub squeeze: f64,
    /// `κ (n̄ + 1 + ε²) / 2`.
    pub emission: f64,
    /// `κ (n̄ + ε²) / 2`.
    pub absorption: f64,
}

pub fn dissipator_rates(kappa: f64, nbar: f64, epsilon: f64) -> DissipatorRates {
    let e2 = epsilon * epsilon;
    DissipatorRates {
        squeeze: 0.5 * kappa * e2,
        emission: 0.5 * kappa * (nbar + 1.0 + e2),
        absorption: 0.5 * kappa * (nbar + e2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ks() -> KSpaceCouplings {
        let k = vec![-2.0, -1.0, 0.0, 1.0];
        let eta = vec![C64::new(0.5, 0.1), C64::new(1.5, -0.2), C64::new(3.0, 0.0), C64::new(1.5, 0.2)];
        KSpaceCouplings {
            xi: vec![C64::new(0.0, 0.0); 4],
            zeta: eta.iter().map(|z| -z).collect(),
            eta,
            k,
            xi0: 0.0,
            zeta0: -3.0,
            eta0: 3.0,
        }
    }

    #[test]
    fn profile() {
        let p = coherence_profile(0.3, &ks()).unwrap();
        assert_eq!(p[2], C64::new(0.0, -0.3));
        assert!(coherence_profile(0.0, &ks()).unwrap().iter().all(|z| z.norm() == 0.0));
        let mut z = ks();
        z.eta0 = 0.0;
        assert_eq!(coherence_profile(0.1, &z), Err(Error::ZeroEta0));
    }

    #[test]
    fn epsilon_fields() {
        assert_eq!(epsilon_from_fields(0.0, 0.05, 10.0, 1000).unwrap(), 0.0);
        let e = epsilon_from_fields(0.1, 0.05, 10.0, 1000).unwrap();
        assert_relative_eq!(epsilon_from_fields(0.2, 0.05, 10.0, 1000).unwrap(), 2.0 * e);
        let max = epsilon_from_fields(0.5, 51.16e-3, 10.21, 1000).unwrap();
        assert!((max - 0.698).abs() < 1e-3, "{max}");
        assert!(epsilon_from_fields(0.1, 0.0, 10.0, 10).is_err());
    }

    #[test]
    fn correlation_basics() {
        let w = [1.0, 2.0, 0.5];
        let om = [1.0, 3.0, -2.0];
        assert_eq!(bath_correlation(0.0, &w, &om), C64::new(3.5, 0.0));
        let t = 0.37;
        assert!((bath_correlation(-t, &w, &om) - bath_correlation(t, &w, &om).conj()).norm() < 1e-14);
    }

    #[test]
    fn single_mode_never_decays() {
        let times: Vec<f64> = (0..1000).map(|i| i as f64 * 1e-10).collect();
        let g = correlation_series(&times, &[1.0], &[1e10]);
        assert!(matches!(correlation_time(&times, &g), Err(Error::NoDecay { .. })));
        let r = markov_report(&[1.0], &[1e10], 1000, 30.0, None, None, CorrelationWindow::default());
        assert!(!r.markov);
        assert!(r.tau_b.is_none());
    }

    fn gaussian_tau(sigma: f64, v: f64) -> f64 {
        let n = 4001;
        let kmax = 8.0 * sigma;
        let ks: Vec<f64> = (0..n).map(|i| -kmax + 2.0 * kmax * i as f64 / (n - 1) as f64).collect();
        let w: Vec<f64> = ks.iter().map(|k| (-k * k / (2.0 * sigma * sigma)).exp()).collect();
        let om: Vec<f64> = ks.iter().map(|k| 1e9 + v * k).collect();
        let t_est = 2f64.sqrt() / (sigma * v);
        let times: Vec<f64> = (0..3001).map(|i| 20.0 * t_est * i as f64 / 3000.0).collect();
        let g = correlation_series(&times, &w, &om);
        correlation_time(&times, &g).unwrap().tau
    }

    #[test]
    fn gaussian_scaling() {
        let v = 1e3;
        for sigma in [1e6, 3e6, 1e7] {
            let tau = gaussian_tau(sigma, v);
            let expected = 2f64.sqrt() / (sigma * v);
            assert!((tau / expected - 1.0).abs() < 0.02, "{sigma} {tau} {expected}");
        }
        let ratio = gaussian_tau(1e6, v) / gaussian_tau(1e7, v);
        assert!((ratio - 10.0).abs() < 0.2);
    }

    #[test]
    fn mode_spacing() {
        let r = markov_report(&[1.0], &[1.0], 1000, 0.0, None, None, CorrelationWindow { t_max: 1.0, samples: 10 });
        assert_eq!(r.mode_spacing_ratio, PI / 2000.0);
        assert!(r.tau_s.is_infinite());
    }

    #[test]
    fn moments_commutator_and_thermal_limit() {
        let eps = [C64::new(0.1, -0.3), C64::new(0.0, 0.7), C64::new(-0.2, 0.05)];
        for nbar in [0.0, 0.1, 2.5, 1e-30] {
            let m = DisplacedMoments { nbar, eps: &eps };
            for k in 0..3 {
                for q in 0..3 {
                    let comm = m.m_mdag(k, q) - m.mdag_m(q, k);
                    let delta = if k == q { 1.0 } else { 0.0 };
                    assert!((comm - delta).norm() <= 4.0 * f64::EPSILON * (1.0 + nbar));
                }
            }
        }
        let zero = [C64::new(0.0, 0.0); 3];
        let m = DisplacedMoments { nbar: 0.4, eps: &zero };
        assert_eq!(m.mean(1), C64::new(0.0, 0.0));
        assert_eq!(m.mm(0, 2), C64::new(0.0, 0.0));
        assert_eq!(m.mdag_m(0, 2), C64::new(0.0, 0.0));
        assert_eq!(m.mdag_m(1, 1), C64::new(0.4, 0.0));
    }

    #[test]
    fn epsilon_squared_scaling() {
        let (k, n, e) = (1e7, 0.02, 0.3);
        let base = dissipator_rates(k, n, 0.0);
        let one = dissipator_rates(k, n, e);
        let two = dissipator_rates(k, n, 2.0 * e);
        assert_eq!(base.squeeze, 0.0);
        assert_relative_eq!(two.squeeze, 4.0 * one.squeeze, max_relative = 1e-14);
        assert_relative_eq!(two.emission - base.emission, 4.0 * (one.emission - base.emission), max_relative = 1e-12);
        assert_relative_eq!(two.absorption - base.absorption, 4.0 * (one.absorption - base.absorption), max_relative = 1e-12);
    }
}
