//! Open-system simulator for two NV-center qubits coupled through the magnon
//! bath of a thin YIG strip.
//!
//! The pipeline runs bottom-up:
//!
//! * [`magnonics`]: chain and strip dispersion, band-edge density of states,
//!   Bose occupation.
//! * [`coupling`]: dipolar site coefficients, qubit dressing, reciprocal-space
//!   coefficients and the magnon-qubit resonance.
//! * [`bath`]: displaced thermal bath statistics and Markov diagnostics.
//! * [`dynamics`]: the secular two-qubit master equation, propagation and
//!   steady states.
//! * [`measures`]: concurrence, l1 coherence, dark-state fidelities and
//!   sudden-death detection.
//! * [`system`]: glue that resolves a physical device description into
//!   master-equation parameters.
//!
//! All quantities are SI with angular frequencies in rad/s.

pub mod bath;
pub mod constants;
pub mod coupling;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod magnonics;
pub mod measures;
pub mod roots;
pub mod system;

pub use error::{Error, Result};
pub use linalg::C64;

pub use bath::{BathParams, CorrelationTime, MarkovReport};
pub use coupling::{DipolarCouplings, KSpaceCouplings, NVParams, QubitDressing, SiteCouplings};
pub use dynamics::{
    Frame, Liouvillian, MasterEqParams, SteadyState, Trajectory, TwoQubitState,
};
pub use magnonics::{BandEdgeDos, FieldConfig, MaterialParams, StripGeometry};
pub use measures::EsdReport;
pub use system::{DeviceConfig, ResolvedSystem};
