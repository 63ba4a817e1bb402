//! Secular two-qubit master equation in the column-stacked Liouville space.

mod liouvillian;
mod propagate;
mod state;
mod steady;

pub use liouvillian::{
    build_liouvillian, dissipator, qubit_ops, Frame, Liouvillian, MasterEqParams, QubitOps,
};
pub use propagate::{evolve, Propagator, Trajectory, MAX_CONDITION};
pub use state::{NamedState, TwoQubitState};
pub use steady::{steady_state, SteadyMethod, SteadyState, KERNEL_TOLERANCE};

/// `κ = D0 η0²`.
pub fn collective_rate(d0: f64, eta0: f64) -> f64 {
    d0 * eta0 * eta0
}
