//! Kicked-top dynamics and KCBS contextuality.
//!
//! The crate covers the classical stroboscopic map of the kicked top, the
//! quantum Floquet evolution of spin coherent states, maximization of the
//! five-projector KCBS operator over cyclically orthogonal pentagons, and the
//! time-averaged normalized violation `K(θ, φ)` built on top of them.
//!
//! Everything here is `no_std` + `alloc`. Parallel scans, file formats and
//! the command-line front end live in the `kontext` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classical;
mod error;
pub mod kcbs;
pub mod linalg;
pub mod optimize;
pub mod rng;
pub mod scan;
pub mod spin;
pub mod vec3;

pub use classical::{
    classical_step, lyapunov_exponent, phase_portrait, trajectory, LyapunovConfig,
    LyapunovEstimate, MapVariant, PhasePoint, PortraitPoint,
};
pub use error::{Error, Result};
pub use kcbs::{
    beta_expectation, beta_max, beta_prime, s_squared_sum, zero_eigenvector, CartesianMoment,
    KcbsResult, OptimizerConfig, Pentagon, PentagonParams, BETA_CLASSICAL, BETA_QUANTUM_MAX,
};
pub use linalg::{CMatrix, HermitianEigen};
pub use scan::{
    grid_scan, k_average, kappa_sweep, special_points_report, validate_kappa, GridSpec, KTrace,
    PointFailure, ScanResult, SpecialPoint, SpecialPointsReport, SweepRow, TopScanner,
};
pub use spin::{
    angular_momentum_ops, coherent_state, evolve, floquet, husimi, FloquetSpec, Spin,
    SpinOperators, SpinState,
};
