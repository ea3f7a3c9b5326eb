//! Singly-excited open Tavis-Cummings toolkit.
//!
//! N identical two-level atoms share one lossy cavity mode and a single
//! excitation. The crate evaluates the closed-form atomic amplitudes, maps
//! them onto an (N+1)-qubit Q-MARINA circuit, executes that circuit on an
//! exact statevector simulator, and cross-checks everything against two
//! independent numerical oracles (a Lindblad master equation on the
//! vacuum + single-excitation subspace and a Volterra memory-kernel solver).
//!
//! Units: every rate is an angular frequency and time is its inverse.

pub mod analytic;
pub mod circuit;
mod error;
pub mod oracle;
pub mod output;
pub mod qasm;
pub mod statevec;
pub mod sweep;

pub use analytic::{
    coefficients, coupling_regime, envelope, hamming_level_diag, populations, splitting_d,
    steady_state_coefficients, CoefficientVector, CouplingRegime, PopulationVector, Regime,
    SplittingConstant, TcParams,
};
pub use circuit::{angles_from_coefficients, build_circuit, AngleVector, CircuitIr, Gate};
pub use error::{Error, Result};
pub use qasm::export_qasm;
pub use statevec::{run_circuit, ShotHistogram, StateVector};
pub use sweep::{run_sweep, Backend, SweepReport, SweepSpec};
