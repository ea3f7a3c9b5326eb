//! Independent numerical oracles for the closed-form dynamics.
//!
//! - [`qme`]: Lindblad master equation on the vacuum + single-excitation
//!   subspace, integrated with fixed-step RK4.
//! - [`volterra`]: the integro-differential form of the atomic amplitudes,
//!   solved by trapezoidal quadrature of the memory integral.
//! - [`spectral`]: the Lorentzian spectral density and its memory kernel.
//! - [`collective`]: explicit Kronecker-product collective spin operators.

pub mod collective;
pub mod qme;
pub mod spectral;
pub mod volterra;

pub use collective::{collective_operators, CollectiveOperators};
pub use qme::{qme_evolve, qme_evolve_converged, IntegratorConfig, SubspaceState};
pub use spectral::{memory_kernel, memory_kernel_quadrature, spectral_density, KernelConfig};
pub use volterra::volterra_evolve;
