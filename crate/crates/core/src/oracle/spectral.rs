//! Lorentzian cavity spectral density and its memory kernel.
//!
//! `J(δ) = (g²/2π) κ / (δ² + (κ/2)²)` with detuning `δ = ω_s − ω`, and
//! `f(τ) = ∫ dδ J(δ) e^{iδτ} = g² e^{−κτ/2}` for `τ ≥ 0`.

use num_complex::Complex64;

use crate::analytic::TcParams;
use crate::error::{Error, Result};

/// Discretization for the memory-kernel oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelConfig {
    /// Time step `h` of the Volterra quadrature.
    pub time_step: f64,
    /// Detuning step for spectral quadratures.
    pub detuning_step: f64,
    /// Spectral quadratures run over `[-half_range, half_range]`.
    pub detuning_half_range: f64,
    /// When set, the Volterra solve is repeated at `h/2` and must agree
    /// within ten times this tolerance.
    pub check_tolerance: Option<f64>,
}

impl KernelConfig {
    pub fn new(time_step: f64, detuning_step: f64, detuning_half_range: f64) -> Result<Self> {
        for (name, v) in [
            ("time step", time_step),
            ("detuning step", detuning_step),
            ("detuning range", detuning_half_range),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            time_step,
            detuning_step,
            detuning_half_range,
            check_tolerance: None,
        })
    }

    /// `h = 5e-3 / max(1, g√N, κ)`; detuning step `κ/100` over `±10⁴ κ`.
    pub fn for_params(params: &TcParams) -> Self {
        let kappa = if params.kappa() > 0.0 {
            params.kappa()
        } else {
            1.0
        };
        Self {
            time_step: 5e-3 / params.rate_scale(),
            detuning_step: kappa / 100.0,
            detuning_half_range: 1e4 * kappa,
            check_tolerance: Some(1e-3),
        }
    }

    pub fn with_time_step(mut self, h: f64) -> Self {
        self.time_step = h;
        self
    }

    pub fn with_check(mut self, tolerance: Option<f64>) -> Self {
        self.check_tolerance = tolerance;
        self
    }
}

fn require_linewidth(params: &TcParams) -> Result<()> {
    if params.kappa() == 0.0 {
        Err(Error::ZeroLinewidth)
    } else {
        Ok(())
    }
}

pub fn spectral_density(params: &TcParams, detuning: f64) -> Result<f64> {
    require_linewidth(params)?;
    let g = params.g();
    let k = params.kappa();
    Ok(g * g / (2.0 * std::f64::consts::PI) * k / (detuning * detuning + k * k / 4.0))
}

/// Closed form `g² e^{−κτ/2}`.
pub fn memory_kernel(params: &TcParams, tau: f64) -> Result<f64> {
    require_linewidth(params)?;
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::InvalidParams(format!(
            "kernel lag must be >= 0, got {tau}"
        )));
    }
    let g = params.g();
    Ok(g * g * (-params.kappa() * tau / 2.0).exp())
}

/// Composite Simpson over `[-half_range, half_range]`.
fn simpson<F: Fn(f64) -> Complex64>(f: F, half_range: f64, step: f64) -> Complex64 {
    let mut panels = (2.0 * half_range / step).ceil() as usize;
    if panels % 2 == 1 {
        panels += 1;
    }
    let h = 2.0 * half_range / panels as f64;
    let mut sum = f(-half_range) + f(half_range);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += f(-half_range + i as f64 * h) * w;
    }
    sum * (h / 3.0)
}

/// `∫ J(δ) dδ` over the configured detuning window.
pub fn integrated_spectral_density(params: &TcParams, config: &KernelConfig) -> Result<f64> {
    require_linewidth(params)?;
    let v = simpson(
        |d| Complex64::new(spectral_density(params, d).unwrap_or(0.0), 0.0),
        config.detuning_half_range,
        config.detuning_step,
    );
    Ok(v.re)
}

/// The defining integral `∫ dδ J(δ) e^{iδτ}` evaluated by direct quadrature.
pub fn memory_kernel_quadrature(
    params: &TcParams,
    tau: f64,
    config: &KernelConfig,
) -> Result<Complex64> {
    require_linewidth(params)?;
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::InvalidParams(format!(
            "kernel lag must be >= 0, got {tau}"
        )));
    }
    let g2 = params.g() * params.g() / (2.0 * std::f64::consts::PI);
    let k = params.kappa();
    let quarter = k * k / 4.0;
    Ok(simpson(
        |d| Complex64::from_polar(g2 * k / (d * d + quarter), d * tau),
        config.detuning_half_range,
        config.detuning_step,
    ))
}
