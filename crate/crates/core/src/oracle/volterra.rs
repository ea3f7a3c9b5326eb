//! Time-domain solution of the memory-kernel equation
//!
//! ```text
//! ċ_n(t) = −∫₀ᵗ f(t − t′) Σ_m c_m(t′) dt′,     f(τ) = g² e^{−κτ/2}
//! ```
//!
//! Every atom sees the same right-hand side, so `c_n(t) = c_n(0) − Q(t)`
//! with `Q(t) = ∫₀ᵗ I(s) ds` and `I(s) = ∫₀ˢ f(s − t′) B(t′) dt′`, where
//! `B = Σ_m c_m = B(0) − N Q`. Both integrals use the trapezoidal rule on
//! a uniform grid; the only implicit term, `f(0) B(t_{k+1})`, is linear and
//! solved in closed form. Cost is O(M²) in the number of steps.

use crate::analytic::{CoefficientVector, TcParams};
use crate::error::{Error, Result};
use crate::oracle::qme::validate_grid;
use crate::oracle::spectral::{memory_kernel, KernelConfig};

pub fn volterra_evolve(
    params: &TcParams,
    config: &KernelConfig,
    t_grid: &[f64],
) -> Result<Vec<CoefficientVector>> {
    if params.kappa() == 0.0 {
        return Err(Error::ZeroLinewidth);
    }
    validate_grid(t_grid)?;
    let h = config.time_step;
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "time step must be positive, got {h}"
        )));
    }
    let t_max = *t_grid.last().unwrap();
    let steps = ((t_max / h) * (1.0 - 1e-12)).ceil().max(1.0) as usize;

    let q = solve_bright_integral(params, t_max, steps)?;
    let out = sample(params, &q, t_max, t_grid);

    if let Some(tol) = config.check_tolerance {
        let fine = solve_bright_integral(params, t_max, 2 * steps)?;
        let check = sample(params, &fine, t_max, t_grid);
        let diff = out
            .iter()
            .zip(&check)
            .flat_map(|(a, b)| a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        if diff > 10.0 * tol {
            return Err(Error::StepTooLarge(format!(
                "Volterra step halving changed amplitudes by {diff:e} (limit {:e})",
                10.0 * tol
            )));
        }
    }
    Ok(out)
}

/// `Q(t_k)` on the uniform grid `t_k = k·t_max/steps`, `k = 0..=steps`.
fn solve_bright_integral(params: &TcParams, t_max: f64, steps: usize) -> Result<Vec<f64>> {
    let h = t_max / steps as f64;
    let n = params.n_atoms() as f64;
    let b0 = params.bright_amplitude();
    let kernel: Vec<f64> = (0..=steps)
        .map(|k| memory_kernel(params, k as f64 * h))
        .collect::<Result<_>>()?;
    let f0 = kernel[0];

    let mut q = vec![0.0; steps + 1];
    let mut bright = vec![0.0; steps + 1];
    bright[0] = b0;
    let mut inner_prev = 0.0; // I(t_0) = 0
    let implicit = 1.0 + n * h * h * f0 / 4.0;

    for k in 0..steps {
        let next = k + 1;
        // explicit part of I(t_{k+1}): half weight on t_0, full weights inside
        let mut partial = 0.5 * kernel[next] * bright[0];
        for j in 1..next {
            partial += kernel[next - j] * bright[j];
        }
        partial *= h;

        let b_next = (b0 - n * (q[k] + 0.5 * h * (inner_prev + partial))) / implicit;
        let inner_next = partial + 0.5 * h * f0 * b_next;
        q[next] = q[k] + 0.5 * h * (inner_prev + inner_next);
        bright[next] = b_next;
        inner_prev = inner_next;
    }
    Ok(q)
}

fn sample(params: &TcParams, q: &[f64], t_max: f64, t_grid: &[f64]) -> Vec<CoefficientVector> {
    let steps = q.len() - 1;
    t_grid
        .iter()
        .map(|&t| {
            let shift = if t_max == 0.0 {
                0.0
            } else {
                let x = (t / t_max * steps as f64).clamp(0.0, steps as f64);
                let lo = (x.floor() as usize).min(steps);
                let hi = (lo + 1).min(steps);
                let w = x - lo as f64;
                q[lo] * (1.0 - w) + q[hi] * w
            };
            CoefficientVector {
                t,
                values: params.initial_coeffs().iter().map(|c| c - shift).collect(),
            }
        })
        .collect()
}
