//! Lindblad master equation on the vacuum + single-excitation subspace.
//!
//! Basis: index 0 is `|vac⟩` (atoms ground, cavity empty), indices `1..=N`
//! are `|e_n, 0⟩` and index `N+1` is `|g, 1⟩`. In the frame rotating at the
//! common resonance frequency,
//!
//! ```text
//! H = g Σ_n (|e_n⟩⟨ph| + |ph⟩⟨e_n|),     C = √κ |vac⟩⟨ph|
//! dρ/dt = −i[H, ρ] + CρC† − ½{C†C, ρ}
//! ```
//!
//! The cavity mode is the pseudo-mode whose Lorentzian linewidth `κ`
//! reproduces the spectral density `J(δ)`.

use ndarray::Array2;
use num_complex::Complex64;

use crate::analytic::{PopulationVector, TcParams};
use crate::error::{Error, Result};

const TRACE_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_grid: Vec<f64>,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_grid: Vec<f64>) -> Result<Self> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "dt must be positive, got {dt}"
            )));
        }
        validate_grid(&t_grid)?;
        Ok(Self { dt, t_grid })
    }

    /// `dt = 1e-3 / max(1, g√N, κ)`.
    pub fn with_default_step(params: &TcParams, t_grid: Vec<f64>) -> Result<Self> {
        Self::new(1e-3 / params.rate_scale(), t_grid)
    }
}

pub(crate) fn validate_grid(t_grid: &[f64]) -> Result<()> {
    match t_grid.first() {
        None => return Err(Error::InvalidParams("empty time grid".into())),
        Some(&t0) if t0 != 0.0 => {
            return Err(Error::InvalidParams(format!(
                "time grid must start at 0, got {t0}"
            )))
        }
        _ => {}
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::NaNInput);
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParams(
            "time grid must be nondecreasing".into(),
        ));
    }
    Ok(())
}

/// Density matrix on the (N+2)-dimensional subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceState {
    n_atoms: usize,
    pub rho: Array2<Complex64>,
}

impl SubspaceState {
    /// Pure state `Σ_n c_n(0) |e_n, 0⟩`.
    pub fn initial(params: &TcParams) -> Self {
        let n = params.n_atoms();
        let mut psi = vec![0.0; n + 2];
        psi[1..=n].copy_from_slice(params.initial_coeffs());
        let rho = Array2::from_shape_fn((n + 2, n + 2), |(i, j)| {
            Complex64::new(psi[i] * psi[j], 0.0)
        });
        Self { n_atoms: n, rho }
    }

    pub fn dim(&self) -> usize {
        self.n_atoms + 2
    }

    pub fn photon_index(&self) -> usize {
        self.n_atoms + 1
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.diag().sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.rho[[i, j]] - self.rho[[j, i]].conj()).norm());
            }
        }
        worst
    }

    pub fn min_diagonal(&self) -> f64 {
        self.rho
            .diag()
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min)
    }

    /// Atom diagonals; the ground population lumps vacuum and photon.
    pub fn populations(&self, t: f64) -> PopulationVector {
        let atom_populations = (1..=self.n_atoms).map(|i| self.rho[[i, i]].re).collect();
        let ph = self.photon_index();
        PopulationVector {
            t,
            atom_populations,
            ground_population: self.rho[[0, 0]].re + self.rho[[ph, ph]].re,
        }
    }
}

pub fn subspace_hamiltonian(params: &TcParams) -> Array2<Complex64> {
    let n = params.n_atoms();
    let ph = n + 1;
    let mut h = Array2::zeros((n + 2, n + 2));
    for atom in 1..=n {
        h[[atom, ph]] = Complex64::new(params.g(), 0.0);
        h[[ph, atom]] = Complex64::new(params.g(), 0.0);
    }
    h
}

pub fn collapse_operator(params: &TcParams) -> Array2<Complex64> {
    let n = params.n_atoms();
    let mut c = Array2::zeros((n + 2, n + 2));
    c[[0, n + 1]] = Complex64::new(params.kappa().sqrt(), 0.0);
    c
}

/// Lindblad right-hand side with one collapse operator.
pub struct Generator {
    h: Array2<Complex64>,
    c: Array2<Complex64>,
    c_dag: Array2<Complex64>,
    c_dag_c: Array2<Complex64>,
}

impl Generator {
    pub fn new(params: &TcParams) -> Self {
        let h = subspace_hamiltonian(params);
        let c = collapse_operator(params);
        let c_dag = c.t().mapv(|z| z.conj());
        let c_dag_c = c_dag.dot(&c);
        Self {
            h,
            c,
            c_dag,
            c_dag_c,
        }
    }

    pub fn apply(&self, rho: &Array2<Complex64>) -> Array2<Complex64> {
        let minus_i = Complex64::new(0.0, -1.0);
        let commutator = self.h.dot(rho) - rho.dot(&self.h);
        let jump = self.c.dot(rho).dot(&self.c_dag);
        let anti = self.c_dag_c.dot(rho) + rho.dot(&self.c_dag_c);
        commutator * minus_i + jump - anti * 0.5
    }

    fn rk4_step(&self, rho: &mut Array2<Complex64>, dt: f64) {
        let k1 = self.apply(rho);
        let k2 = self.apply(&(&*rho + &(&k1 * (dt / 2.0))));
        let k3 = self.apply(&(&*rho + &(&k2 * (dt / 2.0))));
        let k4 = self.apply(&(&*rho + &(&k3 * dt)));
        *rho += &((k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0));
    }
}

/// Integrate from the pure initial state and report populations on the grid.
///
/// Each grid interval is split into the fewest equal steps no longer than
/// `dt`, so output times are hit exactly.
pub fn qme_evolve(params: &TcParams, config: &IntegratorConfig) -> Result<Vec<PopulationVector>> {
    validate_grid(&config.t_grid)?;
    let generator = Generator::new(params);
    let mut state = SubspaceState::initial(params);
    let mut out = Vec::with_capacity(config.t_grid.len());
    let mut now = 0.0;
    for &t in &config.t_grid {
        let span = t - now;
        if span > 0.0 {
            let steps = (span / config.dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                generator.rk4_step(&mut state.rho, h);
            }
        }
        now = t;
        check_state(&state, t)?;
        out.push(state.populations(t));
    }
    Ok(out)
}

fn check_state(state: &SubspaceState, t: f64) -> Result<()> {
    let drift = (state.trace() - 1.0).norm();
    if drift.is_nan() || drift > TRACE_DRIFT_LIMIT {
        return Err(Error::StepTooLarge(format!(
            "trace drift {drift:e} at t = {t}"
        )));
    }
    let bad =
        state.rho.diag().iter().any(|z| {
            !z.re.is_finite() || z.re < -TRACE_DRIFT_LIMIT || z.re > 1.0 + TRACE_DRIFT_LIMIT
        });
    if bad {
        return Err(Error::StepTooLarge(format!(
            "populations left [0, 1] at t = {t}"
        )));
    }
    Ok(())
}

/// Run at the default step and at half of it; fail if they differ by more
/// than `tolerance` anywhere on the grid.
pub fn qme_evolve_converged(
    params: &TcParams,
    t_grid: Vec<f64>,
    tolerance: f64,
) -> Result<Vec<PopulationVector>> {
    let coarse_cfg = IntegratorConfig::with_default_step(params, t_grid)?;
    let fine_cfg = IntegratorConfig {
        dt: coarse_cfg.dt / 2.0,
        t_grid: coarse_cfg.t_grid.clone(),
    };
    let coarse = qme_evolve(params, &coarse_cfg)?;
    let fine = qme_evolve(params, &fine_cfg)?;
    let diff = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| a.max_abs_diff(b))
        .fold(0.0, f64::max);
    if diff > tolerance {
        return Err(Error::StepTooLarge(format!(
            "step halving changed populations by {diff:e} (tolerance {tolerance:e})"
        )));
    }
    Ok(fine)
}
