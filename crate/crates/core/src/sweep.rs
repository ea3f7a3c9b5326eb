//! Time sweeps across backends and their pairwise comparison.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{coefficients, populations, PopulationVector, TcParams};
use crate::circuit::{angles_from_coefficients, build_circuit};
use crate::error::{Error, Result};
use crate::oracle::{qme_evolve_converged, volterra_evolve, KernelConfig};
use crate::statevec::run_circuit;

/// Step-halving tolerance for the master-equation backend.
const QME_HALVING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Analytic,
    Circuit,
    Qme,
    Volterra,
}

impl Backend {
    pub const ALL: [Backend; 4] = [
        Backend::Analytic,
        Backend::Circuit,
        Backend::Qme,
        Backend::Volterra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Analytic => "analytic",
            Backend::Circuit => "circuit",
            Backend::Qme => "qme",
            Backend::Volterra => "volterra",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == s.trim())
            .ok_or_else(|| Error::InvalidSweep(format!("unknown backend '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub params: TcParams,
    pub t_max: f64,
    pub steps: usize,
    pub backends: Vec<Backend>,
    pub shots: Option<u64>,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidSweep(format!(
                "steps must be >= 2, got {}",
                self.steps
            )));
        }
        if !self.t_max.is_finite() || self.t_max <= 0.0 {
            return Err(Error::InvalidSweep(format!(
                "t_max must be > 0, got {}",
                self.t_max
            )));
        }
        if let Some(shots) = self.shots {
            if shots == 0 {
                return Err(Error::InvalidSweep("shots must be >= 1".into()));
            }
            if !self.backends.contains(&Backend::Circuit) {
                return Err(Error::InvalidSweep(
                    "shots require the circuit backend".into(),
                ));
            }
        }
        Ok(())
    }

    /// `t_i = i · t_max / (steps − 1)`.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| i as f64 * self.t_max / last)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendSeries {
    pub backend: Backend,
    pub populations: Vec<PopulationVector>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub spec: SweepSpec,
    pub times: Vec<f64>,
    /// One entry per backend, in backend order.
    pub series: Vec<BackendSeries>,
    /// `max_abs_diff[i][j]`: largest population difference between
    /// `series[i]` and `series[j]` over every channel and grid point.
    pub max_abs_diff: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_s: Option<BTreeMap<Backend, f64>>,
}

impl SweepReport {
    pub fn backends(&self) -> Vec<Backend> {
        self.series.iter().map(|s| s.backend).collect()
    }

    pub fn series_for(&self, backend: Backend) -> Option<&[PopulationVector]> {
        self.series
            .iter()
            .find(|s| s.backend == backend)
            .map(|s| s.populations.as_slice())
    }

    pub fn diff(&self, a: Backend, b: Backend) -> Option<f64> {
        let i = self.series.iter().position(|s| s.backend == a)?;
        let j = self.series.iter().position(|s| s.backend == b)?;
        Some(self.max_abs_diff[i][j])
    }

    /// Largest off-diagonal entry of the difference matrix.
    pub fn worst_diff(&self) -> f64 {
        self.max_abs_diff
            .iter()
            .flatten()
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn without_timings(&self) -> Self {
        Self {
            wall_clock_s: None,
            ..self.clone()
        }
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let times = spec.grid();
    let mut backends = spec.backends.clone();
    backends.sort();
    backends.dedup();

    let mut series = Vec::with_capacity(backends.len());
    let mut clock = BTreeMap::new();
    for backend in backends {
        let start = Instant::now();
        let populations = match backend {
            Backend::Analytic => analytic_series(&spec.params, &times)?,
            Backend::Circuit => circuit_series(spec, &times)?,
            Backend::Qme => qme_evolve_converged(&spec.params, times.clone(), QME_HALVING_TOL)?,
            Backend::Volterra => {
                if spec.params.kappa() == 0.0 {
                    return Err(Error::BackendUnavailable("volterra", "requires kappa > 0"));
                }
                let cfg = KernelConfig::for_params(&spec.params);
                volterra_evolve(&spec.params, &cfg, &times)?
                    .iter()
                    .map(PopulationVector::from_coefficients)
                    .collect()
            }
        };
        clock.insert(backend, start.elapsed().as_secs_f64());
        series.push(BackendSeries {
            backend,
            populations,
        });
    }

    let max_abs_diff = series
        .iter()
        .map(|a| {
            series
                .iter()
                .map(|b| {
                    a.populations
                        .iter()
                        .zip(&b.populations)
                        .map(|(x, y)| x.max_abs_diff(y))
                        .fold(0.0, f64::max)
                })
                .collect()
        })
        .collect();

    Ok(SweepReport {
        spec: spec.clone(),
        times,
        series,
        max_abs_diff,
        wall_clock_s: Some(clock),
    })
}

fn analytic_series(params: &TcParams, times: &[f64]) -> Result<Vec<PopulationVector>> {
    times.iter().map(|&t| populations(params, t)).collect()
}

/// Each grid point prepares its own time-t snapshot circuit; with shots the
/// point is sampled under seed `seed ^ i`.
fn circuit_series(spec: &SweepSpec, times: &[f64]) -> Result<Vec<PopulationVector>> {
    let n = spec.params.n_atoms();
    times
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            let probs = circuit_point(&spec.params, t, spec.shots, spec.seed ^ i as u64)?;
            Ok(PopulationVector {
                t,
                atom_populations: probs[..n].to_vec(),
                ground_population: probs[n],
            })
        })
        .collect()
}

/// Per-qubit excitation probabilities (atoms then environment) of the
/// Q-MARINA circuit for time `t`, exact or from `shots` samples.
pub fn circuit_point(params: &TcParams, t: f64, shots: Option<u64>, seed: u64) -> Result<Vec<f64>> {
    let coeffs = coefficients(params, t)?;
    let circuit = build_circuit(&angles_from_coefficients(&coeffs.values)?)?;
    let state = run_circuit(&circuit)?;
    match shots {
        None => Ok(state.excitation_probabilities()),
        Some(shots) => Ok(state.sample_counts(shots, seed)?.marginals()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(backends: Vec<Backend>) -> SweepSpec {
        SweepSpec {
            params: TcParams::first_atom_excited(2, 10.0, 5.0).unwrap(),
            t_max: 2.0,
            steps: 11,
            backends,
            shots: None,
            seed: 42,
        }
    }

    #[test]
    fn validation() {
        let mut s = spec(vec![Backend::Analytic]);
        s.steps = 1;
        assert!(s.validate().is_err());
        let mut s = spec(vec![Backend::Analytic]);
        s.t_max = 0.0;
        assert!(s.validate().is_err());
        let mut s = spec(vec![Backend::Analytic]);
        s.shots = Some(100);
        assert!(s.validate().is_err());
        assert!("qmee".parse::<Backend>().is_err());
        assert_eq!("qme".parse::<Backend>().unwrap(), Backend::Qme);
    }

    #[test]
    fn two_point_analytic_sweep() {
        let mut s = spec(vec![Backend::Analytic]);
        s.steps = 2;
        let r = run_sweep(&s).unwrap();
        assert_eq!(r.times, vec![0.0, 2.0]);
        let series = r.series_for(Backend::Analytic).unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series[0].atom_populations, vec![1.0, 0.0]);
        assert_eq!(series[0].ground_population, 0.0);
    }

    #[test]
    fn diff_matrix_is_symmetric_with_zero_diagonal() {
        let r = run_sweep(&spec(vec![
            Backend::Qme,
            Backend::Analytic,
            Backend::Circuit,
        ]))
        .unwrap();
        assert_eq!(
            r.backends(),
            vec![Backend::Analytic, Backend::Circuit, Backend::Qme]
        );
        for i in 0..3 {
            assert_eq!(r.max_abs_diff[i][i], 0.0);
            for j in 0..3 {
                assert_eq!(r.max_abs_diff[i][j], r.max_abs_diff[j][i]);
            }
        }
        assert!(r.diff(Backend::Analytic, Backend::Qme).unwrap() <= 1e-6);
        assert!(r.diff(Backend::Analytic, Backend::Circuit).unwrap() <= 1e-12);
    }

    #[test]
    fn volterra_needs_linewidth() {
        let mut s = spec(vec![Backend::Volterra]);
        s.params = TcParams::first_atom_excited(2, 1.0, 0.0).unwrap();
        assert!(matches!(
            run_sweep(&s),
            Err(Error::BackendUnavailable("volterra", _))
        ));
    }

    #[test]
    fn circuit_snapshots_ignore_neighbouring_points() {
        let mut s = spec(vec![Backend::Circuit]);
        s.shots = Some(500);
        let full = run_sweep(&s).unwrap();
        let series = full.series_for(Backend::Circuit).unwrap();
        for (i, &t) in full.times.iter().enumerate() {
            let probs = circuit_point(&s.params, t, s.shots, s.seed ^ i as u64).unwrap();
            assert_eq!(series[i].atom_populations, probs[..2]);
        }
    }
}
