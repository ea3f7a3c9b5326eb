//! Closed-form singly-excited dynamics.
//!
//! With one excitation shared by N resonant atoms and a lossy cavity, the
//! atomic amplitudes split into a non-decaying dark part and a bright mode
//! `B(t) = Σ_m c_m(t)` that evolves as `B(t) = B(0)·E(t)` with
//!
//! ```text
//! E(t) = e^{-κt/4} ( (κ/D) sinh(Dt/4) + cosh(Dt/4) ),   D = √(κ² − 16 N g²)
//! c_n(t) = c_n(0) − (B(0)/N) (1 − E(t))
//! ```
//!
//! Every evaluation is O(N).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the normalization of the initial amplitudes.
pub const NORM_TOL: f64 = 1e-12;

/// Largest atom count accepted by [`hamming_level_diag`].
pub const HAMMING_MAX_ATOMS: usize = 20;

/// `|x| = |Dt/4|` below which the envelope is summed as a power series.
const SERIES_ARG: f64 = 0.5;

/// Physical configuration of the open Tavis-Cummings system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcParams {
    n_atoms: usize,
    g: f64,
    kappa: f64,
    initial_coeffs: Vec<f64>,
}

impl TcParams {
    pub fn new(n_atoms: usize, g: f64, kappa: f64, initial_coeffs: Vec<f64>) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::InvalidParams("atom count must be at least 1".into()));
        }
        if !g.is_finite() || g < 0.0 {
            return Err(Error::InvalidParams(format!(
                "coupling g must be finite and >= 0, got {g}"
            )));
        }
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(Error::InvalidParams(format!(
                "loss rate kappa must be finite and >= 0, got {kappa}"
            )));
        }
        if initial_coeffs.len() != n_atoms {
            return Err(Error::InvalidParams(format!(
                "expected {n_atoms} initial coefficients, got {}",
                initial_coeffs.len()
            )));
        }
        if initial_coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NaNInput);
        }
        let norm: f64 = initial_coeffs.iter().map(|c| c * c).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParams(format!(
                "initial coefficients must satisfy sum c^2 = 1, got {norm}"
            )));
        }
        Ok(Self {
            n_atoms,
            g,
            kappa,
            initial_coeffs,
        })
    }

    /// Atom 1 excited, all others in the ground state.
    pub fn first_atom_excited(n_atoms: usize, g: f64, kappa: f64) -> Result<Self> {
        let mut c0 = vec![0.0; n_atoms];
        if let Some(first) = c0.first_mut() {
            *first = 1.0;
        }
        Self::new(n_atoms, g, kappa, c0)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn initial_coeffs(&self) -> &[f64] {
        &self.initial_coeffs
    }

    /// g√N.
    pub fn collective_rate(&self) -> f64 {
        self.g * (self.n_atoms as f64).sqrt()
    }

    /// `B(0) = Σ_m c_m(0)`.
    pub fn bright_amplitude(&self) -> f64 {
        self.initial_coeffs.iter().sum()
    }

    /// Fastest rate in the problem, floored at 1. Used to scale default steps.
    pub fn rate_scale(&self) -> f64 {
        self.collective_rate().max(self.kappa).max(1.0)
    }
}

/// `D` with `D² = κ² − 16 N g²`, principal branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplittingConstant(pub Complex64);

impl SplittingConstant {
    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn is_real(&self) -> bool {
        self.0.im == 0.0
    }
}

pub fn splitting_d(params: &TcParams) -> SplittingConstant {
    let disc = params.kappa * params.kappa - 16.0 * params.n_atoms as f64 * params.g * params.g;
    let d = if disc >= 0.0 {
        Complex64::new(disc.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-disc).sqrt())
    };
    SplittingConstant(d)
}

/// Envelope evaluated in complex arithmetic, before the realness check.
///
/// Both `cosh x` and `sinh(x)/x` are even in `x = Dt/4`, so near `x = 0`
/// (small `t`, or `D` at the exceptional point `16Ng² = κ²`) they are summed
/// as series in the real quantity `x² = (κ² − 16Ng²)t²/16`. Otherwise the
/// hyperbolic functions are expanded into exponentials with the damping
/// `e^{-κt/4}` folded into the exponent so nothing overflows at large `t`.
pub fn envelope_complex(params: &TcParams, t: f64) -> Result<Complex64> {
    if !t.is_finite() {
        return Err(Error::NaNInput);
    }
    if t < 0.0 {
        return Err(Error::InvalidParams(format!("time must be >= 0, got {t}")));
    }
    let d = splitting_d(params).0;
    let y = params.kappa * t / 4.0;
    let x = d * (t / 4.0);
    let degenerate_scale = params.kappa.max(4.0 * params.collective_rate()).max(1.0);
    let degenerate = d.norm() < 1e-8 * degenerate_scale;

    if degenerate || x.norm() <= SERIES_ARG {
        if x.norm() > 1.0 {
            return Err(Error::DegenerateLimitUnstable { arg: x.norm() });
        }
        let z = (params.kappa * params.kappa - 16.0 * params.n_atoms as f64 * params.g * params.g)
            * t
            * t
            / 16.0;
        let (cosh, sinhc) =
            even_series(z).ok_or(Error::DegenerateLimitUnstable { arg: x.norm() })?;
        return Ok(Complex64::new((-y).exp() * (cosh + y * sinhc), 0.0));
    }

    let ep = (x - y).exp();
    let em = (-x - y).exp();
    let cosh_part = (ep + em) * 0.5;
    let sinhc_part = (ep - em) / (x * 2.0);
    Ok(cosh_part + sinhc_part * y)
}

/// `(cosh √z, sinh(√z)/√z)` as power series in `z`.
fn even_series(z: f64) -> Option<(f64, f64)> {
    let mut cosh = 1.0;
    let mut sinhc = 1.0;
    let mut term_c = 1.0;
    let mut term_s = 1.0;
    for k in 1..64 {
        let k = k as f64;
        term_c *= z / ((2.0 * k - 1.0) * (2.0 * k));
        term_s *= z / ((2.0 * k) * (2.0 * k + 1.0));
        cosh += term_c;
        sinhc += term_s;
        if term_c.abs() <= f64::EPSILON * 1e-2 * cosh.abs()
            && term_s.abs() <= f64::EPSILON * 1e-2 * sinhc.abs()
        {
            return Some((cosh, sinhc));
        }
    }
    None
}

/// Real bright-mode envelope `E(t)`, with `E(0) = 1`.
pub fn envelope(params: &TcParams, t: f64) -> Result<f64> {
    let e = envelope_complex(params, t)?;
    debug_assert!(
        e.im.abs() <= 1e-12,
        "envelope has imaginary residue {} at t = {t}",
        e.im
    );
    Ok(e.re)
}

/// Atomic amplitudes `c_n(t)` at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    pub t: f64,
    pub values: Vec<f64>,
}

impl CoefficientVector {
    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|c| c * c).sum()
    }
}

/// Diagonal of the (N+1)-dimensional reduced density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationVector {
    pub t: f64,
    pub atom_populations: Vec<f64>,
    pub ground_population: f64,
}

impl PopulationVector {
    pub fn from_coefficients(coeffs: &CoefficientVector) -> Self {
        let atom_populations: Vec<f64> = coeffs.values.iter().map(|c| c * c).collect();
        let ground_population = 1.0 - atom_populations.iter().sum::<f64>();
        Self {
            t: coeffs.t,
            atom_populations,
            ground_population,
        }
    }

    /// Atom populations followed by the ground/environment population.
    pub fn channels(&self) -> impl Iterator<Item = f64> + '_ {
        self.atom_populations
            .iter()
            .copied()
            .chain(std::iter::once(self.ground_population))
    }

    pub fn total(&self) -> f64 {
        self.channels().sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.channels()
            .zip(other.channels())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn coefficients(params: &TcParams, t: f64) -> Result<CoefficientVector> {
    let e = envelope(params, t)?;
    let shift = params.bright_amplitude() / params.n_atoms as f64 * (1.0 - e);
    let values = params.initial_coeffs.iter().map(|c| c - shift).collect();
    Ok(CoefficientVector { t, values })
}

pub fn populations(params: &TcParams, t: f64) -> Result<PopulationVector> {
    Ok(PopulationVector::from_coefficients(&coefficients(
        params, t,
    )?))
}

/// `t → ∞` limit: the dark-state residue `c_n(0) − B(0)/N`.
pub fn steady_state_coefficients(params: &TcParams) -> Result<CoefficientVector> {
    if params.g == 0.0 {
        return Err(Error::NoSteadyState(
            "g = 0: atoms are decoupled from the cavity",
        ));
    }
    if params.kappa == 0.0 {
        return Err(Error::NoSteadyState(
            "kappa = 0: the closed system oscillates forever",
        ));
    }
    let mean = params.bright_amplitude() / params.n_atoms as f64;
    let values = params.initial_coeffs.iter().map(|c| c - mean).collect();
    Ok(CoefficientVector {
        t: f64::INFINITY,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Weak,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingRegime {
    pub regime: Regime,
    pub collective_rate: f64,
}

/// Strong iff `g√N ≥ κ/4`.
///
/// Note the N=3, g=2, κ=5 configuration lands in `Strong` even for a single
/// atom (`g = 2 ≥ 1.25`), although it is sometimes described as borderline.
pub fn coupling_regime(params: &TcParams) -> CouplingRegime {
    let collective_rate = params.collective_rate();
    let regime = if collective_rate < params.kappa / 4.0 {
        Regime::Weak
    } else {
        Regime::Strong
    };
    CouplingRegime {
        regime,
        collective_rate,
    }
}

/// Diagonal of `S_z = ½ Σ_j σ_z^j`: entry `p` (0-based) is `N/2 − popcount(p)`.
pub fn hamming_level_diag(n_atoms: usize) -> Result<Vec<f64>> {
    if n_atoms > HAMMING_MAX_ATOMS {
        return Err(Error::SizeLimitExceeded {
            requested: n_atoms,
            limit: HAMMING_MAX_ATOMS,
        });
    }
    if n_atoms == 0 {
        return Err(Error::InvalidParams("atom count must be at least 1".into()));
    }
    let half = n_atoms as f64 / 2.0;
    Ok((0u64..1 << n_atoms)
        .map(|p| half - p.count_ones() as f64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn excited(n: usize, g: f64, kappa: f64) -> TcParams {
        TcParams::first_atom_excited(n, g, kappa).unwrap()
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(TcParams::new(0, 1.0, 1.0, vec![]).is_err());
        assert!(TcParams::new(2, -1.0, 1.0, vec![1.0, 0.0]).is_err());
        assert!(TcParams::new(2, 1.0, f64::NAN, vec![1.0, 0.0]).is_err());
        assert!(TcParams::new(2, 1.0, 1.0, vec![1.0]).is_err());
        assert!(TcParams::new(2, 1.0, 1.0, vec![0.5, 0.5]).is_err());
        assert_eq!(
            TcParams::new(1, 1.0, 1.0, vec![f64::NAN]),
            Err(Error::NaNInput)
        );
        // negative amplitudes are admitted
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(TcParams::new(2, 1.0, 1.0, vec![s, -s]).is_ok());
    }

    #[test]
    fn splitting_constant_examples() {
        let d = splitting_d(&excited(7, 5.0, 5.0));
        assert!(!d.is_real());
        assert_eq!(d.0.re, 0.0);
        assert!((d.0.im - 2775f64.sqrt()).abs() < 1e-12);
        assert!((d.0.im - 52.6783).abs() < 1e-4);

        let d = splitting_d(&excited(1, 1.0, 10.0));
        assert!(d.is_real());
        assert!((d.0.re - 84f64.sqrt()).abs() < 1e-12);

        let d = splitting_d(&excited(3, 0.0, 5.0));
        assert_eq!(d.0, Complex64::new(5.0, 0.0));
    }

    #[test]
    fn splitting_squares_back() {
        for (n, g, k) in [
            (7, 5.0, 5.0),
            (2, 10.0, 5.0),
            (1, 0.3, 9.0),
            (4, 1.25, 10.0),
        ] {
            let p = excited(n, g, k);
            let d = splitting_d(&p).0;
            let want = k * k - 16.0 * n as f64 * g * g;
            assert!(((d * d).re - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn envelope_at_zero_is_one() {
        for (n, g, k) in [
            (7, 5.0, 5.0),
            (1, 1.0, 10.0),
            (3, 0.0, 2.0),
            (4, 1.25, 10.0),
        ] {
            assert_eq!(envelope(&excited(n, g, k), 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn closed_cavity_envelope_is_cosine() {
        for (n, g) in [(1, 1.0), (4, 1.0), (7, 5.0), (3, 0.2)] {
            let p = excited(n, g, 0.0);
            let w = p.collective_rate();
            for i in 0..200 {
                let t = i as f64 * 0.037;
                let e = envelope(&p, t).unwrap();
                assert!((e - (w * t).cos()).abs() < 1e-12, "n={n} g={g} t={t}");
            }
        }
    }

    #[test]
    fn uncoupled_envelope_is_one() {
        let p = excited(3, 0.0, 7.0);
        for t in [0.0, 0.1, 1.0, 10.0, 1e3, 1e6] {
            assert!((envelope(&p, t).unwrap() - 1.0).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn envelope_is_continuous_through_the_exceptional_point() {
        // 16 N g^2 = kappa^2 at g = kappa / (4 sqrt N)
        let kappa = 8.0;
        let n = 4;
        let g0 = kappa / (4.0 * (n as f64).sqrt());
        let exact = excited(n, g0, kappa);
        assert!(splitting_d(&exact).0.norm() < 1e-6);
        for t in [0.0, 0.05, 0.3, 1.0, 4.0, 20.0] {
            let y = kappa * t / 4.0;
            let limit = (-y).exp() * (1.0 + y);
            let e = envelope(&exact, t).unwrap();
            assert!((e - limit).abs() < 1e-12, "t={t}: {e} vs {limit}");
            for dg in [1e-9, -1e-9, 1e-6, -1e-6] {
                let near = excited(n, g0 + dg, kappa);
                let e2 = envelope(&near, t).unwrap();
                assert!((e2 - limit).abs() < 1e-4, "dg={dg} t={t}: {e2} vs {limit}");
            }
        }
    }

    #[test]
    fn envelope_large_time_does_not_overflow() {
        for (n, g, k) in [(1, 0.1, 10.0), (7, 5.0, 5.0), (2, 100.0, 1.0)] {
            let p = excited(n, g, k);
            let e = envelope(&p, 1e5).unwrap();
            assert!(e.is_finite());
            assert!(e.abs() <= 1.0);
        }
    }

    #[test]
    fn imaginary_residue_is_negligible() {
        for (n, g, k) in [(7, 5.0, 5.0), (2, 10.0, 5.0), (3, 2.0, 5.0), (1, 10.0, 5.0)] {
            let p = excited(n, g, k);
            let horizon = 1e3 / p.rate_scale();
            for i in 0..=1000 {
                let t = horizon * i as f64 / 1000.0;
                let e = envelope_complex(&p, t).unwrap();
                assert!(e.im.abs() <= 1e-12, "t={t} im={}", e.im);
            }
        }
    }

    #[test]
    fn closed_four_atom_quarter_period() {
        let p = excited(4, 1.0, 0.0);
        let c = coefficients(&p, PI / 2.0).unwrap();
        for (got, want) in c.values.iter().zip([0.5, -0.5, -0.5, -0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
        let pops = populations(&p, PI / 2.0).unwrap();
        for v in &pops.atom_populations {
            assert!((v - 0.25).abs() < 1e-12);
        }
        assert!(pops.ground_population.abs() < 1e-12);
    }

    #[test]
    fn coefficients_at_zero_are_initial() {
        let s = 1.0 / 3f64.sqrt();
        let p = TcParams::new(3, 2.0, 5.0, vec![s, -s, s]).unwrap();
        assert_eq!(coefficients(&p, 0.0).unwrap().values, p.initial_coeffs());
        let pops = populations(&excited(3, 2.0, 5.0), 0.0).unwrap();
        assert_eq!(pops.atom_populations, vec![1.0, 0.0, 0.0]);
        assert_eq!(pops.ground_population, 0.0);
    }

    #[test]
    fn steady_state_examples() {
        let ss = steady_state_coefficients(&excited(2, 10.0, 5.0)).unwrap();
        assert_eq!(ss.values, vec![0.5, -0.5]);

        let s = 0.5;
        let bright = TcParams::new(4, 1.0, 2.0, vec![s; 4]).unwrap();
        let ss = steady_state_coefficients(&bright).unwrap();
        assert!(ss.values.iter().all(|v| v.abs() < 1e-15));

        let single = steady_state_coefficients(&excited(1, 3.0, 2.0)).unwrap();
        assert_eq!(single.values, vec![0.0]);

        assert!(matches!(
            steady_state_coefficients(&excited(2, 0.0, 5.0)),
            Err(Error::NoSteadyState(_))
        ));
        assert!(matches!(
            steady_state_coefficients(&excited(2, 1.0, 0.0)),
            Err(Error::NoSteadyState(_))
        ));
    }

    #[test]
    fn late_populations_approach_dark_residue() {
        let p = excited(2, 10.0, 5.0);
        let pops = populations(&p, 40.0 / 5.0).unwrap();
        assert!((pops.atom_populations[0] - 0.25).abs() < 1e-3);
        assert!((pops.atom_populations[1] - 0.25).abs() < 1e-3);
        assert!((pops.ground_population - 0.5).abs() < 1e-3);
    }

    #[test]
    fn regime_examples() {
        let r = coupling_regime(&excited(7, 5.0, 5.0));
        assert_eq!(r.regime, Regime::Strong);
        assert!((r.collective_rate - 13.2288).abs() < 1e-4);
        assert_eq!(coupling_regime(&excited(1, 0.1, 10.0)).regime, Regime::Weak);
        let r = coupling_regime(&excited(3, 2.0, 5.0));
        assert_eq!(r.regime, Regime::Strong);
        assert!((r.collective_rate - 3.4641).abs() < 1e-4);
        // boundary is inclusive
        assert_eq!(
            coupling_regime(&excited(1, 1.25, 5.0)).regime,
            Regime::Strong
        );
    }

    #[test]
    fn hamming_levels() {
        assert_eq!(hamming_level_diag(1).unwrap(), vec![0.5, -0.5]);
        assert_eq!(hamming_level_diag(2).unwrap(), vec![1.0, 0.0, 0.0, -1.0]);
        for n in 1..=12 {
            let d = hamming_level_diag(n).unwrap();
            assert_eq!(d.len(), 1 << n);
            assert_eq!(*d.last().unwrap(), -(n as f64) / 2.0);
            assert_eq!(d[0], n as f64 / 2.0);
        }
        assert_eq!(
            hamming_level_diag(21),
            Err(Error::SizeLimitExceeded {
                requested: 21,
                limit: 20
            })
        );
    }
}
