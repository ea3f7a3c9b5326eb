//! Q-MARINA circuit construction.
//!
//! Qubits `0..N` are the atoms `Q_S1..Q_SN`, qubit `N` is the environment
//! qubit `Q_E`. The circuit excites atom 1, then peels amplitude off into
//! the environment and back out onto each further atom:
//!
//! ```text
//! X(0)
//! CRY(2θ_1)  0 → N      CX  N → 0
//! CRY(2θ_n)  N → n−1    CX  n−1 → N     for n = 2..N
//! ```
//!
//! so that the final state is `Σ_n c_n |e_n⟩ + √(1 − Σc²) |E⟩`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on inverse-trig arguments before they are clamped.
pub const CLAMP_TOL: f64 = 1e-9;

/// Below this, a denominator and its numerator are both treated as zero.
const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleVector {
    pub thetas: Vec<f64>,
}

impl AngleVector {
    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }
}

/// θ_1 = arccos c_1, θ_n = arcsin(c_n / (sin θ_1 Π_{m=2}^{n−1} cos θ_m)).
pub fn angles_from_coefficients(coeffs: &[f64]) -> Result<AngleVector> {
    if coeffs.is_empty() {
        return Err(Error::InvalidParams("empty coefficient vector".into()));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NaNInput);
    }
    let norm: f64 = coeffs.iter().map(|c| c * c).sum();
    if norm > 1.0 + CLAMP_TOL {
        return Err(Error::InvalidParams(format!("sum c^2 = {norm} exceeds 1")));
    }

    let mut thetas = Vec::with_capacity(coeffs.len());
    let theta1 = clamped(coeffs[0], 0)?.acos();
    thetas.push(theta1);
    // amplitude still parked on the environment qubit
    let mut remaining = theta1.sin();
    for (i, &c) in coeffs.iter().enumerate().skip(1) {
        let theta = if remaining.abs() < ZERO_TOL && c.abs() < ZERO_TOL {
            0.0
        } else {
            clamped(c / remaining, i)?.asin()
        };
        thetas.push(theta);
        remaining *= theta.cos();
    }
    Ok(AngleVector { thetas })
}

fn clamped(argument: f64, index: usize) -> Result<f64> {
    if !argument.is_finite() || argument.abs() > 1.0 + CLAMP_TOL {
        return Err(Error::InconsistentCoefficients { index, argument });
    }
    Ok(argument.clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    PauliX {
        target: usize,
    },
    /// Y-rotation by the full angle `angle` (i.e. `2θ`), applied when `control` is 1.
    ControlledRy {
        angle: f64,
        control: usize,
        target: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn qubits(&self) -> (Option<usize>, usize) {
        match *self {
            Gate::PauliX { target } => (None, target),
            Gate::ControlledRy {
                control, target, ..
            }
            | Gate::Cnot { control, target } => (Some(control), target),
        }
    }

    pub fn is_entangling(&self) -> bool {
        !matches!(self, Gate::PauliX { .. })
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let (control, target) = self.qubits();
        for q in control.into_iter().chain(std::iter::once(target)) {
            if q >= n_qubits {
                return Err(Error::IndexOutOfRange { index: q, n_qubits });
            }
        }
        if control == Some(target) {
            return Err(Error::InvalidGate(format!(
                "control and target are both qubit {target}"
            )));
        }
        if let Gate::ControlledRy { angle, .. } = self {
            if !angle.is_finite() {
                return Err(Error::InvalidGate("non-finite rotation angle".into()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitIr {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl CircuitIr {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidParams(
                "circuit needs at least one qubit".into(),
            ));
        }
        for gate in &gates {
            gate.validate(n_qubits)?;
        }
        Ok(Self { n_qubits, gates })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Index of the environment qubit in the Q-MARINA layout.
    pub fn environment_qubit(&self) -> usize {
        self.n_qubits - 1
    }
}

pub fn build_circuit(angles: &AngleVector) -> Result<CircuitIr> {
    let n = angles.len();
    if n == 0 {
        return Err(Error::InvalidParams("need at least one angle".into()));
    }
    let env = n;
    let mut gates = Vec::with_capacity(2 * n + 1);
    gates.push(Gate::PauliX { target: 0 });
    gates.push(Gate::ControlledRy {
        angle: 2.0 * angles.thetas[0],
        control: 0,
        target: env,
    });
    gates.push(Gate::Cnot {
        control: env,
        target: 0,
    });
    for (atom, theta) in angles.thetas.iter().enumerate().skip(1) {
        gates.push(Gate::ControlledRy {
            angle: 2.0 * theta,
            control: env,
            target: atom,
        });
        gates.push(Gate::Cnot {
            control: atom,
            target: env,
        });
    }
    CircuitIr::new(n + 1, gates)
}
