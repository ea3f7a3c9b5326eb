//! Dense statevector simulator.
//!
//! Basis index bit `b` holds the state of qubit `b` (little-endian). Gate
//! kernels walk the amplitude array in blocks of `2^(target+1)` so that each
//! block pairs its lower half (target = 0) with its upper half (target = 1);
//! blocks are disjoint, which lets large states update in parallel without
//! any shared writes.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitIr, Gate};
use crate::error::{Error, Result};

/// 2^26 amplitudes is 1 GiB of `Complex64`.
pub const MAX_QUBITS: usize = 26;

const PARALLEL_MIN_QUBITS: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::SizeLimitExceeded {
                requested: n_qubits,
                limit: MAX_QUBITS,
            });
        }
        if n_qubits == 0 {
            return Err(Error::InvalidParams("need at least one qubit".into()));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            Gate::PauliX { target } => self.apply_pairs(target, None, std::mem::swap),
            Gate::Cnot { control, target } => {
                self.apply_pairs(target, Some(control), std::mem::swap)
            }
            Gate::ControlledRy {
                angle,
                control,
                target,
            } => {
                let (s, c) = (angle / 2.0).sin_cos();
                self.apply_pairs(target, Some(control), move |a, b| {
                    let (a0, b0) = (*a, *b);
                    *a = a0 * c - b0 * s;
                    *b = a0 * s + b0 * c;
                })
            }
        }
        Ok(())
    }

    fn apply_pairs<F>(&mut self, target: usize, control: Option<usize>, f: F)
    where
        F: Fn(&mut Complex64, &mut Complex64) + Sync + Send,
    {
        let half = 1usize << target;
        let block = half << 1;
        let cmask = control.map_or(0, |c| 1usize << c);

        if self.n_qubits < PARALLEL_MIN_QUBITS {
            for (bi, chunk) in self.amps.chunks_mut(block).enumerate() {
                let base = bi * block;
                let (lo, hi) = chunk.split_at_mut(half);
                for (j, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    if (base + j) & cmask == cmask {
                        f(a, b);
                    }
                }
            }
        } else {
            self.amps
                .par_chunks_mut(block)
                .enumerate()
                .for_each(|(bi, chunk)| {
                    let base = bi * block;
                    let (lo, hi) = chunk.split_at_mut(half);
                    lo.par_iter_mut()
                        .zip(hi.par_iter_mut())
                        .enumerate()
                        .with_min_len(1 << 12)
                        .for_each(|(j, (a, b))| {
                            if (base + j) & cmask == cmask {
                                f(a, b);
                            }
                        });
                });
        }
    }

    /// Probability that each qubit reads 1.
    pub fn excitation_probabilities(&self) -> Vec<f64> {
        let mut probs = vec![0.0; self.n_qubits];
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut bits = i;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                probs[b] += p;
                bits &= bits - 1;
            }
        }
        probs
    }

    /// Probability mass on basis states with two or more qubits excited.
    pub fn onehot_residual(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != 0 && !i.is_power_of_two())
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Probability of the all-zero basis state.
    pub fn vacuum_mass(&self) -> f64 {
        self.amps[0].norm_sqr()
    }

    /// Draw `shots` computational-basis outcomes by inverse-CDF sampling.
    ///
    /// Uniforms come from the top 53 bits of a ChaCha8 stream seeded with
    /// `seed`, so the histogram is identical on every platform.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> Result<ShotHistogram> {
        if shots == 0 {
            return Err(Error::InvalidParams("shots must be at least 1".into()));
        }
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            cdf.push(acc);
        }
        let total = acc;

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u = unit_f64(rng.next_u64()) * total;
            let idx = cdf.partition_point(|&c| c <= u).min(last_nonzero);
            *counts.entry(idx as u64).or_insert(0) += 1;
        }
        Ok(ShotHistogram {
            n_qubits: self.n_qubits,
            shots,
            seed,
            counts,
        })
    }
}

/// Uniform in `[0, 1)` from the top 53 bits.
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Zero state, then every gate in order.
pub fn run_circuit(circuit: &CircuitIr) -> Result<StateVector> {
    let mut state = StateVector::zero_state(circuit.n_qubits())?;
    for gate in circuit.gates() {
        state.apply_gate(gate)?;
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotHistogram {
    pub n_qubits: usize,
    pub shots: u64,
    pub seed: u64,
    /// Basis index (bit `b` = qubit `b`) to count.
    pub counts: BTreeMap<u64, u64>,
}

impl ShotHistogram {
    /// Fraction of shots in which each qubit read 1.
    pub fn marginals(&self) -> Vec<f64> {
        let mut hits = vec![0u64; self.n_qubits];
        for (&outcome, &count) in &self.counts {
            for (q, h) in hits.iter_mut().enumerate() {
                if outcome >> q & 1 == 1 {
                    *h += count;
                }
            }
        }
        hits.into_iter()
            .map(|h| h as f64 / self.shots as f64)
            .collect()
    }

    /// Counts keyed by bitstring, highest qubit first (`c[n-1] … c[0]`).
    pub fn bitstring_counts(&self) -> BTreeMap<String, u64> {
        self.counts
            .iter()
            .map(|(&outcome, &count)| (bitstring(outcome, self.n_qubits), count))
            .collect()
    }
}

pub fn bitstring(outcome: u64, n_qubits: usize) -> String {
    (0..n_qubits)
        .rev()
        .map(|q| if outcome >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}
