//! Collective spin operators built from explicit Kronecker products.
//!
//! Single-site basis order is (up, down) with `σ_z = diag(1, −1)`, and site 1
//! is the most significant tensor factor. Verification-only: the matrices are
//! dense `2^N × 2^N`.

use ndarray::{linalg::kron, Array2};

use crate::error::{Error, Result};

pub const MAX_ATOMS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveOperators {
    pub s_z: Array2<f64>,
    pub s_plus: Array2<f64>,
    pub s_minus: Array2<f64>,
}

/// `⊗^{j} I ⊗ op ⊗ ⊗^{n−j−1} I`.
fn embed(op: &Array2<f64>, site: usize, n_atoms: usize) -> Array2<f64> {
    let id = Array2::<f64>::eye(2);
    let mut acc = Array2::<f64>::eye(1);
    for j in 0..n_atoms {
        acc = kron(&acc, if j == site { op } else { &id });
    }
    acc
}

pub fn collective_operators(n_atoms: usize) -> Result<CollectiveOperators> {
    if n_atoms > MAX_ATOMS {
        return Err(Error::SizeLimitExceeded {
            requested: n_atoms,
            limit: MAX_ATOMS,
        });
    }
    if n_atoms == 0 {
        return Err(Error::InvalidParams("atom count must be at least 1".into()));
    }
    let half_sz = Array2::from_shape_vec((2, 2), vec![0.5, 0.0, 0.0, -0.5]).unwrap();
    let raise = Array2::from_shape_vec((2, 2), vec![0.0, 1.0, 0.0, 0.0]).unwrap();
    let dim = 1 << n_atoms;
    let mut s_z = Array2::zeros((dim, dim));
    let mut s_plus = Array2::zeros((dim, dim));
    for site in 0..n_atoms {
        s_z += &embed(&half_sz, site, n_atoms);
        s_plus += &embed(&raise, site, n_atoms);
    }
    let s_minus = s_plus.t().to_owned();
    Ok(CollectiveOperators {
        s_z,
        s_plus,
        s_minus,
    })
}

pub fn commutator(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    a.dot(b) - b.dot(a)
}
