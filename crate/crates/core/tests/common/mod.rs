//! Dense reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use spinnet::quantum_state::{self, Direction};
use spinnet::{Graph, PairRdm};

/// `H = −J Σ_links σᶻσᶻ + h Σ_i σˣ` as a dense matrix, bit set = spin down.
pub fn dense_hamiltonian(g: &Graph, coupling: f64, field: f64) -> DMatrix<f64> {
    let n = g.n();
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let spin = |i: usize| if s >> i & 1 == 0 { 1.0 } else { -1.0 };
        h[(s, s)] = -coupling
            * g.links()
                .iter()
                .map(|&(a, b)| spin(a) * spin(b))
                .sum::<f64>();
        for i in 0..n {
            h[(s ^ (1 << i), s)] += field;
        }
    }
    h
}

pub fn dense_ground_energy(g: &Graph, coupling: f64, field: f64) -> f64 {
    let e = SymmetricEigen::new(dense_hamiltonian(g, coupling, field));
    e.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `|ψ⟩⟨ψ|`.
pub fn projector(psi: &[f64]) -> DMatrix<f64> {
    let v = DMatrix::from_column_slice(psi.len(), 1, psi);
    &v * v.transpose()
}

/// Partial trace of a dense `2ⁿ×2ⁿ` matrix onto sites `(i, j)`, basis
/// index `2·bit_i + bit_j`.
pub fn dense_pair_trace(rho: &DMatrix<f64>, n: usize, i: usize, j: usize) -> PairRdm {
    let dim = 1usize << n;
    let local = |s: usize| 2 * (s >> i & 1) + (s >> j & 1);
    let rest_mask = !((1usize << i) | (1usize << j)) & (dim - 1);
    let mut out = [[0.0; 4]; 4];
    for r in 0..dim {
        for c in 0..dim {
            if r & rest_mask == c & rest_mask {
                out[local(r)][local(c)] += rho[(r, c)];
            }
        }
    }
    quantum_state::PairRdm(out)
}

/// Measuring site `k` along `direction` with strength `q` on a full
/// density matrix: coherences in the measurement basis shrink by `1 − q`.
pub fn dense_attack(
    rho: &DMatrix<f64>,
    n: usize,
    k: usize,
    direction: Direction,
    q: f64,
) -> DMatrix<f64> {
    let dim = 1usize << n;
    let bit = 1usize << k;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = DMatrix::from_fn(dim, dim, |r, c| {
        if r & !bit != c & !bit {
            0.0
        } else if r & bit != 0 && c & bit != 0 {
            -s
        } else {
            s
        }
    });
    let dephase = |m: &DMatrix<f64>| {
        DMatrix::from_fn(dim, dim, |r, c| {
            if (r ^ c) & bit != 0 {
                (1.0 - q) * m[(r, c)]
            } else {
                m[(r, c)]
            }
        })
    };
    match direction {
        Direction::Z => dephase(rho),
        Direction::X => {
            let rotated = &hadamard * rho * &hadamard;
            &hadamard * dephase(&rotated) * &hadamard
        }
    }
}

pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

pub fn max_diff(a: &PairRdm, b: &PairRdm) -> f64 {
    a.max_abs_diff(b)
}
