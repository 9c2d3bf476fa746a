//! Transverse-field Ising Hamiltonian on an imprinted graph and its ground
//! state.
//!
//! Basis states are bitstrings `s` of length `n`; bit `i` set means spin `i`
//! points down (σᶻ = −1). The Hamiltonian is
//!
//! ```text
//! H = -J Σ_{(i,j) ∈ links} σᶻ_i σᶻ_j + h Σ_i σˣ_i
//! ```
//!
//! The diagonal is precomputed; the σˣ part is applied matrix-free by bit
//! flips. The ground state for `h > 0` comes from a restarted Lanczos
//! iteration with full reorthogonalization, confined to the spin-flip parity
//! sector that contains the ground state. At `h = 0` the two-fold degenerate
//! ground space is resolved to the GHZ state analytically.

use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::linalg::sym_eigen;
use crate::scalar::Scalar;

/// Default largest system the solver accepts.
pub const DEFAULT_MAX_SITES: usize = 20;

const CHUNK: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianParams<T> {
    /// Ferromagnetic coupling `J > 0`.
    pub coupling: T,
    /// Transverse field `h ≥ 0`.
    pub field: T,
}

impl<T: Scalar> HamiltonianParams<T> {
    pub fn new(coupling: T, field: T) -> Result<Self> {
        if !(coupling > T::zero()) || !(field >= T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "need J>0 and h>=0, got J={coupling}, h={field}"
            )));
        }
        Ok(Self { coupling, field })
    }
}

/// `H` in the z basis: diagonal stored, off-diagonal single-bit flips of
/// weight `h` applied on the fly.
#[derive(Clone, Debug)]
pub struct SparseHamiltonian<T> {
    n: usize,
    diagonal: Vec<T>,
    field: T,
    coupling: T,
    link_count: usize,
}

impl<T: Scalar> SparseHamiltonian<T> {
    pub fn build(g: &Graph, params: HamiltonianParams<T>) -> Result<Self> {
        Self::build_with_ceiling(g, params, DEFAULT_MAX_SITES)
    }

    pub fn build_with_ceiling(
        g: &Graph,
        params: HamiltonianParams<T>,
        ceiling: usize,
    ) -> Result<Self> {
        let n = g.n();
        if n > ceiling {
            return Err(Error::Capacity { sites: n, ceiling });
        }
        if n == 0 {
            return Err(Error::InvalidParameter(
                "Hamiltonian needs at least one site".into(),
            ));
        }
        let dim = 1usize << n;
        let masks: Vec<usize> = g
            .links()
            .iter()
            .map(|&(a, b)| (1 << a) | (1 << b))
            .collect();
        let links = T::lit(masks.len() as f64);
        let coupling = params.coupling;
        let mut diagonal = vec![T::zero(); dim];
        diagonal
            .par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| {
                for (o, d) in chunk.iter_mut().enumerate() {
                    let s = c * CHUNK + o;
                    // anti-aligned links contribute -1 to Σσσ
                    let anti = masks.iter().filter(|&&m| (s & m).count_ones() == 1).count();
                    let sum = links - T::lit(2.0 * anti as f64);
                    *d = -coupling * sum;
                }
            });
        Ok(Self {
            n,
            diagonal,
            field: params.field,
            coupling,
            link_count: masks.len(),
        })
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diagonal
    }

    pub fn field(&self) -> T {
        self.field
    }

    pub fn coupling(&self) -> T {
        self.coupling
    }

    pub fn link_count(&self) -> usize {
        self.link_count
    }

    /// `y = H x`. Each output entry is computed independently, so the result
    /// does not depend on the thread count.
    pub fn apply(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        let n = self.n;
        let h = self.field;
        y.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
            for (o, out) in chunk.iter_mut().enumerate() {
                let s = c * CHUNK + o;
                let mut flip = T::zero();
                for i in 0..n {
                    flip += x[s ^ (1 << i)];
                }
                *out = self.diagonal[s] * x[s] + h * flip;
            }
        });
    }

    /// Dense matrix (row-major), for small systems and tests.
    pub fn to_dense(&self) -> Vec<T> {
        let dim = self.dim();
        let mut m = vec![T::zero(); dim * dim];
        for s in 0..dim {
            m[s * dim + s] = self.diagonal[s];
            for i in 0..self.n {
                m[s * dim + (s ^ (1 << i))] = self.field;
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions<T> {
    /// Stop when `‖Hv − Ev‖ ≤ tol · max(1, |E|)`.
    pub tol: T,
    /// Budget of matrix-vector products.
    pub max_iter: usize,
    /// Krylov basis size per restart cycle.
    pub krylov_dim: usize,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::scaled_tol(1e-10),
            max_iter: 5000,
            krylov_dim: 32,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundState<T> {
    pub energy: T,
    /// Unit-norm amplitudes in z-basis index order.
    pub amplitudes: Vec<T>,
    pub residual: T,
    pub matvecs: usize,
}

impl<T: Scalar> GroundState<T> {
    pub fn sites(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    /// Little-endian dump: `n` as u64, energy as f64, then `2ⁿ` f64 amplitudes.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.sites() as u64).to_le_bytes())?;
        w.write_all(&self.energy.to_f64_lossy().to_le_bytes())?;
        for a in &self.amplitudes {
            w.write_all(&a.to_f64_lossy().to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let n = u64::from_le_bytes(b8) as usize;
        if n > 40 {
            return Err(Error::Parse {
                line: 0,
                msg: format!("implausible site count {n}"),
            });
        }
        r.read_exact(&mut b8)?;
        let energy = T::lit(f64::from_le_bytes(b8));
        let mut amplitudes = Vec::with_capacity(1 << n);
        for _ in 0..(1usize << n) {
            r.read_exact(&mut b8)?;
            amplitudes.push(T::lit(f64::from_le_bytes(b8)));
        }
        Ok(Self {
            energy,
            amplitudes,
            residual: T::zero(),
            matvecs: 0,
        })
    }
}

/// `(|↑↑…⟩ + |↓↓…⟩)/√2`.
pub fn ghz_state<T: Scalar>(n: usize) -> Vec<T> {
    let dim = 1usize << n;
    let mut v = vec![T::zero(); dim];
    let a = T::one() / T::lit(2.0).sqrt();
    v[0] = a;
    v[dim - 1] += a;
    if dim == 1 {
        v[0] = T::one();
    }
    v
}

/// Product state with every spin along +x.
pub fn all_plus_x<T: Scalar>(n: usize) -> Vec<T> {
    let dim = 1usize << n;
    vec![T::one() / T::lit(dim as f64).sqrt(); dim]
}

/// Sum of fixed-size chunk partials; identical for any thread count.
pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    if a.len() <= CHUNK {
        return a.iter().zip(b).map(|(&x, &y)| x * y).sum();
    }
    let partial: Vec<T> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(&p, &q)| p * q).sum())
        .collect();
    partial.into_iter().sum()
}

fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    y.par_chunks_mut(CHUNK)
        .zip(x.par_chunks(CHUNK))
        .for_each(|(yc, xc)| {
            for (yi, &xi) in yc.iter_mut().zip(xc) {
                *yi += alpha * xi;
            }
        });
}

fn scale<T: Scalar>(alpha: T, x: &mut [T]) {
    x.par_chunks_mut(CHUNK)
        .for_each(|c| c.iter_mut().for_each(|v| *v *= alpha));
}

/// Projects onto the global spin-flip eigenspace `v(s̄) = parity · v(s)`.
fn project_parity<T: Scalar>(v: &mut [T], parity: T) {
    let mask = v.len() - 1;
    let half = T::lit(0.5);
    for s in 0..v.len() / 2 {
        let t = s ^ mask;
        let a = half * (v[s] + parity * v[t]);
        v[s] = a;
        v[t] = parity * a;
    }
}

/// Lowest eigenpair of `h`. For `h.field() == 0` returns the GHZ state
/// with energy `−J·|links|` without iterating.
pub fn ground_state<T: Scalar>(
    ham: &SparseHamiltonian<T>,
    opts: &SolverOptions<T>,
) -> Result<GroundState<T>> {
    let n = ham.sites();
    if ham.field() == T::zero() {
        return Ok(GroundState {
            energy: -ham.coupling() * T::lit(ham.link_count() as f64),
            amplitudes: ghz_state(n),
            residual: T::zero(),
            matvecs: 0,
        });
    }
    let dim = ham.dim();
    let mask = dim - 1;
    // With +h σˣ the ground state is (-1)^{|s|} times a positive, flip-symmetric
    // Perron vector, so it lies in the sector of parity (-1)^n.
    let parity = if n % 2 == 0 { T::one() } else { -T::one() };
    let sign = |s: usize| {
        if s.count_ones() % 2 == 0 {
            T::one()
        } else {
            -T::one()
        }
    };
    let mut x: Vec<T> = (0..dim)
        .map(|s| {
            let rep = s.min(s ^ mask);
            let w = T::one()
                + T::lit(0.25) * T::lit(((rep as f64 + 1.0) * 0.618_033_988_749_895).fract());
            sign(s) * w
        })
        .collect();
    let nx = dot(&x, &x).sqrt();
    scale(T::one() / nx, &mut x);

    let m = opts.krylov_dim.max(2).min(dim);
    let tiny = T::epsilon() * T::lit(64.0);
    let mut matvecs = 0usize;
    let mut best = T::infinity();
    let mut hx = vec![T::zero(); dim];

    loop {
        let mut basis: Vec<Vec<T>> = vec![x.clone()];
        let mut alphas: Vec<T> = Vec::with_capacity(m);
        let mut betas: Vec<T> = Vec::with_capacity(m);
        let mut w = vec![T::zero(); dim];
        ham.apply(&basis[0], &mut w);
        matvecs += 1;
        loop {
            let j = basis.len() - 1;
            let alpha = dot(&basis[j], &w);
            alphas.push(alpha);
            axpy(-alpha, &basis[j], &mut w);
            if j > 0 {
                axpy(-betas[j - 1], &basis[j - 1], &mut w);
            }
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    axpy(-c, v, &mut w);
                }
            }
            project_parity(&mut w, parity);
            let beta = dot(&w, &w).sqrt();
            let scale_ref = alpha.abs().max(T::one());
            if basis.len() == m || beta <= tiny * scale_ref || matvecs >= opts.max_iter {
                break;
            }
            betas.push(beta);
            scale(T::one() / beta, &mut w);
            let next = std::mem::replace(&mut w, vec![T::zero(); dim]);
            basis.push(next);
            ham.apply(basis.last().expect("basis"), &mut w);
            matvecs += 1;
        }

        let k = alphas.len();
        let mut t = vec![T::zero(); k * k];
        for i in 0..k {
            t[i * k + i] = alphas[i];
            if i + 1 < k {
                t[i * k + i + 1] = betas[i];
                t[(i + 1) * k + i] = betas[i];
            }
        }
        let eig = sym_eigen(&t, k);
        let y = eig.vector(0);
        let mut ritz = vec![T::zero(); dim];
        for (coef, v) in y.iter().zip(&basis) {
            axpy(*coef, v, &mut ritz);
        }
        project_parity(&mut ritz, parity);
        let nr = dot(&ritz, &ritz).sqrt();
        scale(T::one() / nr, &mut ritz);

        ham.apply(&ritz, &mut hx);
        matvecs += 1;
        let energy = dot(&ritz, &hx);
        axpy(-energy, &ritz, &mut hx);
        let residual = dot(&hx, &hx).sqrt();
        best = best.min(residual);
        x = ritz;
        if residual <= opts.tol * energy.abs().max(T::one()) {
            fix_phase(&mut x);
            return Ok(GroundState {
                energy,
                amplitudes: x,
                residual,
                matvecs,
            });
        }
        if matvecs >= opts.max_iter {
            return Err(Error::NoConvergence {
                iterations: matvecs,
                residual: best.to_f64_lossy(),
            });
        }
    }
}

fn fix_phase<T: Scalar>(v: &mut [T]) {
    let mut idx = 0;
    for (i, a) in v.iter().enumerate() {
        if a.abs() > v[idx].abs() {
            idx = i;
        }
    }
    if v[idx] < T::zero() {
        v.iter_mut().for_each(|a| *a = -*a);
    }
}

/// Single-site `⟨σᶻ_i⟩` and `⟨σˣ_i⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteExpectations<T> {
    pub z: Vec<T>,
    pub x: Vec<T>,
}

pub fn site_expectations<T: Scalar>(amplitudes: &[T]) -> SiteExpectations<T> {
    let n = amplitudes.len().trailing_zeros() as usize;
    let mut z = vec![T::zero(); n];
    let mut x = vec![T::zero(); n];
    for (s, &a) in amplitudes.iter().enumerate() {
        let p = a * a;
        for i in 0..n {
            let bit = 1 << i;
            if s & bit == 0 {
                z[i] += p;
            } else {
                z[i] -= p;
            }
            x[i] += a * amplitudes[s ^ bit];
        }
    }
    SiteExpectations { z, x }
}
