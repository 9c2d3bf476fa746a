//! Reduced density matrices of a pure state, von Neumann entropies, pairwise
//! mutual information and the partial projective-measurement channel.
//!
//! Single-site matrices use the basis `{↑, ↓}`; pair matrices for `(i, j)`
//! use `{↑↑, ↑↓, ↓↑, ↓↓}` with site `i` as the first (most significant)
//! factor. Everything is real because the Hamiltonian is real-symmetric in
//! the z basis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::sym_eigenvalues;
use crate::scalar::Scalar;

/// Measurement axis of an attack.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    X,
    Z,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::X => "x",
            Direction::Z => "z",
        }
    }
}

/// How attacked nodes are picked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetStrategy {
    Random,
    /// Probability proportional to the emergent weighted degree.
    Preferential,
}

impl TargetStrategy {
    pub fn label(self) -> &'static str {
        match self {
            TargetStrategy::Random => "random",
            TargetStrategy::Preferential => "preferential",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSpec {
    pub direction: Direction,
    /// Measurement strength; coherences shrink by `1 − q`.
    pub q: f64,
    pub fraction: f64,
    pub strategy: TargetStrategy,
}

impl AttackSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.q) {
            return Err(Error::InvalidParameter(format!(
                "attack strength q={} outside [0,1]",
                self.q
            )));
        }
        if !(0.0..=1.0).contains(&self.fraction) {
            return Err(Error::InvalidParameter(format!(
                "attack fraction {} outside [0,1]",
                self.fraction
            )));
        }
        Ok(())
    }

    /// True when the channel is the identity or no node gets attacked.
    pub fn is_noop(&self) -> bool {
        self.q == 0.0 || self.fraction == 0.0
    }
}

/// 2×2 single-spin density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiteRdm<T>(pub [[T; 2]; 2]);

/// 4×4 two-spin density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairRdm<T>(pub [[T; 4]; 4]);

/// Scales every element off-diagonal in the index bit `bit`, after rotating
/// that bit into the measurement eigenbasis.
fn dephase<T: Scalar, const D: usize>(m: &mut [[T; D]; D], bit: usize, direction: Direction, q: T) {
    let keep = T::one() - q;
    match direction {
        Direction::Z => {
            for (r, row) in m.iter_mut().enumerate() {
                for (c, v) in row.iter_mut().enumerate() {
                    if (r ^ c) & bit != 0 {
                        *v *= keep;
                    }
                }
            }
        }
        Direction::X => {
            hadamard_conj(m, bit);
            dephase(m, bit, Direction::Z, q);
            hadamard_conj(m, bit);
        }
    }
}

/// `m ← U m U` with `U` the Hadamard acting on index bit `bit`.
fn hadamard_conj<T: Scalar, const D: usize>(m: &mut [[T; D]; D], bit: usize) {
    let r2 = T::one() / T::lit(2.0).sqrt();
    let u = |r: usize, k: usize| -> T {
        if (r & !bit) != (k & !bit) {
            T::zero()
        } else if r & bit != 0 && k & bit != 0 {
            -r2
        } else {
            r2
        }
    };
    let mut tmp = [[T::zero(); D]; D];
    for (r, row) in tmp.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = (0..D).map(|k| u(r, k) * m[k][c]).sum();
        }
    }
    for (r, row) in m.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = (0..D).map(|k| tmp[r][k] * u(k, c)).sum();
        }
    }
}

fn flatten<T: Scalar, const D: usize>(m: &[[T; D]; D]) -> Vec<T> {
    m.iter().flat_map(|r| r.iter().copied()).collect()
}

fn check_valid<T: Scalar, const D: usize>(m: &[[T; D]; D]) -> Result<()> {
    let tr: T = (0..D).map(|k| m[k][k]).sum();
    let tol = T::scaled_tol(1e-10);
    if (tr - T::one()).abs() > tol {
        return Err(Error::InvalidParameter(format!(
            "density matrix trace {tr} != 1"
        )));
    }
    for r in 0..D {
        for c in 0..r {
            if (m[r][c] - m[c][r]).abs() > tol {
                return Err(Error::InvalidParameter(
                    "density matrix not symmetric".into(),
                ));
            }
        }
    }
    let min = sym_eigenvalues(&flatten(m), D)[0];
    if min < -T::scaled_tol(1e-9) {
        return Err(Error::NotPositive(min.to_f64_lossy()));
    }
    Ok(())
}

/// `−Σ λ log₂ λ` with `0 log 0 = 0`. Eigenvalues down to `−1e-9` are read as
/// rounding noise and clamped to zero; anything more negative is an error.
fn entropy_of<T: Scalar>(flat: &[T], d: usize) -> Result<T> {
    let mut s = T::zero();
    for lam in sym_eigenvalues(flat, d) {
        if lam < -T::scaled_tol(1e-9) {
            return Err(Error::NotPositive(lam.to_f64_lossy()));
        }
        if lam > T::zero() {
            s -= lam * lam.log2();
        }
    }
    Ok(s)
}

impl<T: Scalar> SiteRdm<T> {
    pub fn from_bloch(z: T, x: T) -> Self {
        let h = T::lit(0.5);
        SiteRdm([[h * (T::one() + z), h * x], [h * x, h * (T::one() - z)]])
    }

    pub fn entropy(&self) -> Result<T> {
        entropy_of(&flatten(&self.0), 2)
    }

    pub fn validate(&self) -> Result<()> {
        check_valid(&self.0)
    }

    pub fn attacked(&self, direction: Direction, q: T) -> Self {
        let mut m = self.0;
        dephase(&mut m, 1, direction, q);
        SiteRdm(m)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut d = T::zero();
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.0[r][c] - other.0[r][c]).abs());
            }
        }
        d
    }
}

impl<T: Scalar> PairRdm<T> {
    pub fn entropy(&self) -> Result<T> {
        entropy_of(&flatten(&self.0), 4)
    }

    pub fn validate(&self) -> Result<()> {
        check_valid(&self.0)
    }

    /// `ρ_i = Tr_j ρ_ij`.
    pub fn trace_second(&self) -> SiteRdm<T> {
        let m = &self.0;
        SiteRdm([
            [m[0][0] + m[1][1], m[0][2] + m[1][3]],
            [m[2][0] + m[3][1], m[2][2] + m[3][3]],
        ])
    }

    /// `ρ_j = Tr_i ρ_ij`.
    pub fn trace_first(&self) -> SiteRdm<T> {
        let m = &self.0;
        SiteRdm([
            [m[0][0] + m[2][2], m[0][1] + m[2][3]],
            [m[1][0] + m[3][2], m[1][1] + m[3][3]],
        ])
    }

    /// Applies the measurement channel to the first and/or second site.
    /// Attacking both composes, so doubly off-diagonal coherences gain
    /// `(1−q)²`.
    pub fn attacked(&self, first: bool, second: bool, direction: Direction, q: T) -> Self {
        let mut m = self.0;
        if first {
            dephase(&mut m, 2, direction, q);
        }
        if second {
            dephase(&mut m, 1, direction, q);
        }
        PairRdm(m)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut d = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                d = d.max((self.0[r][c] - other.0[r][c]).abs());
            }
        }
        d
    }
}

fn sites_of(len: usize) -> usize {
    len.trailing_zeros() as usize
}

#[inline]
fn insert_zero(x: usize, bit: usize) -> usize {
    let low = x & ((1 << bit) - 1);
    ((x >> bit) << (bit + 1)) | low
}

/// `ρ_i = Tr_{k≠i} |ψ⟩⟨ψ|`.
pub fn reduce_single<T: Scalar>(amplitudes: &[T], i: usize) -> Result<SiteRdm<T>> {
    let n = sites_of(amplitudes.len());
    if i >= n {
        return Err(Error::NodeOutOfRange { index: i, n });
    }
    let mut m = [[T::zero(); 2]; 2];
    for r in 0..amplitudes.len() / 2 {
        let s = insert_zero(r, i);
        let a = [amplitudes[s], amplitudes[s | (1 << i)]];
        m[0][0] += a[0] * a[0];
        m[0][1] += a[0] * a[1];
        m[1][1] += a[1] * a[1];
    }
    m[1][0] = m[0][1];
    Ok(SiteRdm(m))
}

/// `ρ_ij = Tr_{k≠i,j} |ψ⟩⟨ψ|`.
pub fn reduce_pair<T: Scalar>(amplitudes: &[T], i: usize, j: usize) -> Result<PairRdm<T>> {
    let n = sites_of(amplitudes.len());
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::NodeOutOfRange { index: idx, n });
        }
    }
    if i == j {
        return Err(Error::SameNode(i));
    }
    let (lo, hi) = (i.min(j), i.max(j));
    let (bi, bj) = (1usize << i, 1usize << j);
    let mut m = [[T::zero(); 4]; 4];
    for r in 0..amplitudes.len() / 4 {
        let s = insert_zero(insert_zero(r, lo), hi);
        let a = [
            amplitudes[s],
            amplitudes[s | bj],
            amplitudes[s | bi],
            amplitudes[s | bi | bj],
        ];
        for p in 0..4 {
            for q in p..4 {
                m[p][q] += a[p] * a[q];
            }
        }
    }
    for p in 0..4 {
        for q in 0..p {
            m[p][q] = m[q][p];
        }
    }
    Ok(PairRdm(m))
}

pub fn von_neumann_entropy_site<T: Scalar>(rdm: &SiteRdm<T>) -> Result<T> {
    rdm.entropy()
}

pub fn von_neumann_entropy_pair<T: Scalar>(rdm: &PairRdm<T>) -> Result<T> {
    rdm.entropy()
}

/// `I = (S_i + S_j − S_ij)/2` in bits.
///
/// `rho_i`/`rho_j` must be the partial traces of `rho_ij` within `1e-10`.
/// Values within `1e-10` outside `[0, 1]` are clamped.
pub fn mutual_information<T: Scalar>(
    rho_i: &SiteRdm<T>,
    rho_j: &SiteRdm<T>,
    rho_ij: &PairRdm<T>,
) -> Result<T> {
    let gap = rho_ij
        .trace_second()
        .max_abs_diff(rho_i)
        .max(rho_ij.trace_first().max_abs_diff(rho_j));
    if gap > T::scaled_tol(1e-10) {
        return Err(Error::PartialTraceMismatch(gap.to_f64_lossy()));
    }
    mi_from_entropies(rho_i.entropy()?, rho_j.entropy()?, rho_ij.entropy()?)
}

pub(crate) fn mi_from_entropies<T: Scalar>(si: T, sj: T, sij: T) -> Result<T> {
    let mi = T::lit(0.5) * (si + sj - sij);
    let tol = T::scaled_tol(1e-10);
    if mi < -tol || mi > T::one() + tol {
        return Err(Error::MutualInformationRange(mi.to_f64_lossy()));
    }
    Ok(mi.max(T::zero()).min(T::one()))
}

/// Which sites of a pair matrix to attack.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalSites {
    None,
    First,
    Second,
    Both,
}

impl LocalSites {
    pub fn from_flags(first: bool, second: bool) -> Self {
        match (first, second) {
            (false, false) => LocalSites::None,
            (true, false) => LocalSites::First,
            (false, true) => LocalSites::Second,
            (true, true) => LocalSites::Both,
        }
    }

    pub fn flags(self) -> (bool, bool) {
        match self {
            LocalSites::None => (false, false),
            LocalSites::First => (true, false),
            LocalSites::Second => (false, true),
            LocalSites::Both => (true, true),
        }
    }
}

pub fn apply_attack_channel<T: Scalar>(
    rdm: &PairRdm<T>,
    sites: LocalSites,
    direction: Direction,
    q: T,
) -> PairRdm<T> {
    let (a, b) = sites.flags();
    rdm.attacked(a, b, direction, q)
}

/// `ρ_ij` after measuring every node in `attacked_nodes`.
///
/// The channel is local and trace preserving, so only the attacked members
/// of `{i, j}` matter; attacks elsewhere vanish under the partial trace.
pub fn attacked_pair_rdm<T: Scalar>(
    amplitudes: &[T],
    i: usize,
    j: usize,
    attacked_nodes: &[usize],
    spec: &AttackSpec,
) -> Result<PairRdm<T>> {
    spec.validate()?;
    let rho = reduce_pair(amplitudes, i, j)?;
    let first = attacked_nodes.contains(&i);
    let second = attacked_nodes.contains(&j);
    Ok(rho.attacked(first, second, spec.direction, T::lit(spec.q)))
}

/// Index of the unordered pair `i<j` in row-major upper-triangle order.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// All single-site and pair matrices of one state, extracted once.
#[derive(Clone, Debug)]
pub struct StateRdms<T> {
    pub n: usize,
    pub sites: Vec<SiteRdm<T>>,
    /// Indexed by [`pair_index`].
    pub pairs: Vec<PairRdm<T>>,
}

impl<T: Scalar> StateRdms<T> {
    pub fn from_state(amplitudes: &[T]) -> Result<Self> {
        let n = sites_of(amplitudes.len());
        let sites = (0..n)
            .into_par_iter()
            .map(|i| reduce_single(amplitudes, i))
            .collect::<Result<Vec<_>>>()?;
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        let pairs = pairs
            .into_par_iter()
            .map(|(i, j)| reduce_pair(amplitudes, i, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, sites, pairs })
    }

    pub fn pair(&self, i: usize, j: usize) -> &PairRdm<T> {
        &self.pairs[pair_index(self.n, i, j)]
    }
}
