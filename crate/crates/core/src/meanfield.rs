//! Mean-field theory of the transverse Ising ground state.
//!
//! Each spin is tilted in the x–z plane with magnetization `m = cos θ`; the
//! ground state is the symmetric superposition of the two tilted product
//! states. The uniform theory (every node of degree `Z`) has closed forms in
//! `λ = h/(ZJ)`; the general theory solves per-node magnetizations
//! self-consistently on the imprinted graph.
//!
//! The two-site matrices are written through their correlations,
//!
//! ```text
//! ρ_ij = ¼ (1 + c_zz σᶻσᶻ + a_i σˣ⊗1 + a_j 1⊗σˣ + a_i a_j σˣσˣ)
//! ```
//!
//! with `c_zz = m_i m_j`, `a = √(1−m²)`. An x̂ measurement of strength `q`
//! on a site shrinks `c_zz` by `1−q`; a ẑ measurement shrinks that site's
//! `a` by `1−q`.

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::minet::{moments, weighted_clustering, weighted_shortest_paths, MiNetwork};
use crate::quantum_state::{mutual_information, Direction, LocalSites, PairRdm, SiteRdm};
use crate::scalar::Scalar;

/// Uniform mean-field solution at a given `λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MfUniform<T> {
    pub lambda: T,
    /// Tilt from ẑ; `π/2` in the paramagnetic phase.
    pub theta: T,
    pub m: T,
}

pub fn mf_uniform<T: Scalar>(lambda: T) -> MfUniform<T> {
    if lambda < T::one() {
        MfUniform {
            lambda,
            theta: lambda.asin(),
            m: (T::one() - lambda * lambda).sqrt(),
        }
    } else {
        MfUniform {
            lambda,
            theta: T::lit(std::f64::consts::FRAC_PI_2),
            m: T::zero(),
        }
    }
}

/// Closed-form pair mutual information of the uniform theory:
///
/// `½ (1 − s log₂((1+s)/(1−s)) + (2−m²)/2 · log₂((2−m²)/m²))`, `s = √(1−m²)`,
/// with the endpoint limits `I(0) = 0` and `I(1) = ½`.
pub fn mf_uniform_mi<T: Scalar>(m: T) -> T {
    if m <= T::zero() {
        return T::zero();
    }
    if m >= T::one() {
        return T::lit(0.5);
    }
    let m2 = m * m;
    let s = (T::one() - m2).sqrt();
    let one_minus_s = m2 / (T::one() + s);
    let two = T::lit(2.0);
    let a = s * ((T::one() + s) / one_minus_s).log2();
    let b = (two - m2) / two * ((two - m2) / m2).log2();
    (T::lit(0.5) * (T::one() - a + b)).max(T::zero())
}

/// Mean network measures predicted by a mean-field model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MfMeasures<T> {
    /// `k/(n−1)`.
    pub degree: T,
    pub clustering: T,
    /// `+∞` when no pair is linked.
    pub distance: T,
}

/// Uniform theory: a fully connected network of weight `I_MF`, so
/// `k/(n−1) = C = I_MF` and `d = 1/I_MF`.
pub fn mf0_measures<T: Scalar>(lambda: T, _n: usize) -> MfMeasures<T> {
    let mi = mf_uniform_mi(mf_uniform(lambda).m);
    let distance = if mi > T::zero() {
        T::one() / mi
    } else {
        T::infinity()
    };
    MfMeasures {
        degree: mi,
        clustering: mi,
        distance,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MfOptions<T> {
    /// Converged when `max_i |Δm_i| < tol`.
    pub tol: T,
    pub max_iter: usize,
    /// Fraction of the previous iterate kept each step; 0 is plain iteration.
    pub mixing: T,
}

impl<T: Scalar> Default for MfOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::scaled_tol(1e-13),
            max_iter: 1_000_000,
            mixing: T::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MfGeneral<T> {
    pub m: Vec<T>,
    /// `max_i |m_i − x_i √(1−m_i²)|`, `x_i = (J/h) Σ_{j∈N(i)} m_j`: the
    /// self-consistency condition with its denominator cleared.
    pub residual: T,
    pub iterations: usize,
}

fn local_field<T: Scalar>(g: &Graph, m: &[T], i: usize, ratio: T) -> T {
    ratio * g.neighbors(i).iter().map(|&j| m[j]).sum::<T>()
}

fn self_consistency_residual<T: Scalar>(g: &Graph, m: &[T], ratio: T) -> T {
    (0..g.n())
        .map(|i| {
            let x = local_field(g, m, i, ratio);
            (m[i] - x * (T::one() - m[i] * m[i]).max(T::zero()).sqrt()).abs()
        })
        .fold(T::zero(), T::max)
}

/// Iterates `m_i ← (1 + x_i⁻²)^{-1/2}` from `m_i = 1`. A node whose
/// neighbours all have zero magnetization gets `m_i = 0`.
pub fn mf_general_solve<T: Scalar>(
    g: &Graph,
    coupling: T,
    field: T,
    opts: &MfOptions<T>,
) -> Result<MfGeneral<T>> {
    if !(coupling > T::zero()) || !(field >= T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "need J>0 and h>=0, got J={coupling}, h={field}"
        )));
    }
    let n = g.n();
    if field == T::zero() {
        return Ok(MfGeneral {
            m: vec![T::one(); n],
            residual: T::zero(),
            iterations: 0,
        });
    }
    let ratio = coupling / field;
    let mut m = vec![T::one(); n];
    let mut next = vec![T::zero(); n];
    let mut step = T::infinity();
    for it in 1..=opts.max_iter {
        step = T::zero();
        for i in 0..n {
            let x = local_field(g, &m, i, ratio);
            let target = if x > T::zero() {
                x / (T::one() + x * x).sqrt()
            } else {
                T::zero()
            };
            next[i] = (T::one() - opts.mixing) * target + opts.mixing * m[i];
            step = step.max((next[i] - m[i]).abs());
        }
        std::mem::swap(&mut m, &mut next);
        if step < opts.tol {
            let residual = self_consistency_residual(g, &m, ratio);
            return Ok(MfGeneral {
                m,
                residual,
                iterations: it,
            });
        }
    }
    Err(Error::MeanFieldNoConvergence {
        iterations: opts.max_iter,
        step: step.to_f64_lossy(),
    })
}

/// Single- and two-site matrices of a mean-field pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MfRdms<T> {
    pub site_i: SiteRdm<T>,
    pub site_j: SiteRdm<T>,
    pub pair: PairRdm<T>,
}

impl<T: Scalar> MfRdms<T> {
    pub fn mutual_information(&self) -> Result<T> {
        mutual_information(&self.site_i, &self.site_j, &self.pair)
    }
}

fn pair_from_correlations<T: Scalar>(zz: T, xi: T, xj: T) -> PairRdm<T> {
    let q = T::lit(0.25);
    let xx = xi * xj;
    let (hi, lo) = (q * (T::one() + zz), q * (T::one() - zz));
    let (a, b, c) = (q * xj, q * xi, q * xx);
    PairRdm([[hi, a, b, c], [a, lo, c, b], [b, c, lo, a], [c, b, a, hi]])
}

fn transverse<T: Scalar>(m: T) -> T {
    (T::one() - m * m).max(T::zero()).sqrt()
}

/// Mean-field matrices for magnetizations `m_i`, `m_j`.
pub fn mf_rdms<T: Scalar>(m_i: T, m_j: T) -> MfRdms<T> {
    mf_attacked_rdm(m_i, m_j, T::zero(), Direction::X, LocalSites::None)
}

/// Mean-field matrices after measuring the sites selected by `which`.
pub fn mf_attacked_rdm<T: Scalar>(
    m_i: T,
    m_j: T,
    q: T,
    direction: Direction,
    which: LocalSites,
) -> MfRdms<T> {
    let keep = T::one() - q;
    let (hit_i, hit_j) = which.flags();
    let (mut zz, mut xi, mut xj) = (m_i * m_j, transverse(m_i), transverse(m_j));
    match direction {
        Direction::X => {
            for hit in [hit_i, hit_j] {
                if hit {
                    zz *= keep;
                }
            }
        }
        Direction::Z => {
            if hit_i {
                xi *= keep;
            }
            if hit_j {
                xj *= keep;
            }
        }
    }
    MfRdms {
        site_i: SiteRdm::from_bloch(T::zero(), xi),
        site_j: SiteRdm::from_bloch(T::zero(), xj),
        pair: pair_from_correlations(zz, xi, xj),
    }
}

/// All-pairs emergent network of a general mean-field solution.
pub fn mf_mi_network<T: Scalar>(m: &[T]) -> Result<MiNetwork<T>> {
    let n = m.len();
    let mut net = MiNetwork::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            net.set(i, j, mf_rdms(m[i], m[j]).mutual_information()?);
        }
    }
    Ok(net)
}

/// Emergent network of a general mean-field solution after measuring the
/// nodes flagged in `attacked`.
pub fn mf_attacked_network<T: Scalar>(
    m: &[T],
    attacked: &[bool],
    q: T,
    direction: Direction,
) -> Result<MiNetwork<T>> {
    let n = m.len();
    if attacked.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} attack flags for {n} nodes",
            attacked.len()
        )));
    }
    let mut net = MiNetwork::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let which = LocalSites::from_flags(attacked[i], attacked[j]);
            net.set(
                i,
                j,
                mf_attacked_rdm(m[i], m[j], q, direction, which).mutual_information()?,
            );
        }
    }
    Ok(net)
}

/// Uniform-theory means after measuring a fraction `f` of the nodes.
///
/// Pair weights take three values: neither end attacked, one end, both.
/// The degree uses the expected pair fractions `(1−f)², 2f(1−f), f²`;
/// clustering and distance are evaluated on the fully connected
/// three-valued network with `round(f·n)` attacked nodes.
pub fn mf0_attacked_mean_measures<T: Scalar>(
    lambda: T,
    n: usize,
    fraction: T,
    q: T,
    direction: Direction,
) -> Result<MfMeasures<T>> {
    let m = mf_uniform(lambda).m;
    let i00 = mf_attacked_rdm(m, m, q, direction, LocalSites::None).mutual_information()?;
    let i10 = mf_attacked_rdm(m, m, q, direction, LocalSites::First).mutual_information()?;
    let i11 = mf_attacked_rdm(m, m, q, direction, LocalSites::Both).mutual_information()?;
    let f = fraction;
    let two = T::lit(2.0);
    let degree =
        (T::one() - f) * (T::one() - f) * i00 + two * f * (T::one() - f) * i10 + f * f * i11;

    let attacked = (fraction.to_f64_lossy() * n as f64).round() as usize;
    let net = three_valued_network(n, attacked, i00, i10, i11);
    let c = weighted_clustering(&net);
    let clustering = c.iter().copied().sum::<T>() / T::lit(n as f64);
    let d: Vec<T> = weighted_shortest_paths(&net).pair_values().collect();
    let distance = match moments(&d) {
        Ok(mm) => T::lit(mm.mean),
        Err(_) => T::infinity(),
    };
    Ok(MfMeasures {
        degree,
        clustering,
        distance,
    })
}

/// Fully connected network whose first `attacked` nodes are measured.
pub fn three_valued_network<T: Scalar>(
    n: usize,
    attacked: usize,
    i00: T,
    i10: T,
    i11: T,
) -> MiNetwork<T> {
    let mut net = MiNetwork::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let w = match ((i < attacked) as u8) + ((j < attacked) as u8) {
                0 => i00,
                1 => i10,
                _ => i11,
            };
            net.set(i, j, w);
        }
    }
    net
}
