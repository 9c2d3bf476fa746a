//! The emergent mutual-information network and its weighted measures.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum_state::{mi_from_entropies, pair_index, Direction, StateRdms};
use crate::scalar::Scalar;

/// Weights below this are treated as missing links when finding paths.
pub const PATH_THRESHOLD: f64 = 1e-12;

/// Symmetric all-pairs weight matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct MiNetwork<T> {
    n: usize,
    weights: Vec<T>,
}

/// A measurement attack applied while building a network.
#[derive(Clone, Copy, Debug)]
pub struct ActiveAttack<'a> {
    pub direction: Direction,
    pub q: f64,
    /// `attacked[i]` marks measured nodes.
    pub attacked: &'a [bool],
}

impl<T: Scalar> MiNetwork<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            weights: vec![T::zero(); n * n],
        }
    }

    /// Network with every off-diagonal weight equal to `c`.
    pub fn uniform(n: usize, c: T) -> Self {
        let mut net = Self::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                net.set(i, j, c);
            }
        }
        net
    }

    /// From a full `n×n` row-major matrix; must be symmetric, nonnegative
    /// and zero on the diagonal.
    pub fn from_matrix(n: usize, weights: Vec<T>) -> Result<Self> {
        if weights.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "expected {} weights, got {}",
                n * n,
                weights.len()
            )));
        }
        for i in 0..n {
            if weights[i * n + i] != T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "nonzero self-weight at {i}"
                )));
            }
            for j in 0..n {
                let w = weights[i * n + j];
                if w < T::zero() || w != weights[j * n + i] {
                    return Err(Error::InvalidParameter(format!(
                        "weight ({i},{j}) negative or asymmetric"
                    )));
                }
            }
        }
        Ok(Self { n, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.weights[i * self.n + j]
    }

    /// Sets the symmetric weight of `(i, j)`, `i != j`.
    pub fn set(&mut self, i: usize, j: usize, w: T) {
        assert!(i != j, "self-weight is fixed at zero");
        self.weights[i * self.n + j] = w;
        self.weights[j * self.n + i] = w;
    }

    pub fn as_matrix(&self) -> &[T] {
        &self.weights
    }

    /// `i,j,mi` rows for every nonzero unordered pair, after a `# schema=1` line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("# schema=1\ni,j,mi\n");
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let w = self.get(i, j);
                if w != T::zero() {
                    let _ = writeln!(s, "{i},{j},{}", w.to_f64_lossy());
                }
            }
        }
        s
    }

    pub fn from_csv(n: usize, text: &str) -> Result<Self> {
        let mut net = Self::zeros(n);
        let mut header_seen = false;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header_seen {
                if line != "i,j,mi" {
                    return Err(Error::Parse {
                        line: idx + 1,
                        msg: format!("expected header `i,j,mi`, got `{line}`"),
                    });
                }
                header_seen = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let bad = || Error::Parse {
                line: idx + 1,
                msg: format!("malformed row `{line}`"),
            };
            if fields.len() != 3 {
                return Err(bad());
            }
            let i: usize = fields[0].parse().map_err(|_| bad())?;
            let j: usize = fields[1].parse().map_err(|_| bad())?;
            let w: f64 = fields[2].parse().map_err(|_| bad())?;
            if i >= n || j >= n || i == j || w < 0.0 {
                return Err(bad());
            }
            net.set(i, j, T::lit(w));
        }
        Ok(net)
    }
}

/// JSON sidecar written next to a network CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSidecar {
    pub n: usize,
    pub threshold: f64,
    pub provenance: String,
}

/// Builds the emergent network of a state from its reduced matrices,
/// optionally after an attack.
pub fn build_mi_network<T: Scalar>(
    rdms: &StateRdms<T>,
    attack: Option<ActiveAttack<'_>>,
) -> Result<MiNetwork<T>> {
    build_inner(rdms, attack, None)
}

/// Same as [`build_mi_network`] with an attack, reusing `base` (the
/// un-attacked network of the same state) for pairs with no attacked end.
pub fn build_attacked_from_base<T: Scalar>(
    rdms: &StateRdms<T>,
    attack: ActiveAttack<'_>,
    base: &MiNetwork<T>,
) -> Result<MiNetwork<T>> {
    build_inner(rdms, Some(attack), Some(base))
}

fn build_inner<T: Scalar>(
    rdms: &StateRdms<T>,
    attack: Option<ActiveAttack<'_>>,
    base: Option<&MiNetwork<T>>,
) -> Result<MiNetwork<T>> {
    let n = rdms.n;
    let flag = |i: usize| attack.map(|a| a.attacked[i]).unwrap_or(false);
    let site_entropy = rdms
        .sites
        .iter()
        .enumerate()
        .map(|(i, r)| match attack {
            Some(a) if a.attacked[i] => r.attacked(a.direction, T::lit(a.q)).entropy(),
            _ => r.entropy(),
        })
        .collect::<Result<Vec<T>>>()?;
    let mut net = MiNetwork::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let (fi, fj) = (flag(i), flag(j));
            let w = match (base, fi || fj) {
                (Some(b), false) => b.get(i, j),
                _ => {
                    let rho = &rdms.pairs[pair_index(n, i, j)];
                    let rho = match attack {
                        Some(a) if fi || fj => rho.attacked(fi, fj, a.direction, T::lit(a.q)),
                        _ => *rho,
                    };
                    mi_from_entropies(site_entropy[i], site_entropy[j], rho.entropy()?)?
                }
            };
            net.set(i, j, w);
        }
    }
    Ok(net)
}

/// `k_i = Σ_j I_ij`.
pub fn weighted_degree<T: Scalar>(net: &MiNetwork<T>) -> Vec<T> {
    (0..net.n)
        .map(|i| (0..net.n).map(|j| net.get(i, j)).sum())
        .collect()
}

/// `C_i = Σ_{j≠k} I_ij I_jk I_ki / Σ_{j≠k} I_ij I_ik` over ordered pairs
/// with `j, k ≠ i`; zero when the denominator vanishes.
pub fn weighted_clustering<T: Scalar>(net: &MiNetwork<T>) -> Vec<T> {
    let n = net.n;
    (0..n)
        .map(|i| {
            let mut num = T::zero();
            let mut den = T::zero();
            for j in 0..n {
                if j == i {
                    continue;
                }
                let wij = net.get(i, j);
                if wij == T::zero() {
                    continue;
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let wik = net.get(i, k);
                    num += wij * net.get(j, k) * wik;
                    den += wij * wik;
                }
            }
            if den > T::zero() {
                num / den
            } else {
                T::zero()
            }
        })
        .collect()
}

/// All-pairs shortest paths with link length `1/I_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct PathLengths<T> {
    pub n: usize,
    /// Row-major; `+∞` for unreachable pairs.
    pub distance: Vec<T>,
    /// Number of unordered pairs `i<j` with a finite distance.
    pub reachable_pairs: usize,
}

impl<T: Scalar> PathLengths<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        self.distance[i * self.n + j]
    }

    /// Distances of unordered pairs `i<j`, including infinite ones.
    pub fn pair_values(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| self.get(i, j)))
    }
}

/// Dijkstra from every source; weights below [`PATH_THRESHOLD`] are absent.
pub fn weighted_shortest_paths<T: Scalar>(net: &MiNetwork<T>) -> PathLengths<T> {
    let n = net.n;
    let threshold = T::lit(PATH_THRESHOLD);
    let mut distance = vec![T::infinity(); n * n];
    for s in 0..n {
        let row = &mut distance[s * n..(s + 1) * n];
        let mut done = vec![false; n];
        row[s] = T::zero();
        for _ in 0..n {
            let mut u = None;
            for v in 0..n {
                if !done[v] && row[v].is_finite() && u.map_or(true, |u: usize| row[v] < row[u]) {
                    u = Some(v);
                }
            }
            let Some(u) = u else { break };
            done[u] = true;
            for v in 0..n {
                let w = net.get(u, v);
                if v == u || done[v] || w < threshold {
                    continue;
                }
                let alt = row[u] + T::one() / w;
                if alt < row[v] {
                    row[v] = alt;
                }
            }
        }
    }
    let mut reachable_pairs = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if distance[i * n + j].is_finite() {
                reachable_pairs += 1;
            }
        }
    }
    PathLengths {
        n,
        distance,
        reachable_pairs,
    }
}

/// Mean, population standard deviation and skewness of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureMoments {
    pub mean: f64,
    pub width: f64,
    pub skew: f64,
    pub count: usize,
    /// Infinite samples left out of the statistics.
    pub excluded: usize,
}

/// Two-pass moments of the finite samples; `±∞` entries are excluded and
/// counted. Skewness is zero whenever the width is zero.
pub fn moments<T: Scalar>(samples: &[T]) -> Result<MeasureMoments> {
    let finite: Vec<f64> = samples
        .iter()
        .map(|x| x.to_f64_lossy())
        .filter(|x| x.is_finite())
        .collect();
    let excluded = samples.len() - finite.len();
    if finite.is_empty() {
        return Err(Error::EmptySample);
    }
    let count = finite.len();
    let nf = count as f64;
    let mean = finite.iter().sum::<f64>() / nf;
    let (mut m2, mut m3) = (0.0, 0.0);
    for x in &finite {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= nf;
    m3 /= nf;
    let mut width = m2.sqrt();
    // spread at the level of rounding in the mean is a constant sample
    if width <= 4.0 * f64::EPSILON * mean.abs() {
        width = 0.0;
    }
    let skew = if width == 0.0 {
        0.0
    } else {
        m3 / (width * width * width)
    };
    Ok(MeasureMoments {
        mean,
        width,
        skew,
        count,
        excluded,
    })
}
