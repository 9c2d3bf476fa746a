//! Imprinted networks: ER, WS and BA generators, unweighted measures and
//! classical node removal.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    links: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from unordered pairs. Pairs may be given in either
    /// orientation; self-loops, duplicates and out-of-range labels are errors.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::NodeOutOfRange { index: a.max(b), n });
            }
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop at node {a}")));
            }
            let key = (a.min(b), a.max(b));
            if !set.insert(key) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate link {} {}",
                    key.0, key.1
                )));
            }
        }
        Ok(Self::from_set(n, set))
    }

    fn from_set(n: usize, set: BTreeSet<(usize, usize)>) -> Self {
        let links: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &links {
            adj[a].push(b);
            adj[b].push(a);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Self { n, links, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_set(n, BTreeSet::new())
    }

    pub fn complete(n: usize) -> Self {
        let set = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        Self::from_set(n, set)
    }

    pub fn path(n: usize) -> Self {
        let set = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_set(n, set)
    }

    pub fn star(n: usize) -> Self {
        let set = (1..n).map(|i| (0, i)).collect();
        Self::from_set(n, set)
    }

    /// Ring where every node links to its `k/2` nearest neighbours per side.
    pub fn ring_lattice(n: usize, k: usize) -> Result<Self> {
        if k % 2 != 0 || k >= n {
            return Err(Error::InvalidParameter(format!(
                "ring lattice needs even K < n, got K={k}, n={n}"
            )));
        }
        let mut set = BTreeSet::new();
        for i in 0..n {
            for d in 1..=k / 2 {
                let j = (i + d) % n;
                set.insert((i.min(j), i.max(j)));
            }
        }
        Ok(Self::from_set(n, set))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Links as `(i, j)` with `i < j`, sorted.
    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_link(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    /// Average degree `Σ k̃_i / n`.
    pub fn coordination_number(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            2.0 * self.links.len() as f64 / self.n as f64
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        bfs(self, 0).iter().all(Option::is_some)
    }

    /// `n=<count>` header followed by one `i j` line per link.
    pub fn to_text(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        for &(a, b) in &self.links {
            let _ = writeln!(s, "{a} {b}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty graph file".into(),
        })?;
        let n: usize = header
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or(Error::Parse {
                line: 1,
                msg: format!("expected `n=<count>`, got `{header}`"),
            })?;
        let mut pairs = Vec::new();
        for (idx, line) in lines {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            let parsed = match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) if a < b => Some((a, b)),
                _ => None,
            };
            let pair = parsed.ok_or(Error::Parse {
                line: idx + 1,
                msg: format!("expected `i j` with i<j, got `{line}`"),
            })?;
            pairs.push(pair);
        }
        Self::new(n, pairs).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }
}

/// Network model and its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphModel {
    #[serde(rename = "er")]
    ErdosRenyi { p: f64 },
    #[serde(rename = "ws")]
    WattsStrogatz { k: usize, p: f64 },
    #[serde(rename = "ba")]
    BarabasiAlbert { m: usize },
}

impl GraphModel {
    pub fn label(&self) -> &'static str {
        match self {
            GraphModel::ErdosRenyi { .. } => "ER",
            GraphModel::WattsStrogatz { .. } => "WS",
            GraphModel::BarabasiAlbert { .. } => "BA",
        }
    }

    /// Ensemble-nominal coordination number: `(n-1)p`, `K`, or `2m(n-m)/n`.
    pub fn nominal_z(&self, n: usize) -> f64 {
        match *self {
            GraphModel::ErdosRenyi { p } => (n as f64 - 1.0) * p,
            GraphModel::WattsStrogatz { k, .. } => k as f64,
            GraphModel::BarabasiAlbert { m } => 2.0 * (m * (n - m)) as f64 / n as f64,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if n == 0 {
            return bad("n must be at least 1".into());
        }
        match *self {
            GraphModel::ErdosRenyi { p } if !(0.0..=1.0).contains(&p) => {
                bad(format!("ER p={p} outside [0,1]"))
            }
            GraphModel::WattsStrogatz { k, .. } if k % 2 != 0 => {
                bad(format!("WS K={k} must be even"))
            }
            GraphModel::WattsStrogatz { k, .. } if k == 0 || k >= n => {
                bad(format!("WS needs 0<K<n, got K={k}, n={n}"))
            }
            GraphModel::WattsStrogatz { p, .. } if !(0.0..=1.0).contains(&p) => {
                bad(format!("WS p={p} outside [0,1]"))
            }
            GraphModel::BarabasiAlbert { m } if m == 0 || m >= n => {
                bad(format!("BA needs 1<=m<n, got m={m}, n={n}"))
            }
            _ => Ok(()),
        }
    }

    /// The reference parameters for a given size: ER keeps `Z≈4.94`
    /// (p=0.26 at n=20), WS uses K=4, p=0.5 and BA uses m=3.
    pub fn default_er(n: usize) -> Self {
        GraphModel::ErdosRenyi {
            p: (4.94 / (n as f64 - 1.0)).min(1.0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphModelSpec {
    pub model: GraphModel,
    pub n: usize,
    #[serde(default)]
    pub require_connected: bool,
}

/// A generated graph and how many disconnected draws were discarded first.
#[derive(Clone, Debug)]
pub struct Sampled {
    pub graph: Graph,
    pub rejections: usize,
}

const MAX_REJECTIONS: usize = 100_000;

impl GraphModelSpec {
    pub fn validate(&self) -> Result<()> {
        self.model.validate(self.n)
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Sampled> {
        self.validate()?;
        let mut rejections = 0;
        loop {
            let graph = match self.model {
                GraphModel::ErdosRenyi { p } => gen_erdos_renyi(self.n, p, rng),
                GraphModel::WattsStrogatz { k, p } => gen_watts_strogatz(self.n, k, p, rng)?,
                GraphModel::BarabasiAlbert { m } => gen_barabasi_albert(self.n, m, rng)?,
            };
            if !self.require_connected || graph.is_connected() {
                return Ok(Sampled { graph, rejections });
            }
            rejections += 1;
            if rejections >= MAX_REJECTIONS {
                return Err(Error::InvalidParameter(format!(
                    "no connected {} graph after {MAX_REJECTIONS} draws",
                    self.model.label()
                )));
            }
        }
    }
}

/// Erdős–Rényi G(n, p): every pair linked independently with probability `p`.
pub fn gen_erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut set = BTreeSet::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                set.insert((i, j));
            }
        }
    }
    Graph::from_set(n, set)
}

/// Watts–Strogatz: ring lattice with `k/2` neighbours per side, then each
/// original link `(i, i+d)` is rewired with probability `p` to `(i, j')`,
/// `j'` uniform among nodes that are neither `i` nor already adjacent to it.
pub fn gen_watts_strogatz<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    p: f64,
    rng: &mut R,
) -> Result<Graph> {
    GraphModel::WattsStrogatz { k, p }.validate(n)?;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        for d in 1..=k / 2 {
            let j = (i + d) % n;
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }
    for d in 1..=k / 2 {
        for i in 0..n {
            let j = (i + d) % n;
            if rng.gen::<f64>() >= p {
                continue;
            }
            let candidates: Vec<usize> =
                (0..n).filter(|&c| c != i && !adj[i].contains(&c)).collect();
            if candidates.is_empty() {
                continue;
            }
            let target = candidates[rng.gen_range(0..candidates.len())];
            adj[i].remove(&j);
            adj[j].remove(&i);
            adj[i].insert(target);
            adj[target].insert(i);
        }
    }
    let set = adj
        .iter()
        .enumerate()
        .flat_map(|(i, nb)| nb.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .collect();
    Ok(Graph::from_set(n, set))
}

/// Barabási–Albert: `m` isolated seeds, then each new node attaches to `m`
/// distinct existing nodes drawn with probability proportional to degree
/// (uniformly while all degrees are zero). Always `m(n-m)` links.
pub fn gen_barabasi_albert<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    GraphModel::BarabasiAlbert { m }.validate(n)?;
    let mut degree = vec![0usize; n];
    let mut set = BTreeSet::new();
    for new in m..n {
        let mut weights: Vec<f64> = degree[..new].iter().map(|&d| d as f64).collect();
        if weights.iter().all(|&w| w == 0.0) {
            weights.iter_mut().for_each(|w| *w = 1.0);
        }
        for target in weighted_sample_without_replacement(&weights, m, rng) {
            set.insert((target, new));
            degree[target] += 1;
            degree[new] += 1;
        }
    }
    Ok(Graph::from_set(n, set))
}

/// Sequential weighted draws without replacement; weights are fixed, chosen
/// items drop out of the pool. If every remaining weight is zero the rest
/// are drawn uniformly.
pub fn weighted_sample_without_replacement<R: Rng + ?Sized>(
    weights: &[f64],
    count: usize,
    rng: &mut R,
) -> Vec<usize> {
    let count = count.min(weights.len());
    let mut alive: Vec<usize> = (0..weights.len()).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let total: f64 = alive.iter().map(|&i| weights[i]).sum();
        let pos = if total > 0.0 {
            let mut r = rng.gen::<f64>() * total;
            let mut pick = None;
            for (pos, &i) in alive.iter().enumerate() {
                if weights[i] <= 0.0 {
                    continue;
                }
                if r < weights[i] {
                    pick = Some(pos);
                    break;
                }
                r -= weights[i];
            }
            // rounding can leave r just above the last positive weight
            pick.unwrap_or_else(|| {
                alive
                    .iter()
                    .rposition(|&i| weights[i] > 0.0)
                    .expect("positive weight")
            })
        } else {
            rng.gen_range(0..alive.len())
        };
        out.push(alive.remove(pos));
    }
    out
}

/// Degree, clustering and hop distance of every node / pair.
#[derive(Clone, Debug, PartialEq)]
pub struct UnweightedMeasures {
    pub degree: Vec<usize>,
    pub clustering: Vec<f64>,
    /// `distance[i][j]`: hop count, `None` when unreachable.
    pub distance: Vec<Vec<Option<u32>>>,
}

impl UnweightedMeasures {
    /// Distances of unordered pairs `i<j`; unreachable pairs are counted
    /// separately.
    pub fn pair_distances(&self) -> (Vec<u32>, usize) {
        let mut finite = Vec::new();
        let mut unreachable = 0;
        for (i, row) in self.distance.iter().enumerate() {
            for d in &row[i + 1..] {
                match d {
                    Some(d) => finite.push(*d),
                    None => unreachable += 1,
                }
            }
        }
        (finite, unreachable)
    }
}

pub fn unweighted_measures(g: &Graph) -> UnweightedMeasures {
    let degree = g.degrees();
    let clustering = (0..g.n)
        .map(|i| {
            let nb = g.neighbors(i);
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut tri = 0usize;
            for (a, &u) in nb.iter().enumerate() {
                for &v in &nb[a + 1..] {
                    if g.has_link(u, v) {
                        tri += 1;
                    }
                }
            }
            tri as f64 / (k * (k - 1) / 2) as f64
        })
        .collect();
    let distance = (0..g.n).map(|s| bfs(g, s)).collect();
    UnweightedMeasures {
        degree,
        clustering,
        distance,
    }
}

fn bfs(g: &Graph, source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.n];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or(0);
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalStrategy {
    Random,
    /// Highest initial degree first, ties by ascending index.
    Targeted,
}

/// Removes `round(fraction·n)` nodes and their links; survivors are
/// relabelled `0..n'` in ascending original order.
pub fn remove_nodes<R: Rng + ?Sized>(
    g: &Graph,
    fraction: f64,
    strategy: RemovalStrategy,
    rng: &mut R,
) -> Result<Graph> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParameter(format!(
            "removal fraction {fraction} outside [0,1]"
        )));
    }
    let count = (fraction * g.n as f64).round() as usize;
    let removed: BTreeSet<usize> = match strategy {
        RemovalStrategy::Random => index::sample(rng, g.n, count).into_iter().collect(),
        RemovalStrategy::Targeted => {
            let mut order: Vec<usize> = (0..g.n).collect();
            order.sort_by_key(|&i| (std::cmp::Reverse(g.degree(i)), i));
            order.into_iter().take(count).collect()
        }
    };
    let mut relabel = vec![usize::MAX; g.n];
    let mut next = 0;
    for (i, slot) in relabel.iter_mut().enumerate() {
        if !removed.contains(&i) {
            *slot = next;
            next += 1;
        }
    }
    let set = g
        .links
        .iter()
        .filter(|(a, b)| !removed.contains(a) && !removed.contains(b))
        .map(|&(a, b)| (relabel[a], relabel[b]))
        .collect();
    Ok(Graph::from_set(next, set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Purpose};
    use proptest::prelude::*;

    fn rng(seed: u64) -> crate::rng::Stream {
        stream(seed, Purpose::Graph, &[])
    }

    #[test]
    fn er_extremes() {
        assert_eq!(gen_erdos_renyi(4, 1.0, &mut rng(1)), Graph::complete(4));
        assert_eq!(gen_erdos_renyi(4, 1.0, &mut rng(1)).link_count(), 6);
        assert_eq!(gen_erdos_renyi(4, 0.0, &mut rng(1)).link_count(), 0);
    }

    #[test]
    fn er_mean_coordination() {
        let spec = GraphModelSpec {
            model: GraphModel::ErdosRenyi { p: 0.26 },
            n: 20,
            require_connected: false,
        };
        let zs: Vec<f64> = (0..100)
            .map(|s| {
                spec.generate(&mut rng(s))
                    .unwrap()
                    .graph
                    .coordination_number()
            })
            .collect();
        let mean = zs.iter().sum::<f64>() / 100.0;
        // per-graph Z has sd 2*sqrt(190 p(1-p))/20 ≈ 0.6; ensemble mean sd ≈ 0.06
        assert!((mean - 4.94).abs() < 0.3, "mean Z {mean}");
    }

    #[test]
    fn er_rejection_yields_connected() {
        let spec = GraphModelSpec {
            model: GraphModel::ErdosRenyi { p: 0.15 },
            n: 20,
            require_connected: true,
        };
        let mut total_rej = 0;
        for s in 0..20 {
            let out = spec.generate(&mut rng(s)).unwrap();
            assert!(out.graph.is_connected());
            total_rej += out.rejections;
        }
        assert!(total_rej > 0);
    }

    #[test]
    fn ws_ring_lattice_at_p0() {
        let g = gen_watts_strogatz(20, 4, 0.0, &mut rng(2)).unwrap();
        assert_eq!(g, Graph::ring_lattice(20, 4).unwrap());
        let m = unweighted_measures(&g);
        assert!(m.degree.iter().all(|&d| d == 4));
        assert!(m.clustering.iter().all(|&c| (c - 0.5).abs() < 1e-15));
    }

    #[test]
    fn ws_link_count_and_min_degree() {
        for s in 0..50 {
            let g = gen_watts_strogatz(20, 4, 0.5, &mut rng(s)).unwrap();
            assert_eq!(g.link_count(), 40);
            let g1 = gen_watts_strogatz(20, 4, 1.0, &mut rng(s)).unwrap();
            assert_eq!(g1.link_count(), 40);
            assert!(g1.degrees().into_iter().min().unwrap() >= 2);
        }
    }

    #[test]
    fn ws_rejects_odd_k() {
        assert!(gen_watts_strogatz(20, 3, 0.5, &mut rng(0)).is_err());
    }

    #[test]
    fn ba_link_counts() {
        let g = gen_barabasi_albert(20, 3, &mut rng(3)).unwrap();
        assert_eq!(g.link_count(), 51);
        assert!((g.coordination_number() - 5.1).abs() < 1e-12);
        assert_eq!(
            gen_barabasi_albert(4, 2, &mut rng(3)).unwrap().link_count(),
            4
        );
        assert!(gen_barabasi_albert(4, 4, &mut rng(3)).is_err());
    }

    #[test]
    fn ba_has_heavier_tail_than_er() {
        let n = 54;
        let ba = GraphModel::BarabasiAlbert { m: 2 };
        let er = GraphModel::ErdosRenyi {
            p: ba.nominal_z(n) / (n as f64 - 1.0),
        };
        let max_deg = |model: GraphModel| -> f64 {
            let spec = GraphModelSpec {
                model,
                n,
                require_connected: false,
            };
            (0..200)
                .map(|s| {
                    *spec
                        .generate(&mut rng(s))
                        .unwrap()
                        .graph
                        .degrees()
                        .iter()
                        .max()
                        .unwrap() as f64
                })
                .sum::<f64>()
                / 200.0
        };
        assert!(max_deg(ba) > max_deg(er) + 2.0);
    }

    #[test]
    fn measures_on_small_graphs() {
        let m = unweighted_measures(&Graph::complete(4));
        assert!(m.degree.iter().all(|&d| d == 3));
        assert!(m.clustering.iter().all(|&c| c == 1.0));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.distance[i][j], Some(if i == j { 0 } else { 1 }));
            }
        }
        let p = unweighted_measures(&Graph::path(3));
        assert!(p.clustering.iter().all(|&c| c == 0.0));
        assert_eq!(p.distance[0][2], Some(2));
        let e = unweighted_measures(&Graph::empty(3));
        assert_eq!(e.pair_distances(), (vec![], 3));
    }

    #[test]
    fn removal_basics() {
        let g = Graph::complete(20);
        for strategy in [RemovalStrategy::Random, RemovalStrategy::Targeted] {
            assert_eq!(remove_nodes(&g, 0.0, strategy, &mut rng(0)).unwrap(), g);
            assert_eq!(
                remove_nodes(&g, 0.2, strategy, &mut rng(0)).unwrap(),
                Graph::complete(16)
            );
        }
        let star = Graph::star(6);
        let cut = remove_nodes(&star, 1.0 / 6.0, RemovalStrategy::Targeted, &mut rng(0)).unwrap();
        assert_eq!(cut, Graph::empty(5));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let g = gen_barabasi_albert(12, 2, &mut rng(9)).unwrap();
        assert_eq!(Graph::from_text(&g.to_text()).unwrap(), g);
        assert!(Graph::from_text("n=3\n0 0\n").is_err());
        assert!(Graph::from_text("n=3\n2 1\n").is_err());
        assert!(matches!(
            Graph::from_text("m=3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::from_text("n=3\n0 1\n0 x\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    fn arb_spec() -> impl Strategy<Value = GraphModelSpec> {
        prop_oneof![
            (1usize..25, 0.0f64..=1.0).prop_map(|(n, p)| GraphModelSpec {
                model: GraphModel::ErdosRenyi { p },
                n,
                require_connected: false
            }),
            (3usize..25, 1usize..6, 0.0f64..=1.0).prop_filter_map("K<n", |(n, h, p)| {
                (2 * h < n).then_some(GraphModelSpec {
                    model: GraphModel::WattsStrogatz { k: 2 * h, p },
                    n,
                    require_connected: false,
                })
            }),
            (2usize..25, 1usize..6).prop_filter_map("m<n", |(n, m)| {
                (m < n).then_some(GraphModelSpec {
                    model: GraphModel::BarabasiAlbert { m },
                    n,
                    require_connected: false,
                })
            }),
        ]
    }

    proptest! {
        #[test]
        fn generator_invariants(spec in arb_spec(), seed in any::<u64>()) {
            let g = spec.generate(&mut rng(seed)).unwrap().graph;
            prop_assert_eq!(g.n(), spec.n);
            for &(a, b) in g.links() {
                prop_assert!(a < b && b < g.n());
            }
            prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.link_count());
            match spec.model {
                GraphModel::WattsStrogatz { k, .. } => prop_assert_eq!(g.link_count(), spec.n * k / 2),
                GraphModel::BarabasiAlbert { m } => prop_assert_eq!(g.link_count(), m * (spec.n - m)),
                GraphModel::ErdosRenyi { .. } => {}
            }
            prop_assert_eq!(spec.generate(&mut rng(seed)).unwrap().graph, g);
        }

        #[test]
        fn distances_form_a_metric(spec in arb_spec(), seed in any::<u64>()) {
            let g = spec.generate(&mut rng(seed)).unwrap().graph;
            let d = unweighted_measures(&g).distance;
            let n = g.n();
            for i in 0..n {
                prop_assert_eq!(d[i][i], Some(0));
                for j in 0..n {
                    prop_assert_eq!(d[i][j], d[j][i]);
                    for k in 0..n {
                        if let (Some(a), Some(b), Some(c)) = (d[i][j], d[j][k], d[i][k]) {
                            prop_assert!(c <= a + b);
                        }
                    }
                }
            }
        }
    }
}
