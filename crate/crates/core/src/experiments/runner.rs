//! Ensemble runs over networks, field values and attack variants.

use std::time::Instant;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::table::{variant_tag, Histogram, Measure, ResultRow, ResultTable, Source};
use crate::error::{Error, Result};
use crate::graphs::{weighted_sample_without_replacement, Graph};
use crate::hilbert::{ground_state, HamiltonianParams, SparseHamiltonian};
use crate::meanfield::{
    mf0_attacked_mean_measures, mf0_measures, mf_attacked_network, mf_general_solve, mf_mi_network,
};
use crate::minet::{
    build_attacked_from_base, build_mi_network, moments, weighted_clustering, weighted_degree,
    weighted_shortest_paths, ActiveAttack, MiNetwork,
};
use crate::quantum_state::{AttackSpec, StateRdms, TargetStrategy};
use crate::rng::{stream, Purpose};

/// Pooled per-node and per-pair values of one or more networks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Samples {
    pub k_norm: Vec<f64>,
    pub clustering: Vec<f64>,
    pub distance: Vec<f64>,
}

impl Samples {
    pub fn of(net: &MiNetwork<f64>) -> Self {
        let mut s = Self::default();
        s.push(net);
        s
    }

    /// Appends `k_i/(n−1)` and `C_i` per node and `d_ij` per pair `i<j`.
    pub fn push(&mut self, net: &MiNetwork<f64>) {
        let scale = 1.0 / (net.n() as f64 - 1.0);
        self.k_norm
            .extend(weighted_degree(net).into_iter().map(|k| k * scale));
        self.clustering.extend(weighted_clustering(net));
        self.distance
            .extend(weighted_shortest_paths(net).pair_values());
    }

    pub fn get(&self, m: Measure) -> &[f64] {
        match m {
            Measure::KNorm => &self.k_norm,
            Measure::Clustering => &self.clustering,
            Measure::Distance => &self.distance,
        }
    }
}

/// Picks `round(fraction·n)` distinct nodes, returned in ascending order.
/// Preferential draws are weighted by the weighted degree of `net`.
pub fn choose_attack_targets<R: Rng + ?Sized>(
    net: &MiNetwork<f64>,
    fraction: f64,
    strategy: TargetStrategy,
    rng: &mut R,
) -> Vec<usize> {
    let n = net.n();
    let count = ((fraction.clamp(0.0, 1.0) * n as f64).round() as usize).min(n);
    let mut picked = match strategy {
        TargetStrategy::Random => index::sample(rng, n, count).into_vec(),
        TargetStrategy::Preferential => {
            weighted_sample_without_replacement(&weighted_degree(net), count, rng)
        }
    };
    picked.sort_unstable();
    picked
}

/// Realizations actually drawn: an attack that changes nothing needs one.
pub fn effective_realizations(attack: Option<&AttackSpec>, realizations: usize) -> usize {
    match attack {
        Some(a) if !a.is_noop() => realizations,
        _ => 1,
    }
}

/// Samples of one network at one field value under one attack variant.
/// `attacked_net` builds the network after measuring the flagged nodes.
pub fn variant_samples(
    base: &MiNetwork<f64>,
    attack: Option<&AttackSpec>,
    realizations: usize,
    master_seed: u64,
    network: usize,
    attacked_net: impl Fn(&AttackSpec, &[bool]) -> Result<MiNetwork<f64>>,
) -> Result<Samples> {
    let a = match attack {
        Some(a) if !a.is_noop() => a,
        _ => return Ok(Samples::of(base)),
    };
    let mut out = Samples::default();
    for r in 0..realizations {
        let mut rng = stream(
            master_seed,
            Purpose::AttackTargets,
            &[network as u64, r as u64],
        );
        let targets = choose_attack_targets(base, a.fraction, a.strategy, &mut rng);
        let mut mask = vec![false; base.n()];
        for t in targets {
            mask[t] = true;
        }
        out.push(&attacked_net(a, &mask)?);
    }
    Ok(out)
}

/// Why one (network, field) solve was dropped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureRecord {
    pub source: Source,
    pub network: usize,
    pub h_index: usize,
    pub message: String,
}

/// A named histogram; `name` is the file stem.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedHistogram {
    pub name: String,
    pub histogram: Histogram,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub h: f64,
    pub lambda: f64,
}

/// Provenance written to `meta.json`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunMeta {
    pub crate_version: &'static str,
    pub master_seed: u64,
    pub config: ExperimentConfig,
    pub nominal_z: f64,
    pub grid: Vec<GridPoint>,
    pub sources: Vec<Source>,
    pub variants: Vec<String>,
    pub graph_rejections: usize,
    pub solves: usize,
    pub failed_solves: usize,
    pub excluded_infinite_total: usize,
    pub failures: Vec<FailureRecord>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub table: ResultTable,
    pub histograms: Vec<NamedHistogram>,
    pub meta: RunMeta,
}

impl RunOutput {
    /// Errors when the failed fraction of solves exceeds the configured quota.
    pub fn check_quota(&self) -> Result<()> {
        let quota = self.meta.config.failure_quota;
        let m = &self.meta;
        if m.solves > 0 && m.failed_solves as f64 > quota * m.solves as f64 {
            return Err(Error::FailureQuota {
                failed: m.failed_solves,
                total: m.solves,
                quota,
            });
        }
        Ok(())
    }
}

/// Draws the ensemble; network `g` uses its own stream.
pub fn generate_ensemble(config: &ExperimentConfig) -> Result<(Vec<Graph>, usize)> {
    let spec = config.graph_spec();
    let sampled = (0..config.ensemble_size)
        .into_par_iter()
        .map(|g| spec.generate(&mut stream(config.master_seed, Purpose::Graph, &[g as u64])))
        .collect::<Result<Vec<_>>>()?;
    let rejections = sampled.iter().map(|s| s.rejections).sum();
    Ok((sampled.into_iter().map(|s| s.graph).collect(), rejections))
}

type TaskResult = std::result::Result<Vec<Samples>, String>;

fn exact_task(
    config: &ExperimentConfig,
    g: &Graph,
    h: f64,
    variants: &[Option<AttackSpec>],
    network: usize,
) -> Result<Vec<Samples>> {
    let params = HamiltonianParams::new(config.coupling, h)?;
    let ham = SparseHamiltonian::build_with_ceiling(g, params, config.solver.max_sites)?;
    let gs = ground_state(&ham, &config.solver.options())?;
    let rdms = StateRdms::from_state(&gs.amplitudes)?;
    let base = build_mi_network(&rdms, None)?;
    variants
        .iter()
        .map(|v| {
            variant_samples(
                &base,
                v.as_ref(),
                config.realizations,
                config.master_seed,
                network,
                |a, mask| {
                    let attack = ActiveAttack {
                        direction: a.direction,
                        q: a.q,
                        attacked: mask,
                    };
                    build_attacked_from_base(&rdms, attack, &base)
                },
            )
        })
        .collect()
}

fn mf_task(
    config: &ExperimentConfig,
    g: &Graph,
    h: f64,
    variants: &[Option<AttackSpec>],
    network: usize,
) -> Result<Vec<Samples>> {
    let sol = mf_general_solve(g, config.coupling, h, &config.mean_field.options())?;
    let base = mf_mi_network(&sol.m)?;
    variants
        .iter()
        .map(|v| {
            variant_samples(
                &base,
                v.as_ref(),
                config.realizations,
                config.master_seed,
                network,
                |a, mask| mf_attacked_network(&sol.m, mask, a.q, a.direction),
            )
        })
        .collect()
}

fn histogram_for(measure: Measure, samples: &[f64], bins: usize) -> Histogram {
    match measure {
        Measure::KNorm | Measure::Clustering => Histogram::build(samples, bins, 0.0, 1.0),
        Measure::Distance => {
            let hi = samples
                .iter()
                .copied()
                .filter(|x| x.is_finite())
                .fold(0.0f64, f64::max);
            Histogram::build(samples, bins, 0.0, hi)
        }
    }
}

/// Mean over networks of each network's finite mean, and its standard error.
fn per_network_stats(values: &[f64]) -> (f64, f64) {
    let means: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if means.is_empty() {
        return (
            if values.is_empty() {
                f64::NAN
            } else {
                f64::INFINITY
            },
            f64::NAN,
        );
    }
    let k = means.len() as f64;
    let mean = means.iter().sum::<f64>() / k;
    if means.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = means.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

fn finite_mean(xs: &[f64]) -> f64 {
    let f: Vec<f64> = xs.iter().copied().filter(|x| x.is_finite()).collect();
    if f.is_empty() {
        f64::INFINITY
    } else {
        f.iter().sum::<f64>() / f.len() as f64
    }
}

/// Runs every requested source and attack variant over the configured
/// ensemble and grid. Each network is solved once per field value and
/// reused for all variants. Results do not depend on the thread count.
pub fn run_quantum(
    config: &ExperimentConfig,
    sources: &[Source],
    variants: &[Option<AttackSpec>],
) -> Result<RunOutput> {
    config.validate()?;
    if variants.is_empty() || sources.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one source and one variant".into(),
        ));
    }
    for a in variants.iter().flatten() {
        a.validate()?;
    }
    let points = config.points();
    let (graphs, graph_rejections) = generate_ensemble(config)?;
    let model = config.model.label().to_string();
    let mut rows = Vec::new();
    let mut histograms = Vec::new();
    let mut failures = Vec::new();
    let mut solves = 0;

    for &source in sources {
        if source == Source::Mf0 {
            for v in variants {
                for &(h, lambda) in &points {
                    let mm = match v {
                        Some(a) if !a.is_noop() => mf0_attacked_mean_measures(
                            lambda,
                            config.n,
                            a.fraction,
                            a.q,
                            a.direction,
                        )?,
                        _ => mf0_measures(lambda, config.n),
                    };
                    for measure in Measure::ALL {
                        let mean = match measure {
                            Measure::KNorm => mm.degree,
                            Measure::Clustering => mm.clustering,
                            Measure::Distance => mm.distance,
                        };
                        let mut row =
                            blank_row(config, source, &model, h, lambda, measure, v.as_ref());
                        row.mean = mean;
                        row.per_network_mean = mean;
                        row.realizations = 1;
                        rows.push(row);
                    }
                }
            }
            continue;
        }

        let tasks: Vec<(usize, usize)> = (0..graphs.len())
            .flat_map(|g| (0..points.len()).map(move |hi| (g, hi)))
            .collect();
        solves += tasks.len();
        let results: Vec<TaskResult> = tasks
            .par_iter()
            .map(|&(g, hi)| {
                let h = points[hi].0;
                let r = match source {
                    Source::Exact => exact_task(config, &graphs[g], h, variants, g),
                    _ => mf_task(config, &graphs[g], h, variants, g),
                };
                r.map_err(|e| e.to_string())
            })
            .collect();
        for (&(g, hi), r) in tasks.iter().zip(&results) {
            if let Err(message) = r {
                failures.push(FailureRecord {
                    source,
                    network: g,
                    h_index: hi,
                    message: message.clone(),
                });
            }
        }

        for (vi, v) in variants.iter().enumerate() {
            let tag = variant_tag(v.as_ref());
            for (hi, &(h, lambda)) in points.iter().enumerate() {
                let per_network: Vec<&Samples> = (0..graphs.len())
                    .filter_map(|g| results[g * points.len() + hi].as_ref().ok().map(|s| &s[vi]))
                    .collect();
                let failed = graphs.len() - per_network.len();
                for measure in Measure::ALL {
                    let pooled: Vec<f64> = per_network
                        .iter()
                        .flat_map(|s| s.get(measure).iter().copied())
                        .collect();
                    let net_means: Vec<f64> = per_network
                        .iter()
                        .map(|s| finite_mean(s.get(measure)))
                        .collect();
                    let mut row = blank_row(config, source, &model, h, lambda, measure, v.as_ref());
                    row.set_moments(moments(&pooled).ok(), pooled.len());
                    (row.per_network_mean, row.per_network_sem) = per_network_stats(&net_means);
                    row.realizations = effective_realizations(v.as_ref(), config.realizations);
                    row.failed_networks = failed;
                    rows.push(row);
                    histograms.push(NamedHistogram {
                        name: format!(
                            "{}_{}_{}_h{:02}_{}",
                            source.label(),
                            model.to_lowercase(),
                            tag,
                            hi,
                            measure.label()
                        ),
                        histogram: histogram_for(measure, &pooled, config.histogram_bins),
                    });
                }
            }
        }
    }

    let excluded_infinite_total = rows.iter().map(|r| r.excluded_infinite_count).sum();
    let meta = RunMeta {
        crate_version: env!("CARGO_PKG_VERSION"),
        master_seed: config.master_seed,
        config: config.clone(),
        nominal_z: config.nominal_z(),
        grid: points
            .iter()
            .map(|&(h, lambda)| GridPoint { h, lambda })
            .collect(),
        sources: sources.to_vec(),
        variants: variants.iter().map(|v| variant_tag(v.as_ref())).collect(),
        graph_rejections,
        solves,
        failed_solves: failures.len(),
        excluded_infinite_total,
        failures,
    };
    Ok(RunOutput {
        table: ResultTable { rows },
        histograms,
        meta,
    })
}

fn blank_row(
    config: &ExperimentConfig,
    source: Source,
    model: &str,
    h: f64,
    lambda: f64,
    measure: Measure,
    attack: Option<&AttackSpec>,
) -> ResultRow {
    let mut row = ResultRow {
        source,
        model: model.to_string(),
        n: config.n,
        h,
        lambda,
        measure,
        mean: f64::NAN,
        width: f64::NAN,
        skew: f64::NAN,
        sample_count: 0,
        excluded_infinite_count: 0,
        attack_direction: None,
        attack_q: None,
        attack_fraction: None,
        attack_strategy: None,
        realizations: config.realizations,
        seed: config.master_seed,
        per_network_mean: f64::NAN,
        per_network_sem: f64::NAN,
        failed_networks: 0,
    };
    row.set_attack(attack.copied());
    row
}

/// Exact ground states, no attack.
pub fn run_ground_state_sweep(config: &ExperimentConfig) -> Result<RunOutput> {
    if config.attack.is_some() {
        return Err(Error::InvalidParameter(
            "`attack`: a sweep runs without an attack".into(),
        ));
    }
    run_quantum(config, &[Source::Exact], &[None])
}

/// Exact ground states under the configured attack.
pub fn run_attack_experiment(config: &ExperimentConfig) -> Result<RunOutput> {
    if config.attack.is_none() {
        return Err(Error::InvalidParameter(
            "`attack`: an attack experiment needs an attack".into(),
        ));
    }
    run_quantum(config, &[Source::Exact], &[config.attack])
}

/// Per-network mean field and the uniform closed form, with the configured
/// attack if any.
pub fn run_mf_pipeline(config: &ExperimentConfig) -> Result<RunOutput> {
    run_quantum(config, &[Source::Mf, Source::Mf0], &[config.attack])
}

/// Rough wall-clock seconds for an exact run: one network timed at the
/// largest field value, scaled by the task count and thread count.
pub fn estimate_exact_seconds(
    config: &ExperimentConfig,
    variants: &[Option<AttackSpec>],
) -> Result<f64> {
    config.validate()?;
    let spec = config.graph_spec();
    let g = spec
        .generate(&mut stream(config.master_seed, Purpose::Graph, &[0]))?
        .graph;
    let h = config.points().iter().map(|p| p.0).fold(0.0, f64::max);
    let start = Instant::now();
    exact_task(config, &g, h, variants, 0)?;
    let per_task = start.elapsed().as_secs_f64();
    let tasks = (config.ensemble_size * config.grid.len()) as f64;
    Ok(per_task * tasks / rayon::current_num_threads() as f64)
}
