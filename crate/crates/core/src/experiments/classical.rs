//! Node removals on the imprinted graphs themselves.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ClassicalConfig, ClassicalStrategy};
use super::runner::NamedHistogram;
use super::table::{percentile, Histogram};
use crate::error::Result;
use crate::graphs::{remove_nodes, unweighted_measures, GraphModelSpec, RemovalStrategy};
use crate::minet::moments;
use crate::rng::{stream, Purpose};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalMeasure {
    Degree,
    Clustering,
    Distance,
}

impl ClassicalMeasure {
    pub const ALL: [ClassicalMeasure; 3] = [
        ClassicalMeasure::Degree,
        ClassicalMeasure::Clustering,
        ClassicalMeasure::Distance,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ClassicalMeasure::Degree => "degree",
            ClassicalMeasure::Clustering => "clustering",
            ClassicalMeasure::Distance => "distance",
        }
    }
}

/// Moments of one pooled measure for one model, size and strategy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalRow {
    pub model: String,
    pub n: usize,
    pub strategy: ClassicalStrategy,
    pub fraction: f64,
    pub measure: ClassicalMeasure,
    pub mean: f64,
    pub width: f64,
    pub skew: f64,
    pub sample_count: usize,
    pub excluded_infinite_count: usize,
    /// Linearly interpolated 95th percentile of the finite samples.
    pub p95: f64,
    pub max: f64,
    pub networks: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalMeta {
    pub crate_version: &'static str,
    pub master_seed: u64,
    pub config: ClassicalConfig,
    pub graph_rejections: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalOutput {
    pub rows: Vec<ClassicalRow>,
    pub histograms: Vec<NamedHistogram>,
    pub meta: ClassicalMeta,
}

impl ClassicalOutput {
    pub fn row(
        &self,
        model: &str,
        n: usize,
        strategy: ClassicalStrategy,
        measure: ClassicalMeasure,
    ) -> Option<&ClassicalRow> {
        self.rows.iter().find(|r| {
            r.model == model && r.n == n && r.strategy == strategy && r.measure == measure
        })
    }
}

#[derive(Default)]
struct Pooled {
    degree: Vec<f64>,
    clustering: Vec<f64>,
    distance: Vec<f64>,
}

/// Removes a fraction of nodes from every network of each model, size and
/// strategy, and pools degree, clustering and hop distance of the
/// survivors. Unreachable pairs are counted separately.
pub fn run_classical_attack_study(config: &ClassicalConfig) -> Result<ClassicalOutput> {
    config.validate()?;
    let mut rows = Vec::new();
    let mut histograms = Vec::new();
    let mut graph_rejections = 0;
    for &n in &config.sizes {
        for (mi, model) in config.models_for(n).into_iter().enumerate() {
            let spec = GraphModelSpec {
                model,
                n,
                require_connected: config.require_connected,
            };
            let sampled = (0..config.ensemble_size)
                .into_par_iter()
                .map(|g| {
                    spec.generate(&mut stream(
                        config.master_seed,
                        Purpose::Graph,
                        &[n as u64, mi as u64, g as u64],
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            graph_rejections += sampled.iter().map(|s| s.rejections).sum::<usize>();
            for (si, &strategy) in config.strategies.iter().enumerate() {
                let survivors = sampled
                    .par_iter()
                    .enumerate()
                    .map(|(g, s)| {
                        let removal = match strategy {
                            ClassicalStrategy::None => return Ok(s.graph.clone()),
                            ClassicalStrategy::Random => RemovalStrategy::Random,
                            ClassicalStrategy::Targeted => RemovalStrategy::Targeted,
                        };
                        let coords = [n as u64, mi as u64, g as u64, si as u64];
                        remove_nodes(
                            &s.graph,
                            config.fraction,
                            removal,
                            &mut stream(config.master_seed, Purpose::NodeRemoval, &coords),
                        )
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut pooled = Pooled::default();
                for g in &survivors {
                    let m = unweighted_measures(g);
                    pooled.degree.extend(m.degree.iter().map(|&d| d as f64));
                    pooled.clustering.extend(&m.clustering);
                    let (finite, unreachable) = m.pair_distances();
                    pooled.distance.extend(finite.iter().map(|&d| d as f64));
                    pooled
                        .distance
                        .extend(std::iter::repeat(f64::INFINITY).take(unreachable));
                }
                for measure in ClassicalMeasure::ALL {
                    let samples = match measure {
                        ClassicalMeasure::Degree => &pooled.degree,
                        ClassicalMeasure::Clustering => &pooled.clustering,
                        ClassicalMeasure::Distance => &pooled.distance,
                    };
                    let mut row = ClassicalRow {
                        model: model.label().to_string(),
                        n,
                        strategy,
                        fraction: if strategy == ClassicalStrategy::None {
                            0.0
                        } else {
                            config.fraction
                        },
                        measure,
                        mean: f64::NAN,
                        width: f64::NAN,
                        skew: f64::NAN,
                        sample_count: 0,
                        excluded_infinite_count: samples.len(),
                        p95: percentile(samples, 95.0).unwrap_or(f64::NAN),
                        max: samples
                            .iter()
                            .copied()
                            .filter(|x| x.is_finite())
                            .fold(f64::NAN, f64::max),
                        networks: survivors.len(),
                        seed: config.master_seed,
                    };
                    if let Ok(mm) = moments(samples) {
                        (row.mean, row.width, row.skew) = (mm.mean, mm.width, mm.skew);
                        (row.sample_count, row.excluded_infinite_count) = (mm.count, mm.excluded);
                    }
                    rows.push(row);
                    let histogram = match measure {
                        ClassicalMeasure::Clustering => {
                            Histogram::build(samples, config.histogram_bins, 0.0, 1.0)
                        }
                        _ => Histogram::integer(samples),
                    };
                    histograms.push(NamedHistogram {
                        name: format!(
                            "classical_{}_n{}_{}_{}",
                            model.label().to_lowercase(),
                            n,
                            strategy.label(),
                            measure.label()
                        ),
                        histogram,
                    });
                }
            }
        }
    }
    let meta = ClassicalMeta {
        crate_version: env!("CARGO_PKG_VERSION"),
        master_seed: config.master_seed,
        config: config.clone(),
        graph_rejections,
    };
    Ok(ClassicalOutput {
        rows,
        histograms,
        meta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ClassicalConfig {
        ClassicalConfig {
            sizes: vec![20],
            ensemble_size: 30,
            ..ClassicalConfig::default()
        }
    }

    #[test]
    fn counts_and_names() {
        let out = run_classical_attack_study(&small()).unwrap();
        assert_eq!(out.rows.len(), 3 * 3 * 3);
        let control = out
            .row("ER", 20, ClassicalStrategy::None, ClassicalMeasure::Degree)
            .unwrap();
        assert_eq!(control.sample_count, 30 * 20);
        let removed = out
            .row(
                "ER",
                20,
                ClassicalStrategy::Random,
                ClassicalMeasure::Degree,
            )
            .unwrap();
        assert_eq!(removed.sample_count, 30 * 16);
        let d = out
            .row(
                "BA",
                20,
                ClassicalStrategy::Targeted,
                ClassicalMeasure::Distance,
            )
            .unwrap();
        assert_eq!(d.sample_count + d.excluded_infinite_count, 30 * 16 * 15 / 2);
        assert_eq!(out.histograms[0].name, "classical_er_n20_none_degree");
        assert_eq!(out.histograms[0].histogram.total(), 600);
    }

    #[test]
    fn zero_fraction_equals_control() {
        let mut c = small();
        c.fraction = 0.0;
        let out = run_classical_attack_study(&c).unwrap();
        for m in ClassicalMeasure::ALL {
            let a = out.row("WS", 20, ClassicalStrategy::None, m).unwrap();
            let b = out.row("WS", 20, ClassicalStrategy::Random, m).unwrap();
            assert_eq!(
                (a.mean, a.width, a.sample_count),
                (b.mean, b.width, b.sample_count)
            );
        }
    }
}
