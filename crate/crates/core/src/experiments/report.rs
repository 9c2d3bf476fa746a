//! Normalized mean-degree curves and their mutual deviation.

use serde::{Deserialize, Serialize};

use super::table::{variant_tag, Measure, ResultTable, Source};
use crate::error::{Error, Result};

/// One point of a `Mean[k]/Mean[k(h=0)]` curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapsePoint {
    pub model: String,
    pub curve: String,
    pub lambda: f64,
    pub mean: f64,
    pub ratio: f64,
}

/// Largest gap between any two curves of one model at a shared `λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseDeviation {
    pub model: String,
    pub curves: usize,
    pub max_deviation: f64,
    pub at_lambda: f64,
    pub between: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CollapseReport {
    pub points: Vec<CollapsePoint>,
    pub deviations: Vec<CollapseDeviation>,
}

struct Curve {
    model: String,
    name: String,
    lambda: Vec<f64>,
    mean: Vec<f64>,
    ratio: Vec<f64>,
}

fn same_lambda(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Normalizes the `k/(n−1)` means of `source` by their `h = 0` value, one
/// curve per model and attack variant across all tables, and reports the
/// largest pairwise gap per model. Curves of one model must share a grid.
pub fn collapse_report(tables: &[&ResultTable], source: Source) -> Result<CollapseReport> {
    let mut curves: Vec<Curve> = Vec::new();
    for table in tables {
        let mut keys: Vec<(String, String)> = Vec::new();
        for r in table
            .rows
            .iter()
            .filter(|r| r.source == source && r.measure == Measure::KNorm)
        {
            let key = (r.model.clone(), variant_tag(r.attack().as_ref()));
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        for (model, tag) in keys {
            let rows: Vec<_> = table
                .rows
                .iter()
                .filter(|r| {
                    r.source == source
                        && r.measure == Measure::KNorm
                        && r.model == model
                        && variant_tag(r.attack().as_ref()) == tag
                })
                .collect();
            let base = rows
                .iter()
                .find(|r| r.h == 0.0)
                .ok_or_else(|| Error::MissingBaseline(format!("{model} ({tag})")))?
                .mean;
            let mut name = tag.clone();
            let mut dup = 1;
            while curves.iter().any(|c| c.model == model && c.name == name) {
                dup += 1;
                name = format!("{tag}#{dup}");
            }
            curves.push(Curve {
                model: model.clone(),
                name,
                lambda: rows.iter().map(|r| r.lambda).collect(),
                mean: rows.iter().map(|r| r.mean).collect(),
                ratio: rows.iter().map(|r| r.mean / base).collect(),
            });
        }
    }
    if curves.is_empty() {
        return Err(Error::MissingBaseline(format!(
            "no {} k_norm rows",
            source.label()
        )));
    }

    let mut report = CollapseReport::default();
    let mut models: Vec<String> = Vec::new();
    for c in &curves {
        if !models.contains(&c.model) {
            models.push(c.model.clone());
        }
    }
    for model in models {
        let group: Vec<&Curve> = curves.iter().filter(|c| c.model == model).collect();
        let first = group[0];
        for c in &group[1..] {
            let matches = c.lambda.len() == first.lambda.len()
                && c.lambda
                    .iter()
                    .zip(&first.lambda)
                    .all(|(a, b)| same_lambda(*a, *b));
            if !matches {
                return Err(Error::GridMismatch(format!(
                    "{model}: `{}` has {:?} but `{}` has {:?}",
                    first.name, first.lambda, c.name, c.lambda
                )));
            }
        }
        let mut dev = CollapseDeviation {
            model: model.clone(),
            curves: group.len(),
            max_deviation: 0.0,
            at_lambda: first.lambda[0],
            between: String::new(),
        };
        for (p, &lambda) in first.lambda.iter().enumerate() {
            for (a, ca) in group.iter().enumerate() {
                for cb in &group[a + 1..] {
                    let gap = (ca.ratio[p] - cb.ratio[p]).abs();
                    if gap.is_finite() && gap > dev.max_deviation {
                        dev.max_deviation = gap;
                        dev.at_lambda = lambda;
                        dev.between = format!("{} vs {}", ca.name, cb.name);
                    }
                }
            }
        }
        for c in &group {
            for (p, &lambda) in c.lambda.iter().enumerate() {
                report.points.push(CollapsePoint {
                    model: model.clone(),
                    curve: c.name.clone(),
                    lambda,
                    mean: c.mean[p],
                    ratio: c.ratio[p],
                });
            }
        }
        report.deviations.push(dev);
    }
    Ok(report)
}
