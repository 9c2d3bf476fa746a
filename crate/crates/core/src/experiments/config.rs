//! Experiment configuration, parsed from JSON with unknown keys rejected.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{GraphModel, GraphModelSpec};
use crate::hilbert::{self, DEFAULT_MAX_SITES};
use crate::meanfield;
use crate::quantum_state::AttackSpec;

/// Field values of a run, either as `h/J` or directly as `λ = h/(ZJ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldGrid {
    HOverJ(Vec<f64>),
    Lambda(Vec<f64>),
}

impl Default for FieldGrid {
    /// `h = 0` plus 13 log-spaced `h/J` values in `[0.25, 16]`.
    fn default() -> Self {
        let mut v = vec![0.0];
        v.extend((0..13).map(|i| 0.25 * 64f64.powf(i as f64 / 12.0)));
        FieldGrid::HOverJ(v)
    }
}

impl FieldGrid {
    pub fn len(&self) -> usize {
        self.values().len()
    }

    pub fn is_empty(&self) -> bool {
        self.values().is_empty()
    }

    fn values(&self) -> &[f64] {
        match self {
            FieldGrid::HOverJ(v) | FieldGrid::Lambda(v) => v,
        }
    }

    /// `(h, λ)` pairs for a coupling `J` and nominal coordination number `z`.
    pub fn points(&self, coupling: f64, z: f64) -> Vec<(f64, f64)> {
        match self {
            FieldGrid::HOverJ(v) => v.iter().map(|&r| (r * coupling, r / z)).collect(),
            FieldGrid::Lambda(v) => v.iter().map(|&l| (l * z * coupling, l)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub krylov_dim: usize,
    pub max_sites: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let o = hilbert::SolverOptions::<f64>::default();
        Self {
            tol: o.tol,
            max_iter: o.max_iter,
            krylov_dim: o.krylov_dim,
            max_sites: DEFAULT_MAX_SITES,
        }
    }
}

impl SolverConfig {
    pub fn options(&self) -> hilbert::SolverOptions<f64> {
        hilbert::SolverOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            krylov_dim: self.krylov_dim,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeanFieldConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub mixing: f64,
}

impl Default for MeanFieldConfig {
    fn default() -> Self {
        let o = meanfield::MfOptions::<f64>::default();
        Self {
            tol: o.tol,
            max_iter: o.max_iter,
            mixing: o.mixing,
        }
    }
}

impl MeanFieldConfig {
    pub fn options(&self) -> meanfield::MfOptions<f64> {
        meanfield::MfOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            mixing: self.mixing,
        }
    }
}

fn default_coupling() -> f64 {
    1.0
}
fn default_one() -> usize {
    1
}
fn default_true() -> bool {
    true
}
fn default_bins() -> usize {
    40
}
fn default_quota() -> f64 {
    0.05
}

/// One ensemble experiment on a single network model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: GraphModel,
    pub n: usize,
    #[serde(default = "default_coupling")]
    pub coupling: f64,
    #[serde(default)]
    pub grid: FieldGrid,
    pub ensemble_size: usize,
    #[serde(default)]
    pub attack: Option<AttackSpec>,
    #[serde(default = "default_one")]
    pub realizations: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_true")]
    pub require_connected: bool,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub mean_field: MeanFieldConfig,
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
    /// Largest tolerated fraction of failed (network, h) solves.
    #[serde(default = "default_quota")]
    pub failure_quota: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Small-scale defaults: ER at `n = 14`, 20 networks, 20 realizations.
    pub fn desk(model: GraphModel) -> Self {
        Self {
            model,
            n: 14,
            coupling: 1.0,
            grid: FieldGrid::default(),
            ensemble_size: 20,
            attack: None,
            realizations: 20,
            master_seed: 0,
            require_connected: true,
            solver: SolverConfig::default(),
            mean_field: MeanFieldConfig::default(),
            histogram_bins: 40,
            failure_quota: 0.05,
            output_dir: None,
        }
    }

    /// Full scale: `n = 20`, 100 networks, 100 realizations.
    pub fn paper_scale(mut self) -> Self {
        if let GraphModel::ErdosRenyi { .. } = self.model {
            self.model = GraphModel::default_er(20);
        }
        self.n = 20;
        self.ensemble_size = 100;
        self.realizations = 100;
        self
    }

    pub fn graph_spec(&self) -> GraphModelSpec {
        GraphModelSpec {
            model: self.model,
            n: self.n,
            require_connected: self.require_connected,
        }
    }

    pub fn nominal_z(&self) -> f64 {
        self.model.nominal_z(self.n)
    }

    /// `(h, λ)` for every grid point.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.grid.points(self.coupling, self.nominal_z())
    }

    /// Checks every invariant; errors name the offending key.
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: String| Err(Error::InvalidParameter(format!("`{key}`: {msg}")));
        if self.n < 2 {
            return bad("n", format!("need at least 2 sites, got {}", self.n));
        }
        self.model
            .validate(self.n)
            .or_else(|e| bad("model", inner(e)))?;
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return bad(
                "coupling",
                format!("must be positive, got {}", self.coupling),
            );
        }
        let grid_key = match self.grid {
            FieldGrid::HOverJ(_) => "h_over_j",
            FieldGrid::Lambda(_) => "lambda",
        };
        if self.grid.is_empty() {
            return bad(grid_key, "field grid is empty".into());
        }
        if let Some(v) = self
            .grid
            .values()
            .iter()
            .find(|v| !(**v >= 0.0 && v.is_finite()))
        {
            return bad(
                grid_key,
                format!("field values must be finite and >= 0, got {v}"),
            );
        }
        if self.nominal_z() <= 0.0 {
            return bad("model", "nominal coordination number is zero".into());
        }
        if self.ensemble_size == 0 {
            return bad("ensemble_size", "must be at least 1".into());
        }
        if self.realizations == 0 {
            return bad("realizations", "must be at least 1".into());
        }
        if let Some(a) = &self.attack {
            a.validate().or_else(|e| bad("attack", inner(e)))?;
        }
        if self.n > self.solver.max_sites {
            return bad(
                "n",
                format!(
                    "{} sites exceed the solver ceiling of {}",
                    self.n, self.solver.max_sites
                ),
            );
        }
        if !(self.solver.tol > 0.0) || self.solver.max_iter == 0 || self.solver.krylov_dim < 2 {
            return bad(
                "solver",
                "need tol > 0, max_iter >= 1 and krylov_dim >= 2".into(),
            );
        }
        if !(self.mean_field.tol > 0.0)
            || self.mean_field.max_iter == 0
            || !(0.0..1.0).contains(&self.mean_field.mixing)
        {
            return bad(
                "mean_field",
                "need tol > 0, max_iter >= 1 and mixing in [0,1)".into(),
            );
        }
        if self.histogram_bins == 0 {
            return bad("histogram_bins", "must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.failure_quota) {
            return bad(
                "failure_quota",
                format!("must lie in [0,1], got {}", self.failure_quota),
            );
        }
        Ok(())
    }

    /// Parses and validates; errors carry the line of the offending key.
    pub fn from_json(text: &str) -> Result<Self> {
        parse_validated(text, |c: &Self| c.validate())
    }
}

/// Removal strategies of the classical study; `None` is the control.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalStrategy {
    None,
    Random,
    Targeted,
}

impl ClassicalStrategy {
    pub fn label(self) -> &'static str {
        match self {
            ClassicalStrategy::None => "none",
            ClassicalStrategy::Random => "random",
            ClassicalStrategy::Targeted => "targeted",
        }
    }
}

fn default_sizes() -> Vec<usize> {
    vec![20, 54]
}
fn default_classical_count() -> usize {
    1000
}
fn default_fraction() -> f64 {
    0.2
}
fn default_strategies() -> Vec<ClassicalStrategy> {
    vec![
        ClassicalStrategy::None,
        ClassicalStrategy::Random,
        ClassicalStrategy::Targeted,
    ]
}

/// Classical node-removal study on the imprinted graphs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalConfig {
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
    /// Models used at every size; `None` picks [`classical_models`].
    #[serde(default)]
    pub models: Option<Vec<GraphModel>>,
    #[serde(default = "default_classical_count")]
    pub ensemble_size: usize,
    #[serde(default = "default_fraction")]
    pub fraction: f64,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<ClassicalStrategy>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub require_connected: bool,
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl Default for ClassicalConfig {
    fn default() -> Self {
        Self {
            sizes: default_sizes(),
            models: None,
            ensemble_size: default_classical_count(),
            fraction: default_fraction(),
            strategies: default_strategies(),
            master_seed: 0,
            require_connected: false,
            histogram_bins: default_bins(),
            output_dir: None,
        }
    }
}

/// ER, WS and BA parameters of the classical study at size `n`.
pub fn classical_models(n: usize) -> Vec<GraphModel> {
    let er = match n {
        20 => GraphModel::ErdosRenyi { p: 0.26 },
        54 => GraphModel::ErdosRenyi { p: 0.04 },
        _ => GraphModel::default_er(n),
    };
    vec![
        er,
        GraphModel::WattsStrogatz { k: 4, p: 0.5 },
        GraphModel::BarabasiAlbert { m: 2 },
    ]
}

impl ClassicalConfig {
    pub fn models_for(&self, n: usize) -> Vec<GraphModel> {
        self.models.clone().unwrap_or_else(|| classical_models(n))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: String| Err(Error::InvalidParameter(format!("`{key}`: {msg}")));
        if self.sizes.is_empty() {
            return bad("sizes", "need at least one size".into());
        }
        for &n in &self.sizes {
            for m in self.models_for(n) {
                m.validate(n).or_else(|e| bad("models", inner(e)))?;
            }
        }
        if self.ensemble_size == 0 {
            return bad("ensemble_size", "must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.fraction) {
            return bad(
                "fraction",
                format!("must lie in [0,1], got {}", self.fraction),
            );
        }
        if self.strategies.is_empty() {
            return bad("strategies", "need at least one strategy".into());
        }
        if self.histogram_bins == 0 {
            return bad("histogram_bins", "must be at least 1".into());
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        parse_validated(text, |c: &Self| c.validate())
    }
}

/// Parses a JSON config without validating it; syntax and unknown-key
/// errors carry their line.
pub fn parse_json<C: for<'de> Deserialize<'de>>(text: &str) -> Result<C> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })
}

fn inner(e: Error) -> String {
    match e {
        Error::InvalidParameter(msg) => msg,
        other => other.to_string(),
    }
}

/// Attaches to a validation error the line of `text` holding the key it
/// names, when there is one.
pub fn locate_in(text: &str, err: Error) -> Error {
    match err {
        Error::InvalidParameter(msg) => {
            let line = key_in_message(&msg)
                .and_then(|key| line_of_key(text, key))
                .unwrap_or(0);
            Error::Parse { line, msg }
        }
        other => other,
    }
}

fn parse_validated<C: for<'de> Deserialize<'de>>(
    text: &str,
    validate: impl Fn(&C) -> Result<()>,
) -> Result<C> {
    let config: C = parse_json(text)?;
    validate(&config).map_err(|e| locate_in(text, e))?;
    Ok(config)
}

fn key_in_message(msg: &str) -> Option<&str> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(&msg[start..start + len])
}

fn line_of_key(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&quoted))
        .map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let FieldGrid::HOverJ(v) = FieldGrid::default() else {
            panic!()
        };
        assert_eq!(v.len(), 14);
        assert_eq!(v[0], 0.0);
        assert!((v[1] - 0.25).abs() < 1e-15 && (v[13] - 16.0).abs() < 1e-12);
    }

    #[test]
    fn lambda_grid_maps_to_field() {
        let g = FieldGrid::Lambda(vec![0.0, 0.5]);
        assert_eq!(g.points(2.0, 4.0), vec![(0.0, 0.0), (4.0, 0.5)]);
    }

    #[test]
    fn json_round_trip_and_unknown_keys() {
        let c = ExperimentConfig::desk(GraphModel::default_er(14));
        let text = serde_json::to_string_pretty(&c).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), c);
        let extra = text.replacen('{', "{\n  \"bogus\": 1,", 1);
        assert!(matches!(
            ExperimentConfig::from_json(&extra),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn validation_error_points_at_line() {
        let text = "{\n  \"model\": {\"kind\": \"er\", \"p\": 0.3},\n  \"n\": 10,\n  \"ensemble_size\": 0\n}";
        match ExperimentConfig::from_json(text) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("ensemble_size"));
            }
            other => panic!("{other:?}"),
        }
        let text = "{\n  \"model\": {\"kind\": \"er\", \"p\": 1.3},\n  \"n\": 10,\n  \"ensemble_size\": 2\n}";
        assert!(matches!(
            ExperimentConfig::from_json(text),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn classical_defaults() {
        let c = ClassicalConfig::from_json("{}").unwrap();
        assert_eq!(c.sizes, vec![20, 54]);
        assert_eq!(c.ensemble_size, 1000);
        assert_eq!(classical_models(54)[0], GraphModel::ErdosRenyi { p: 0.04 });
    }
}
