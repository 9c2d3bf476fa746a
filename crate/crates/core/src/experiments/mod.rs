//! Ensemble experiments: ground-state sweeps, measurement attacks, mean
//! field, the classical removal study and the collapse report.

pub mod classical;
pub mod config;
pub mod output;
pub mod report;
pub mod runner;
pub mod table;

pub use classical::{run_classical_attack_study, ClassicalMeasure, ClassicalOutput, ClassicalRow};
pub use config::{
    classical_models, ClassicalConfig, ClassicalStrategy, ExperimentConfig, FieldGrid,
    MeanFieldConfig, SolverConfig,
};
pub use report::{collapse_report, CollapseDeviation, CollapsePoint, CollapseReport};
pub use runner::{
    choose_attack_targets, estimate_exact_seconds, run_attack_experiment, run_ground_state_sweep,
    run_mf_pipeline, run_quantum, RunMeta, RunOutput, Samples,
};
pub use table::{Histogram, Measure, ResultRow, ResultTable, Source};
