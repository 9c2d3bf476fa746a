//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinnet::quantum_state::{Direction, TargetStrategy};

#[derive(Parser, Debug)]
#[command(
    name = "spinnet",
    version,
    about = "Transverse Ising ground states on complex networks and their emergent mutual-information networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an ensemble of imprinted graphs and their measure histograms.
    GenGraphs {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Solve one ground state and write its emergent network.
    GroundState(GroundStateArgs),
    /// Exact ground-state sweep over the field grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Exact ground states under a measurement attack.
    Attack {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        attack: AttackArgs,
    },
    /// Per-network and uniform mean field, optionally attacked.
    Mf {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        attack: AttackArgs,
    },
    /// Classical node removals on the imprinted graphs.
    Classical {
        #[command(flatten)]
        common: Common,
        /// Comma-separated network sizes.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Networks per model and size.
        #[arg(long)]
        count: Option<usize>,
        /// Fraction of nodes removed.
        #[arg(long)]
        fraction: Option<f64>,
    },
    /// Collapse tables from one or more result directories.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON configuration file; flags take precedence over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory. Defaults to `<root>/<command>`, with the root taken
    /// from SPINNET_OUT or `spinnet-out`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write into a non-empty output directory.
    #[arg(long)]
    pub force: bool,
    /// Master seed for every stochastic step.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Er,
    Ws,
    Ba,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    /// Network model.
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Number of spins.
    #[arg(long)]
    pub n: Option<usize>,
    /// ER link probability or WS rewiring probability.
    #[arg(long)]
    pub p: Option<f64>,
    /// WS ring degree.
    #[arg(long)]
    pub k: Option<usize>,
    /// BA links per new node.
    #[arg(long)]
    pub m: Option<usize>,
    /// Ensemble size.
    #[arg(long)]
    pub count: Option<usize>,
    /// Attack realizations per network.
    #[arg(long)]
    pub realizations: Option<usize>,
    /// Coupling J.
    #[arg(long)]
    pub coupling: Option<f64>,
    /// Comma-separated h/J values.
    #[arg(long, value_delimiter = ',', conflicts_with = "lambda")]
    pub h_over_j: Option<Vec<f64>>,
    /// Comma-separated λ = h/(ZJ) values.
    #[arg(long, value_delimiter = ',')]
    pub lambda: Option<Vec<f64>>,
    /// Full scale: n=20, 100 networks, 100 realizations. Prints a runtime
    /// estimate before starting.
    #[arg(long)]
    pub paper_scale: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    X,
    Z,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::X => Direction::X,
            DirectionArg::Z => Direction::Z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Random,
    Preferential,
}

impl From<StrategyArg> for TargetStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Random => TargetStrategy::Random,
            StrategyArg::Preferential => TargetStrategy::Preferential,
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct AttackArgs {
    /// Measurement axis.
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Measurement strength in [0, 1].
    #[arg(long)]
    pub q: Option<f64>,
    /// Fraction of nodes measured.
    #[arg(long)]
    pub fraction: Option<f64>,
    /// Target selection.
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
}

impl AttackArgs {
    pub fn any(&self) -> bool {
        self.direction.is_some()
            || self.q.is_some()
            || self.fraction.is_some()
            || self.strategy.is_some()
    }
}

#[derive(Args, Debug)]
pub struct GroundStateArgs {
    /// Graph file (`n=<count>` header, then `i j` lines).
    #[arg(long)]
    pub graph: PathBuf,
    /// Transverse field h.
    #[arg(long)]
    pub h: f64,
    /// Coupling J.
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Exact,
    Mf,
    Mf0,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Result directories, each holding a results.csv.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Which calculation to normalize.
    #[arg(long, value_enum, default_value = "exact")]
    pub source: SourceArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
}
