//! `spinnet` command-line driver.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 numerical
//! failures above quota, 4 I/O error.

mod args;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use spinnet::experiments::config::{locate_in, parse_json};
use spinnet::experiments::output::{
    prepare_output_dir, read_results, write_classical, write_report, write_run,
};
use spinnet::experiments::runner::generate_ensemble;
use spinnet::experiments::table::write_csv;
use spinnet::experiments::{
    collapse_report, estimate_exact_seconds, run_attack_experiment, run_classical_attack_study,
    run_ground_state_sweep, run_mf_pipeline, ClassicalConfig, ExperimentConfig, FieldGrid,
    Histogram, ResultTable, RunOutput, Source,
};
use spinnet::graphs::unweighted_measures;
use spinnet::hilbert::ground_state;
use spinnet::minet::{build_mi_network, NetworkSidecar, PATH_THRESHOLD};
use spinnet::{
    AttackSpec, Direction, Error, Graph, GraphModel, HamiltonianParams, Result, SolverOptions,
    SparseHamiltonian, StateRdms, TargetStrategy,
};

use args::{
    AttackArgs, Cli, Command, Common, GroundStateArgs, ModelArgs, ModelKind, ReportArgs, SourceArg,
};

const OUT_ENV: &str = "SPINNET_OUT";

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 4,
        Error::FailureQuota { .. }
        | Error::NoConvergence { .. }
        | Error::MeanFieldNoConvergence { .. } => 3,
        _ => 2,
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::GenGraphs { common, model } => {
            let config = experiment_config(&common, &model, None)?;
            with_jobs(common.jobs, || gen_graphs(&common, &config))
        }
        Command::GroundState(a) => with_jobs(a.jobs, || ground_state_cmd(&a)),
        Command::Sweep { common, model } => {
            let config = experiment_config(&common, &model, None)?;
            if config.attack.is_some() {
                return Err(Error::InvalidParameter(
                    "`attack`: sweep runs without an attack; use `attack`".into(),
                ));
            }
            with_jobs(common.jobs, || {
                experiment(&common, &config, "sweep", run_ground_state_sweep)
            })
        }
        Command::Attack {
            common,
            model,
            attack,
        } => {
            let config = experiment_config(&common, &model, Some(&attack))?;
            with_jobs(common.jobs, || {
                experiment(&common, &config, "attack", run_attack_experiment)
            })
        }
        Command::Mf {
            common,
            model,
            attack,
        } => {
            let config = experiment_config(&common, &model, attack.any().then_some(&attack))?;
            with_jobs(common.jobs, || {
                experiment(&common, &config, "mf", run_mf_pipeline)
            })
        }
        Command::Classical {
            common,
            sizes,
            count,
            fraction,
        } => {
            let config = classical_config(&common, sizes, count, fraction)?;
            with_jobs(common.jobs, || classical(&common, &config))
        }
        Command::Report(a) => report(&a),
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        None => f(),
        Some(0) => Err(Error::InvalidParameter("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(f),
    }
}

fn output_dir(explicit: Option<&PathBuf>, from_config: Option<&PathBuf>, command: &str) -> PathBuf {
    explicit.or(from_config).cloned().unwrap_or_else(|| {
        std::env::var_os(OUT_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("spinnet-out"))
            .join(command)
    })
}

fn read_config_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

/// File values, then flags; validated last so errors point at the file.
fn experiment_config(
    common: &Common,
    m: &ModelArgs,
    attack: Option<&AttackArgs>,
) -> Result<ExperimentConfig> {
    let (mut c, text) = match &common.config {
        Some(path) => {
            let text = read_config_text(path)?;
            (parse_json::<ExperimentConfig>(&text)?, Some(text))
        }
        None => (ExperimentConfig::desk(GraphModel::default_er(14)), None),
    };
    if m.paper_scale {
        c = c.paper_scale();
    }
    if let Some(n) = m.n {
        c.n = n;
        if text.is_none() && m.model.is_none() && m.p.is_none() {
            c.model = GraphModel::default_er(n);
        }
    }
    c.model = match m.model {
        Some(ModelKind::Er) => GraphModel::ErdosRenyi {
            p: m.p.unwrap_or_else(|| er_p(c.n)),
        },
        Some(ModelKind::Ws) => GraphModel::WattsStrogatz {
            k: m.k.unwrap_or(4),
            p: m.p.unwrap_or(0.5),
        },
        Some(ModelKind::Ba) => GraphModel::BarabasiAlbert {
            m: m.m.unwrap_or(3),
        },
        None => match c.model {
            GraphModel::ErdosRenyi { p } => GraphModel::ErdosRenyi {
                p: m.p.unwrap_or(p),
            },
            GraphModel::WattsStrogatz { k, p } => GraphModel::WattsStrogatz {
                k: m.k.unwrap_or(k),
                p: m.p.unwrap_or(p),
            },
            GraphModel::BarabasiAlbert { m: links } => GraphModel::BarabasiAlbert {
                m: m.m.unwrap_or(links),
            },
        },
    };
    let stray = match c.model {
        GraphModel::ErdosRenyi { .. } => m.k.map(|_| "--k").or(m.m.map(|_| "--m")),
        GraphModel::WattsStrogatz { .. } => m.m.map(|_| "--m"),
        GraphModel::BarabasiAlbert { .. } => m.p.map(|_| "--p").or(m.k.map(|_| "--k")),
    };
    if let Some(flag) = stray {
        return Err(Error::InvalidParameter(format!(
            "{flag} does not apply to the {} model",
            c.model.label()
        )));
    }
    if let Some(v) = m.count {
        c.ensemble_size = v;
    }
    if let Some(v) = m.realizations {
        c.realizations = v;
    }
    if let Some(v) = m.coupling {
        c.coupling = v;
    }
    if let Some(v) = &m.h_over_j {
        c.grid = FieldGrid::HOverJ(v.clone());
    }
    if let Some(v) = &m.lambda {
        c.grid = FieldGrid::Lambda(v.clone());
    }
    if let Some(seed) = common.seed {
        c.master_seed = seed;
    }
    if let Some(a) = attack {
        let base = c.attack.unwrap_or(AttackSpec {
            direction: Direction::X,
            q: 1.0,
            fraction: 0.2,
            strategy: TargetStrategy::Random,
        });
        c.attack = Some(AttackSpec {
            direction: a.direction.map(Direction::from).unwrap_or(base.direction),
            q: a.q.unwrap_or(base.q),
            fraction: a.fraction.unwrap_or(base.fraction),
            strategy: a
                .strategy
                .map(TargetStrategy::from)
                .unwrap_or(base.strategy),
        });
    }
    c.validate().map_err(|e| match &text {
        Some(t) => locate_in(t, e),
        None => e,
    })?;
    Ok(c)
}

fn er_p(n: usize) -> f64 {
    match GraphModel::default_er(n) {
        GraphModel::ErdosRenyi { p } => p,
        _ => unreachable!(),
    }
}

fn announce_paper_scale(config: &ExperimentConfig, exact: bool) -> Result<()> {
    eprintln!(
        "paper scale: n={}, {} networks x {} realizations, {} field values",
        config.n,
        config.ensemble_size,
        config.realizations,
        config.grid.len()
    );
    if exact {
        let secs = estimate_exact_seconds(config, &[config.attack])?;
        eprintln!(
            "estimated runtime: {:.0} s ({:.1} h) on {} threads",
            secs,
            secs / 3600.0,
            rayon::current_num_threads()
        );
    }
    Ok(())
}

fn experiment(
    common: &Common,
    config: &ExperimentConfig,
    command: &str,
    runner: fn(&ExperimentConfig) -> Result<RunOutput>,
) -> Result<()> {
    let dir = output_dir(common.out.as_ref(), config.output_dir.as_ref(), command);
    prepare_output_dir(&dir, common.force)?;
    if config.n >= 20 && config.ensemble_size >= 100 {
        announce_paper_scale(config, command != "mf")?;
    }
    let out = runner(config)?;
    write_run(&dir, &out)?;
    eprintln!(
        "{command}: {} rows, {} of {} solves failed, wrote {}",
        out.table.rows.len(),
        out.meta.failed_solves,
        out.meta.solves,
        dir.display()
    );
    out.check_quota()
}

#[derive(Serialize)]
struct MeasureBin {
    measure: &'static str,
    bin_left: f64,
    bin_right: f64,
    count: u64,
}

#[derive(Serialize)]
struct GraphsMeta<'a> {
    crate_version: &'static str,
    master_seed: u64,
    model: &'a GraphModel,
    n: usize,
    count: usize,
    require_connected: bool,
    graph_rejections: usize,
    unreachable_pairs: usize,
}

fn gen_graphs(common: &Common, config: &ExperimentConfig) -> Result<()> {
    let dir = output_dir(
        common.out.as_ref(),
        config.output_dir.as_ref(),
        "gen-graphs",
    );
    prepare_output_dir(&dir, common.force)?;
    let (graphs, rejections) = generate_ensemble(config)?;
    let gdir = dir.join("graphs");
    fs::create_dir_all(&gdir)?;
    let (mut degree, mut clustering, mut distance) = (Vec::new(), Vec::new(), Vec::new());
    let mut unreachable_pairs = 0;
    for (g, graph) in graphs.iter().enumerate() {
        fs::write(gdir.join(format!("graph_{g:04}.txt")), graph.to_text())?;
        let m = unweighted_measures(graph);
        degree.extend(m.degree.iter().map(|&d| d as f64));
        clustering.extend(&m.clustering);
        let (finite, unreachable) = m.pair_distances();
        distance.extend(finite.iter().map(|&d| d as f64));
        unreachable_pairs += unreachable;
    }
    let mut rows = Vec::new();
    for (measure, h) in [
        ("degree", Histogram::integer(&degree)),
        (
            "clustering",
            Histogram::build(&clustering, config.histogram_bins, 0.0, 1.0),
        ),
        ("distance", Histogram::integer(&distance)),
    ] {
        for (b, &count) in h.counts.iter().enumerate() {
            rows.push(MeasureBin {
                measure,
                bin_left: h.edges[b],
                bin_right: h.edges[b + 1],
                count,
            });
        }
    }
    fs::write(dir.join("measures.csv"), write_csv(&rows)?)?;
    let meta = GraphsMeta {
        crate_version: env!("CARGO_PKG_VERSION"),
        master_seed: config.master_seed,
        model: &config.model,
        n: config.n,
        count: graphs.len(),
        require_connected: config.require_connected,
        graph_rejections: rejections,
        unreachable_pairs,
    };
    fs::write(
        dir.join("meta.json"),
        serde_json::to_string_pretty(&meta)? + "\n",
    )?;
    eprintln!(
        "gen-graphs: {} graphs, wrote {}",
        graphs.len(),
        dir.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct GroundStateSummary {
    n: usize,
    links: usize,
    coupling: f64,
    field: f64,
    energy: f64,
    residual: f64,
    matvecs: usize,
}

fn ground_state_cmd(a: &GroundStateArgs) -> Result<()> {
    let text = read_config_text(&a.graph)?;
    let graph = Graph::from_text(&text)?;
    let params = HamiltonianParams::new(a.coupling, a.h)?;
    let ham = SparseHamiltonian::build(&graph, params)?;
    let dir = output_dir(a.out.as_ref(), None, "ground-state");
    prepare_output_dir(&dir, a.force)?;
    let gs = ground_state(&ham, &SolverOptions::default())?;
    let net = build_mi_network(&StateRdms::from_state(&gs.amplitudes)?, None)?;
    gs.write_binary(std::io::BufWriter::new(fs::File::create(
        dir.join("ground_state.bin"),
    )?))?;
    fs::write(dir.join("mi_network.csv"), net.to_csv())?;
    let sidecar = NetworkSidecar {
        n: graph.n(),
        threshold: PATH_THRESHOLD,
        provenance: format!(
            "ground state of {} with J={}, h={}",
            a.graph.display(),
            a.coupling,
            a.h
        ),
    };
    fs::write(
        dir.join("mi_network.json"),
        serde_json::to_string_pretty(&sidecar)? + "\n",
    )?;
    let summary = GroundStateSummary {
        n: graph.n(),
        links: graph.link_count(),
        coupling: a.coupling,
        field: a.h,
        energy: gs.energy,
        residual: gs.residual,
        matvecs: gs.matvecs,
    };
    fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)? + "\n",
    )?;
    println!("energy {}", gs.energy);
    Ok(())
}

fn classical_config(
    common: &Common,
    sizes: Option<Vec<usize>>,
    count: Option<usize>,
    fraction: Option<f64>,
) -> Result<ClassicalConfig> {
    let (mut c, text) = match &common.config {
        Some(path) => {
            let text = read_config_text(path)?;
            (parse_json::<ClassicalConfig>(&text)?, Some(text))
        }
        None => (ClassicalConfig::default(), None),
    };
    if let Some(v) = sizes {
        c.sizes = v;
    }
    if let Some(v) = count {
        c.ensemble_size = v;
    }
    if let Some(v) = fraction {
        c.fraction = v;
    }
    if let Some(seed) = common.seed {
        c.master_seed = seed;
    }
    c.validate().map_err(|e| match &text {
        Some(t) => locate_in(t, e),
        None => e,
    })?;
    Ok(c)
}

fn classical(common: &Common, config: &ClassicalConfig) -> Result<()> {
    let dir = output_dir(common.out.as_ref(), config.output_dir.as_ref(), "classical");
    prepare_output_dir(&dir, common.force)?;
    let out = run_classical_attack_study(config)?;
    write_classical(&dir, &out)?;
    for r in out
        .rows
        .iter()
        .filter(|r| r.measure == spinnet::experiments::ClassicalMeasure::Degree)
    {
        println!(
            "{} n={} {}: mean degree {:.3}, p95 {:.2}",
            r.model,
            r.n,
            r.strategy.label(),
            r.mean,
            r.p95
        );
    }
    eprintln!("classical: wrote {}", dir.display());
    Ok(())
}

fn report(a: &ReportArgs) -> Result<()> {
    let tables: Vec<ResultTable> = a
        .inputs
        .iter()
        .map(|d| read_results(d))
        .collect::<Result<_>>()?;
    let source = match a.source {
        SourceArg::Exact => Source::Exact,
        SourceArg::Mf => Source::Mf,
        SourceArg::Mf0 => Source::Mf0,
    };
    let refs: Vec<&ResultTable> = tables.iter().collect();
    let report = collapse_report(&refs, source)?;
    let dir = output_dir(a.out.as_ref(), None, "report");
    prepare_output_dir(&dir, a.force)?;
    write_report(&dir, &report)?;
    for d in &report.deviations {
        println!(
            "{}: {} curves, max deviation {:.4}",
            d.model, d.curves, d.max_deviation
        );
    }
    Ok(())
}
