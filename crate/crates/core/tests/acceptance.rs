//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use spinnet::experiments::output::{prepare_output_dir, write_classical, write_run};
use spinnet::experiments::{
    collapse_report, run_classical_attack_study, run_ground_state_sweep, run_quantum,
    ClassicalConfig, ClassicalMeasure, ClassicalStrategy, ExperimentConfig, FieldGrid, Measure,
    ResultRow, ResultTable, RunOutput, Source,
};
use spinnet::graphs::{gen_erdos_renyi, GraphModelSpec};
use spinnet::hilbert::{ground_state, SolverOptions};
use spinnet::meanfield::{
    mf0_measures, mf_general_solve, mf_mi_network, mf_rdms, mf_uniform, mf_uniform_mi, MfOptions,
};
use spinnet::minet::{
    build_mi_network, weighted_clustering, weighted_degree, weighted_shortest_paths,
};
use spinnet::quantum_state::{attacked_pair_rdm, reduce_pair, StateRdms};
use spinnet::rng::Stream;
use spinnet::{
    AttackSpec, Direction, Graph, GraphModel, HamiltonianParams, SparseHamiltonian, TargetStrategy,
};

type Verdict = (bool, String);

fn models() -> [GraphModel; 3] {
    [
        GraphModel::default_er(14),
        GraphModel::WattsStrogatz { k: 4, p: 0.5 },
        GraphModel::BarabasiAlbert { m: 3 },
    ]
}

fn lambda_grid() -> Vec<f64> {
    let mut v = vec![0.0];
    v.extend((0..13).map(|i| 0.25 * 12f64.powf(i as f64 / 12.0)));
    v
}

fn attack(direction: Direction, q: f64, strategy: TargetStrategy) -> Option<AttackSpec> {
    Some(AttackSpec {
        direction,
        q,
        fraction: 0.2,
        strategy,
    })
}

fn variants() -> Vec<Option<AttackSpec>> {
    use Direction::{X, Z};
    use TargetStrategy::{Preferential, Random};
    vec![
        None,
        attack(X, 0.5, Random),
        attack(X, 1.0, Random),
        attack(Z, 0.5, Random),
        attack(Z, 1.0, Random),
        attack(X, 0.5, Preferential),
        attack(X, 1.0, Preferential),
    ]
}

/// The desk-scale ensemble shared by the statistical criteria.
struct Shared {
    runs: BTreeMap<&'static str, RunOutput>,
    seconds: f64,
}

impl Shared {
    fn compute() -> Self {
        let start = Instant::now();
        let mut runs = BTreeMap::new();
        for model in models() {
            let mut c = ExperimentConfig::desk(model);
            c.grid = FieldGrid::Lambda(lambda_grid());
            c.master_seed = 2024;
            let out =
                run_quantum(&c, &[Source::Exact, Source::Mf0], &variants()).expect("shared run");
            runs.insert(model.label(), out);
        }
        Self {
            runs,
            seconds: start.elapsed().as_secs_f64(),
        }
    }

    fn rows(
        &self,
        model: &str,
        source: Source,
        measure: Measure,
        attack: Option<AttackSpec>,
    ) -> Vec<&ResultRow> {
        self.runs[model]
            .table
            .select(source, measure, attack)
            .collect()
    }
}

fn ghz_fixed_point() -> Verdict {
    let start = Instant::now();
    let mut worst_mi = 0.0f64;
    let mut graphs: Vec<Graph> = Vec::new();
    for n in [6, 10, 14] {
        graphs.push(Graph::path(n));
        graphs.push(Graph::star(n));
        graphs.push(Graph::ring_lattice(n, 2).unwrap());
        let spec = GraphModelSpec {
            model: GraphModel::ErdosRenyi { p: 0.4 },
            n,
            require_connected: true,
        };
        graphs.push(
            spec.generate(&mut Stream::seed_from_u64(n as u64))
                .unwrap()
                .graph,
        );
    }
    for g in &graphs {
        let ham = SparseHamiltonian::build(g, HamiltonianParams::new(1.0, 0.0).unwrap()).unwrap();
        let gs = ground_state(&ham, &SolverOptions::default()).unwrap();
        let net = build_mi_network(&StateRdms::from_state(&gs.amplitudes).unwrap(), None).unwrap();
        for i in 0..g.n() {
            for j in (i + 1)..g.n() {
                worst_mi = worst_mi.max((net.get(i, j) - 0.5).abs());
            }
        }
    }
    let mut worst_moment = 0.0f64;
    for n in [6, 10, 14] {
        let mut c = ExperimentConfig::desk(GraphModel::default_er(n));
        c.n = n;
        c.ensemble_size = 5;
        c.grid = FieldGrid::HOverJ(vec![0.0]);
        let out = run_ground_state_sweep(&c).unwrap();
        for r in &out.table.rows {
            let target = if r.measure == Measure::Distance {
                2.0
            } else {
                0.5
            };
            worst_moment = worst_moment.max((r.mean - target).abs()).max(r.width);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst_mi < 1e-9 && worst_moment < 1e-9 && secs < 60.0,
        format!(
            "max |I-0.5| = {worst_mi:.1e}, max moment error/width = {worst_moment:.1e}, {secs:.1}s"
        ),
    )
}

fn paramagnetic_limit() -> Verdict {
    let start = Instant::now();
    let mut c = ExperimentConfig::desk(GraphModel::default_er(14));
    c.grid = FieldGrid::HOverJ(vec![100.0]);
    c.master_seed = 5;
    let out = run_ground_state_sweep(&c).unwrap();
    let k = out
        .table
        .select(Source::Exact, Measure::KNorm, None)
        .next()
        .unwrap()
        .mean;
    let cl = out
        .table
        .select(Source::Exact, Measure::Clustering, None)
        .next()
        .unwrap()
        .mean;
    let secs = start.elapsed().as_secs_f64();
    (
        k < 0.01 && cl < 0.01 && secs < 300.0,
        format!("mean k/(n-1) = {k:.2e}, mean C = {cl:.2e}, {secs:.1}s"),
    )
}

fn oracle_equivalence() -> Verdict {
    let mut rng = Stream::seed_from_u64(11);
    let mut worst_e = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(2..=10);
        let g = gen_erdos_renyi(n, rng.gen_range(0.2..0.9), &mut rng);
        let field = rng.gen_range(0.05..4.0);
        let ham =
            SparseHamiltonian::build(&g, HamiltonianParams::new(1.0, field).unwrap()).unwrap();
        let gs = ground_state(&ham, &SolverOptions::default()).unwrap();
        worst_e = worst_e.max((gs.energy - common::dense_ground_energy(&g, 1.0, field)).abs());
    }
    let mut worst_rdm = 0.0f64;
    for n in 2..=6 {
        for _ in 0..4 {
            let psi = common::random_state(n, &mut rng);
            let rho = common::projector(&psi);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        let dense = common::dense_pair_trace(&rho, n, i, j);
                        worst_rdm =
                            worst_rdm.max(reduce_pair(&psi, i, j).unwrap().max_abs_diff(&dense));
                    }
                }
            }
        }
    }
    (
        worst_e < 1e-8 && worst_rdm < 1e-12,
        format!("max energy gap {worst_e:.1e}, max RDM gap {worst_rdm:.1e}"),
    )
}

fn attack_locality() -> Verdict {
    let n = 6;
    let mut rng = Stream::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let psi = common::random_state(n, &mut rng);
        let count = rng.gen_range(1..=n);
        let attacked = rand::seq::index::sample(&mut rng, n, count).into_vec();
        for direction in [Direction::X, Direction::Z] {
            for q in [0.0, 0.3, 1.0] {
                let spec = AttackSpec {
                    direction,
                    q,
                    fraction: 0.0,
                    strategy: TargetStrategy::Random,
                };
                let mut rho = common::projector(&psi);
                for &k in &attacked {
                    rho = common::dense_attack(&rho, n, k, direction, q);
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        let oracle = common::dense_pair_trace(&rho, n, i, j);
                        let fast = attacked_pair_rdm(&psi, i, j, &attacked, &spec).unwrap();
                        worst = worst.max(fast.max_abs_diff(&oracle));
                    }
                }
            }
        }
    }
    (
        worst < 1e-10,
        format!("max gap {worst:.1e} over 20 sets x 2 directions x 3 strengths"),
    )
}

fn mf_consistency() -> Verdict {
    let mut worst_closed = 0.0f64;
    for k in 0..=200 {
        let m = k as f64 / 200.0;
        let route = mf_rdms(m, m).mutual_information().unwrap();
        worst_closed = worst_closed.max((route - mf_uniform_mi(m)).abs());
    }
    let mut worst_residual = 0.0f64;
    let mut rng = Stream::seed_from_u64(13);
    for _ in 0..20 {
        let g = gen_erdos_renyi(14, 0.38, &mut rng);
        let field = rng.gen_range(0.2..8.0);
        let sol = mf_general_solve(&g, 1.0, field, &MfOptions::default()).unwrap();
        worst_residual = worst_residual.max(sol.residual);
    }
    let mut worst_regular = 0.0f64;
    let ring = Graph::ring_lattice(14, 4).unwrap();
    for lambda in [0.1, 0.4, 0.7, 0.95, 1.2] {
        let sol = mf_general_solve(&ring, 1.0, 4.0 * lambda, &MfOptions::default()).unwrap();
        let m0 = mf_uniform(lambda).m;
        let net = mf_mi_network(&sol.m).unwrap();
        let mf0 = mf0_measures(lambda, 14);
        let k = weighted_degree(&net).iter().sum::<f64>() / (14.0 * 13.0);
        let c = weighted_clustering(&net).iter().sum::<f64>() / 14.0;
        let d = weighted_shortest_paths(&net)
            .pair_values()
            .collect::<Vec<_>>();
        let mut gap = sol.m.iter().map(|m| (m - m0).abs()).fold(0.0, f64::max);
        gap = gap
            .max((k - mf0.degree).abs())
            .max((c - mf0.clustering).abs());
        if mf0.distance.is_finite() {
            gap = gap.max(
                d.iter()
                    .map(|x| (x - mf0.distance).abs())
                    .fold(0.0, f64::max)
                    / mf0.distance,
            );
        } else {
            gap = gap.max(if d.iter().all(|x| x.is_infinite()) {
                0.0
            } else {
                1.0
            });
        }
        worst_regular = worst_regular.max(gap);
    }
    (
        worst_closed < 1e-9 && worst_residual < 1e-10 && worst_regular < 1e-9,
        format!(
            "closed form vs entropy {worst_closed:.1e}, max residual {worst_residual:.1e}, regular-graph gap {worst_regular:.1e}"
        ),
    )
}

fn lambda_collapse(s: &Shared) -> Verdict {
    let labels: Vec<&str> = s.runs.keys().copied().collect();
    let mut worst = (0.0f64, 0.0, String::new());
    for (a, la) in labels.iter().enumerate() {
        for lb in &labels[a + 1..] {
            let ra = s.rows(la, Source::Exact, Measure::KNorm, None);
            let rb = s.rows(lb, Source::Exact, Measure::KNorm, None);
            for (x, y) in ra.iter().zip(&rb) {
                assert_eq!(x.lambda, y.lambda);
                if x.lambda > 0.2 && x.lambda <= 3.0 + 1e-12 {
                    let gap = (x.mean - y.mean).abs();
                    if gap > worst.0 {
                        worst = (gap, x.lambda, format!("{la} vs {lb}"));
                    }
                }
            }
        }
    }
    (
        worst.0 < 0.05,
        format!(
            "max pairwise gap {:.4} ({} at lambda={:.3})",
            worst.0, worst.2, worst.1
        ),
    )
}

fn mf0_vs_exact(s: &Shared) -> Verdict {
    let mut worst = (0.0f64, String::new());
    for model in s.runs.keys() {
        for measure in [Measure::KNorm, Measure::Clustering] {
            let exact = s.rows(model, Source::Exact, measure, None);
            let mf0 = s.rows(model, Source::Mf0, measure, None);
            for (e, m) in exact.iter().zip(&mf0) {
                if e.lambda >= 0.3 - 1e-12 && e.lambda <= 3.0 + 1e-12 {
                    let gap = (e.mean - m.mean).abs();
                    if gap > worst.0 {
                        worst = (
                            gap,
                            format!("{model} {} at lambda={:.3}", measure.label(), e.lambda),
                        );
                    }
                }
            }
        }
    }
    (
        worst.0 <= 0.07,
        format!("max |MF0 - exact| = {:.4} ({})", worst.0, worst.1),
    )
}

/// Largest `|Δmean| / (2·pooled SE)` between two variants over every model,
/// measure and grid point; passes below 1 (identical means always pass).
fn within_two_se(
    s: &Shared,
    reference: Option<AttackSpec>,
    others: &[Option<AttackSpec>],
) -> Verdict {
    let mut worst = (0.0f64, String::new());
    let mut checked = 0;
    for model in s.runs.keys() {
        for measure in Measure::ALL {
            let base = s.rows(model, Source::Exact, measure, reference);
            for other in others {
                let rows = s.rows(model, Source::Exact, measure, *other);
                for (a, b) in base.iter().zip(&rows) {
                    checked += 1;
                    let diff = (a.mean - b.mean).abs();
                    if diff == 0.0 {
                        continue;
                    }
                    let se = (a.standard_error().powi(2) + b.standard_error().powi(2)).sqrt();
                    let ratio = diff / (2.0 * se);
                    if !(ratio <= worst.0) {
                        let q = other.map(|a| a.q).unwrap_or(0.0);
                        worst = (
                            ratio,
                            format!(
                                "{model} {} q={q} lambda={:.3}: |diff|={diff:.3e}, 2SE={:.3e}",
                                measure.label(),
                                a.lambda,
                                2.0 * se
                            ),
                        );
                    }
                }
            }
        }
    }
    (
        worst.0 < 1.0,
        format!(
            "{checked} comparisons, worst |diff|/2SE = {:.3} ({})",
            worst.0, worst.1
        ),
    )
}

fn z_invariance(s: &Shared) -> Verdict {
    let z = [
        attack(Direction::Z, 0.5, TargetStrategy::Random),
        attack(Direction::Z, 1.0, TargetStrategy::Random),
    ];
    within_two_se(s, None, &z)
}

fn strategy_indifference(s: &Shared) -> Verdict {
    let mut pass = true;
    let mut detail = Vec::new();
    for q in [0.5, 1.0] {
        let (ok, d) = within_two_se(
            s,
            attack(Direction::X, q, TargetStrategy::Random),
            &[attack(Direction::X, q, TargetStrategy::Preferential)],
        );
        pass &= ok;
        detail.push(format!("q={q}: {d}"));
    }
    (pass, detail.join("; "))
}

fn rescaling_collapse(s: &Shared) -> Verdict {
    use Direction::{X, Z};
    let five = [
        None,
        attack(X, 0.5, TargetStrategy::Random),
        attack(X, 1.0, TargetStrategy::Random),
        attack(Z, 0.5, TargetStrategy::Random),
        attack(Z, 1.0, TargetStrategy::Random),
    ];
    let mut worst = (0.0f64, String::new());
    for (model, run) in &s.runs {
        let rows: Vec<ResultRow> = run
            .table
            .rows
            .iter()
            .filter(|r| r.source == Source::Exact && five.contains(&r.attack()))
            .cloned()
            .collect();
        let table = ResultTable { rows };
        let report = collapse_report(&[&table], Source::Exact).unwrap();
        let dev = &report.deviations[0];
        assert_eq!(dev.curves, 5);
        if dev.max_deviation >= worst.0 {
            worst = (
                dev.max_deviation,
                format!("{model}: {} at lambda={:.3}", dev.between, dev.at_lambda),
            );
        }
    }
    (
        worst.0 < 0.05,
        format!("max normalized gap {:.4} ({})", worst.0, worst.1),
    )
}

fn classical_removal() -> Verdict {
    let start = Instant::now();
    let config = ClassicalConfig {
        master_seed: 3,
        ..ClassicalConfig::default()
    };
    let out = run_classical_attack_study(&config).unwrap();
    let p95 = |n, s| out.row("BA", n, s, ClassicalMeasure::Degree).unwrap().p95;
    let effect = |n| p95(n, ClassicalStrategy::Random) - p95(n, ClassicalStrategy::Targeted);
    let (e20, e54) = (effect(20), effect(54));
    let secs = start.elapsed().as_secs_f64();
    (
        p95(54, ClassicalStrategy::Targeted) < p95(54, ClassicalStrategy::Random) && e54 > e20 && secs < 120.0,
        format!(
            "BA p95 degree n=54: random {:.2}, targeted {:.2}; effect n=20 {e20:.2}, n=54 {e54:.2}; {secs:.1}s",
            p95(54, ClassicalStrategy::Random),
            p95(54, ClassicalStrategy::Targeted)
        ),
    )
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.insert(
                    p.strip_prefix(dir).unwrap().display().to_string(),
                    std::fs::read(&p).unwrap(),
                );
            }
        }
    }
    files
}

fn determinism() -> Verdict {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = ExperimentConfig::desk(GraphModel::BarabasiAlbert { m: 2 });
    c.n = 10;
    c.ensemble_size = 4;
    c.realizations = 3;
    c.master_seed = 77;
    c.grid = FieldGrid::HOverJ(vec![0.0, 0.7, 2.5]);
    let variants = [
        None,
        attack(Direction::X, 0.5, TargetStrategy::Preferential),
    ];
    let classical = ClassicalConfig {
        sizes: vec![20],
        ensemble_size: 50,
        master_seed: 8,
        ..ClassicalConfig::default()
    };
    let mut snaps = Vec::new();
    for (run, threads) in [1, 8, 8, 1].into_iter().enumerate() {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let dir = tmp.path().join(format!("run{run}"));
        pool.install(|| {
            prepare_output_dir(&dir.join("q"), false).unwrap();
            let out =
                run_quantum(&c, &[Source::Exact, Source::Mf, Source::Mf0], &variants).unwrap();
            write_run(&dir.join("q"), &out).unwrap();
            prepare_output_dir(&dir.join("c"), false).unwrap();
            write_classical(
                &dir.join("c"),
                &run_classical_attack_study(&classical).unwrap(),
            )
            .unwrap();
        });
        snaps.push(snapshot(&dir));
    }
    let files = snaps[0].len();
    let identical = snaps.iter().all(|s| *s == snaps[0]);
    (
        identical && files > 10,
        format!("{files} files compared across 4 runs (1, 8, 8, 1 threads)"),
    )
}

fn main() {
    let mut outcomes: Vec<(&str, Verdict)> = Vec::new();
    let mut run = |name: &'static str, f: &dyn Fn() -> Verdict| {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        println!(
            "{} {name}: {}",
            if verdict.0 { "PASS" } else { "FAIL" },
            verdict.1
        );
        outcomes.push((name, verdict));
    };

    run("GHZ fixed point", &ghz_fixed_point);
    run("Paramagnetic limit", &paramagnetic_limit);
    run("Oracle equivalence", &oracle_equivalence);
    run("Attack-channel locality", &attack_locality);
    run("MF consistency", &mf_consistency);

    let shared = Shared::compute();
    println!(
        "     (shared n=14 ensemble: 3 models x 20 networks x 14 lambdas x 7 variants, {:.1}s)",
        shared.seconds
    );
    run("Lambda collapse", &|| lambda_collapse(&shared));
    run("MF0 vs exact means", &|| mf0_vs_exact(&shared));
    run("z-attack invariance", &|| z_invariance(&shared));
    run("Strategy indifference", &|| strategy_indifference(&shared));
    run("Rescaling collapse", &|| rescaling_collapse(&shared));

    run("Classical removal study", &classical_removal);
    run("Determinism", &determinism);

    let failed = outcomes.iter().filter(|(_, v)| !v.0).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        outcomes.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
