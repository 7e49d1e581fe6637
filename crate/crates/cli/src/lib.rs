//! `cnr`: solve, simulate and analyse Cops and Robbers on products of trees
//! and hypercubes. Every command writes CSV whose first line is a `#` comment
//! holding the resolved configuration.

pub mod spec;

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cnr_core::cops::{
    capture_bound_for, greedy_cop, parity_greedy_cop, product_single_cop, squad_size, CopPlacement, SquadCops,
};
use cnr_core::engine::{
    batch_play, default_max_rounds, write_summaries_csv, BatchConfig, CopFactory, CopStrategy, EngineError,
    OutcomeKind, RobberFactory, RobberStrategy, StrategyError,
};
use cnr_core::graphs::{hypercube, GraphError, ProductGraph};
use cnr_core::robbers::{max_min_distance_robber, random_robber, PlacementPolicy};
use cnr_core::solver::{self, extract_cops, extract_robber, SolverError, SolverTable};
use cnr_core::stochastic::{
    check_lemma2, coupon_expectation, coupon_simulate, coupon_tail_bound, coupon_tail_threshold, distance_chain,
    lower_bound_params, survival_experiment, StochasticError, SurvivalError,
};
use thiserror::Error;

pub use spec::{parse_graph_spec, SpecError};

pub const COP_STRATEGIES: [&str; 5] = ["greedy", "parity-greedy", "lemma1", "squad", "solver-optimal"];
pub const ROBBER_STRATEGIES: [&str; 3] = ["random", "maxmin", "solver-optimal"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Stochastic(#[from] StochasticError),
    #[error(transparent)]
    Survival(#[from] SurvivalError),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    /// 0 ok, 1 assertion or runtime fault, 2 usage, 3 solver budget (or graph too large to solve).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Spec(_) | CliError::Graph(_) | CliError::Stochastic(_) => 2,
            CliError::Solver(SolverError::Budget { .. } | SolverError::NotExplicit) => 3,
            CliError::Solver(SolverError::Disconnected | SolverError::NoCops) => 2,
            CliError::Survival(SurvivalError::Params(_)) | CliError::Strategy(StrategyError::Unsupported(_)) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cnr", version, about = "Cops and Robbers on Cartesian products of trees and hypercubes")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Base seed; trial `t` uses `seed + t`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub max_rounds: Option<usize>,
    /// Fixed robber start, e.g. `0110` on hypercubes or `2.0.1` on products.
    #[arg(long, global = true)]
    pub robber_start: Option<String>,
    /// Also emit a gnuplot script (to `<out>.gp`, or stderr without `--out`).
    #[arg(long, global = true)]
    pub gnuplot: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StartMode {
    Center,
    Uniform,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact capture time (and optionally cop number) by retrograde analysis.
    Solve {
        spec: String,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        cop_number: bool,
        /// Largest team tried by `--cop-number` (default: k).
        #[arg(long)]
        k_max: Option<usize>,
        /// Export the full value table as CSV.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Play many games and write per-trial summaries.
    Simulate {
        spec: String,
        #[arg(long, default_value = "squad")]
        cops: String,
        #[arg(long, default_value = "random")]
        robber: String,
        /// Team size (default: the squad size for `squad`, else 1).
        #[arg(short)]
        k: Option<usize>,
        /// Where greedy cops start.
        #[arg(long, value_enum, default_value_t = StartMode::Center)]
        cop_start: StartMode,
        /// Fail (exit 1) if any game is longer than this or not captured.
        #[arg(long)]
        assert_bound: Option<usize>,
    },
    /// Squad bound, observed squad capture length and survival threshold per `n`.
    Scaling {
        #[arg(short, long, value_delimiter = ',', default_value = "4,8,11,16,32,64")]
        n: Vec<usize>,
        #[arg(long, default_value = "maxmin")]
        robber: String,
        /// Skip the simulation column.
        #[arg(long)]
        no_sim: bool,
    },
    /// Coupon-collector process: exact mean, simulated mean and tail.
    Coupon {
        #[arg(short)]
        m: usize,
        #[arg(long)]
        m0: usize,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Capture-probability table of the distance chain.
    Chain {
        #[arg(short)]
        n: usize,
        #[arg(short = 'T')]
        horizon: usize,
        /// Exit 1 if either monotonicity inequality fails anywhere.
        #[arg(long)]
        check_lemma2: bool,
    },
    /// Survival of a random robber against many random greedy cops on `Q_n`.
    Survive {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        cops: usize,
    },
}

/// `# cnr <cmd> key=value ...`
fn meta(cmd: &str, pairs: &[(&str, String)]) -> String {
    let mut s = format!("# cnr {cmd}");
    for (k, v) in pairs {
        let _ = write!(s, " {k}={v}");
    }
    s
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "none".to_string(), T::to_string)
}

fn explicit_of(graph: &ProductGraph) -> Result<&cnr_core::graphs::ExplicitGraph, CliError> {
    graph.explicit().ok_or(CliError::Solver(SolverError::NotExplicit))
}

/// Strategy instances for one experiment, built once and cloned per trial.
pub struct Binding {
    pub cops: CopFactory,
    pub robber: RobberFactory,
    pub k: usize,
}

/// Resolves strategy names against `graph`. Tree-only strategies are checked
/// here, so an unusable combination fails before any game is played.
pub fn bind_strategies(
    graph: &Arc<ProductGraph>,
    cops: &str,
    robber: &str,
    k: Option<usize>,
    cop_start: StartMode,
    robber_start: Option<&str>,
) -> Result<Binding, CliError> {
    let k = match (k, cops) {
        (Some(0), _) => return Err(CliError::Usage("k must be at least 1".into())),
        (Some(k), _) => k,
        (None, "squad") => squad_size(graph.dimension()),
        (None, _) => 1,
    };
    let start = robber_start.map(|s| graph.parse_vertex(s)).transpose()?;
    let needs_table = cops == "solver-optimal" || robber == "solver-optimal";
    let table: Option<Arc<SolverTable>> =
        if needs_table { Some(Arc::new(solver::solve(explicit_of(graph)?, k)?)) } else { None };
    let placement = match cop_start {
        StartMode::Center => CopPlacement::Center,
        StartMode::Uniform => CopPlacement::Uniform,
    };
    let cop_factory: CopFactory = match cops {
        "greedy" => Arc::new(move || Ok(Box::new(greedy_cop(placement.clone())) as Box<dyn CopStrategy>)),
        "parity-greedy" => Arc::new(move || Ok(Box::new(parity_greedy_cop(placement.clone())) as Box<dyn CopStrategy>)),
        "lemma1" => {
            if graph.dimension() != 2 || !graph.all_factors_trees() || k != 1 {
                return Err(CliError::Usage("lemma1 needs one cop on a product of two trees".into()));
            }
            Arc::new(|| Ok(Box::new(product_single_cop()) as Box<dyn CopStrategy>))
        }
        "squad" => {
            let proto = SquadCops::new(graph)?;
            if k != proto.cops() {
                return Err(CliError::Usage(format!("squad uses exactly {} cops here, not {k}", proto.cops())));
            }
            Arc::new(move || Ok(Box::new(proto.clone()) as Box<dyn CopStrategy>))
        }
        "solver-optimal" => {
            let proto = extract_cops(table.clone().expect("table built"));
            Arc::new(move || Ok(Box::new(proto.clone()) as Box<dyn CopStrategy>))
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown cop strategy `{other}`; choose from {}",
                COP_STRATEGIES.join(", ")
            )))
        }
    };
    let policy = match &start {
        Some(v) => PlacementPolicy::Fixed(v.clone()),
        None => PlacementPolicy::FarFromCops,
    };
    let robber_factory: RobberFactory = match robber {
        "random" => {
            let proto = random_robber(policy);
            Arc::new(move || Ok(Box::new(proto.clone()) as Box<dyn RobberStrategy>))
        }
        "maxmin" => {
            let proto = max_min_distance_robber(policy);
            Arc::new(move || Ok(Box::new(proto.clone()) as Box<dyn RobberStrategy>))
        }
        "solver-optimal" => {
            let proto = extract_robber(table.expect("table built")).with_start(start);
            Arc::new(move || Ok(Box::new(proto.clone()) as Box<dyn RobberStrategy>))
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown robber strategy `{other}`; choose from {}",
                ROBBER_STRATEGIES.join(", ")
            )))
        }
    };
    Ok(Binding { cops: cop_factory, robber: robber_factory, k })
}

/// Result of `solve`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub graph: String,
    pub k: usize,
    /// `Some(Ok(c))`, `Some(Err(k_max))` when it exceeds `k_max`, `None` if not asked.
    pub cop_number: Option<Result<usize, usize>>,
    pub capture_time: Option<u32>,
}

impl SolveReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("graph={} k={}", self.graph, self.k)];
        match self.cop_number {
            Some(Ok(c)) => out.push(format!("cop number = {c}")),
            Some(Err(k)) => out.push(format!("cop number exceeds {k}")),
            None => {}
        }
        match self.capture_time {
            Some(t) => out.push(format!("capt_{} = {t}", self.k)),
            None => out.push(format!("capt_{} = inf", self.k)),
        }
        out
    }
}

pub fn cmd_solve(
    spec: &str,
    k: usize,
    cop_number: bool,
    k_max: Option<usize>,
    table_out: Option<&Path>,
) -> Result<SolveReport, CliError> {
    if k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    let graph = parse_graph_spec(spec)?;
    let ex = explicit_of(&graph)?;
    let cop_number = if cop_number {
        let kmax = k_max.unwrap_or(k);
        Some(match solver::cop_number(ex, kmax) {
            Ok(c) => Ok(c),
            Err(SolverError::CopNumberExceeds(m)) => Err(m),
            Err(e) => return Err(e.into()),
        })
    } else {
        None
    };
    let table = solver::solve(ex, k)?;
    if let Some(path) = table_out {
        let mut f = io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "{}", meta("solve", &[("graph", spec.to_string()), ("k", k.to_string())]))?;
        table.write_csv(&mut f)?;
        f.flush()?;
    }
    Ok(SolveReport { graph: graph.name().to_string(), k, cop_number, capture_time: table.capture_time() })
}

/// A finished CSV document plus what a plot of it should show.
pub struct CsvDoc {
    pub text: String,
    pub title: String,
    pub x: usize,
    pub ys: Vec<usize>,
}

fn csv_header(meta_line: String, header: &str) -> String {
    format!("{meta_line}\n{header}\n")
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate(
    g: &Global,
    spec: &str,
    cops: &str,
    robber: &str,
    k: Option<usize>,
    cop_start: StartMode,
    assert_bound: Option<usize>,
) -> Result<(CsvDoc, Option<CliError>), CliError> {
    let graph = Arc::new(parse_graph_spec(spec)?);
    let b = bind_strategies(&graph, cops, robber, k, cop_start, g.robber_start.as_deref())?;
    let trials = g.trials.unwrap_or(100);
    let max_rounds = g.max_rounds.unwrap_or_else(|| default_max_rounds(&graph));
    let cfg =
        BatchConfig { graph: graph.clone(), cops: b.k, max_rounds, cop_factory: b.cops, robber_factory: b.robber };
    let rows = batch_play(&cfg, trials, g.seed)?;
    let m = meta(
        "simulate",
        &[
            ("graph", spec.to_string()),
            ("cops", cops.to_string()),
            ("robber", robber.to_string()),
            ("k", b.k.to_string()),
            ("cop_start", format!("{cop_start:?}").to_lowercase()),
            ("robber_start", opt(&g.robber_start)),
            ("trials", trials.to_string()),
            ("seed", g.seed.to_string()),
            ("max_rounds", max_rounds.to_string()),
            ("assert_bound", opt(&assert_bound)),
        ],
    );
    let mut buf = Vec::new();
    writeln!(buf, "{m}")?;
    write_summaries_csv(&mut buf, &rows)?;
    let text = String::from_utf8(buf).expect("ascii csv");
    let failed = assert_bound.and_then(|bound| {
        let bad: Vec<usize> =
            rows.iter().filter(|r| r.outcome != OutcomeKind::Captured || r.length > bound).map(|r| r.trial).collect();
        (!bad.is_empty()).then(|| {
            CliError::Assertion(format!(
                "{} of {trials} trials exceeded {bound} rounds (first: trial {})",
                bad.len(),
                bad[0]
            ))
        })
    });
    Ok((CsvDoc { text, title: format!("{spec}: game length per trial"), x: 1, ys: vec![4] }, failed))
}

/// One `scaling` row.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub bound: usize,
    pub simulated_max: Option<usize>,
    /// Survival threshold with `n` cops; absent below `n = 3`.
    pub threshold: Option<f64>,
    pub violations: usize,
}

pub fn scaling_rows(
    ns: &[usize],
    robber: &str,
    trials: usize,
    seed: u64,
    simulate: bool,
) -> Result<Vec<ScalingRow>, CliError> {
    let mut rows = Vec::new();
    for &n in ns {
        let graph = Arc::new(hypercube(n)?);
        let bound = capture_bound_for(&graph);
        let threshold = if n >= 3 { Some(lower_bound_params(n, 1.0)?.threshold) } else { None };
        let (simulated_max, violations) = if simulate {
            let b = bind_strategies(&graph, "squad", robber, None, StartMode::Center, None)?;
            let cfg = BatchConfig {
                graph: graph.clone(),
                cops: b.k,
                max_rounds: bound + 1,
                cop_factory: b.cops,
                robber_factory: b.robber,
            };
            let res = batch_play(&cfg, trials, seed)?;
            let bad = res.iter().filter(|r| r.outcome != OutcomeKind::Captured || r.length > bound).count();
            (res.iter().map(|r| r.length).max(), bad)
        } else {
            (None, 0)
        };
        rows.push(ScalingRow { n, bound, simulated_max, threshold, violations });
    }
    Ok(rows)
}

pub fn cmd_scaling(
    g: &Global,
    ns: &[usize],
    robber: &str,
    no_sim: bool,
) -> Result<(CsvDoc, Option<CliError>), CliError> {
    let trials = g.trials.unwrap_or(20);
    let rows = scaling_rows(ns, robber, trials, g.seed, !no_sim)?;
    let list = ns.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    let mut text = csv_header(
        meta(
            "scaling",
            &[
                ("n", list),
                ("cops", "squad".into()),
                ("robber", robber.into()),
                ("trials", trials.to_string()),
                ("seed", g.seed.to_string()),
                ("sim", (!no_sim).to_string()),
                ("survival_d", "1".into()),
            ],
        ),
        "n,bound,simulated_max,threshold",
    );
    for r in &rows {
        let _ = writeln!(
            text,
            "{},{},{},{}",
            r.n,
            r.bound,
            opt(&r.simulated_max),
            r.threshold.map_or("".into(), |t| t.to_string())
        );
    }
    let bad: usize = rows.iter().map(|r| r.violations).sum();
    let failed = (bad > 0).then(|| CliError::Assertion(format!("{bad} squad games exceeded the bound")));
    Ok((CsvDoc { text, title: "capture time scaling".into(), x: 1, ys: vec![2, 3, 4] }, failed))
}

pub fn cmd_coupon(g: &Global, m: usize, m0: usize, eps: Option<f64>) -> Result<CsvDoc, CliError> {
    let trials = g.trials.unwrap_or(100_000);
    let expectation = coupon_expectation(m, m0)?;
    let threshold = eps.map(|e| coupon_tail_threshold(m, e));
    let bound = eps.map(|e| coupon_tail_bound(m, m0, e)).transpose()?;
    let s = coupon_simulate(m, m0, trials, g.seed, threshold.unwrap_or(0.0))?;
    let mut text = csv_header(
        meta(
            "coupon",
            &[
                ("m", m.to_string()),
                ("m0", m0.to_string()),
                ("eps", opt(&eps)),
                ("trials", trials.to_string()),
                ("seed", g.seed.to_string()),
            ],
        ),
        "m,m0,trials,expectation,mean,eps,threshold,tail,bound",
    );
    let blank = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
    let _ = writeln!(
        text,
        "{m},{m0},{trials},{expectation},{},{},{},{},{}",
        s.mean,
        blank(eps),
        blank(threshold),
        if eps.is_some() { s.tail.to_string() } else { String::new() },
        blank(bound)
    );
    Ok(CsvDoc { text, title: format!("coupon m={m} m0={m0}"), x: 2, ys: vec![4, 5] })
}

pub fn cmd_chain(n: usize, horizon: usize, check: bool) -> Result<(CsvDoc, Option<CliError>), CliError> {
    let table = distance_chain(n, horizon)?;
    let mut text = csv_header(
        meta("chain", &[("n", n.to_string()), ("T", horizon.to_string()), ("check_lemma2", check.to_string())]),
        "d,t,p",
    );
    for d in 0..=n {
        for t in 0..=horizon {
            let _ = writeln!(text, "{d},{t},{}", table.p(d, t));
        }
    }
    let mut failed = None;
    if check {
        let v = check_lemma2(n, horizon)?;
        if let Some(first) = v.first() {
            failed = Some(CliError::Assertion(format!(
                "{} monotonicity violations, first {:?} at k={} t={} ({} < {})",
                v.len(),
                first.part,
                first.k,
                first.t,
                first.lhs,
                first.rhs
            )));
        }
    }
    Ok((CsvDoc { text, title: format!("capture probability, n={n}"), x: 2, ys: vec![3] }, failed))
}

pub fn cmd_survive(g: &Global, n: usize, cops: usize) -> Result<CsvDoc, CliError> {
    let trials = g.trials.unwrap_or(200);
    let r = survival_experiment(n, cops, trials, g.seed, g.max_rounds)?;
    let mut text = csv_header(
        meta(
            "survive",
            &[
                ("n", n.to_string()),
                ("cops", cops.to_string()),
                ("trials", trials.to_string()),
                ("seed", g.seed.to_string()),
                ("max_rounds", opt(&g.max_rounds)),
                ("cop_strategy", "parity-greedy/uniform".into()),
                ("robber", format!("random/far>={}", r.params.placement_distance)),
            ],
        ),
        "n,cops,trials,threshold,required_rounds,survived,fraction,q10,q50,q90",
    );
    let _ = writeln!(
        text,
        "{n},{cops},{trials},{},{},{},{},{},{},{}",
        r.params.threshold,
        r.required_rounds,
        r.survived,
        r.fraction,
        r.quantile(0.1),
        r.quantile(0.5),
        r.quantile(0.9)
    );
    Ok(CsvDoc { text, title: format!("survival on Q{n}"), x: 1, ys: vec![7] })
}

/// Plot script reading the CSV at `data`.
pub fn gnuplot_script(doc: &CsvDoc, data: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set title '{}'", doc.title.replace('\'', ""));
    let plots: Vec<String> = doc.ys.iter().map(|y| format!("'{data}' using {}:{y} with linespoints", doc.x)).collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    let _ = writeln!(s, "pause -1");
    s
}

fn emit(g: &Global, doc: &CsvDoc, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &g.out {
        Some(path) => {
            std::fs::write(path, &doc.text)?;
            if g.gnuplot {
                let mut gp = path.clone().into_os_string();
                gp.push(".gp");
                std::fs::write(&gp, gnuplot_script(doc, &path.display().to_string()))?;
            }
        }
        None => {
            stdout.write_all(doc.text.as_bytes())?;
            if g.gnuplot {
                writeln!(stderr, "# save the CSV as data.csv, then run this script")?;
                stderr.write_all(gnuplot_script(doc, "data.csv").as_bytes())?;
            }
        }
    }
    Ok(())
}

/// Runs one command. Assertion failures are returned after the CSV is written.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let g = &cli.global;
    writeln!(stderr, "seed={}", g.seed)?;
    let (doc, failed) = match &cli.command {
        Command::Solve { spec, k, cop_number, k_max, table } => {
            let report = cmd_solve(spec, *k, *cop_number, *k_max, table.as_deref())?;
            for line in report.lines() {
                writeln!(stdout, "{line}")?;
            }
            return Ok(());
        }
        Command::Simulate { spec, cops, robber, k, cop_start, assert_bound } => {
            cmd_simulate(g, spec, cops, robber, *k, *cop_start, *assert_bound)?
        }
        Command::Scaling { n, robber, no_sim } => cmd_scaling(g, n, robber, *no_sim)?,
        Command::Coupon { m, m0, eps } => (cmd_coupon(g, *m, *m0, *eps)?, None),
        Command::Chain { n, horizon, check_lemma2 } => cmd_chain(*n, *horizon, *check_lemma2)?,
        Command::Survive { n, cops } => (cmd_survive(g, *n, *cops)?, None),
    };
    emit(g, &doc, stdout, stderr)?;
    failed.map_or(Ok(()), Err)
}
