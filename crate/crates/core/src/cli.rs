//! Command-line interface.
//!
//! Eight subcommands expose the pipeline stages: `spectrum` and `itf` report
//! eigenstructure and transfer bounds, `simulate` scans `p(t)`, then
//! `attainability` reduces a pair to its phase congruences, `dio` solves the
//! resulting parity-constrained approximation problem, and `time` converts a
//! denominator into a transfer time with its accuracy guarantees. `geometry`
//! audits the metric `d = -ln p_max` and `route` plans bias fields on rings.
//!
//! Outputs are deterministic: identical arguments, config, and seed produce
//! byte-identical files, so runs can be diffed. JSON is the interchange
//! format (`attainability --out r.json` feeds `dio --report r.json`); CSV is
//! available for matrix- and trace-shaped data. Big integers are serialized
//! as decimal strings, unreachable distances as `null`.
//!
//! Exit status: 0 on success, 1 on a domain error (the computation refused
//! an input), 2 on a usage error (the invocation itself is malformed).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::attainability::{
    attainability_verdict, build_constraints, AttainabilityVerdict, DEFAULT_DEP_MAX_COEFF,
};
use crate::diophantine::{
    ga_weight_search, ln_bigint, parity_fix_by_scaling, parse_parities,
    weighted_simultaneous_approx_with, DiophantineSolution, GaConfig, Parity,
};
use crate::error::Error;
use crate::fixed::Fx;
use crate::geometry::{self, GeometryReport, MetricAudit, SEPARATION_TOL, TRIANGLE_TOL};
use crate::itf::{analyze_pair, pmax_matrix, scan_max_probability, transfer_probability};
use crate::network::{CouplingKind, SpinNetwork, Topology};
use crate::routing::{plan_route, RouteMechanism, RoutePlan};
use crate::spectra::{eigensystem_with, SpectrumSource};
use crate::timing::{
    min_time_for_accuracy, q_min_dirichlet, time_from_solution, QMinBound, TransferTime,
};

/// Entry point; returns the process exit status.
pub fn run() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    match render(argv) {
        Ok(payload) => {
            if !payload.is_empty() {
                print!("{payload}");
            }
            0
        }
        Err(Failure::Help(text)) => {
            print!("{text}");
            0
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(Failure::Domain(err)) => {
            eprintln!("error: {err}");
            1
        }
    }
}

/// Parses and executes an argv, returning what would go to stdout.
///
/// Side-effect outputs (`--out`, route heatmaps) are written to disk; the
/// returned payload is empty in that case.
pub fn render<I, T>(argv: I) -> Result<String, Failure>
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let matches = Cli::command().try_get_matches_from(&argv);
    let cli = match matches {
        Ok(m) => Cli::from_arg_matches(&m).map_err(|e| Failure::Usage(e.to_string()))?,
        Err(e) => {
            return Err(match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Failure::Help(e.render().to_string())
                }
                _ => Failure::Usage(e.render().to_string()),
            });
        }
    };
    let mut config = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        config.output_format = f;
    }
    config.validate()?;
    dispatch(&cli, &config)
}

/// Why a run failed, carrying the exit-status distinction.
#[derive(Debug)]
pub enum Failure {
    /// Help or version text was requested; not an error.
    Help(String),
    /// Malformed invocation (exit 2).
    Usage(String),
    /// The computation rejected a valid invocation (exit 1).
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

#[derive(Parser, Debug)]
#[command(
    name = "spin-itf",
    version,
    about = "Transfer-fidelity bounds, attainability, and bias routing for spin networks",
    disable_help_subcommand = true
)]
struct Cli {
    /// Config file with key=value lines (flags take precedence).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Output format for matrix- and trace-shaped data.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distinct eigenvalues and multiplicities of a network.
    Spectrum {
        #[command(flatten)]
        net: NetArgs,
    },
    /// Transfer-probability bounds: the full p_max matrix or one pair.
    Itf {
        #[command(flatten)]
        net: NetArgs,
        /// Source node (1-based); with --to, reports one pair in detail.
        #[arg(long, requires = "to")]
        from: Option<usize>,
        /// Target node (1-based).
        #[arg(long, requires = "from")]
        to: Option<usize>,
    },
    /// Scan the transfer probability p(t) for one pair.
    Simulate {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Scan horizon.
        #[arg(long, default_value_t = 200.0)]
        tmax: f64,
        /// Grid step.
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
    },
    /// Reduce a pair to phase congruences and decide rational dependence.
    Attainability {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Coefficient bound for the rational-dependence search.
        #[arg(long, default_value_t = DEFAULT_DEP_MAX_COEFF)]
        dep_bound: i64,
    },
    /// Parity-constrained simultaneous Diophantine approximation.
    Dio {
        /// Target reals, comma-separated (double precision).
        #[arg(long, value_delimiter = ',', value_name = "T1,T2,...")]
        theta: Vec<f64>,
        /// Attainability report (JSON) supplying theta, parities, omega_mn.
        #[arg(long, value_name = "FILE", conflicts_with = "theta")]
        report: Option<PathBuf>,
        /// Parity string, one of e/o/x per component (e.g. "oo").
        #[arg(long)]
        parity: Option<String>,
        /// Lattice scale; smaller s buys accuracy with larger denominators.
        #[arg(long)]
        s: Option<f64>,
        /// Lattice weights, comma-separated; default all ones.
        #[arg(long, value_delimiter = ',', value_name = "W1,W2,...")]
        weights: Vec<f64>,
        /// Repair parities by the diagonal scaling iteration.
        #[arg(long, conflicts_with = "ga")]
        fix_parity: bool,
        /// Search lattice weights with the genetic algorithm.
        #[arg(long)]
        ga: bool,
        /// RNG seed; mandatory with --ga.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Transfer time and accuracy guarantees from a denominator.
    Time {
        #[command(flatten)]
        net: NetArgs,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Use this denominator directly (decimal integer).
        #[arg(long)]
        q: Option<String>,
        /// Solve for a denominator at this lattice scale instead.
        #[arg(long, conflicts_with = "q")]
        s: Option<f64>,
        /// Lattice weights for --s; default all ones.
        #[arg(long, value_delimiter = ',', value_name = "W1,W2,...")]
        weights: Vec<f64>,
        /// Probability accuracy. Alone: report the denominator lower bound
        /// q_min. With --q/--s: add that bound to the report. With
        /// --format csv: sweep accuracies down to this floor and emit an
        /// (eps_prob, t_f) scaling table.
        #[arg(long)]
        eps: Option<f64>,
        /// Scan ceiling for the CSV scaling sweep.
        #[arg(long, default_value_t = 200.0)]
        tmax: f64,
        /// Scan step for the CSV scaling sweep.
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
    },
    /// Distance matrix d = -ln p_max with a metric audit.
    Geometry {
        #[command(flatten)]
        net: NetArgs,
    },
    /// Plan bias fields routing one ring pair.
    Route {
        /// Ring size.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Bias strength for the plan and its evaluation.
        #[arg(long)]
        zeta: Option<f64>,
        /// Also write before/after p_max heatmap CSVs next to --out.
        #[arg(long, requires = "out")]
        matrix: bool,
    },
}

#[derive(Args, Clone, Debug)]
struct NetArgs {
    /// Uniform ring on this many nodes.
    #[arg(long, value_name = "N")]
    ring: Option<usize>,
    /// Uniform open chain on this many nodes.
    #[arg(long, value_name = "N", conflicts_with = "ring")]
    chain: Option<usize>,
    /// Network description file (JSON), as written by the library.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["ring", "chain"])]
    net: Option<PathBuf>,
    /// Coupling model for --ring/--chain.
    #[arg(long, value_enum, default_value_t = KindArg::Xx)]
    kind: KindArg,
    /// On-site bias NODE=ZETA; repeatable.
    #[arg(long, value_name = "NODE=ZETA")]
    bias: Vec<String>,
}

impl NetArgs {
    fn build(&self) -> Result<SpinNetwork, Failure> {
        let kind = match self.kind {
            KindArg::Xx => CouplingKind::Xx,
            KindArg::Heisenberg => CouplingKind::Heisenberg,
        };
        let mut net = match (self.ring, self.chain, &self.net) {
            (Some(n), None, None) => SpinNetwork::ring(n, kind)?,
            (None, Some(n), None) => SpinNetwork::chain(n, kind)?,
            (None, None, Some(path)) => SpinNetwork::from_json_file(path)?,
            _ => return Err(usage("exactly one of --ring, --chain, --net is required")),
        };
        for entry in &self.bias {
            let (node, zeta) = parse_bias(entry)?;
            net = net.with_bias(node, zeta)?;
        }
        Ok(net)
    }
}

fn parse_bias(entry: &str) -> Result<(usize, f64), Failure> {
    let (node, zeta) = entry
        .split_once('=')
        .ok_or_else(|| usage(format!("--bias takes NODE=ZETA, got {entry:?}")))?;
    let node: usize = node
        .trim()
        .parse()
        .map_err(|_| usage(format!("bias node {node:?} is not an integer")))?;
    let zeta: f64 = zeta
        .trim()
        .parse()
        .map_err(|_| usage(format!("bias strength {zeta:?} is not a number")))?;
    Ok((node, zeta))
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    Xx,
    Heisenberg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Tunables shared by every subcommand, loadable from a key=value file.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision_bits: u32,
    /// Relative eigenvalue clustering tolerance (numeric spectra).
    pub cluster_tol: Option<f64>,
    /// Dark-overlap threshold.
    pub dark_tol: Option<f64>,
    /// Triangle-inequality slack for the metric audit.
    pub triangle_tol: f64,
    /// LLL reduction parameter as a fraction in (1/4, 1].
    pub lll_delta: (u64, u64),
    pub ga_population: usize,
    pub ga_max_gens: usize,
    pub ga_seed: Option<u64>,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_bits: 192,
            cluster_tol: None,
            dark_tol: None,
            triangle_tol: TRIANGLE_TOL,
            lll_delta: (3, 4),
            ga_population: 200,
            ga_max_gens: 50,
            ga_seed: None,
            output_format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    fn from_file(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path).map_err(Error::from)?;
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key=value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())
                .map_err(|f| match f {
                    Failure::Usage(m) => usage(format!("config line {}: {m}", lineno + 1)),
                    other => other,
                })?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), Failure> {
        let bad = |what: &str| usage(format!("{what} {value:?} for key {key}"));
        match key {
            "precision_bits" => {
                self.precision_bits = value.parse().map_err(|_| bad("bad integer"))?;
            }
            "cluster_tol" => {
                self.cluster_tol = Some(value.parse().map_err(|_| bad("bad number"))?);
            }
            "dark_tol" => {
                self.dark_tol = Some(value.parse().map_err(|_| bad("bad number"))?);
            }
            "triangle_tol" => {
                self.triangle_tol = value.parse().map_err(|_| bad("bad number"))?;
            }
            "lll_delta" => {
                let (num, den) = value
                    .split_once('/')
                    .ok_or_else(|| bad("expected a fraction like 3/4,"))?;
                self.lll_delta = (
                    num.trim().parse().map_err(|_| bad("bad numerator"))?,
                    den.trim().parse().map_err(|_| bad("bad denominator"))?,
                );
            }
            "ga.population" => {
                self.ga_population = value.parse().map_err(|_| bad("bad integer"))?;
            }
            "ga.max_gens" => {
                self.ga_max_gens = value.parse().map_err(|_| bad("bad integer"))?;
            }
            "ga.seed" => {
                self.ga_seed = Some(value.parse().map_err(|_| bad("bad integer"))?);
            }
            "output_format" => {
                self.output_format = match value {
                    "json" => OutputFormat::Json,
                    "csv" => OutputFormat::Csv,
                    _ => return Err(bad("unknown format")),
                };
            }
            _ => return Err(usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), Failure> {
        if self.precision_bits < 64 {
            return Err(usage("precision_bits must be at least 64"));
        }
        if self.precision_bits != 192 {
            return Err(usage(
                "this build fixes the working precision at 192 fractional bits",
            ));
        }
        for (name, tol) in [
            ("cluster_tol", self.cluster_tol),
            ("dark_tol", self.dark_tol),
            ("triangle_tol", Some(self.triangle_tol)),
        ] {
            if let Some(t) = tol {
                if !(t > 0.0) {
                    return Err(usage(format!("{name} must be positive")));
                }
            }
        }
        let (num, den) = self.lll_delta;
        if den == 0 || 4 * num <= den || num > den {
            return Err(usage("lll_delta must lie in (1/4, 1]"));
        }
        if self.ga_population < 2 {
            return Err(usage("ga.population must be at least 2"));
        }
        Ok(())
    }
}

fn dispatch(cli: &Cli, config: &RunConfig) -> Result<String, Failure> {
    match &cli.cmd {
        Command::Spectrum { net } => cmd_spectrum(cli, config, net),
        Command::Itf { net, from, to } => cmd_itf(cli, config, net, *from, *to),
        Command::Simulate { net, from, to, tmax, dt } => {
            cmd_simulate(cli, config, net, *from, *to, *tmax, *dt)
        }
        Command::Attainability { net, from, to, dep_bound } => {
            cmd_attainability(cli, config, net, *from, *to, *dep_bound)
        }
        Command::Dio { theta, report, parity, s, weights, fix_parity, ga, seed } => cmd_dio(
            cli,
            config,
            theta,
            report.as_deref(),
            parity.as_deref(),
            *s,
            weights,
            *fix_parity,
            *ga,
            *seed,
        ),
        Command::Time { net, from, to, q, s, weights, eps, tmax, dt } => {
            cmd_time(cli, config, net, *from, *to, q.as_deref(), *s, weights, *eps, *tmax, *dt)
        }
        Command::Geometry { net } => cmd_geometry(cli, config, net),
        Command::Route { n, from, to, zeta, matrix } => {
            cmd_route(cli, config, *n, *from, *to, *zeta, *matrix)
        }
    }
}

/// Writes to `--out` when given, otherwise hands the payload back for stdout.
fn emit(cli: &Cli, payload: String) -> Result<String, Failure> {
    match &cli.out {
        Some(path) => {
            fs::write(path, payload).map_err(Error::from)?;
            Ok(String::new())
        }
        None => Ok(payload),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    text.push('\n');
    Ok(text)
}

fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.17e}")
    }
}

fn matrix_csv(m: &DMatrix<f64>) -> String {
    let mut text = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_f64(m[(i, j)])).collect();
        let _ = writeln!(text, "{}", row.join(","));
    }
    text
}

// ---------------------------------------------------------------- spectrum

#[derive(Serialize)]
struct SpectrumOut {
    n: usize,
    source: &'static str,
    /// Distinct eigenvalues, descending.
    values: Vec<f64>,
    multiplicities: Vec<usize>,
}

fn cmd_spectrum(cli: &Cli, config: &RunConfig, net: &NetArgs) -> Result<String, Failure> {
    let network = net.build()?;
    let es = eigensystem_with(&network, config.cluster_tol)?;
    let source = match es.source {
        SpectrumSource::AnalyticRing { .. } => "analytic-ring",
        SpectrumSource::AnalyticChain { .. } => "analytic-chain",
        SpectrumSource::Numeric => "numeric",
    };
    let values: Vec<f64> = es.values.iter().rev().copied().collect();
    let multiplicities: Vec<usize> = es.multiplicities.iter().rev().copied().collect();
    let payload = match config.output_format {
        OutputFormat::Json => to_json(&SpectrumOut {
            n: es.n,
            source,
            values,
            multiplicities,
        })?,
        OutputFormat::Csv => {
            let mut text = String::from("value,multiplicity\n");
            for (v, m) in values.iter().zip(&multiplicities) {
                let _ = writeln!(text, "{},{}", fmt_f64(*v), m);
            }
            text
        }
    };
    emit(cli, payload)
}

// --------------------------------------------------------------------- itf

#[derive(Serialize)]
struct ItfMatrixOut {
    n: usize,
    pmax: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct ItfPairOut {
    from: usize,
    to: usize,
    p_max: f64,
    /// `<i|P_k|j>` per distinct eigenvalue, descending eigenvalue order.
    overlaps: Vec<f64>,
    signs: Vec<i8>,
    dark: Vec<bool>,
    dark_tol: f64,
    live: Vec<usize>,
}

fn cmd_itf(
    cli: &Cli,
    config: &RunConfig,
    net: &NetArgs,
    from: Option<usize>,
    to: Option<usize>,
) -> Result<String, Failure> {
    let network = net.build()?;
    let es = eigensystem_with(&network, config.cluster_tol)?;
    let payload = match (from, to) {
        (Some(i), Some(j)) => {
            if config.output_format == OutputFormat::Csv {
                return Err(usage("the pair report has no CSV form; use JSON"));
            }
            let ta = analyze_pair(&es, i, j, config.dark_tol)?;
            let rev = |v: Vec<f64>| -> Vec<f64> { v.into_iter().rev().collect() };
            to_json(&ItfPairOut {
                from: i,
                to: j,
                p_max: ta.p_max,
                overlaps: rev(ta.overlaps.clone()),
                signs: ta.signs.iter().rev().copied().collect(),
                dark: ta.dark.iter().rev().copied().collect(),
                dark_tol: ta.dark_tol,
                live: {
                    let d = es.distinct();
                    ta.live_indices().iter().rev().map(|&k| d - 1 - k).collect()
                },
            })?
        }
        (None, None) => {
            let p = pmax_matrix(&es, config.dark_tol)?;
            match config.output_format {
                OutputFormat::Json => {
                    let rows: Vec<Vec<f64>> =
                        (0..p.nrows()).map(|i| p.row(i).iter().copied().collect()).collect();
                    to_json(&ItfMatrixOut { n: p.nrows(), pmax: rows })?
                }
                OutputFormat::Csv => matrix_csv(&p),
            }
        }
        _ => unreachable!("clap enforces from/to together"),
    };
    emit(cli, payload)
}

// ---------------------------------------------------------------- simulate

#[derive(Serialize)]
struct SimulateOut {
    from: usize,
    to: usize,
    tmax: f64,
    dt: f64,
    best_t: f64,
    best_p: f64,
    p_max: f64,
    /// best_p / p_max.
    ratio: f64,
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    cli: &Cli,
    config: &RunConfig,
    net: &NetArgs,
    from: usize,
    to: usize,
    tmax: f64,
    dt: f64,
) -> Result<String, Failure> {
    if !(tmax > 0.0) || !(dt > 0.0) || dt > tmax {
        return Err(usage("need 0 < dt <= tmax"));
    }
    let network = net.build()?;
    let es = eigensystem_with(&network, config.cluster_tol)?;
    let payload = match config.output_format {
        OutputFormat::Json => {
            let ta = analyze_pair(&es, from, to, config.dark_tol)?;
            let best = scan_max_probability(&es, from, to, tmax, dt)?;
            to_json(&SimulateOut {
                from,
                to,
                tmax,
                dt,
                best_t: best.t,
                best_p: best.p,
                p_max: ta.p_max,
                ratio: if ta.p_max > 0.0 { best.p / ta.p_max } else { f64::NAN },
            })?
        }
        OutputFormat::Csv => {
            let steps = (tmax / dt).floor() as usize;
            let mut text = String::from("t,p\n");
            for k in 0..=steps {
                let t = k as f64 * dt;
                let p = transfer_probability(&es, from, to, t)?;
                let _ = writeln!(text, "{},{}", fmt_f64(t), fmt_f64(p));
            }
            text
        }
    };
    emit(cli, payload)
}

// ----------------------------------------------------------- attainability

#[derive(Serialize, Deserialize)]
struct AttainOut {
    n: usize,
    from: usize,
    to: usize,
    p_max: f64,
    /// Live eigenvalue indices, descending eigenvalue order.
    live: Vec<usize>,
    signs: Vec<i8>,
    pairs: Vec<(usize, usize)>,
    reference: (usize, usize),
    reference_pos: usize,
    /// Transition frequencies over pi, one per pair.
    omega: Vec<f64>,
    omega_mn: f64,
    theta: Vec<f64>,
    /// Exact theta mantissas at 192 fractional bits, decimal.
    theta_mantissa: Vec<String>,
    /// One of e/o/x per theta component.
    parity: String,
    n_bar: usize,
    reordered: bool,
    verdict: VerdictOut,
}

#[derive(Serialize, Deserialize)]
struct VerdictOut {
    kind: String,
    /// Integer coefficients on (1, theta...) summing to zero, if dependent.
    relation: Option<Vec<String>>,
}

fn parity_string(parity: &[Parity]) -> String {
    parity
        .iter()
        .map(|p| match p {
            Parity::Even => 'e',
            Parity::Odd => 'o',
            Parity::Any => 'x',
        })
        .collect()
}

fn cmd_attainability(
    cli: &Cli,
    config: &RunConfig,
    net: &NetArgs,
    from: usize,
    to: usize,
    dep_bound: i64,
) -> Result<String, Failure> {
    if config.output_format == OutputFormat::Csv {
        return Err(usage("the attainability report has no CSV form; use JSON"));
    }
    let network = net.build()?;
    let es = eigensystem_with(&network, config.cluster_tol)?;
    let ta = analyze_pair(&es, from, to, config.dark_tol)?;
    let cs = build_constraints(&ta, &es)?;
    let verdict = attainability_verdict(&cs, dep_bound)?;
    let verdict_out = match &verdict {
        AttainabilityVerdict::IndependentEvidence => VerdictOut {
            kind: "independent_evidence".into(),
            relation: None,
        },
        AttainabilityVerdict::DependentWithRelation(alpha) => VerdictOut {
            kind: "dependent".into(),
            relation: Some(alpha.iter().map(|a| a.to_string()).collect()),
        },
        AttainabilityVerdict::Degenerate => VerdictOut {
            kind: "degenerate".into(),
            relation: None,
        },
    };
    let payload = to_json(&AttainOut {
        n: es.n,
        from,
        to,
        p_max: ta.p_max,
        live: cs.live.clone(),
        signs: cs.signs.clone(),
        pairs: cs.pairs.clone(),
        reference: cs.reference,
        reference_pos: cs.reference_pos,
        omega: cs.omega.clone(),
        omega_mn: cs.omega_mn,
        theta: cs.theta_f64.clone(),
        theta_mantissa: cs.theta.iter().map(|t| t.mantissa().to_string()).collect(),
        parity: parity_string(&cs.parity),
        n_bar: cs.n_bar,
        reordered: cs.reordered,
        verdict: verdict_out,
    })?;
    emit(cli, payload)
}

// --------------------------------------------------------------------- dio

#[derive(Serialize)]
struct DioOut {
    p: Vec<String>,
    q: String,
    errors: Vec<f64>,
    max_error: f64,
    parity_ok: Vec<bool>,
    feasible: bool,
    /// `2 / q^(1/n)`, the scaling iteration's guarantee.
    dirichlet_bound: f64,
    s: f64,
    weights: Vec<f64>,
    /// `2q / |omega_mn|`; needs the report's reference frequency.
    t_f: Option<f64>,
}

fn dio_out(sol: &DiophantineSolution, omega_mn: Option<f64>) -> DioOut {
    DioOut {
        p: sol.p.iter().map(|p| p.to_string()).collect(),
        q: sol.q.to_string(),
        errors: sol.errors.clone(),
        max_error: sol.max_error,
        parity_ok: sol.parity_ok.clone(),
        feasible: sol.feasible(),
        dirichlet_bound: sol.dirichlet_bound(),
        s: sol.s,
        weights: sol.weights.clone(),
        t_f: omega_mn.map(|w| 2.0 * ln_bigint(&sol.q).exp() / w.abs()),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_dio(
    cli: &Cli,
    config: &RunConfig,
    theta_args: &[f64],
    report: Option<&Path>,
    parity_arg: Option<&str>,
    s: Option<f64>,
    weights: &[f64],
    fix_parity: bool,
    ga: bool,
    seed: Option<u64>,
) -> Result<String, Failure> {
    if config.output_format == OutputFormat::Csv {
        return Err(usage("the approximation report has no CSV form; use JSON"));
    }
    let (theta, report_parity, omega_mn): (Vec<Fx>, Option<String>, Option<f64>) = match report {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(Error::from)?;
            let rep: AttainOut = serde_json::from_str(&text)
                .map_err(|e| usage(format!("unreadable attainability report: {e}")))?;
            let theta = rep
                .theta_mantissa
                .iter()
                .map(|m| {
                    BigInt::from_str(m)
                        .map(Fx::from_mantissa)
                        .map_err(|_| usage(format!("bad mantissa {m:?} in report")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            (theta, Some(rep.parity), Some(rep.omega_mn))
        }
        None => {
            if theta_args.is_empty() {
                return Err(usage("provide --theta or --report"));
            }
            let theta = theta_args
                .iter()
                .map(|&t| {
                    Fx::from_f64(t).ok_or_else(|| usage(format!("theta {t} is not finite")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            (theta, None, None)
        }
    };
    let parity_text = match (parity_arg, &report_parity) {
        (Some(p), _) => p.to_string(),
        (None, Some(p)) => p.clone(),
        (None, None) => "x".repeat(theta.len()),
    };
    let parity = parse_parities(&parity_text)?;
    if parity.len() != theta.len() {
        return Err(usage(format!(
            "parity string has {} components, theta has {}",
            parity.len(),
            theta.len()
        )));
    }
    let s = s.unwrap_or(2f64.powi(-28));
    let weights = if weights.is_empty() {
        vec![1.0; theta.len()]
    } else {
        weights.to_vec()
    };
    if weights.len() != theta.len() {
        return Err(usage(format!(
            "{} weights for {} theta components",
            weights.len(),
            theta.len()
        )));
    }
    let sol = if ga {
        let seed = seed
            .or(config.ga_seed)
            .ok_or_else(|| usage("--ga needs --seed (or ga.seed in the config)"))?;
        ga_weight_search(
            &theta,
            &parity,
            &GaConfig {
                population: config.ga_population,
                max_gens: config.ga_max_gens,
                s,
                seed,
                ..GaConfig::default()
            },
        )?
    } else if fix_parity {
        parity_fix_by_scaling(&theta, &parity, 32, None)?
    } else {
        let (dn, dd) = config.lll_delta;
        weighted_simultaneous_approx_with(&theta, &parity, s, &weights, dn, dd)?
    };
    let payload = to_json(&dio_out(&sol, omega_mn))?;
    emit(cli, payload)
}

// -------------------------------------------------------------------- time

#[derive(Serialize)]
struct TimeOut {
    from: usize,
    to: usize,
    q: String,
    t: f64,
    achieved_p: f64,
    p_max: f64,
    relative_gap: f64,
    parity: String,
    q_min: Option<QMinOut>,
}

#[derive(Serialize)]
struct QMinOut {
    eps_prob: f64,
    eps_da_required: f64,
    n_bar: usize,
    live: usize,
    log10: f64,
    small_angle_log10: f64,
    exact: Option<String>,
}

fn qmin_out(qb: &QMinBound) -> QMinOut {
    QMinOut {
        eps_prob: qb.eps_prob,
        eps_da_required: qb.eps_da_required,
        n_bar: qb.n_bar,
        live: qb.live,
        log10: qb.log10,
        small_angle_log10: qb.small_angle_log10,
        exact: qb.exact.as_ref().map(|q| q.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_time(
    cli: &Cli,
    config: &RunConfig,
    net: &NetArgs,
    from: usize,
    to: usize,
    q: Option<&str>,
    s: Option<f64>,
    weights: &[f64],
    eps: Option<f64>,
    tmax: f64,
    dt: f64,
) -> Result<String, Failure> {
    let network = net.build()?;
    let es = eigensystem_with(&network, config.cluster_tol)?;
    let ta = analyze_pair(&es, from, to, config.dark_tol)?;
    let cs = build_constraints(&ta, &es)?;

    // CSV mode: the minimum-time scaling table t_f(eps) for plotting
    if config.output_format == OutputFormat::Csv {
        let Some(floor) = eps else {
            return Err(usage("the CSV scaling table needs --eps as its accuracy floor"));
        };
        if q.is_some() || s.is_some() {
            return Err(usage("the CSV scaling table takes --eps only, not --q/--s"));
        }
        if !(floor > 0.0 && floor < 10f64.powf(-0.5)) {
            return Err(usage("--eps must lie in (0, 10^-0.5) for the scaling sweep"));
        }
        let start = -0.5f64;
        let end = floor.log10();
        let mut rows = String::from("eps_prob,t_f\n");
        for k in 0..10 {
            let e = 10f64.powf(start + (end - start) * k as f64 / 9.0);
            if let Some(t) = min_time_for_accuracy(&es, from, to, e, tmax, dt)? {
                rows.push_str(&format!("{},{}\n", fmt_f64(e), fmt_f64(t)));
            }
        }
        return emit(cli, rows);
    }

    let sol = match (q, s) {
        (Some(q_text), None) => {
            let q = BigInt::from_str(q_text.trim())
                .map_err(|_| usage(format!("q {q_text:?} is not a decimal integer")))?;
            if q <= BigInt::from(0) {
                return Err(usage("q must be positive"));
            }
            let unit = vec![1.0; cs.theta.len()];
            crate::diophantine::solution_from_q(&cs.theta, &cs.parity, q, 0.0, &unit)
        }
        (None, Some(s)) => {
            let weights = if weights.is_empty() {
                vec![1.0; cs.theta.len()]
            } else {
                weights.to_vec()
            };
            let (dn, dd) = config.lll_delta;
            weighted_simultaneous_approx_with(&cs.theta, &cs.parity, s, &weights, dn, dd)?
        }
        (None, None) => {
            // no denominator requested: report the accuracy floor alone
            let Some(e) = eps else {
                return Err(usage("provide one of --q, --s, or --eps"));
            };
            let payload = to_json(&qmin_out(&q_min_dirichlet(&cs, e)?))?;
            return emit(cli, payload);
        }
        _ => return Err(usage("provide exactly one of --q or --s")),
    };
    let tt: TransferTime = time_from_solution(&es, &ta, &cs, &sol)?;
    let q_min = match eps {
        Some(e) => Some(qmin_out(&q_min_dirichlet(&cs, e)?)),
        None => None,
    };
    let payload = to_json(&TimeOut {
        from,
        to,
        q: tt.q.to_string(),
        t: tt.t,
        achieved_p: tt.achieved_p,
        p_max: tt.p_max,
        relative_gap: tt.relative_gap,
        parity: parity_string(&cs.parity),
        q_min,
    })?;
    emit(cli, payload)
}

// ---------------------------------------------------------------- geometry

#[derive(Serialize)]
struct GeometryOut {
    n: usize,
    /// `-ln p_max`; null marks unreachable pairs (p_max = 0).
    distances: Vec<Vec<Option<f64>>>,
    unreachable: Vec<(usize, usize)>,
    audit: AuditOut,
    quotient: Option<QuotientOut>,
    /// Common off-diagonal distance when the space is uniform.
    uniform: Option<f64>,
    uniform_predicted: bool,
    curvature: Option<CurvatureOut>,
    asymptotic_gap: f64,
}

#[derive(Serialize)]
struct AuditOut {
    nonneg: bool,
    identity: bool,
    symmetry: bool,
    separation: bool,
    triangle: bool,
    all_pass: bool,
    separation_failures: Vec<(usize, usize)>,
    max_triangle_excess: Option<f64>,
}

#[derive(Serialize)]
struct QuotientOut {
    classes: Vec<[usize; 2]>,
    distances: Vec<Vec<Option<f64>>>,
    audit: AuditOut,
}

#[derive(Serialize)]
struct CurvatureOut {
    kappa_max: f64,
    kappa_irreducible: f64,
    radius: f64,
}

fn audit_out(a: &MetricAudit) -> AuditOut {
    AuditOut {
        nonneg: a.nonneg,
        identity: a.identity,
        symmetry: a.symmetry,
        separation: a.separation,
        triangle: a.triangle,
        all_pass: a.all_pass(),
        separation_failures: a.separation_failures.clone(),
        max_triangle_excess: a.triangle_witness.as_ref().map(|w| w.excess),
    }
}

fn nullable_rows(d: &DMatrix<f64>) -> Vec<Vec<Option<f64>>> {
    (0..d.nrows())
        .map(|i| {
            (0..d.ncols())
                .map(|j| {
                    let v = d[(i, j)];
                    v.is_finite().then_some(v)
                })
                .collect()
        })
        .collect()
}

fn cmd_geometry(cli: &Cli, config: &RunConfig, net: &NetArgs) -> Result<String, Failure> {
    let network = net.build()?;
    let es = eigensystem_with(&network, config.cluster_tol)?;
    let p = pmax_matrix(&es, config.dark_tol)?;
    let ring = network.topology() == Topology::Ring && !network.is_biased();
    let rep: GeometryReport =
        geometry::report_with(&p, ring, SEPARATION_TOL, config.triangle_tol)?;
    let payload = match config.output_format {
        OutputFormat::Csv => matrix_csv(&rep.distances.d),
        OutputFormat::Json => to_json(&GeometryOut {
            n: rep.distances.n,
            distances: nullable_rows(&rep.distances.d),
            unreachable: rep.distances.unreachable.clone(),
            audit: audit_out(&rep.audit),
            quotient: rep.quotient.as_ref().map(|(q, qa)| QuotientOut {
                classes: q.classes.clone(),
                distances: nullable_rows(&q.d),
                audit: audit_out(qa),
            }),
            uniform: rep.uniform,
            uniform_predicted: rep.uniform_predicted,
            curvature: rep.curvature.as_ref().map(|c| CurvatureOut {
                kappa_max: c.kappa_max,
                kappa_irreducible: c.kappa_irreducible,
                radius: c.radius,
            }),
            asymptotic_gap: rep.asymptotic_gap,
        })?,
    };
    emit(cli, payload)
}

// ------------------------------------------------------------------- route

#[derive(Serialize)]
struct RouteOut {
    n: usize,
    source: usize,
    target: usize,
    mechanism: &'static str,
    bias_nodes: Vec<BiasOut>,
    relabeling_offset: usize,
    predicted_pmax: f64,
    evaluated_pmax: f64,
}

#[derive(Serialize)]
struct BiasOut {
    node: usize,
    zeta: f64,
}

fn cmd_route(
    cli: &Cli,
    config: &RunConfig,
    n: usize,
    from: usize,
    to: usize,
    zeta: Option<f64>,
    matrix: bool,
) -> Result<String, Failure> {
    if config.output_format == OutputFormat::Csv && !matrix {
        return Err(usage("the route plan has no CSV form; use --matrix for heatmaps"));
    }
    let plan: RoutePlan = plan_route(n, from, to, zeta)?;
    if matrix {
        let out = cli.out.as_ref().expect("clap requires --out with --matrix");
        let es = eigensystem_with(&SpinNetwork::ring(n, CouplingKind::Xx)?, config.cluster_tol)?;
        let before = pmax_matrix(&es, config.dark_tol)?;
        let after = match plan.bias_nodes.split_first() {
            None => before.clone(),
            Some((&(node, z), rest)) => {
                let mut net = SpinNetwork::ring(n, CouplingKind::Xx)?.with_bias(node, z)?;
                for &(b, bz) in rest {
                    net = net.with_bias(b, bz)?;
                }
                pmax_matrix(&eigensystem_with(&net, config.cluster_tol)?, config.dark_tol)?
            }
        };
        fs::write(out.with_extension("before.csv"), matrix_csv(&before)).map_err(Error::from)?;
        fs::write(out.with_extension("after.csv"), matrix_csv(&after)).map_err(Error::from)?;
    }
    let payload = to_json(&RouteOut {
        n: plan.n,
        source: plan.source,
        target: plan.target,
        mechanism: match plan.mechanism {
            RouteMechanism::Identity => "identity",
            RouteMechanism::OddArcMidpoint => "odd_arc_midpoint",
            RouteMechanism::EvenGapDoubleBias => "even_gap_double_bias",
        },
        bias_nodes: plan.bias_nodes.iter().map(|&(node, z)| BiasOut { node, zeta: z }).collect(),
        relabeling_offset: plan.relabeling_offset,
        predicted_pmax: plan.predicted_pmax,
        evaluated_pmax: plan.evaluated_pmax,
    })?;
    emit(cli, payload)
}

// ------------------------------------------------------------------- tests

#[cfg(test)]
mod tests {
    use super::*;

    fn render_ok(args: &[&str]) -> String {
        render(args.iter().copied()).expect("command should succeed")
    }

    fn render_err(args: &[&str]) -> Failure {
        render(args.iter().copied()).expect_err("command should fail")
    }

    #[test]
    fn spectrum_ring_five_matches_the_closed_form() {
        let text = render_ok(&["spin-itf", "spectrum", "--ring", "5"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let values: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        let mults: Vec<u64> = v["multiplicities"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        assert_eq!(mults, vec![1, 2, 2]);
        assert!((values[0] - 2.0).abs() < 1e-12);
        assert!((values[1] - 0.6180339887498949).abs() < 1e-12);
        assert!((values[2] + 1.618033988749895).abs() < 1e-12);
        assert_eq!(v["source"], "analytic-ring");
    }

    #[test]
    fn itf_nine_ring_reports_the_two_bound_values() {
        let text = render_ok(&["spin-itf", "itf", "--ring", "9"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let rows = v["pmax"].as_array().unwrap();
        let mut distinct: Vec<f64> = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.as_array().unwrap().iter().enumerate() {
                if i != j {
                    let x = x.as_f64().unwrap();
                    if !distinct.iter().any(|d| (d - x).abs() < 1e-9) {
                        distinct.push(x);
                    }
                }
            }
        }
        distinct.sort_by(f64::total_cmp);
        assert_eq!(distinct.len(), 2);
        assert!((distinct[0] - 0.4094).abs() < 5e-5);
        assert!((distinct[1] - 4.0 / 9.0).abs() < 5e-5);
    }

    #[test]
    fn route_example_biases_node_nine() {
        let text = render_ok(&["spin-itf", "route", "--n", "9", "--from", "1", "--to", "8", "--zeta", "10"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["bias_nodes"][0]["node"], 9);
        assert_eq!(v["bias_nodes"][0]["zeta"], 10.0);
        assert_eq!(v["mechanism"], "odd_arc_midpoint");
        assert_eq!(v["predicted_pmax"], 1.0);
    }

    #[test]
    fn topology_selection_is_mandatory_and_exclusive() {
        assert!(matches!(render_err(&["spin-itf", "spectrum"]), Failure::Usage(_)));
        assert!(matches!(
            render_err(&["spin-itf", "spectrum", "--ring", "5", "--chain", "4"]),
            Failure::Usage(_)
        ));
    }

    #[test]
    fn bias_argument_is_validated() {
        assert!(matches!(
            render_err(&["spin-itf", "spectrum", "--ring", "5", "--bias", "3"]),
            Failure::Usage(_)
        ));
        assert!(matches!(
            render_err(&["spin-itf", "spectrum", "--ring", "5", "--bias", "x=1"]),
            Failure::Usage(_)
        ));
        let text = render_ok(&["spin-itf", "spectrum", "--ring", "5", "--bias", "2=100"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["source"], "numeric");
    }

    #[test]
    fn ga_without_seed_is_a_usage_error() {
        assert!(matches!(
            render_err(&["spin-itf", "dio", "--theta", "0.89,1.6", "--parity", "oo", "--ga"]),
            Failure::Usage(_)
        ));
    }

    #[test]
    fn out_of_range_node_is_a_domain_error() {
        assert!(matches!(
            render_err(&["spin-itf", "itf", "--ring", "5", "--from", "1", "--to", "9"]),
            Failure::Domain(_)
        ));
    }

    #[test]
    fn attainability_report_feeds_dio() {
        let dir = std::env::temp_dir().join(format!("spin-itf-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let report = dir.join("attain.json");
        let report_arg = report.to_str().unwrap().to_string();
        render_ok(&[
            "spin-itf", "attainability", "--ring", "7", "--from", "1", "--to", "3",
            "--out", &report_arg,
        ]);
        let rep: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
        assert_eq!(rep["parity"], "oo");
        assert_eq!(rep["verdict"]["kind"], "independent_evidence");

        let text = render_ok(&["spin-itf", "dio", "--report", &report_arg, "--s", "0.00390625"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["q"].is_string());
        assert!(v["t_f"].is_number());
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn dio_fix_parity_reproduces_the_semiconvergent() {
        let theta = format!("{:.17}", 1.0 + 5f64.sqrt());
        let text = render_ok(&["spin-itf", "dio", "--theta", &theta, "--parity", "e", "--fix-parity"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["p"][0], "754");
        assert_eq!(v["q"], "233");
        assert_eq!(v["feasible"], true);
    }

    #[test]
    fn time_accepts_an_explicit_denominator() {
        let text = render_ok(&[
            "spin-itf", "time", "--ring", "4", "--from", "1", "--to", "3", "--q", "1",
        ]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!((v["t"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((v["achieved_p"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn time_with_eps_alone_reports_the_denominator_floor() {
        let text = render_ok(&[
            "spin-itf", "time", "--ring", "5", "--from", "1", "--to", "2", "--eps", "1e-4",
        ]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["eps_da_required"].as_f64().unwrap() > 0.0);
        assert!(v["log10"].as_f64().unwrap() > 0.0);
        assert!(render(["spin-itf", "time", "--ring", "5", "--from", "1", "--to", "2"]).is_err());
    }

    #[test]
    fn time_csv_emits_the_scaling_table() {
        let text = render_ok(&[
            "spin-itf", "time", "--ring", "5", "--from", "1", "--to", "2",
            "--eps", "1e-2", "--format", "csv",
        ]);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("eps_prob,t_f"));
        let rows: Vec<(f64, f64)> = lines
            .map(|l| {
                let (e, t) = l.split_once(',').unwrap();
                (e.parse().unwrap(), t.parse().unwrap())
            })
            .collect();
        assert_eq!(rows.len(), 10, "every accuracy above 1e-2 is reachable quickly");
        assert!(rows.windows(2).all(|w| w[1].0 < w[0].0), "accuracies tighten down the rows");
        assert!(rows.windows(2).all(|w| w[1].1 >= w[0].1), "tighter accuracy never gets faster");
        // --q conflicts with the sweep; a missing floor is caught too
        assert!(render([
            "spin-itf", "time", "--ring", "5", "--from", "1", "--to", "2",
            "--eps", "1e-2", "--q", "7", "--format", "csv",
        ])
        .is_err());
        assert!(render([
            "spin-itf", "time", "--ring", "5", "--from", "1", "--to", "2", "--format", "csv",
        ])
        .is_err());
    }

    #[test]
    fn config_file_keys_are_validated() {
        let dir = std::env::temp_dir().join(format!("spin-itf-cfg-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let good = dir.join("good.cfg");
        fs::write(&good, "# comment\nlll_delta = 3/4\nga.population = 50\n").unwrap();
        render_ok(&["spin-itf", "spectrum", "--ring", "5", "--config", good.to_str().unwrap()]);

        let bad_key = dir.join("bad-key.cfg");
        fs::write(&bad_key, "no_such_key = 1\n").unwrap();
        assert!(matches!(
            render_err(&["spin-itf", "spectrum", "--ring", "5", "--config", bad_key.to_str().unwrap()]),
            Failure::Usage(_)
        ));

        let bad_delta = dir.join("bad-delta.cfg");
        fs::write(&bad_delta, "lll_delta = 1/5\n").unwrap();
        assert!(matches!(
            render_err(&["spin-itf", "spectrum", "--ring", "5", "--config", bad_delta.to_str().unwrap()]),
            Failure::Usage(_)
        ));
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn geometry_emits_nulls_for_unreachable_pairs() {
        // a 2-chain in the Heisenberg model keeps p(1,2) positive; use the
        // 4-ring pair (1,2), whose bound is positive, and check the audit
        // fields exist; null handling is covered at the library level.
        let text = render_ok(&["spin-itf", "geometry", "--ring", "5"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["audit"]["all_pass"], true);
        assert!(v["uniform"].is_number());
        assert_eq!(v["uniform_predicted"], true);
        assert!(v["curvature"]["radius"].is_number());
    }

    #[test]
    fn repeated_runs_are_byte_identical() {
        let args = ["spin-itf", "itf", "--ring", "9"];
        assert_eq!(render_ok(&args), render_ok(&args));
        let args = [
            "spin-itf", "dio", "--theta", "0.8901,1.6039", "--parity", "oo", "--ga", "--seed", "7",
        ];
        assert_eq!(render_ok(&args), render_ok(&args));
    }
}
