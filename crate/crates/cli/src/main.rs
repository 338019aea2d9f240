//! `lorentz-gh`: command-line access to causets, distinction metrics,
//! Gromov-Hausdorff distances, nets, diamond samples and curvature checks.
//!
//! Exit status: 0 on success, 1 on a domain error (including a failed
//! validation), 2 on usage errors, unreadable files and malformed JSON.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lorentz_core::causal::{longest_chain, time_function};
use lorentz_core::causet::{validate, validate_exact};
use lorentz_core::curvature::{check_curvature_bound, BoundKind, CurvatureConfig};
use lorentz_core::diamond::{sample_causet, SampleMode, SampleSpec};
use lorentz_core::experiment::{run_experiment_csv, ExperimentConfig};
use lorentz_core::gamma::{gamma, noldus};
use lorentz_core::gh::{gh_exact, gh_lower_bounds, gh_upper_greedy};
use lorentz_core::io as json_io;
use lorentz_core::nets::{covering_radius, extract_net, limit_causet_with, net_to_causet, rationalize, LimitOptions};
use lorentz_core::{Causet, Error, GhBudget, DEFAULT_TOL};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "lorentz-gh", version, about = "Finite Lorentzian metric spaces and their Gromov-Hausdorff distances")]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, env = "LORENTZ_GH_THREADS")]
    threads: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the causet axioms.
    Validate {
        /// Causet JSON file, `-` for stdin.
        input: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Validate the rational payload exactly.
        #[arg(long)]
        exact: bool,
    },
    /// Distinction metric matrix.
    Gamma {
        input: String,
        /// Compute Noldus' metric from its own formula instead.
        #[arg(long)]
        noldus: bool,
    },
    /// Time function values by label.
    Tau {
        input: String,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        /// Comma separated point order for the weights (default: file order).
        #[arg(long, value_delimiter = ',')]
        ordering: Option<Vec<usize>>,
    },
    /// Gromov-Hausdorff distance between two causets.
    Gh {
        a: String,
        b: String,
        /// Run the exact search (bounds only otherwise).
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = GhBudget::default().max_exact_size)]
        max_exact_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Greedy ε-net in the distinction metric.
    Net {
        input: String,
        #[arg(long)]
        eps: f64,
        /// Emit the causet induced on the net instead of its members.
        #[arg(long)]
        causet: bool,
    },
    /// Perturb into a causet with exact rational distances.
    Rationalize {
        input: String,
        #[arg(long)]
        eps: f64,
    },
    /// Sample a continuum model space.
    Sample(SampleArgs),
    /// Check a flat comparison bound on timelike triangles.
    Curvature {
        input: String,
        /// Model curvature; only 0 is supported.
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        #[arg(long, value_enum, default_value_t = Bound::Lower)]
        bound: Bound,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        #[arg(long, default_value_t = 2000)]
        max_triangles: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Omit the per-triangle records.
        #[arg(long)]
        summary: bool,
    },
    /// Entrywise limit of a sequence of aligned causets.
    Limit {
        #[arg(required = true)]
        inputs: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Extrapolation degree, 0 for the plain last term.
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Longest chain between two points, given by label or index.
    Chain { input: String, from: String, to: String },
    /// Run an experiment and print its CSV table.
    Experiment {
        /// Experiment configuration JSON; defaults are used when omitted.
        config: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Args)]
struct SampleArgs {
    /// Model space; only `diamond` is available.
    space: String,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Mode::Uniform)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Adjoin the spacelike boundary point.
    #[arg(long)]
    boundary: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Grid,
    Uniform,
}

impl From<Mode> for SampleMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Grid => SampleMode::Grid,
            Mode::Uniform => SampleMode::UniformRandom,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Bound {
    Lower,
    Upper,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Format(_) => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

/// A command's result: text to emit and whether it counts as success.
struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn json(v: Value) -> Self {
        Self { text: format!("{v}\n"), ok: true }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }
}

fn load_causet(path: &str) -> Result<Causet, Failure> {
    json_io::causet_from_str(&read_input(path)?).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn point(c: &Causet, key: &str) -> Result<usize, Failure> {
    if let Some(i) = c.labels().iter().position(|l| l == key) {
        return Ok(i);
    }
    let i: usize = key.parse().map_err(|_| Failure::Usage(format!("no point labelled `{key}`")))?;
    c.check_index(i)?;
    Ok(i)
}

fn run(command: Command) -> Result<Output, Failure> {
    Ok(match command {
        Command::Validate { input, tol, exact } => {
            let c = load_causet(&input)?;
            let report = if exact { validate_exact(&c)? } else { validate(&c, tol) };
            let mut v = json!({ "valid": report.valid });
            if !report.valid {
                v["violations"] = serde_json::to_value(&report.violations).expect("serializable");
            }
            Output { text: format!("{v}\n"), ok: report.valid }
        }
        Command::Gamma { input, noldus: use_noldus } => {
            let c = load_causet(&input)?;
            let g = if use_noldus { noldus(&c) } else { gamma(&c) };
            Output::json(json_io::gamma_to_json(&g))
        }
        Command::Tau { input, alpha, beta, ordering } => {
            let c = load_causet(&input)?;
            let ordering = ordering.unwrap_or_else(|| (0..c.n()).collect());
            let tau = time_function(&c, &ordering, alpha, beta)?;
            Output::json(json_io::time_function_to_json(&c, &tau))
        }
        Command::Gh { a, b, exact, max_exact_size, seed } => {
            let (a, b) = (load_causet(&a)?, load_causet(&b)?);
            let budget = GhBudget { max_exact_size, seed, ..GhBudget::default() };
            let result = if exact {
                gh_exact(&a, &b, &budget)
            } else {
                let mut r = gh_upper_greedy(&a, &b, budget.restarts, seed);
                r.lower = r.lower.max(gh_lower_bounds(&a, &b));
                r
            };
            Output::json(json_io::gh_result_to_json(&result))
        }
        Command::Net { input, eps, causet } => {
            let c = load_causet(&input)?;
            let net = extract_net(&c, eps)?;
            if causet {
                let (sub, _) = net_to_causet(&c, &net)?;
                Output::json(json_io::causet_to_json(&sub, Some(json!({ "eps": eps }))))
            } else {
                let mut v = json_io::net_to_json(&net);
                v["covering_radius"] = json!(covering_radius(&gamma(&c), &net.members)?);
                Output::json(v)
            }
        }
        Command::Rationalize { input, eps } => {
            let c = load_causet(&input)?;
            Output::json(json_io::causet_to_json(&rationalize(&c, eps)?, Some(json!({ "eps": eps }))))
        }
        Command::Sample(args) => {
            if args.space != "diamond" {
                return Err(Failure::Usage(format!("unknown space `{}`; only `diamond` is available", args.space)));
            }
            let spec = SampleSpec {
                count: args.n,
                seed: args.seed,
                mode: args.mode.into(),
                include_boundary_point: args.boundary,
            };
            let c = sample_causet(&spec)?;
            Output::json(json_io::causet_to_json(&c, Some(json!({ "space": "diamond", "sample": spec }))))
        }
        Command::Curvature { input, k, bound, tol, max_triangles, seed, summary } => {
            let c = load_causet(&input)?;
            let bound = match bound {
                Bound::Lower => BoundKind::Lower,
                Bound::Upper => BoundKind::Upper,
            };
            let config = CurvatureConfig { k, max_triangles, seed, ..CurvatureConfig::new(bound, tol) };
            let mut report = check_curvature_bound(&c, &config)?;
            if summary {
                report.triangles.clear();
            }
            let mut v = serde_json::to_value(&report).expect("serializable");
            v["passed"] = json!(report.passed());
            Output::json(v)
        }
        Command::Limit { inputs, tol, order } => {
            let seq = inputs.iter().map(|p| load_causet(p)).collect::<Result<Vec<_>, _>>()?;
            let lim = limit_causet_with(&seq, &LimitOptions { tol, order })?;
            Output::json(json_io::causet_to_json(&lim, None))
        }
        Command::Chain { input, from, to } => {
            let c = load_causet(&input)?;
            let chain = longest_chain(&c, point(&c, &from)?, point(&c, &to)?)?;
            let labels: Vec<&str> = chain.points.iter().map(|&i| c.labels()[i].as_str()).collect();
            let length: f64 = chain.points.windows(2).map(|w| c.d(w[0], w[1])).sum();
            Output::json(json!({ "points": json_io::chain_to_json(&chain.points), "labels": labels, "length": length }))
        }
        Command::Experiment { config, seed, mode, eps, tol } => {
            let mut cfg: ExperimentConfig = match config {
                Some(path) => serde_json::from_str(&read_input(&path)?)
                    .map_err(|e| Failure::Usage(format!("{path}: malformed config: {e}")))?,
                None => ExperimentConfig::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(m) = mode {
                cfg.mode = m.into();
            }
            if let Some(e) = eps {
                cfg.eps = e;
            }
            if let Some(t) = tol {
                cfg.tol = t;
            }
            cfg.check()?;
            Output { text: run_experiment_csv(&cfg)?, ok: true }
        }
    })
}

fn emit(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(output) => {
            if let Err(e) = emit(cli.out.as_deref(), &output.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if output.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
