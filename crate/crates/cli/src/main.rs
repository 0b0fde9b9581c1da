//! `hyperlab` command line. Every subcommand parses flags, calls the library
//! and prints JSON or CSV on stdout; diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error, 3 failed checks
//! (`experiment --check`).

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hyperlab::branching::ValueDistribution;
use hyperlab::census::{census, CensusConfig};
use hyperlab::efgame::{distinguishing_formula, duplicator_wins, duplicator_wins_distance};
use hyperlab::fo::{evaluate, parse};
use hyperlab::hypercore::{read_edgelist, write_edgelist, Hypergraph, Vertex};
use hyperlab::mclab::{run, sweep, sweep_csv, ExperimentSpec};
use hyperlab::predict::{classify, mu_bounds, poisson_means, prob_dl_limit};
use hyperlab::sampler::{sample, SampleSpec};
use hyperlab::Family;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "hyperlab", version, about = "Random uniform hypergraphs near sparse thresholds")]
struct Cli {
    /// Worker threads for Monte Carlo runs (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SeedArg {
    #[arg(long, env = "HYPERLAB_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Sample G^{d+1}(n, p) and print its edge list
    Sample {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: usize,
        /// Edge probability (or use --family)
        #[arg(long, conflicts_with = "family")]
        p: Option<f64>,
        /// Family evaluated at n, e.g. "lw:d=1,c=1"
        #[arg(long)]
        family: Option<String>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Structural census of an edge-list file ("-" for stdin)
    Census {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        l_max: usize,
        #[arg(long, default_value_t = 2)]
        vstar_max: usize,
        #[arg(long, default_value_t = 1)]
        k_small: usize,
    },
    /// Regime, Poisson means and limits for a family
    Predict {
        #[arg(long)]
        family: String,
        /// Only print the Poisson means keyed by type code
        #[arg(long)]
        lambda: bool,
        /// Evaluate p(n) and the μ cutoffs at this n
        #[arg(long)]
        n: Option<u64>,
        /// Largest l for the P(D_l) limits
        #[arg(long, default_value_t = 3)]
        l_max: usize,
    },
    /// Run a Monte Carlo experiment from a JSON spec
    Experiment {
        #[arg(long)]
        spec: PathBuf,
        /// Exit with status 3 if any tolerance check fails
        #[arg(long)]
        check: bool,
    },
    /// Sweep one family parameter and print CSV
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        param: String,
        /// Comma-separated parameter values
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        grid: Vec<f64>,
        /// Family template (default: the experiment file's family)
        #[arg(long)]
        family: Option<String>,
    },
    /// Solve the Ehrenfeucht–Fraïssé game on two edge-list files
    Efgame {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        rounds: u32,
        /// Also require equal distances between corresponding picks
        #[arg(long)]
        distance: bool,
        /// Premarked pairs "a:b", for the distance game
        #[arg(long, value_delimiter = ',', requires = "distance")]
        premark: Vec<String>,
        /// Print a separating sentence when Spoiler wins
        #[arg(long, conflicts_with = "distance")]
        emit_formula: bool,
    },
    /// Evaluate a first-order formula on an edge-list file
    FoEval {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, conflicts_with = "formula_file", required_unless_present = "formula_file")]
        formula: Option<String>,
        #[arg(long)]
        formula_file: Option<PathBuf>,
        /// Free-variable bindings "x=3"
        #[arg(long, value_delimiter = ',')]
        assign: Vec<String>,
    },
    /// Exact (r, s)-value law of the Poisson butterfly process B(r, μ)
    Branching {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u8,
        #[arg(long)]
        mu: f64,
        /// Largest support listed value by value
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
    Check,
}

fn runtime<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Runtime(e.to_string())
}

fn read_graph(path: &Path) -> Result<Hypergraph, Failure> {
    let reader: Box<dyn Read> = if path.as_os_str() == "-" {
        Box::new(io::stdin())
    } else {
        Box::new(File::open(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?)
    };
    read_edgelist(BufReader::new(reader)).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn read_spec(path: &Path) -> Result<ExperimentSpec, Failure> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(runtime)?;
    writeln!(out).map_err(runtime)
}

fn parse_pairs(items: &[String]) -> Result<Vec<(Vertex, Vertex)>, Failure> {
    items
        .iter()
        .map(|s| {
            let (a, b) = s.split_once(':').ok_or_else(|| Failure::Usage(format!("premark {s:?} is not a:b")))?;
            let parse = |t: &str| t.trim().parse::<Vertex>().map_err(|e| Failure::Usage(format!("premark {s:?}: {e}")));
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Sample { d, n, p, family, seed } => {
            let (d, p) = match (p, family) {
                (Some(p), None) => (d.ok_or_else(|| Failure::Usage("--d is required with --p".into()))?, p),
                (None, Some(f)) => {
                    let fam: Family = f.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
                    if d.is_some_and(|d| d != fam.d()) {
                        return Err(Failure::Usage("--d disagrees with the family".into()));
                    }
                    (fam.d(), fam.p(n as u64).map_err(runtime)?)
                }
                _ => return Err(Failure::Usage("give exactly one of --p and --family".into())),
            };
            let h = sample(&SampleSpec { d, n, p, seed: seed.seed }).map_err(runtime)?;
            match write_edgelist(&h, io::stdout().lock()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(runtime(e)),
                _ => Ok(()),
            }
        }
        Command::Census { input, l_max, vstar_max, k_small } => {
            let h = read_graph(&input)?;
            let report = census(&h, CensusConfig { l_max, vstar_max, k_small });
            print_json(&serde_json::to_value(report).map_err(runtime)?)
        }
        Command::Predict { family, lambda, n, l_max } => {
            let fam: Family = family.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
            let means: serde_json::Map<String, Value> = match poisson_means(&fam) {
                Ok(m) => m.into_iter().map(|(k, v)| (k, json!(v))).collect(),
                Err(e) if lambda => return Err(runtime(e)),
                Err(_) => Default::default(),
            };
            if lambda {
                return print_json(&Value::Object(means));
            }
            let regime = classify(&fam).map_err(runtime)?;
            let limits: Vec<Value> =
                (0..=l_max).map(|l| prob_dl_limit(fam.d(), l, &fam).map_or(Value::Null, |p| json!(p))).collect();
            let mut out = json!({
                "schema_version": SCHEMA_VERSION,
                "family": fam.to_string(),
                "regime": regime,
                "lambda": means,
                "prob_d_l": limits,
            });
            if let Some(n) = n {
                out["n"] = json!(n);
                out["p"] = json!(fam.p(n).map_err(runtime)?);
                let bounds: Vec<Value> = (1..=l_max)
                    .map(|l| {
                        mu_bounds(fam.d(), l, n as f64)
                            .map_or(Value::Null, |(lo, hi)| json!({"l": l, "lower": lo, "upper": hi}))
                    })
                    .collect();
                out["mu_bounds"] = json!(bounds);
            }
            print_json(&out)
        }
        Command::Experiment { spec, check } => {
            let spec = read_spec(&spec)?;
            let report = run(&spec).map_err(runtime)?;
            print_json(&serde_json::to_value(&report).map_err(runtime)?)?;
            if check && !report.passed {
                for c in report.checks().filter(|c| !c.passed) {
                    eprintln!("check failed: {} observed {} expected {} (tolerance {})", c.name, c.observed, c.expected, c.tolerance);
                }
                return Err(Failure::Check);
            }
            Ok(())
        }
        Command::Sweep { spec, param, grid, family } => {
            let spec = read_spec(&spec)?;
            let template: Family =
                family.as_deref().unwrap_or(&spec.family).parse().map_err(|e| Failure::Usage(format!("{e}")))?;
            let rows = sweep(&template, &param, &grid, &spec).map_err(runtime)?;
            print!("{}", sweep_csv(&rows).map_err(runtime)?);
            Ok(())
        }
        Command::Efgame { left, right, rounds, distance, premark, emit_formula } => {
            let (h1, h2) = (read_graph(&left)?, read_graph(&right)?);
            let wins = if distance {
                duplicator_wins_distance(&h1, &h2, rounds, &parse_pairs(&premark)?)
            } else {
                duplicator_wins(&h1, &h2, rounds)
            }
            .map_err(runtime)?;
            let mut out = json!({
                "schema_version": SCHEMA_VERSION,
                "rounds": rounds,
                "distance": distance,
                "duplicator_wins": wins,
                "winner": if wins { "duplicator" } else { "spoiler" },
            });
            if emit_formula {
                let f = distinguishing_formula(&h1, &h2, rounds).map_err(runtime)?;
                out["formula"] = f.map_or(Value::Null, |f| json!(f.to_string()));
            }
            print_json(&out)
        }
        Command::FoEval { input, formula, formula_file, assign } => {
            let h = read_graph(&input)?;
            let text = match (formula, formula_file) {
                (Some(t), _) => t,
                (None, Some(path)) => read_text(&path)?,
                (None, None) => unreachable!("clap requires one"),
            };
            let f = parse(&text, h.d()).map_err(|e| Failure::Usage(format!("formula: {e}")))?;
            let mut env = HashMap::new();
            for a in &assign {
                let (var, v) = a.split_once('=').ok_or_else(|| Failure::Usage(format!("assignment {a:?} is not x=v")))?;
                let v = v.trim().parse::<Vertex>().map_err(|e| Failure::Usage(format!("assignment {a:?}: {e}")))?;
                env.insert(var.trim().to_string(), v);
            }
            let value = evaluate(&h, &f, &env).map_err(runtime)?;
            print_json(&json!({
                "schema_version": SCHEMA_VERSION,
                "formula": f.to_string(),
                "quantifier_depth": f.quantifier_depth(),
                "value": value,
            }))
        }
        Command::Branching { d, r, s, mu, limit } => {
            let mut dist = ValueDistribution::<f64>::exact(d, r, s, mu).map_err(runtime)?;
            let support = dist.support_size();
            let mut out = json!({
                "schema_version": SCHEMA_VERSION,
                "d": d, "r": r, "s": s, "mu": mu,
                "support_size": support.to_string(),
                "total_mass": dist.total_mass(),
            });
            if support <= limit as u128 {
                out["probabilities"] = json!(dist.to_hex_map(limit).map_err(runtime)?);
            }
            print_json(&out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check) => ExitCode::from(3),
    }
}
