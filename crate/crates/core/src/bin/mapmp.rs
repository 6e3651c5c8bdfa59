use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mapmp::bench::{metrics_csv_string, run_bench, write_csv, BenchConfig, InstanceSource};
use mapmp::io::{emit_model, emit_uai, parse_uai, read_model_file};
use mapmp::objective::primal_objective;
use mapmp::oracle::{brute_force_map, lp_solve_l2, tree_map};
use mapmp::projection::{proj_local, vertex_round};
use mapmp::schedulers::eta_for_epsilon;
use mapmp::{default_edge_prob, erdos_renyi_potts, random_tree_potts, recover_primal, solve, Algorithm, Error, Model, SolverOptions};

#[derive(Parser)]
#[command(name = "mapmp", version, about = "Entropy-regularized message passing for pairwise MRF MAP inference")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Native,
    Uai,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Brute,
    Tree,
    Lp,
}

#[derive(clap::Args)]
struct EtaArgs {
    /// Regularization strength.
    #[arg(long, conflicts_with = "epsilon", allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Target accuracy; sets eta = 4(m+n) ln d / epsilon.
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
}

impl EtaArgs {
    fn resolve(&self, model: Option<&Model>, default: f64) -> mapmp::Result<f64> {
        match (self.eta, self.epsilon) {
            (Some(eta), _) => Ok(eta),
            (None, Some(eps)) => {
                let m = model.ok_or_else(|| Error::InvalidArgument("--epsilon needs a fixed instance".into()))?;
                eta_for_epsilon(m.m(), m.n(), m.d(), eps)
            }
            (None, None) => Ok(default),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random instance.
    Gen {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Edge probability (default 1.1 ln n / n).
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
        /// Random recursive tree instead of Erdős–Rényi.
        #[arg(long)]
        tree: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Native)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a UAI MARKOV file to the native format.
    Convert {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one algorithm and print final values.
    Solve {
        model: PathBuf,
        #[arg(long, default_value = "accel-emp")]
        algo: Algorithm,
        #[command(flatten)]
        eta: EtaArgs,
        #[arg(long)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        stride: usize,
        /// Write the per-iteration trace as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the benchmark protocol and emit metric CSVs.
    Bench {
        /// Fixed instance; omit to generate one per trial.
        model: Option<PathBuf>,
        /// Comma-separated algorithm list.
        #[arg(long, value_delimiter = ',', default_value = "emp,smp,accel-emp,accel-smp,bcd,accel-bcd")]
        algo: Vec<Algorithm>,
        #[command(flatten)]
        eta: EtaArgs,
        #[arg(long)]
        iters: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long)]
        p: Option<f64>,
        /// Known optimal LP value, used instead of the LP oracle.
        #[arg(long, allow_negative_numbers = true)]
        lp_value: Option<f64>,
        /// Fill the elapsed_ms column (output is then not reproducible).
        #[arg(long)]
        timing: bool,
        /// Metrics CSV; summary and ratio tables go next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact oracles on a model file.
    Oracle {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = OracleKind::Brute)]
        kind: OracleKind,
    },
}

fn emit(text: &str, out: Option<&Path>) -> mapmp::Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn sibling(path: &Path, tag: &str) -> PathBuf {
    path.with_extension(format!("{tag}.csv"))
}

fn run(cli: Cli) -> mapmp::Result<()> {
    match cli.cmd {
        Cmd::Gen { n, d, p, tree, seed, format, out } => {
            let model = if tree {
                random_tree_potts(n, d, seed)?
            } else {
                erdos_renyi_potts(n, p.unwrap_or_else(|| default_edge_prob(n)), d, seed)?
            };
            let text = match format {
                Format::Native => emit_model(&model),
                Format::Uai => emit_uai(&model),
            };
            emit(&text, out.as_deref())
        }
        Cmd::Convert { input, out } => {
            let model = parse_uai(&fs::read_to_string(input)?)?;
            emit(&emit_model(&model), out.as_deref())
        }
        Cmd::Solve { model, algo, eta, iters, seed, stride, out } => {
            let model = read_model_file(&model)?;
            let eta = eta.resolve(Some(&model), 1000.0)?;
            let opts = SolverOptions { stride, ..SolverOptions::default() };
            let trace = solve(&model, algo, eta, iters, seed, &opts)?;
            let lambda = trace.output();
            let mu = recover_primal(&model, lambda, eta);
            let primal = primal_objective(&model, &proj_local(&model, &mu)?)?;
            let labels = vertex_round(&mu);
            println!("algorithm {algo}");
            println!("eta {eta}");
            println!("iterations {}", trace.iterations);
            println!("dual_value {}", trace.last().dual_value);
            println!("slack_score {}", trace.last().slack_score);
            println!("best_iter {} best_slack_score {}", trace.best_iter, trace.best_score);
            println!("primal_value {primal}");
            println!("rounded_value {}", model.map_value(&labels)?);
            println!("assignment {}", join(labels.labels()));
            if let Some(path) = out {
                write_csv(&trace.records, fs::File::create(path)?)?;
            }
            Ok(())
        }
        Cmd::Bench { model, algo, eta, iters, trials, seed, stride, n, d, p, lp_value, timing, out } => {
            let instance = match model {
                Some(path) => InstanceSource::Fixed(read_model_file(&path)?),
                None => InstanceSource::Generated { n, edge_prob: p.unwrap_or_else(|| default_edge_prob(n)), d },
            };
            let fixed = match &instance {
                InstanceSource::Fixed(m) => Some(m),
                InstanceSource::Generated { .. } => None,
            };
            let eta = eta.resolve(fixed, 1000.0)?;
            let config = BenchConfig { algorithms: algo, eta, iters, trials, seed, stride, instance, lp_value, timing };
            let report = run_bench(&config)?;
            let metrics = metrics_csv_string(&report.rows)?;
            emit(&metrics, out.as_deref())?;
            if let Some(path) = out {
                write_csv(&report.summary, fs::File::create(sibling(&path, "summary"))?)?;
                if !report.ratios.is_empty() {
                    write_csv(&report.ratios, fs::File::create(sibling(&path, "ratio"))?)?;
                    write_csv(&report.ratio_summary, fs::File::create(sibling(&path, "ratio-summary"))?)?;
                }
            }
            Ok(())
        }
        Cmd::Oracle { model, kind } => {
            let model = read_model_file(&model)?;
            match kind {
                OracleKind::Brute => {
                    let bf = brute_force_map(&model)?;
                    println!("value {}", bf.value);
                    println!("unique {}", bf.unique);
                    if let Some(s) = bf.second_best {
                        println!("second_best {s}");
                    }
                    println!("assignment {}", join(bf.assignment.labels()));
                }
                OracleKind::Tree => {
                    let (a, v) = tree_map(&model)?;
                    println!("value {v}");
                    println!("assignment {}", join(a.labels()));
                }
                OracleKind::Lp => {
                    let (mu, v) = lp_solve_l2(&model)?;
                    println!("value {v}");
                    println!("rounded {}", join(vertex_round(&mu).labels()));
                }
            }
            Ok(())
        }
    }
}

fn join(labels: &[usize]) -> String {
    labels.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::TooLarge { .. } | Error::NotAForest => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
