use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pmeanfair::benchmark::{self, BenchmarkConfig};
use pmeanfair::error::{read, write, CliError, Result};
use pmeanfair::format::{load_instance, InstanceFile};
use pmeanfair::generate::{default_delta, random_kind, Family};
use pmeanfair::param::{load_eta, parse_p, welfare_param};
use pmeanfair::solve::{solve, Algorithm, SolveOptions};
use pmeanfair::verify::{verify, VerifyOptions};
use pmeanfair_core::AlgOptions;

#[derive(Parser)]
#[command(name = "pmeanfair", version, about = "Approximate p-mean welfare allocation of indivisible goods")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Welfare {
    /// Welfare exponent: a decimal <= 1 or -inf.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_p_arg)]
    p: f64,
    /// JSON array of agent weights.
    #[arg(long)]
    eta: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and print a JSON report.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        welfare: Welfare,
        #[arg(long, default_value = "alg", value_parser = parse_algorithm)]
        algorithm: Algorithm,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Maximum number of allocations the exact solver may enumerate.
        #[arg(long, default_value_t = 20_000_000)]
        budget: u128,
        /// Iteration cap as a multiple of the analytic bound.
        #[arg(long, default_value_t = 2.0)]
        cap_factor: f64,
    },
    /// Check solver invariants against brute force; exit 0 iff all pass.
    Verify {
        instance: PathBuf,
        #[command(flatten)]
        welfare: Welfare,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 20_000_000)]
        budget: u128,
    },
    /// Write an instance file.
    Generate {
        /// random, xos_hard or partition.
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// additive, xos, budget_additive or coverage.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        clauses: Option<usize>,
        #[arg(long)]
        cap_fraction: Option<f64>,
        #[arg(long)]
        universe: Option<usize>,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        identical: bool,
        /// Partition input, comma separated.
        #[arg(long, value_delimiter = ',')]
        s: Vec<u64>,
    },
    /// Run a benchmark config and write CSV.
    Benchmark {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave the ms column blank so output is byte-reproducible.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn parse_p_arg(s: &str) -> std::result::Result<f64, String> {
    parse_p(s).map_err(|e| e.to_string())
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => write(path, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn param_for(welfare: &Welfare) -> Result<pmeanfair_core::WelfareParam> {
    let eta = welfare.eta.as_deref().map(load_eta).transpose()?;
    welfare_param(welfare.p, eta)
}

fn unexpected(family: &str, flags: &[(&str, bool)]) -> Result<()> {
    match flags.iter().find(|(_, set)| *set) {
        Some((name, _)) => Err(CliError::Malformed(format!("--{name} does not apply to family {family}"))),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            instance,
            welfare,
            algorithm,
            out,
            budget,
            cap_factor,
        } => {
            let inst = load_instance(&instance)?;
            let param = param_for(&welfare)?;
            let options = SolveOptions {
                budget,
                alg: AlgOptions { cap_factor },
            };
            let report = solve(&inst, &param, algorithm, options)?;
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            emit(out.as_deref(), text.as_bytes())
        }
        Command::Verify {
            instance,
            welfare,
            seeds,
            tolerance,
            budget,
        } => {
            let inst = load_instance(&instance)?;
            let param = param_for(&welfare)?;
            let options = VerifyOptions {
                seeds,
                tolerance,
                budget,
                ..VerifyOptions::default()
            };
            let report = verify(&inst, &param, &options)?;
            print!("{report}");
            match report.failures() {
                0 => Ok(()),
                k => Err(CliError::ChecksFailed(k)),
            }
        }
        Command::Generate {
            family,
            seed,
            out,
            n,
            m,
            kind,
            clauses,
            cap_fraction,
            universe,
            density,
            delta,
            identical,
            s,
        } => {
            let need = |name: &str, v: Option<usize>| {
                v.ok_or_else(|| CliError::Malformed(format!("family {family} needs --{name}")))
            };
            let spec = match family.as_str() {
                "random" => {
                    unexpected(&family, &[("delta", delta.is_some()), ("identical", identical), ("s", !s.is_empty())])?;
                    let kind = kind.unwrap_or_else(|| "additive".to_string());
                    random_kind(&kind, clauses, cap_fraction, universe, density)?;
                    Family::Random {
                        kind,
                        n: need("n", n)?,
                        m: need("m", m)?,
                        clauses,
                        cap_fraction,
                        universe,
                        density,
                    }
                }
                "xos_hard" => {
                    unexpected(
                        &family,
                        &[
                            ("m", m.is_some()),
                            ("kind", kind.is_some()),
                            ("clauses", clauses.is_some()),
                            ("cap-fraction", cap_fraction.is_some()),
                            ("universe", universe.is_some()),
                            ("density", density.is_some()),
                            ("s", !s.is_empty()),
                        ],
                    )?;
                    Family::XosHard {
                        n: need("n", n)?,
                        delta: delta.unwrap_or_else(default_delta),
                        identical,
                    }
                }
                "partition" => {
                    unexpected(
                        &family,
                        &[
                            ("n", n.is_some()),
                            ("m", m.is_some()),
                            ("kind", kind.is_some()),
                            ("clauses", clauses.is_some()),
                            ("cap-fraction", cap_fraction.is_some()),
                            ("universe", universe.is_some()),
                            ("density", density.is_some()),
                            ("delta", delta.is_some()),
                            ("identical", identical),
                        ],
                    )?;
                    Family::Partition { s }
                }
                other => {
                    return Err(CliError::Malformed(format!(
                        "unknown family {other:?} (random, xos_hard, partition)"
                    )))
                }
            };
            let inst = spec.generate(seed)?;
            emit(out.as_deref(), InstanceFile::from_instance(&inst).to_json().as_bytes())
        }
        Command::Benchmark {
            config,
            out,
            no_timing,
            threads,
        } => {
            let config = BenchmarkConfig::parse(&read(&config)?)?;
            let rows = match threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| CliError::Malformed(e.to_string()))?
                    .install(|| benchmark::run(&config, !no_timing))?,
                None => benchmark::run(&config, !no_timing)?,
            };
            let mut buf = Vec::new();
            benchmark::write_csv(&rows, &mut buf)?;
            emit(out.as_deref(), &buf)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
