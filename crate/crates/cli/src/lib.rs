//! Command line front end: `solve`, `bench`, `witness`, `maps` and `serve`.

pub mod json;
pub mod server;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use polysolve::error::Error;
use polysolve::maps::{format_map, solve_binomials};
use polysolve::polynomial::{parse_system, PolySystem};
use polysolve::solver::bench::BenchTable;
use polysolve::solver::{cyclic, format_sci, format_solutions, solve_blackbox, SolverOptions};
use polysolve::numerics::{Precision, QuadDouble};
use polysolve::witness::{format_witness, monodromy_breakup, trace_test, witness_solve, DEFAULT_MAX_LOOPS};

/// Environment variable holding the number of worker threads the service
/// may use at once, and the cap on `--tasks` when set.
pub const WORKERS_ENV: &str = "POLYSOLVE_WORKERS";

pub fn worker_budget() -> usize {
    budget_override().unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn budget_override() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

#[derive(Parser, Debug)]
#[command(name = "polysolve", version, about = "Polynomial homotopy continuation solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a square system given in a .sys file.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        tasks: usize,
        #[arg(long, default_value = "d")]
        precision: Precision,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the solutions and report as JSON.
        #[arg(long, conflicts_with = "phc_format")]
        json: bool,
        /// Print the solution block (the default).
        #[arg(long)]
        phc_format: bool,
    },
    /// Time the blackbox solver on cyclic n-roots, e.g. `bench cyclic7`.
    Bench {
        family: String,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        tasks: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "d")]
        precision: Vec<Precision>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compute a witness set of the given dimension, optionally factored.
    Witness {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        factor: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_LOOPS)]
        max_loops: usize,
    },
    /// Solve a binomial system as monomial maps.
    Maps {
        file: PathBuf,
        /// Also report lower-dimensional maps with zero coordinates.
        #[arg(long)]
        all: bool,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8765)]
        port: u16,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LoopFailure(_) | Error::SingularMatrix => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_system(path: &Path) -> Result<PolySystem, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_system(&text)?)
}

fn capped(tasks: usize) -> usize {
    budget_override().map_or(tasks, |b| tasks.min(b))
}

/// Runs the command line `argv` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns 0 on success, 1 on an input
/// error and 2 on an internal error.
pub fn cli_main<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return 1;
        }
    };
    match run(cli.command, out, err) {
        Ok(()) => 0,
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Internal(m)) => {
            let _ = writeln!(err, "internal error: {m}");
            2
        }
    }
}

fn run(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Solve { file, tasks, precision, seed, json, .. } => {
            let s = read_system(&file)?;
            let opts = SolverOptions { tasks: capped(tasks), precision, seed, ..SolverOptions::default() };
            let report = solve_blackbox(&s, &opts)?;
            if json {
                let body = json::versioned(json::SolveResponse::new(&report));
                let text = serde_json::to_string_pretty(&body).map_err(|e| Failure::Internal(e.to_string()))?;
                writeln!(out, "{text}")?;
            } else {
                write!(out, "{}", format_solutions(&report.solutions, &report.varnames))?;
                let c = report.counts;
                writeln!(
                    err,
                    "paths {} : converged {} : diverged {} : failed {} : clustered {} : distinct {}",
                    c.paths,
                    c.converged,
                    c.diverged,
                    c.failed,
                    c.clustered,
                    report.solutions.len()
                )?;
                writeln!(
                    err,
                    "seed {} : precision {} : tasks {} : elapsed {:.3} s",
                    report.seed,
                    precision.flag(),
                    opts.tasks,
                    report.elapsed_seconds
                )?;
            }
        }
        Command::Bench { family, tasks, precision, csv, seed } => {
            let n: usize = family
                .strip_prefix("cyclic")
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| Failure::Input(format!("unknown benchmark '{family}', expected cyclic<N>")))?;
            if tasks.is_empty() || precision.is_empty() {
                return Err(Failure::Input("empty task or precision list".into()));
            }
            let s = cyclic(n)?;
            let table = BenchTable::run(&s, &precision, &tasks, seed)?;
            let text = table.to_csv();
            write!(out, "{text}")?;
            if let Some(path) = csv {
                std::fs::write(&path, &text)?;
                writeln!(err, "wrote {}", path.display())?;
            }
        }
        Command::Witness { file, dim, factor, seed, max_loops } => {
            let s = read_system(&file)?;
            let opts = SolverOptions { seed, tasks: capped(1), ..SolverOptions::default() };
            let w = witness_solve(&s, dim, &opts)?;
            write!(out, "{}", format_witness(&w))?;
            if factor {
                let p = monodromy_breakup(&w, max_loops, seed, &opts)?;
                writeln!(out, "FACTORS :")?;
                for (k, block) in p.blocks.iter().enumerate() {
                    let (ok, residual) = trace_test(&w, block, &opts)?;
                    let points: Vec<String> = block.iter().map(|i| (i + 1).to_string()).collect();
                    writeln!(
                        out,
                        "factor {} : degree {} : points {} : trace residual {} : {}",
                        k + 1,
                        block.len(),
                        points.join(" "),
                        format_sci(QuadDouble::from_f64(residual), 3).trim(),
                        if ok { "certified" } else { "not certified" }
                    )?;
                }
                writeln!(
                    out,
                    "degree {} : {} factors : loops {} ({} failed) : {}",
                    w.degree(),
                    p.blocks.len(),
                    p.loops,
                    p.failed_loops,
                    if p.certified { "certified" } else { "not certified" }
                )?;
            }
        }
        Command::Maps { file, all } => {
            let s = read_system(&file)?;
            let maps = solve_binomials(s.nvars(), &s, !all)?;
            if maps.is_empty() {
                writeln!(out, "no solutions")?;
            }
            for (k, m) in maps.iter().enumerate() {
                if k > 0 {
                    writeln!(out)?;
                }
                for line in format_map(m) {
                    writeln!(out, "{line}")?;
                }
            }
        }
        Command::Serve { port } => {
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind(("127.0.0.1", port))
                    .await
                    .map_err(|e| Failure::Input(format!("cannot bind port {port}: {e}")))?;
                let config = server::ServerConfig::default();
                writeln!(err, "listening on http://{} with {} workers", listener.local_addr()?, config.workers)?;
                server::serve(listener, config).await?;
                Ok::<(), Failure>(())
            })?;
        }
    }
    Ok(())
}
