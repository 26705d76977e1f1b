//! `rbloch`: structure reports and verification suites for pre-Bloch,
//! refined Bloch and Grothendieck-Witt groups of finite fields.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on usage,
//! input or I/O errors.

mod cache;
mod commands;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use rbloch_core::Exec;

use crate::cache::{Cache, Store};
use crate::commands::DEFAULT_SEED;
use crate::report::{ms, Report, Runtime, Step};

#[derive(Parser)]
#[command(
    name = "rbloch",
    version,
    about = "Pre-Bloch, refined Bloch and Grothendieck-Witt groups of finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Rendering printed to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Also write the full JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Also write the report tables as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,

    /// Directory for cached presentations.
    #[arg(long, global = true, value_name = "DIR", env = "RBLOCH_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Ignore the cache directory for this run.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Leave out timings and cache counters, so repeated runs print identical bytes.
    #[arg(long, global = true)]
    no_runtime: bool,

    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Structure of P(F_q).
    Pb {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        q: Vec<u64>,
    },
    /// Structure of RP(F_q) and its quotients.
    Rpb {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        q: Vec<u64>,
    },
    /// GW(F_q) as Z[V]/J with identity checks.
    Gw {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        q: Vec<u64>,
    },
    /// The refined Bloch group B(F_q) = ker Λ.
    Bloch {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        q: Vec<u64>,
        /// Formal element to evaluate in RP(F_q), e.g. `<n>[2] - [3]`. Repeatable.
        #[arg(long, value_name = "ELEMENT", allow_hyphen_values = true)]
        eval: Vec<String>,
    },
    /// Specialize formal elements over F_q(t) at the places listed in FILE.
    Specialize {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Predicted cyclic kernel of order (q+1)', cross-checked against P(F_q)[1/2].
    PredictKernel {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        q: Vec<u64>,
    },
    /// Primes p <= BOUND with l | p+1.
    Cheb {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        bound: u64,
    },
    /// Every verification suite over a list of fields.
    Suite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [5u64, 7, 9, 13, 25])]
        q_list: Vec<u64>,
        /// Random cases per randomized family.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn list(qs: &[u64]) -> String {
    qs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl Command {
    /// Canonical echo of the subcommand; global I/O flags are not part of it.
    fn echo(&self) -> String {
        match self {
            Command::Pb { q } => format!("pb --q {}", list(q)),
            Command::Rpb { q } => format!("rpb --q {}", list(q)),
            Command::Gw { q } => format!("gw --q {}", list(q)),
            Command::Bloch { q, eval } => {
                let evals: String = eval.iter().map(|e| format!(" --eval '{e}'")).collect();
                format!("bloch --q {}{evals}", list(q))
            }
            Command::Specialize { input } => format!("specialize --in {}", input.display()),
            Command::PredictKernel { q } => format!("predict-kernel --q {}", list(q)),
            Command::Cheb { l, bound } => format!("cheb --l {l} --bound {bound}"),
            Command::Suite {
                seed,
                q_list,
                trials,
            } => {
                format!(
                    "suite --seed {seed} --q-list {} --trials {trials}",
                    list(q_list)
                )
            }
        }
    }
}

fn run(cli: &Cli, store: &Store) -> Result<(Report, Vec<Step>)> {
    let echo = cli.command.echo();
    match &cli.command {
        Command::Pb { q } => commands::pb(store, echo, q),
        Command::Rpb { q } => commands::rpb(store, echo, q),
        Command::Gw { q } => commands::gw(store, echo, q),
        Command::Bloch { q, eval } => commands::bloch(store, echo, q, eval),
        Command::Specialize { input } => commands::specialize(store, echo, input),
        Command::PredictKernel { q } => commands::predict(store, echo, q),
        Command::Cheb { l, bound } => commands::cheb(echo, *l, *bound),
        Command::Suite {
            seed,
            q_list,
            trials,
        } => commands::suite(store, echo, *seed, q_list, *trials),
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let rendered = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    std::io::stdout().lock().write_all(rendered.as_bytes())?;
    if let Some(path) = &cli.json {
        report.write_json(path)?;
    }
    if let Some(path) = &cli.csv {
        for p in report.write_csv(path)? {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let dir = if cli.no_cache {
        None
    } else {
        cli.cache_dir.clone()
    };
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let store = Store::new(Cache::new(dir), exec);

    let (mut report, steps) = match run(&cli, &store) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if !cli.no_runtime {
        report.runtime = Some(Runtime {
            total_ms: ms(started.elapsed()),
            steps,
            cache: store.cache.stats(),
        });
    }
    if let Err(e) = emit(&cli, &report) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
