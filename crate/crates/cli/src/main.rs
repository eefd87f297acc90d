use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use qemlab::acceptance::{selftest, selftest_verdict};
use qemlab::experiment::{write_csv, Experiment, ExperimentConfig, Variant};

/// Even-Mansour quantum cryptanalysis experiments.
#[derive(Parser)]
#[command(name = "qemlab", version)]
struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Key-recovery attacks: simon-q2, q1-claw, birthday.
    Attack(Params),
    /// Resampling and reprogramming games: resample-perm, resample-fn, reprogram.
    Lemma(Params),
    /// Hybrid-chain equivalences and bad-event frequencies.
    Hybrid(Params),
    /// Advantage of one strategy over a (q_e, q_p) grid, with the bound.
    Sweep(Params),
    /// Runs the acceptance suite; exit 0 iff every criterion passes.
    Selftest,
}

#[derive(Args)]
struct Params {
    #[arg(long, default_value = "")]
    name: String,
    #[arg(long)]
    n: usize,
    /// Function input width for the lemma games (default: n).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value = "two-key")]
    variant: String,
    #[arg(long = "q-e", value_delimiter = ',')]
    q_e: Vec<usize>,
    #[arg(long = "q-p", value_delimiter = ',')]
    q_p: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    q: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    j: usize,
    #[arg(long)]
    primed: bool,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Params {
    fn config(&self, experiment: Experiment) -> qemlab::Result<ExperimentConfig> {
        let mut c = ExperimentConfig::new(experiment, &self.name, self.n);
        if c.name.is_empty() && experiment == Experiment::Sweep {
            c.name = "slide".into();
        }
        c.m = self.m;
        c.variant = self.variant.parse::<Variant>()?;
        c.q_e = self.q_e.clone();
        c.q_p = self.q_p.clone();
        c.q = self.q.clone();
        c.j = self.j;
        c.primed = self.primed;
        c.trials = self.trials;
        c.seed = self.seed;
        Ok(c)
    }
}

fn run_rows(experiment: Experiment, params: &Params) -> Result<(), String> {
    let config = params.config(experiment).map_err(|e| e.to_string())?;
    let rows = qemlab::experiment::run(&config).map_err(|e| e.to_string())?;
    let written = match &params.out {
        Some(path) => File::create(path).and_then(|f| write_csv(BufWriter::new(f), &rows)),
        None => write_csv(io::stdout().lock(), &rows),
    };
    written.map_err(|e| format!("cannot write CSV: {e}"))
}

fn run_selftest() -> ExitCode {
    let start = Instant::now();
    let reports = selftest(|r| {
        println!("{}", r.line());
        let _ = io::stdout().flush();
    });
    let verdict = selftest_verdict(&reports, start.elapsed());
    if verdict.passed {
        println!("selftest passed: {}", verdict.detail);
        ExitCode::SUCCESS
    } else {
        println!("selftest failed: {}", verdict.detail);
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot size the worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    let (experiment, params) = match &cli.command {
        Command::Selftest => return run_selftest(),
        Command::Attack(p) => (Experiment::Attack, p),
        Command::Lemma(p) => (Experiment::Lemma, p),
        Command::Hybrid(p) => (Experiment::Hybrid, p),
        Command::Sweep(p) => (Experiment::Sweep, p),
    };
    match run_rows(experiment, params) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
