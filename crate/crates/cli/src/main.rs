use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use symsens_cli::{
    load_report, parse_partition, parse_system, replay_check, run, summary, Command, DeltaGrid,
    ExperimentConfig, Format, HarnessError,
};

#[derive(Parser)]
#[command(name = "symsens", version, about = "Symmetric sensitivity experiments on interval maps")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Trap probabilities over a grid of levels and the largest sensitivity constant.
    Sensitivity(RunArgs),
    /// Block entropies of the symbolic coding and the equipartition split.
    Entropy(RunArgs),
    /// Entropy estimate, certified level and the trap probability there.
    Certificate(RunArgs),
    /// Exceedance counts of pair orbits and boundary visit frequencies.
    Recurrence(RunArgs),
    /// Oracle and closed-form consistency checks.
    Selftest(RunArgs),
    /// Compare the results of two reports produced from the same config.
    Replay { first: PathBuf, second: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    /// System id: radic:<r>, tent, logistic, rotation:<theta>.
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    orbits: Option<usize>,
    #[arg(long)]
    orbit_length: Option<usize>,
    #[arg(long)]
    horizon: Option<usize>,
    /// start:stop:steps
    #[arg(long)]
    delta_grid: Option<String>,
    /// Probe level for exceedance counts and boundary strips.
    #[arg(long)]
    delta: Option<f64>,
    /// Comma-separated interior breakpoints.
    #[arg(long)]
    partition: Option<String>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    quantile: Option<f64>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn resolve(self, command: Command) -> Result<ExperimentConfig, HarnessError> {
        let mut c = ExperimentConfig::new(command);
        c.workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        if let Some(s) = self.system {
            c.system = parse_system(&s)?;
        }
        if let Some(s) = self.delta_grid {
            c.delta_grid = s.parse::<DeltaGrid>()?;
        }
        if let Some(s) = self.partition {
            c.partition = parse_partition(&s)?;
        }
        if let Some(s) = self.format {
            c.format = s.parse::<Format>()?;
        }
        c.pairs = self.pairs.unwrap_or(c.pairs);
        c.orbits = self.orbits.unwrap_or(c.orbits);
        c.orbit_length = self.orbit_length.unwrap_or(c.orbit_length);
        c.horizon = self.horizon.unwrap_or(c.horizon);
        c.delta = self.delta.unwrap_or(c.delta);
        c.n_max = self.n_max.unwrap_or(c.n_max);
        c.quantile = self.quantile.unwrap_or(c.quantile);
        c.threshold = self.threshold.unwrap_or(c.threshold);
        c.epsilon = self.epsilon.unwrap_or(c.epsilon);
        c.seed = self.seed.unwrap_or(c.seed);
        c.workers = self.workers.unwrap_or(c.workers);
        c.out = self.out;
        c.validate()?;
        Ok(c)
    }
}

fn execute(args: RunArgs, command: Command) -> Result<ExitCode, HarnessError> {
    let config = args.resolve(command)?;
    let report = run(&config)?;
    println!("{}", summary(&report));
    if let Some(out) = &config.out {
        println!("wrote {}", out.display());
    }
    let failed = command == Command::Selftest && report.results["passed"] != serde_json::Value::Bool(true);
    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Sub::Sensitivity(a) => execute(a, Command::Sensitivity),
        Sub::Entropy(a) => execute(a, Command::Entropy),
        Sub::Certificate(a) => execute(a, Command::Certificate),
        Sub::Recurrence(a) => execute(a, Command::Recurrence),
        Sub::Selftest(a) => execute(a, Command::Selftest),
        Sub::Replay { first, second } => (|| {
            let same = replay_check(&load_report(&first)?, &load_report(&second)?)?;
            println!("{}", if same { "identical results" } else { "results differ" });
            Ok(if same { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        })(),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
