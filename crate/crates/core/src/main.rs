use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sgweno::cli::{compare, run, ExampleId, GridMode, RunConfig};
use sgweno::interp::Prolongation;
use sgweno::timestep::DtMode;
use sgweno::weno::WeightMode;
use sgweno::Error;

/// Fifth-order WENO on sparse grids: run experiments and compare outputs.
#[derive(Parser)]
#[command(name = "sgweno", version)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one example and write CSV and binary outputs.
    Run(RunArgs),
    /// Compare the snapshots and wall times of two run directories.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Write the comparison here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// ex1, ex2, ex3a, ex3b, ex4, ex5a, ex5b or ex6.
    #[arg(long)]
    example: String,
    /// single or sparse.
    #[arg(long)]
    grid_mode: Option<String>,
    /// Root grid cells per direction.
    #[arg(long)]
    nr: Option<usize>,
    /// Finest refinement level.
    #[arg(long)]
    nl: Option<u32>,
    /// linear or weno.
    #[arg(long)]
    scheme: Option<String>,
    /// lagrange or weno.
    #[arg(long)]
    prolongation: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    /// cfl or accuracy.
    #[arg(long)]
    dt_mode: Option<String>,
    #[arg(long)]
    tfinal: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Comma-separated output times.
    #[arg(long, value_delimiter = ',')]
    snapshots: Option<Vec<f64>>,
    /// Convergence-table rows, doubling the root grid each time.
    #[arg(long)]
    refinements: Option<usize>,
    /// Shrink the root grid and final time by this factor in (0, 1].
    #[arg(long)]
    scale: Option<f64>,
}

fn config(a: RunArgs) -> sgweno::Result<RunConfig> {
    let example: ExampleId = a.example.parse()?;
    let mut c = RunConfig::defaults(example);
    if let Some(s) = a.scale {
        c = c.scaled(s)?;
    }
    if let Some(v) = a.grid_mode {
        c.grid_mode = v.parse::<GridMode>()?;
    }
    if let Some(v) = a.nr {
        c.nr = v;
    }
    if let Some(v) = a.nl {
        c.nl = v;
    }
    if let Some(v) = a.scheme {
        c.scheme = v.parse::<WeightMode>()?;
    }
    if let Some(v) = a.prolongation {
        c.prolongation = v.parse::<Prolongation>()?;
    }
    if let Some(v) = a.epsilon {
        c.epsilon = v;
    }
    if let Some(v) = a.cfl {
        c.cfl = v;
    }
    if let Some(v) = a.dt_mode {
        c.dt_mode = v.parse::<DtMode>()?;
    }
    if let Some(v) = a.tfinal {
        c.final_time = v;
        c.snapshots.retain(|&s| s <= v);
    }
    if let Some(v) = a.snapshots {
        c.snapshots = v;
    }
    if let Some(v) = a.refinements {
        c.refinements = v;
    }
    c.output_dir = a.out;
    c.validate()?;
    Ok(c)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidConfig { .. } | Error::InvalidArgument(_) => 2,
        Error::IntegratorFailure { .. } => 3,
        _ => 1,
    }
}

fn execute(cli: Cli) -> sgweno::Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidConfig {
                field: "threads".into(),
                reason: "must be at least 1".into(),
            });
        }
        sgweno::par::init_threads(n)?;
    }
    match cli.command {
        Command::Run(args) => {
            let cfg = config(args)?;
            let summary = run(&cfg)?;
            if !summary.rows.is_empty() {
                print!("{}", sgweno::cli::emit_table(&summary.rows));
            }
            eprintln!(
                "{} steps in {:.3} s, outputs in {}",
                summary.trajectory.steps,
                summary.trajectory.wall_seconds,
                cfg.output_dir.display()
            );
        }
        Command::Compare { a, b, out } => {
            let text = compare(&a, &b)?;
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
