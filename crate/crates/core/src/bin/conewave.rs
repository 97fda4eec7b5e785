use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use cone_wave::harness::{config, run, sweep};

#[derive(Parser)]
#[command(name = "conewave", about = "Damped semilinear waves on a stretched cone")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed (overrides `init.seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a parameter sweep and write the phase table.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the well constants of a configuration.
    Constants {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn apply(cli: &Cli, c: &mut config::RunConfig) {
    if let Some(out) = &cli.out {
        c.output.dir = out.clone();
    }
    if let Some(seed) = cli.seed {
        c.init.seed = seed;
    }
}

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run { config: path } => {
            let mut c = config::parse_config(&read(path)?)?;
            apply(&cli, &mut c);
            let outcome = run::run(&c)?;
            run::write_run(&outcome, &c.output.dir)?;
            println!(
                "{} ({} records) -> {}",
                outcome.classification.as_str(),
                outcome.trajectory.series.len(),
                c.output.dir.display()
            );
            Ok(ExitCode::from(outcome.classification.exit_code() as u8))
        }
        Command::Sweep { config: path } => {
            let mut c = config::parse_sweep_config(&read(path)?)?;
            apply(&cli, &mut c.base);
            let result = sweep::sweep(&c)?;
            sweep::write_sweep(&result, &c.base.output.dir)?;
            print!("{}", sweep::phase_table(&result));
            Ok(ExitCode::SUCCESS)
        }
        Command::Constants { config: path } => {
            let mut c = config::parse_config(&read(path)?)?;
            apply(&cli, &mut c);
            let s = run::setup(&c)?;
            print!("{}", run::constants_summary(&c, &s).render());
            Ok(ExitCode::SUCCESS)
        }
    }
}
