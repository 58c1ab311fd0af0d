use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use refnet::io::read_json;
use refnet::pipeline::{cmd_simulate, cmd_test, Constraint, Kernel, PipelineConfig, SimulateConfig};
use refnet::stats::StatSpec;
use refnet::{Error, Result};

#[derive(Parser)]
#[command(name = "refnet", version, about = "Reference models for animal social networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a society and write its data files.
    Simulate {
        /// JSON simulation config; defaults are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory, created if needed.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Test an observed statistic against a reference model.
    Test {
        /// JSON pipeline config. Flags below override its fields.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long)]
        burnin: Option<usize>,
        #[arg(long)]
        thin: Option<usize>,
        /// same_day, same_attr=<name>, class_pair=<attr>:<a>,<b> or nonzero_only.
        /// Replaces the constraints in the config when given.
        #[arg(long = "constraint")]
        constraints: Vec<String>,
        /// Statistic name (e.g. cv_offdiag) or a JSON object.
        #[arg(long)]
        statistic: Option<String>,
        /// Reference model kernel, e.g. gbi_checkerboard.
        #[arg(long)]
        model: Option<String>,
        /// Results file; relative paths are taken from the config directory.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_statistic(s: &str) -> Result<StatSpec> {
    let value = if s.trim_start().starts_with('{') {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("bad --statistic: {e}")))?
    } else {
        serde_json::json!({ "kind": s })
    };
    serde_json::from_value(value).map_err(|e| Error::Config(format!("bad --statistic {s:?}: {e}")))
}

fn simulate(config: Option<&Path>, out: &Path, seed: u64) -> Result<()> {
    let cfg: SimulateConfig = match config {
        Some(p) => read_json(p)?,
        None => SimulateConfig::default(),
    };
    let manifest = cmd_simulate(&cfg, seed, out)?;
    let individuals: usize = manifest.groups.iter().map(|g| g.size).sum();
    println!(
        "simulated {} groups, {} individuals; wrote {} files to {}",
        manifest.groups.len(),
        individuals,
        manifest.files.len(),
        out.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, out, seed } => simulate(config.as_deref(), &out, seed),
        Command::Test { config, seed, replicates, burnin, thin, constraints, statistic, model, output } => {
            let mut cfg = PipelineConfig::load(&config)?;
            cfg.seed = seed;
            if let Some(n) = replicates {
                cfg.replicates = n;
            }
            if let Some(b) = burnin {
                cfg.chain.burn_in = b;
            }
            if let Some(t) = thin {
                cfg.chain.thin = t;
            }
            if let Some(m) = model {
                cfg.model.kernel = m.parse::<Kernel>()?;
            }
            if !constraints.is_empty() {
                for c in &constraints {
                    c.parse::<Constraint>()?;
                }
                cfg.model.constraints = constraints;
            }
            if let Some(s) = statistic {
                cfg.statistic = parse_statistic(&s)?;
            }
            if let Some(o) = output {
                cfg.output = o;
            }
            let results = cmd_test(&cfg)?;
            println!("{}", results.summary());
            println!("wrote {}", cfg.output_path().display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
