use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use drivenjc::harness::{self, ExperimentConfig, Scenario};

/// Figure scenarios for the driven Jaynes-Cummings model.
#[derive(Parser, Debug)]
#[command(name = "drivenjc", version, after_help = scenario_list())]
struct Cli {
    /// Scenario name, e.g. fig4 or figA1.
    scenario: String,

    /// Parameter override `key=value`; repeatable. Lists are comma-separated.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,

    /// Output directory (default: out/<scenario>).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,

    /// Flat TOML config file applied before --param overrides.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Print the resolved parameters and exit.
    #[arg(long)]
    dry_run: bool,
}

fn scenario_list() -> String {
    let mut s = String::from("Scenarios:\n");
    for sc in Scenario::all() {
        s.push_str(&format!("  {:<6} {}\n", sc.name(), sc.description()));
    }
    s
}

fn resolve(cli: &Cli) -> drivenjc::Result<ExperimentConfig> {
    let scenario: Scenario = cli.scenario.parse()?;
    let mut cfg = ExperimentConfig::resolve(scenario, cli.config.as_deref(), &cli.params)?;
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = resolve(&cli).and_then(|cfg| {
        if cli.dry_run {
            for (k, v) in cfg.header() {
                println!("{k} = {v}");
            }
            return Ok(());
        }
        let sum = harness::run(&cfg)?;
        for w in &sum.warnings {
            eprintln!("warning: {w}");
        }
        println!("wrote {} files to {}", sum.files.len(), sum.out_dir.display());
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
