use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use redsm_cli::{parse_config, run_scenario, ScenarioName};

#[derive(Parser)]
#[command(
    name = "redsm",
    version,
    about = "Monte Carlo comparison of direct state measurement and MUB tomography"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, fig5 or custom
    scenario: String,
    /// Config file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dimensions, comma separated.
    #[arg(long)]
    d: Option<String>,
    /// Coupling angles in radians or as `<x>pi`, comma separated.
    #[arg(long)]
    theta: Option<String>,
    /// Total copy counts, comma separated (`1e7` allowed).
    #[arg(long)]
    nc: Option<String>,
    /// Depolarizing weights, comma separated.
    #[arg(long)]
    nu: Option<String>,
    /// Protocols, comma separated.
    #[arg(long)]
    protocols: Option<String>,
    /// pure, mixed, nearly_pure or reference
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    batches: Option<String>,
    /// paper or physical
    #[arg(long)]
    budget_mode: Option<String>,
    /// paper or fixed-state
    #[arg(long)]
    batch_mode: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use exact probabilities instead of sampling.
    #[arg(long)]
    exact: bool,
}

impl RunArgs {
    fn overrides(&self) -> Vec<(String, String)> {
        let mut o = Vec::new();
        let fields = [
            ("d", &self.d),
            ("theta", &self.theta),
            ("nc", &self.nc),
            ("nu", &self.nu),
            ("protocols", &self.protocols),
            ("state", &self.state),
            ("seed", &self.seed),
            ("batches", &self.batches),
            ("budget_mode", &self.budget_mode),
            ("batch_mode", &self.batch_mode),
        ];
        for (k, v) in fields {
            if let Some(v) = v {
                o.push((k.to_string(), v.clone()));
            }
        }
        if let Some(out) = &self.out {
            o.push(("out".into(), out.display().to_string()));
        }
        if self.exact {
            o.push(("exact".into(), "true".into()));
        }
        o
    }
}

fn run(args: RunArgs) -> Result<(), Box<dyn std::error::Error>> {
    let name: ScenarioName = args.scenario.parse()?;
    let scenario = parse_config(name, args.config.as_deref(), &args.overrides())?;
    print!("{}", scenario.echo());
    let report = run_scenario(&scenario)?;
    println!();
    print!("{}", report.summary);
    println!("wrote {} rows to {}", report.rows.len(), scenario.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
