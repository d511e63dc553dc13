use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use yoneda_lab::{emit, exit_code_for, load_instance, parse_field, run_report, Flags, COMMANDS};

/// Audits restricted Yoneda adjunctions of finite-dimensional algebras.
#[derive(Parser, Debug)]
#[command(name = "yoneda-lab", version, about)]
struct Cli {
    /// One of: validate, export, eigenring, subcategory, realize, counit, unit,
    /// fix, single-object-audit, weight, genweight, adjunction-fleet, triangle-fleet.
    command: String,
    /// Instance file path or corpus:<name>. Not used by the fleet commands.
    instance: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// q or fp:<p>.
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    max_dim: Option<usize>,
    /// Restrict module probes to this named module.
    #[arg(long)]
    probe: Option<String>,
    /// Restrict to this named ideal.
    #[arg(long)]
    ideal: Option<String>,
}

fn run(cli: Cli) -> yoneda_core::Result<i32> {
    if !COMMANDS.contains(&cli.command.as_str()) {
        return Err(yoneda_core::Error::invalid(format!(
            "unknown command {:?}; known: {}",
            cli.command,
            COMMANDS.join(", ")
        )));
    }
    let field = cli.field.as_deref().map(parse_field).transpose()?;
    let flags = Flags {
        seed: cli.seed,
        out: cli.out,
        field,
        count: cli.count,
        max_dim: cli.max_dim,
        probe: cli.probe,
        ideal: cli.ideal,
    };
    let instance = cli.instance.as_deref().map(|a| load_instance(a, field)).transpose()?;
    let outcome = run_report(instance.as_ref(), &cli.command, &flags)?;
    emit(&outcome, &flags)?;
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
