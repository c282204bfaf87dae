use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gbh_cli::{cmd_analyze, cmd_report, cmd_simulate, AnalyzeOptions, CliError};

#[derive(Parser)]
#[command(name = "gbh", version, about = "Weighted BH procedures for classified hypotheses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo sweep described by a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `out` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a procedure to a CSV of classified p-values.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "proc")]
        procedure: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long)]
        variant: Option<String>,
        /// Group on row_id alone.
        #[arg(long)]
        one_way: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Pivot a simulate CSV into one row per parameter point.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated key columns.
        #[arg(long, value_delimiter = ',')]
        group_by: Option<Vec<String>>,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Simulate { config, out } => {
            let rows = cmd_simulate(&config, out.as_deref())?;
            Ok(format!("wrote {rows} rows"))
        }
        Command::Analyze {
            input,
            procedure,
            alpha,
            lambda,
            variant,
            one_way,
            out,
        } => {
            let opts = AnalyzeOptions {
                procedure,
                alpha,
                lambda,
                variant,
                one_way,
            };
            cmd_analyze(&input, &out, &opts)
        }
        Command::Report {
            input,
            out,
            group_by,
        } => {
            let rows = cmd_report(&input, &out, group_by.as_deref())?;
            Ok(format!("wrote {rows} rows"))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
