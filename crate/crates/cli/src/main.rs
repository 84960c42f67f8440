use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use reciprocone::cone::Mode;
use reciprocone_cli::{run, Command, Options};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Validate,
    Genfun,
    Reciprocity,
    Trace,
    Ehrhart,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Closed,
    Interior,
}

/// Lattice-point generating functions, reciprocity checks and Ehrhart
/// quasi-polynomials for rational cones and polytopes.
#[derive(Debug, Parser)]
#[command(name = "reciprocone", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// Problem file (JSON).
    file: PathBuf,
    #[arg(long, value_enum, default_value = "closed")]
    mode: ModeArg,
    /// Box bound B for series comparisons.
    #[arg(long)]
    bound: Option<u32>,
    /// Largest dilation checked by `ehrhart`.
    #[arg(long = "T", value_name = "T")]
    max_t: Option<u64>,
    /// Half-open reciprocity using the file's `open_rows`.
    #[arg(long)]
    halfopen: bool,
    /// Also compute the Hilbert series (`ehrhart`).
    #[arg(long)]
    series: bool,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Seed for the random positive carry used by `trace`.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command = match cli.command {
        Cmd::Validate => Command::Validate,
        Cmd::Genfun => Command::Genfun,
        Cmd::Reciprocity => Command::Reciprocity,
        Cmd::Trace => Command::Trace,
        Cmd::Ehrhart => Command::Ehrhart,
    };
    let opts = Options {
        command,
        mode: match cli.mode {
            ModeArg::Closed => Mode::Closed,
            ModeArg::Interior => Mode::Interior,
        },
        bound: cli.bound,
        max_t: cli.max_t,
        halfopen: cli.halfopen,
        series: cli.series,
        seed: cli.seed,
    };
    let bytes = match std::fs::read(&cli.file) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.file.display());
            return ExitCode::from(2);
        }
    };
    match run(&opts, &cli.file.display().to_string(), &bytes) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_human());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
