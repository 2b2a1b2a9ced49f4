use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use sbw::{load, run, Command};
use sbw_core::Rational;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Machine,
}

/// Stringy Chow rings of weighted blowups.
#[derive(Parser, Debug)]
#[command(name = "sbw", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    instance: PathBuf,
    /// Degree bound, overriding the instance file (`p/q` allowed).
    #[arg(long)]
    dmax: Option<Rational>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let loaded = match load(&args.instance, args.dmax) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("{}: {e}", args.instance.display());
            return ExitCode::from(2);
        }
    };
    let report = match run(args.command, &loaded) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}: {e}", args.command.name());
            return ExitCode::from(2);
        }
    };
    let text = match args.format {
        Format::Text => report.to_text(),
        Format::Machine => report.to_machine(),
    };
    match &args.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
