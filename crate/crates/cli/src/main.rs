use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cmw_cli::{exit_code, render, run, Command, Family, RunConfig, DEFAULT_TOL};
use cmw_core::polycore::parse_rational;
use num_rational::BigRational;

#[derive(Parser)]
#[command(name = "cmw", version, about = "Fourth-order Chern-Moser normal forms, CMW tensors and embedding obstructions")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normal form to order 4 and the CMW tensor
    Normalize(Opts),
    /// Null-cone sign test of the CMW tensor
    Obstruct(Opts),
    /// Segre-variety interior witness for the Kohn-Nirenberg family
    Segre(Opts),
    /// Floating Levi diagonalization into pre-normal form (inexact)
    Prenormalize(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Hyperquadric,
    SpherePerturbation,
    KohnNirenberg,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct Opts {
    /// Polynomial JSON file {"n", "l", "terms"}
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in family instead of an input file
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Rational, e.g. 1/100
    #[arg(long, value_parser = rational)]
    eps: Option<BigRational>,
    #[arg(long, value_parser = rational)]
    eps0: Option<BigRational>,
    #[arg(long, value_parser = rational)]
    c: Option<BigRational>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance for floating-point subroutines
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config(command: Command, o: Opts) -> RunConfig {
    RunConfig {
        command,
        input: o.input,
        family: o.family.map(|f| match f {
            FamilyArg::Hyperquadric => Family::Hyperquadric,
            FamilyArg::SpherePerturbation => Family::SpherePerturbation,
            FamilyArg::KohnNirenberg => Family::KohnNirenberg,
        }),
        n: o.n,
        l: o.l,
        eps: o.eps,
        eps0: o.eps0,
        c: o.c,
        samples: o.samples,
        seed: o.seed,
        tol: o.tol,
        out: o.out,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.command {
        Cmd::Normalize(o) => config(Command::Normalize, o),
        Cmd::Obstruct(o) => config(Command::Obstruct, o),
        Cmd::Segre(o) => config(Command::Segre, o),
        Cmd::Prenormalize(o) => config(Command::Prenormalize, o),
    };
    match run(&cfg) {
        Ok(report) => {
            let text = render(&report);
            match &cfg.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
