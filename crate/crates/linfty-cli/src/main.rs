use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linfty::io::{parse, run, Command, Overrides, Report};

#[derive(Parser)]
#[command(name = "linfty", version, about = "Exact verifier for L∞ structures, Rota-Baxter operators and shifted r-matrices")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Arity cap N (overrides the document).
    #[arg(long, global = true)]
    max_arity: Option<usize>,
    /// Weight cap W (overrides the document).
    #[arg(long, global = true)]
    max_weight: Option<usize>,
    /// Shift n of the Poisson algebra (overrides the document).
    #[arg(long, global = true, allow_hyphen_values = true)]
    shift: Option<i64>,
    /// Write the report here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Verb {
    /// Verify a relation.
    Check {
        #[command(subcommand)]
        what: CheckWhat,
    },
    /// Build a derived structure.
    Derive {
        #[command(subcommand)]
        what: DeriveWhat,
    },
    /// Build an object from verified input.
    Make {
        #[command(subcommand)]
        what: MakeWhat,
    },
    /// Translate between objects.
    Convert {
        #[command(subcommand)]
        what: ConvertWhat,
    },
}

#[derive(Subcommand)]
enum CheckWhat {
    /// Generalized Jacobi relations of the algebra.
    Linfty { file: PathBuf },
    /// Morphism relations of `[morphism]` up to the arity cap.
    Morphism { file: PathBuf },
    /// Representation and Rota-Baxter relations of `[operator]`.
    Rb { file: PathBuf },
    /// The r∞-matrix equation of `[rmatrix]`.
    Rmatrix { file: PathBuf },
    /// Commutation of the square between the bialgebra and Rota-Baxter sides.
    Bridge { file: PathBuf },
}

#[derive(Subcommand)]
enum DeriveWhat {
    /// Higher Schouten brackets of the algebra.
    Schouten { file: PathBuf },
}

#[derive(Subcommand)]
enum MakeWhat {
    /// Triangular bialgebra `r(m)` with its certificates.
    Bialgebra { file: PathBuf },
}

#[derive(Subcommand)]
enum ConvertWhat {
    /// Rota-Baxter operator on the coadjoint representation.
    RmatrixToRb { file: PathBuf },
}

fn read_input(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, file) = match cli.verb {
        Verb::Check { what } => match what {
            CheckWhat::Linfty { file } => (Command::CheckLinfty, file),
            CheckWhat::Morphism { file } => (Command::CheckMorphism, file),
            CheckWhat::Rb { file } => (Command::CheckRb, file),
            CheckWhat::Rmatrix { file } => (Command::CheckRmatrix, file),
            CheckWhat::Bridge { file } => (Command::CheckBridge, file),
        },
        Verb::Derive { what: DeriveWhat::Schouten { file } } => (Command::DeriveSchouten, file),
        Verb::Make { what: MakeWhat::Bialgebra { file } } => (Command::MakeBialgebra, file),
        Verb::Convert { what: ConvertWhat::RmatrixToRb { file } } => (Command::RmatrixToRb, file),
    };
    let overrides = Overrides { arity: cli.opts.max_arity, weight: cli.opts.max_weight, shift: cli.opts.shift };
    let report = match read_input(&file) {
        Err(e) => Report::input_error(command, format!("{}: {e}", file.display())),
        Ok(text) => match parse(&text) {
            Err(e) => Report::input_error(command, e.to_string()),
            Ok(doc) => run(command, &doc, overrides),
        },
    };
    let rendered = match cli.opts.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    let written = match &cli.opts.output {
        Some(p) => std::fs::write(p, rendered),
        None => {
            print!("{rendered}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("linfty: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}
