use clap::{Args, Parser, Subcommand, ValueEnum};
use persinv_cli::commands::{
    self, exit, CliError, FamilyChoice, FeatureFormat, FeatureOptions, GenMode, GenOptions,
    Outcome, RecoverOptions,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Rank invariants, signed cube decompositions and polynomial features of
/// multiparameter persistence modules.
#[derive(Parser)]
#[command(name = "persinv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "F")]
    F,
    #[value(name = "p")]
    P,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check map shapes and commutativity of a module file.
    Validate {
        path: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Exact rank invariant of a module.
    RankTable {
        path: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Signed cube decomposition of a module or rank file.
    Decompose {
        path: PathBuf,
        /// Drop cubes with a zero-length side (changes the rank invariant).
        #[arg(long)]
        reduce_degenerate: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Rank invariant of a signed cube set, on the set's box.
    Reconstruct {
        path: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Exact F and p invariants of a module or cube set.
    Features {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        family: FamilyArg,
        /// Largest total degree; defaults to n + 2.
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        /// Compute F by direct integration of the rank invariant.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Recover cubes from power sums of a positive cube set.
    Recover {
        path: PathBuf,
        #[arg(long, default_value_t = 64)]
        kmax: u64,
        #[arg(long, default_value_t = 512)]
        precision_bits: usize,
        /// Translate to positive coordinates first and undo it afterwards.
        #[arg(long)]
        shift_positive: bool,
        /// Drop degenerate cubes before recovery.
        #[arg(long)]
        reduce_degenerate: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Counting checks on the algebra of power sums.
    CheckAlgebra {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded random module file.
    GenRandom {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Side length of the box [0, L-1]^n.
        #[arg(long = "box", default_value_t = 4)]
        side: i64,
        /// Direct sum of cubes (the default).
        #[arg(long, conflicts_with = "general")]
        cubes: bool,
        /// Perturbed, base-changed module that is usually not a sum of cubes.
        #[arg(long)]
        general: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        summands: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run(command: Command) -> (Result<Outcome, CliError>, Option<PathBuf>) {
    match command {
        Command::Validate { path, output } => (
            read(&path).and_then(|t| commands::validate_cmd(&t)),
            output.out,
        ),
        Command::RankTable { path, output } => (
            read(&path).and_then(|t| commands::rank_table_cmd(&t)),
            output.out,
        ),
        Command::Decompose {
            path,
            reduce_degenerate,
            output,
        } => (
            read(&path).and_then(|t| commands::decompose_cmd(&t, reduce_degenerate)),
            output.out,
        ),
        Command::Reconstruct { path, output } => (
            read(&path).and_then(|t| commands::reconstruct_cmd(&t)),
            output.out,
        ),
        Command::Features {
            path,
            family,
            max_degree,
            format,
            oracle,
            output,
        } => {
            let opts = FeatureOptions {
                family: match family {
                    FamilyArg::F => FamilyChoice::F,
                    FamilyArg::P => FamilyChoice::P,
                    FamilyArg::Both => FamilyChoice::Both,
                },
                max_degree,
                format: match format {
                    FormatArg::Json => FeatureFormat::Json,
                    FormatArg::Csv => FeatureFormat::Csv,
                },
                oracle,
            };
            (
                read(&path).and_then(|t| commands::features_cmd(&t, &opts)),
                output.out,
            )
        }
        Command::Recover {
            path,
            kmax,
            precision_bits,
            shift_positive,
            reduce_degenerate,
            output,
        } => {
            let opts = RecoverOptions {
                k_max: kmax,
                precision_bits,
                shift_positive,
                reduce_degenerate,
            };
            (
                read(&path).and_then(|t| commands::recover_cmd(&t, &opts)),
                output.out,
            )
        }
        Command::CheckAlgebra {
            n,
            max_degree,
            output,
        } => (commands::check_algebra_cmd(n, max_degree), output.out),
        Command::GenRandom {
            n,
            side,
            cubes: _,
            general,
            seed,
            summands,
            output,
        } => {
            let opts = GenOptions {
                n,
                side,
                mode: if general {
                    GenMode::General
                } else {
                    GenMode::Cubes
                },
                seed,
                summands,
            };
            (commands::gen_random_cmd(&opts), output.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, out) = run(cli.command);
    let code = match result {
        Ok(outcome) => {
            let written = match &out {
                Some(p) => std::fs::write(p, &outcome.output)
                    .map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
                None => {
                    print!("{}", outcome.output);
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    e.code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Semantic(_, Some(report)) = &e {
                eprint!("{report}");
            }
            e.code()
        }
    };
    ExitCode::from(u8::try_from(code).unwrap_or(exit::FAILURE as u8))
}
