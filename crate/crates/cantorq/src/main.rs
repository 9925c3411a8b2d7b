use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cantorq::cli::{self, CommandOutput, Format};
use cantorq::oracle::DpMode;

#[derive(Parser)]
#[command(
    name = "cantorq",
    version,
    about = "Exact optimal quantizers for a nonhomogeneous two-map Cantor distribution",
    long_about = "Computes optimal n-point codebooks, quantization errors, optimal-set counts,\n\
                  and optimal-set genealogy for the self-similar measure\n\
                  P = 1/4·P∘S1⁻¹ + 3/4·P∘S2⁻¹ with S1(x) = x/4, S2(x) = x/2 + 1/2,\n\
                  entirely in exact rational arithmetic, and verifies the results with a\n\
                  brute-force dynamic-programming oracle on discretized measures."
)]
struct Cli {
    /// Output format (dot applies to genealogy only).
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Exact rational dynamic programming.
    Exact,
    /// Fixed-point costs (128 fractional bits) with a reported tolerance.
    Fast,
}

#[derive(Subcommand)]
enum Command {
    /// Exact mean, variance, and second moment of the measure.
    Moments,
    /// Exact n-th quantization errors V_n.
    Vn {
        /// Single stage.
        #[arg(long)]
        n: Option<u64>,
        /// Inclusive stage range A..B.
        #[arg(long)]
        range: Option<String>,
    },
    /// Canonical optimal set at a stage, with full enumeration when feasible.
    Sets {
        #[arg(long)]
        n: u64,
        /// Materialize all optimal sets only when their number is at most this.
        #[arg(long, default_value_t = 100_000)]
        enumerate_limit: u64,
    },
    /// Number of distinct optimal sets per stage.
    Count {
        /// Single stage.
        #[arg(long)]
        n: Option<u64>,
        /// Inclusive stage range A..B.
        #[arg(long)]
        range: Option<String>,
    },
    /// Certified two-sided distortion bounds for a codebook read from a file.
    Evaluate {
        /// JSON array of rationals: {"num","den"} objects, "a/b" or decimal strings.
        #[arg(long)]
        codebook: PathBuf,
        /// Target width of the certified enclosure.
        #[arg(long, default_value = "1/1000000000000")]
        gap: String,
        /// Cylinder expansion budget.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Parent→child graph of optimal sets across consecutive stages.
    Genealogy {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Refuse stages with more optimal sets than this.
        #[arg(long, default_value_t = 100_000)]
        enumerate_limit: u64,
    },
    /// Brute-force verification: discrete n-means vs. the engine.
    Oracle {
        #[arg(long)]
        n: u64,
        /// Discretization depth (2^depth atoms).
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// General-parameter heuristic mode: branch probability of S1.
        #[arg(long, requires = "r1", requires = "r2")]
        p1: Option<String>,
        /// General-parameter heuristic mode: contraction ratio of S1.
        #[arg(long, requires = "p1", requires = "r2")]
        r1: Option<String>,
        /// General-parameter heuristic mode: contraction ratio of S2.
        #[arg(long, requires = "p1", requires = "r1")]
        r2: Option<String>,
    },
}

fn dispatch(cli: &Cli) -> Result<CommandOutput, cantorq::Error> {
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Dot => Format::Dot,
    };
    if format == Format::Dot && !matches!(cli.command, Command::Genealogy { .. }) {
        return Err(cantorq::Error::BadParams(
            "--format dot applies only to the genealogy command".into(),
        ));
    }
    match &cli.command {
        Command::Moments => cli::run_moments(format),
        Command::Vn { n, range } => cli::run_vn(*n, range.as_deref(), format),
        Command::Sets { n, enumerate_limit } => cli::run_sets(*n, *enumerate_limit, format),
        Command::Count { n, range } => cli::run_count(*n, range.as_deref(), format),
        Command::Evaluate {
            codebook,
            gap,
            budget,
        } => {
            let text = std::fs::read_to_string(codebook).map_err(|e| {
                cantorq::Error::BadParams(format!("cannot read {}: {e}", codebook.display()))
            })?;
            cli::run_evaluate(&codebook.display().to_string(), &text, gap, *budget, format)
        }
        Command::Genealogy {
            from,
            to,
            enumerate_limit,
        } => cli::run_genealogy(*from, *to, *enumerate_limit, format),
        Command::Oracle {
            n,
            depth,
            mode,
            p1,
            r1,
            r2,
        } => {
            let mode = match mode {
                ModeArg::Exact => DpMode::Exact,
                ModeArg::Fast => DpMode::Fast,
            };
            cli::run_oracle(
                *n,
                *depth,
                mode,
                p1.as_deref(),
                r1.as_deref(),
                r2.as_deref(),
                format,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(output) => {
            println!("{}", output.text);
            ExitCode::from(output.code as u8)
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(cli::exit_code_for(&error) as u8)
        }
    }
}
