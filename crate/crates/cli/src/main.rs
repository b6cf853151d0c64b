mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use algebroid_forge::va::{PbwOrder, Schedule};

#[derive(Parser, Debug)]
#[command(name = "algebroid-forge", version, about = "Exact checks for vertex algebroids and their vertex algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for every sampling check, echoed into each report
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the bundle B_λ for a Lie type and weight, with its criterion report
    Construct(BundleArgs),
    /// Re-run the identity checks on a bundle file
    Check {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::Algebroid)]
        suite: Suite,
    },
    /// Decompose N under the θ-triple and evaluate the structure table
    AnalyzeSl2(BundleArgs),
    /// Leib ideal, radical, simplicity verdict and Levi check of B
    AnalyzeLeibniz(BundleArgs),
    /// Build the truncated vertex algebras and run their checks
    BuildVa {
        #[command(flatten)]
        bundle: BundleArgs,
        #[command(flatten)]
        va: VaArgs,
        #[arg(long, value_enum, default_value_t = Quotient::Etheta)]
        quotient: Quotient,
        /// Borcherds samples per identity (0 skips the check)
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Sugawara vector, shifted conformal vector and rank
    Conformal {
        #[command(flatten)]
        bundle: BundleArgs,
        #[command(flatten)]
        va: VaArgs,
        /// Shift h = μ h_θ, given as the rational μ
        #[arg(long, default_value = "0")]
        h_theta: String,
        /// Comma-separated names of A basis elements a_i in the shift
        #[arg(long, value_delimiter = ',')]
        shift: Vec<String>,
    },
    /// Borcherds identities on seeded samples
    Borcherds {
        #[command(flatten)]
        bundle: BundleArgs,
        #[command(flatten)]
        va: VaArgs,
        #[arg(long, value_enum, default_value_t = Quotient::Etheta)]
        quotient: Quotient,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct BundleArgs {
    /// Bundle file written by `construct`; otherwise built from --type and --lambda
    #[arg(conflicts_with_all = ["cartan_type", "rank", "lambda"])]
    pub input: Option<PathBuf>,
    /// Lie type such as A1 or E8, or a bare letter together with --rank
    #[arg(long = "type")]
    pub cartan_type: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Comma-separated fundamental-weight coefficients, or `theta`
    #[arg(long, default_value = "1")]
    pub lambda: String,
}

#[derive(Args, Debug, Clone)]
pub struct VaArgs {
    /// Highest computed degree
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    /// Longest PBW word kept during saturation
    #[arg(long, default_value_t = 6)]
    pub word_cap: usize,
    /// Saturation rounds before giving up
    #[arg(long, default_value_t = 64)]
    pub max_rounds: usize,
    #[arg(long, value_enum, default_value_t = OrderArg::Ascending)]
    pub order: OrderArg,
    #[arg(long, value_enum, default_value_t = ScheduleArg::TwoPhase)]
    pub schedule: ScheduleArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebroid,
    Tca,
    Leibniz,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quotient {
    /// V_B only
    None,
    /// V_B and its quotient by the ideal of e_θ(-1)e_θ
    Etheta,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderArg {
    Ascending,
    Descending,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleArg {
    TwoPhase,
    Sweep,
}

impl From<OrderArg> for PbwOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Ascending => PbwOrder::LevelAscending,
            OrderArg::Descending => PbwOrder::LevelDescending,
        }
    }
}

impl From<ScheduleArg> for Schedule {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::TwoPhase => Schedule::TwoPhase,
            ScheduleArg::Sweep => Schedule::Sweep,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = output::Context { format: cli.format, out: cli.out.clone(), seed: cli.seed };
    let result = match cli.command {
        Command::Construct(b) => commands::construct(&ctx, &b),
        Command::Check { input, suite } => commands::check(&ctx, &input, suite),
        Command::AnalyzeSl2(b) => commands::analyze_sl2(&ctx, &b),
        Command::AnalyzeLeibniz(b) => commands::analyze_leibniz(&ctx, &b),
        Command::BuildVa { bundle, va, quotient, samples } => commands::build_va(&ctx, &bundle, &va, quotient, samples),
        Command::Conformal { bundle, va, h_theta, shift } => commands::conformal(&ctx, &bundle, &va, &h_theta, &shift),
        Command::Borcherds { bundle, va, quotient, samples } => commands::borcherds(&ctx, &bundle, &va, quotient, samples),
    };
    match result {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
