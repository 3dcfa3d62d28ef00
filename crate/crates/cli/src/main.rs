mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser)]
#[command(name = "tn", version, about = "Exact verification suites for Torelli groups of free groups")]
struct Cli {
    /// Print the JSON report instead of the table.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Identities among automorphisms of the free group.
    #[command(subcommand)]
    Torelli(TorelliCmd),
    /// Roses in the norm order.
    #[command(subcommand)]
    Roses(RosesCmd),
    /// Descending links of roses.
    Dlk(DlkArgs),
    /// Completely descending complex of one rose.
    Cdlk(CdlkArgs),
    /// The rank-2 star-adjacency tree.
    Rank2Tree(Rank2Args),
    /// The toy model.
    #[command(subcommand)]
    Toy(ToyCmd),
    /// Graph JSON to DOT.
    Export(ExportArgs),
}

#[derive(Subcommand)]
pub enum TorelliCmd {
    /// The long identity for `δ12 K_2l1 δ12⁻¹`, for all `3 ≤ l ≤ m ≤ n`.
    VerifyAppendix {
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// `ψ = P⁻¹ K_ikl P` for all distinct `i, k, l` and conjugators up to length `hmax`.
    VerifyConjugation {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        hmax: usize,
    },
    /// Conjugates of Magnus generators by generators of `Out(F_n)`.
    VerifyConjugates {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Subcommand)]
pub enum RosesCmd {
    Enumerate {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        bound: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum DlkCheck {
    Nonempty,
    Connected,
    Homology,
}

#[derive(Args)]
pub struct DlkArgs {
    /// JSON file holding a matrix as an array of rows.
    #[arg(long, conflicts_with_all = ["rank", "bound"])]
    pub matrix: Option<PathBuf>,
    #[arg(long, requires = "bound")]
    pub rank: Option<usize>,
    #[arg(long, requires = "rank")]
    pub bound: Option<i64>,
    #[arg(long, value_enum, default_value = "connected")]
    pub check: DlkCheck,
}

#[derive(Args)]
pub struct CdlkArgs {
    #[arg(long)]
    pub matrix: PathBuf,
}

#[derive(Args)]
pub struct Rank2Args {
    #[arg(long, default_value_t = 3)]
    pub bound: i64,
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum ToyCmd {
    Certify {
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        window: i64,
    },
}

#[derive(Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = commands::configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Torelli(c) => commands::torelli(c),
        Command::Roses(c) => commands::roses(c),
        Command::Dlk(a) => commands::dlk(a),
        Command::Cdlk(a) => commands::cdlk(a),
        Command::Rank2Tree(a) => commands::rank2(a),
        Command::Toy(c) => commands::toy(c),
        Command::Export(a) => commands::export(a),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: {}", CliError::from(e));
            return ExitCode::from(2);
        }
    }
    if cli.json {
        println!("{json}");
    } else {
        print!("{}", report.table());
    }
    ExitCode::from(report.exit_code())
}
