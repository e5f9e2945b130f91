use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qrank_cli::{parse_input, run, verify_report, CliError, Command, Input, Report};
use qrank_core::Budgets;

#[derive(Parser)]
#[command(name = "qrank", version, about = "Exact rank analysis of interval and subset matrices")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether every contained matrix has full rank.
    Fullrank(Common),
    /// Decide whether a rank-one matrix is contained.
    Rankone(Common),
    /// Maximal rank over all contained matrices, with a witness.
    Maxrank(Common),
    /// Bounds on the minimal rank and the exact maximal rank.
    Rankrange(Common),
    /// A contained matrix of deficient rank, if any.
    SingularWitness(Common),
    /// A contained rank-one matrix, if any.
    RankoneWitness(Common),
    /// det^c of a square subset matrix.
    Detc(Common),
    /// Decide whether every realization of a square subset matrix is singular.
    StronglySingular(Common),
    /// Re-check the certificates in a report against its input matrix.
    Verify {
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Matrix file, or "-" for standard input.
    #[arg(long, default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    output: Output,
    #[arg(long, default_value_t = Budgets::default().orthant_limit, value_parser = clap::value_parser!(u64).range(1..))]
    orthant_limit: u64,
    #[arg(long, default_value_t = Budgets::default().branch_limit, value_parser = clap::value_parser!(u64).range(1..))]
    branch_limit: u64,
    /// Largest h the brute-force rank-one criterion may use.
    #[arg(long, default_value_t = Budgets::default().h_cap, value_parser = clap::value_parser!(u64).range(1..))]
    h_cap: u64,
    #[arg(long, default_value_t = Budgets::default().grid_limit, value_parser = clap::value_parser!(u64).range(1..))]
    grid_limit: u64,
    /// Most constraints alive during Fourier-Motzkin elimination.
    #[arg(long, default_value_t = Budgets::default().elimination_limit as u64, value_parser = clap::value_parser!(u64).range(1..))]
    elimination_limit: u64,
}

impl Common {
    fn budgets(&self) -> Budgets {
        Budgets {
            orthant_limit: self.orthant_limit,
            branch_limit: self.branch_limit,
            h_cap: self.h_cap,
            grid_limit: self.grid_limit,
            elimination_limit: self.elimination_limit as usize,
        }
    }
}

fn read_text(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Parse(format!("reading standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::Parse(format!("reading {path}: {e}")))
    }
}

fn read_input(path: &str) -> Result<Input, CliError> {
    parse_input(&read_text(path)?)
}

fn analyse(command: Command, common: &Common) -> Result<(), CliError> {
    let input = read_input(&common.input)?;
    let started = Instant::now();
    let result = run(command, &input, &common.budgets());
    let elapsed = started.elapsed();
    let report: Report = match result {
        Ok(r) => r,
        Err(e) => {
            if let (CliError::Budget(msg), Output::Json) = (&e, common.output) {
                let body = serde_json::json!({
                    "command": command.name(),
                    "budget_exceeded": true,
                    "error": msg,
                });
                println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            }
            return Err(e);
        }
    };
    match common.output {
        Output::Json => print!("{}", report.to_json()),
        Output::Text => {
            print!("{}", report.to_text());
            println!("elapsed: {:.3} ms", elapsed.as_secs_f64() * 1e3);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match &cli.command {
        Cmd::Fullrank(c) => (Command::FullRank, c),
        Cmd::Rankone(c) => (Command::RankOne, c),
        Cmd::Maxrank(c) => (Command::MaxRank, c),
        Cmd::Rankrange(c) => (Command::RankRange, c),
        Cmd::SingularWitness(c) => (Command::SingularWitness, c),
        Cmd::RankoneWitness(c) => (Command::RankOneWitness, c),
        Cmd::Detc(c) => (Command::DetC, c),
        Cmd::StronglySingular(c) => (Command::StronglySingular, c),
        Cmd::Verify { report, common } => {
            let outcome = read_text(&report.to_string_lossy())
                .and_then(|r| Ok((r, read_input(&common.input)?)))
                .and_then(|(r, input)| verify_report(&r, &input, &common.budgets()));
            return match outcome {
                Ok(v) => {
                    match common.output {
                        Output::Json => println!(
                            "{}",
                            serde_json::to_string_pretty(&serde_json::json!({
                                "valid": v.valid,
                                "reason": v.reason,
                            }))
                            .expect("json")
                        ),
                        Output::Text => println!("{}: {}", if v.valid { "valid" } else { "invalid" }, v.reason),
                    }
                    if v.valid {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("qrank: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
    };
    match analyse(command, common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qrank: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
