//! Command-line front end for `qrank-core`: reads a matrix file, runs one
//! analysis and prints a JSON or text report whose certificates can be
//! re-checked with `verify`.

pub mod error;
pub mod input;
pub mod report;
pub mod verify;

use std::fmt;

use qrank_core::{
    decide_full_rank, detc, interval_as_subset, max_rank, rank_range_report, rankone_any,
    rohn_square_full_rank, strongly_singular, subsetmat::witness_for_certificate, Budgets,
    IntervalMatrix, NullSearch, SubsetMatrix,
};

pub use error::CliError;
pub use input::{parse_input, Input};
pub use report::Report;
pub use verify::{verify_report, Verdict};

use report::{
    q, qm, qs, signs, CertificateJson, DecidedRank, DetcReport, FullRankReport, MaxRankReport,
    OrthantInfeasibility, RankOneReport, RankRangeJson, SignPair, StronglySingularReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    FullRank,
    RankOne,
    MaxRank,
    RankRange,
    SingularWitness,
    RankOneWitness,
    DetC,
    StronglySingular,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::FullRank,
        Command::RankOne,
        Command::MaxRank,
        Command::RankRange,
        Command::SingularWitness,
        Command::RankOneWitness,
        Command::DetC,
        Command::StronglySingular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::FullRank => "fullrank",
            Command::RankOne => "rankone",
            Command::MaxRank => "maxrank",
            Command::RankRange => "rankrange",
            Command::SingularWitness => "singular-witness",
            Command::RankOneWitness => "rankone-witness",
            Command::DetC => "detc",
            Command::StronglySingular => "strongly-singular",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn interval_only(command: Command, input: &Input) -> Result<IntervalMatrix, CliError> {
    match input {
        Input::Interval(m) => Ok(m.clone()),
        Input::Subset(_) => Err(CliError::Parse(format!(
            "{command} needs an interval_matrix input"
        ))),
    }
}

/// Subset matrices as given; interval matrices via their endpoint sets.
fn as_subset(input: &Input) -> SubsetMatrix {
    match input {
        Input::Interval(m) => interval_as_subset(m),
        Input::Subset(m) => m.clone(),
    }
}

fn square_subset(command: Command, input: &Input) -> Result<SubsetMatrix, CliError> {
    let m = as_subset(input);
    if m.rows() != m.cols() {
        return Err(CliError::Parse(format!(
            "{command} needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

fn rohn_fits(p: usize, budgets: &Budgets) -> bool {
    p > 0 && 2 * p - 1 < 64 && 1u64 << (2 * p - 1) <= budgets.orthant_limit
}

fn full_rank_report(
    command: Command,
    a: &IntervalMatrix,
    budgets: &Budgets,
) -> Result<FullRankReport, CliError> {
    let decision = decide_full_rank(a, budgets)?;
    let mut violating_signs = None;
    if command == Command::FullRank && a.rows() == a.cols() && rohn_fits(a.rows(), budgets) {
        let rohn = rohn_square_full_rank(a, budgets)?;
        assert_eq!(
            rohn.full_rank,
            decision.is_full_rank(),
            "vertex test and kernel search disagree"
        );
        violating_signs = rohn.violation.map(|(x, y)| SignPair {
            x: signs(&x),
            y: signs(&y),
        });
    }
    let witness = decision.witness();
    let infeasibility = match &decision.search {
        NullSearch::Found(_) => None,
        NullSearch::FullRank(refs) => Some(
            refs.iter()
                .map(|r| OrthantInfeasibility {
                    signs: signs(&r.signs),
                    multipliers: qs(&r.certificate.multipliers),
                })
                .collect(),
        ),
    };
    Ok(FullRankReport {
        command: command.name().into(),
        decision: decision.is_full_rank(),
        transposed: decision.transposed,
        witness_x: witness.as_ref().map(|(x, _)| qs(x)),
        witness_a: witness.as_ref().map(|(_, m)| qm(m)),
        violating_signs,
        infeasibility,
    })
}

/// Runs one analysis.
pub fn run(command: Command, input: &Input, budgets: &Budgets) -> Result<Report, CliError> {
    Ok(match command {
        Command::FullRank | Command::SingularWitness => {
            Report::FullRank(full_rank_report(command, &interval_only(command, input)?, budgets)?)
        }
        Command::RankOne | Command::RankOneWitness => {
            let a = interval_only(command, input)?;
            Report::RankOne(RankOneReport::new(command.name(), &rankone_any(&a, budgets)?))
        }
        Command::MaxRank => {
            let s = as_subset(input);
            let cert = max_rank(&s, budgets)?;
            let w = witness_for_certificate(&s, &cert, budgets)?;
            Report::MaxRank(MaxRankReport {
                command: command.name().into(),
                max_rank: cert.rank,
                certificate: CertificateJson::new(&cert),
                witness: qm(&w),
            })
        }
        Command::RankRange => {
            let a = interval_only(command, input)?;
            let r = rank_range_report(&a, budgets)?;
            Report::RankRange(RankRangeJson {
                command: command.name().into(),
                max_rank: r.max_rank,
                min_rank_lower: r.min_rank_lower,
                min_rank_upper: r.min_rank_upper,
                max_certificate: CertificateJson::new(&r.max_certificate),
                decided: r
                    .decided
                    .iter()
                    .map(|(rank, m)| DecidedRank {
                        rank: *rank,
                        witness: qm(m),
                    })
                    .collect(),
            })
        }
        Command::DetC => {
            let s = square_subset(command, input)?;
            Report::Detc(DetcReport {
                command: command.name().into(),
                value: q(&detc(&s)?),
            })
        }
        Command::StronglySingular => {
            let s = square_subset(command, input)?;
            let d = strongly_singular(&s, budgets)?;
            Report::StronglySingular(StronglySingularReport {
                command: command.name().into(),
                decision: d.is_none(),
                diagonal: d.map(|d| d.cells().iter().map(|&(r, c)| [r, c]).collect()),
            })
        }
    })
}
