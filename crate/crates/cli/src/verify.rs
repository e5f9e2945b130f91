//! Re-checks a report against its input matrix. Witnesses are checked by
//! exact containment and rank; refutations by their multipliers, sign flips
//! and product inequalities. Claims without a finite certificate (an upper
//! bound on the maximal rank, strong singularity, a lower bound on the
//! minimal rank) are recomputed.

use qrank_core::fullrank::rohn_product;
use qrank_core::fourier_motzkin::FarkasCertificate;
use qrank_core::subsetmat::{diagonal_certifies, square_submatrix_certificate};
use qrank_core::{
    decide_full_rank, detc, exact_rank, interval_as_subset, parse_rational, rankone_any,
    strongly_singular, verify_full_rank_refutations, verify_rankone_refutation, BranchReason,
    BranchRefutation, Budgets, CriterionViolation, FieldDescriptor, IntervalMatrix,
    MaxRankCertificate, NullPair, OrthantRefutation, PgDiagonal, RankOneDecision,
    RankOneRefutation, RankOneWitness, Rational, RationalMatrix, SignVector, SubsetMatrix,
};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::error::CliError;
use crate::input::Input;
use crate::report::{
    CertificateJson, DetcReport, FullRankReport, MaxRankReport, RankOneReport, RankRangeJson,
    StronglySingularReport, ViolationJson,
};
use crate::Command;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    pub reason: String,
}

impl Verdict {
    fn ok(reason: impl Into<String>) -> Self {
        Self {
            valid: true,
            reason: reason.into(),
        }
    }

    fn bad(reason: impl Into<String>) -> Self {
        Self {
            valid: false,
            reason: reason.into(),
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Ok(Verdict::bad(format!($($msg)+)));
        }
    };
}

fn typed<T: DeserializeOwned>(doc: Value) -> Result<T, CliError> {
    serde_json::from_value(doc).map_err(|e| CliError::Parse(format!("malformed report: {e}")))
}

fn rat(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Parse(format!("report value: {e}")))
}

fn rats(v: &[String]) -> Result<Vec<Rational>, CliError> {
    v.iter().map(|s| rat(s)).collect()
}

fn matrix(rows: &[Vec<String>]) -> Result<Option<RationalMatrix>, CliError> {
    let parsed = rows.iter().map(|r| rats(r)).collect::<Result<Vec<_>, _>>()?;
    Ok(RationalMatrix::from_rows(parsed).ok())
}

fn sign_vector(v: &[i8]) -> Option<SignVector> {
    SignVector::new(v.to_vec()).ok()
}

fn interval(input: &Input, command: Command) -> Result<&IntervalMatrix, CliError> {
    match input {
        Input::Interval(m) => Ok(m),
        Input::Subset(_) => Err(CliError::Parse(format!(
            "{command} reports refer to interval_matrix inputs"
        ))),
    }
}

fn subset(input: &Input) -> SubsetMatrix {
    match input {
        Input::Interval(m) => interval_as_subset(m),
        Input::Subset(m) => m.clone(),
    }
}

/// Checks `report` (JSON text) against `input`.
pub fn verify_report(report: &str, input: &Input, budgets: &Budgets) -> Result<Verdict, CliError> {
    let doc: Value =
        serde_json::from_str(report).map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))?;
    let name = doc
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Parse("report has no \"command\"".into()))?;
    let command = Command::from_name(name)
        .ok_or_else(|| CliError::Parse(format!("unknown command {name:?} in report")))?;
    match command {
        Command::FullRank | Command::SingularWitness => {
            verify_full_rank(&typed(doc)?, interval(input, command)?)
        }
        Command::RankOne | Command::RankOneWitness => {
            verify_rank_one(&typed(doc)?, interval(input, command)?)
        }
        Command::MaxRank => verify_max_rank(&typed(doc)?, &subset(input), budgets),
        Command::RankRange => verify_rank_range(&typed(doc)?, interval(input, command)?, budgets),
        Command::DetC => verify_detc(&typed(doc)?, &subset(input)),
        Command::StronglySingular => verify_strongly_singular(&typed(doc)?, &subset(input), budgets),
    }
}

fn verify_full_rank(r: &FullRankReport, alpha: &IntervalMatrix) -> Result<Verdict, CliError> {
    let (p, q) = alpha.shape();
    ensure!(r.transposed == (p < q), "orientation must be transposed exactly when p < q");
    let oriented = if r.transposed { alpha.transpose() } else { alpha.clone() };
    if r.decision {
        ensure!(
            r.witness_x.is_none() && r.witness_a.is_none() && r.violating_signs.is_none(),
            "a full-rank claim carries no witness"
        );
        let Some(inf) = &r.infeasibility else {
            return Ok(Verdict::bad("full-rank claim without infeasibility certificates"));
        };
        let mut refutations = Vec::with_capacity(inf.len());
        for o in inf {
            let Some(s) = sign_vector(&o.signs) else {
                return Ok(Verdict::bad("sign vector entries must be 1 or -1"));
            };
            refutations.push(OrthantRefutation {
                signs: s,
                certificate: FarkasCertificate {
                    multipliers: rats(&o.multipliers)?,
                },
            });
        }
        ensure!(
            verify_full_rank_refutations(&oriented, &refutations),
            "orthant certificates do not refute every orthant"
        );
        return Ok(Verdict::ok("every sign orthant is infeasible"));
    }
    ensure!(r.infeasibility.is_none(), "a rank-deficiency claim carries no refutation");
    let (Some(x), Some(a)) = (&r.witness_x, &r.witness_a) else {
        return Ok(Verdict::bad("rank-deficiency claim without witness"));
    };
    let Some(a) = matrix(a)? else {
        return Ok(Verdict::bad("witness matrix is ragged"));
    };
    ensure!(a.shape() == (p, q), "witness matrix has the wrong shape");
    let pair = NullPair {
        x: rats(x)?,
        a: if r.transposed { a.transpose() } else { a },
    };
    ensure!(pair.verify(&oriented), "witness is not a contained matrix with nonzero kernel vector");
    if let Some(s) = &r.violating_signs {
        let (Some(sx), Some(sy)) = (sign_vector(&s.x), sign_vector(&s.y)) else {
            return Ok(Verdict::bad("sign vector entries must be 1 or -1"));
        };
        ensure!(
            p == q && sx.len() == p && sy.len() == p,
            "violating signs need a square matrix and matching lengths"
        );
        ensure!(
            rohn_product(alpha, &sx, &sy) <= Rational::from_integer(0.into()),
            "vertex determinant product at the given signs is positive"
        );
    }
    Ok(Verdict::ok("contained matrix with nonzero kernel vector"))
}

fn violation_from_json(v: &ViolationJson) -> Result<(CriterionViolation, Rational, Rational), CliError> {
    Ok((
        CriterionViolation {
            rows: v.rows.clone(),
            cols: v.cols.clone(),
            sigma: v.sigma.clone(),
        },
        rat(&v.lhs)?,
        rat(&v.rhs)?,
    ))
}

fn verify_rank_one(r: &RankOneReport, alpha: &IntervalMatrix) -> Result<Verdict, CliError> {
    if r.decision {
        ensure!(
            r.refutation.is_none() && r.violation.is_none(),
            "a positive claim carries no refutation"
        );
        let Some(w) = &r.witness else {
            return Ok(Verdict::bad("positive claim without witness"));
        };
        let witness = RankOneWitness {
            u: rats(&w.u)?,
            v: rats(&w.v)?,
        };
        let Some(b) = matrix(&w.b)? else {
            return Ok(Verdict::bad("witness matrix is ragged"));
        };
        ensure!(
            witness.u.len() == alpha.rows() && witness.v.len() == alpha.cols(),
            "u and v have the wrong lengths"
        );
        ensure!(b == witness.matrix(), "B differs from u v^T");
        ensure!(witness.verify(alpha), "u v^T is not a contained rank-one matrix");
        return Ok(Verdict::ok("contained rank-one matrix"));
    }
    ensure!(r.witness.is_none(), "a negative claim carries no witness");
    let Some(rf) = &r.refutation else {
        return Ok(Verdict::bad("negative claim without refutation"));
    };
    let refutation = if rf.zero_matrix_only {
        ensure!(rf.branches.is_empty(), "zero-matrix refutation lists no branches");
        RankOneRefutation::ZeroMatrixOnly
    } else {
        let mut branches = Vec::with_capacity(rf.branches.len());
        for b in &rf.branches {
            let (Some(row_signs), Some(col_signs)) = (sign_vector(&b.row_signs), sign_vector(&b.col_signs)) else {
                return Ok(Verdict::bad("sign vector entries must be 1 or -1"));
            };
            let reason = match (&b.negative_entry, &b.violation) {
                (Some([row, col]), None) => BranchReason::NegativeEntry { row: *row, col: *col },
                (None, Some(v)) => {
                    ensure!(v.h == v.rows.len(), "h does not match the index lists");
                    let (violation, lhs, rhs) = violation_from_json(v)?;
                    BranchReason::Violation { violation, lhs, rhs }
                }
                _ => return Ok(Verdict::bad("each branch needs exactly one reason")),
            };
            branches.push(BranchRefutation {
                index: b.index as u128,
                splits: b.splits.clone(),
                row_signs,
                col_signs,
                reason,
            });
        }
        RankOneRefutation::Branches(branches)
    };
    let first = rf.branches.iter().find_map(|b| b.violation.as_ref());
    ensure!(r.violation.as_ref() == first, "summary violation differs from the first branch violation");
    ensure!(
        verify_rankone_refutation(alpha, &refutation),
        "refutation does not cover every sign branch"
    );
    Ok(Verdict::ok("every sign branch is refuted"))
}

fn certificate(rank: usize, c: &CertificateJson) -> Option<MaxRankCertificate> {
    Some(MaxRankCertificate {
        rank,
        rows: c.rows.clone(),
        cols: c.cols.clone(),
        diagonal: PgDiagonal::new(c.diagonal.iter().map(|&[r, c]| (r, c)).collect()).ok()?,
    })
}

/// Lower bound from the certificate and the witness, upper bound by
/// checking that every `(rank+1)`-square submatrix is strongly singular.
fn check_max_rank(
    s: &SubsetMatrix,
    rank: usize,
    cert: &CertificateJson,
    witness: &[Vec<String>],
    budgets: &Budgets,
) -> Result<Verdict, CliError> {
    let Some(cert) = certificate(rank, cert) else {
        return Ok(Verdict::bad("certificate diagonal repeats a row or column"));
    };
    ensure!(cert.verify_lower_bound(s), "certificate does not show a nonsingular realization");
    let Some(w) = matrix(witness)? else {
        return Ok(Verdict::bad("witness matrix is ragged"));
    };
    ensure!(s.contains(&w), "witness is not a realization");
    ensure!(exact_rank(&w, s.field()) == rank, "witness rank differs from the claim");
    ensure!(
        square_submatrix_certificate(s, rank + 1, budgets)?.is_none(),
        "a larger square submatrix has a nonsingular realization"
    );
    Ok(Verdict::ok("maximal rank certified"))
}

fn verify_max_rank(r: &MaxRankReport, s: &SubsetMatrix, budgets: &Budgets) -> Result<Verdict, CliError> {
    check_max_rank(s, r.max_rank, &r.certificate, &r.witness, budgets)
}

fn verify_rank_range(
    r: &RankRangeJson,
    alpha: &IntervalMatrix,
    budgets: &Budgets,
) -> Result<Verdict, CliError> {
    let (p, q) = alpha.shape();
    ensure!(
        r.min_rank_lower <= r.min_rank_upper && r.min_rank_upper <= r.max_rank,
        "bounds are out of order"
    );
    let mut previous = None;
    for d in &r.decided {
        ensure!(previous < Some(d.rank), "decided ranks must be strictly increasing");
        previous = Some(d.rank);
        let Some(m) = matrix(&d.witness)? else {
            return Ok(Verdict::bad("witness matrix is ragged"));
        };
        ensure!(alpha.contains(&m).unwrap_or(false), "rank {} witness is not contained", d.rank);
        ensure!(
            exact_rank(&m, FieldDescriptor::Rationals) == d.rank,
            "rank {} witness has a different rank",
            d.rank
        );
    }
    ensure!(
        r.decided.first().map(|d| d.rank) == Some(r.min_rank_upper),
        "the smallest decided rank must equal the upper bound on the minimal rank"
    );
    let Some(top) = r.decided.iter().find(|d| d.rank == r.max_rank) else {
        return Ok(Verdict::bad("no witness for the maximal rank"));
    };
    let max = check_max_rank(&interval_as_subset(alpha), r.max_rank, &r.max_certificate, &top.witness, budgets)?;
    if !max.valid {
        return Ok(max);
    }
    let lower = r.min_rank_lower;
    let zero_excluded = !alpha.contains_zero_matrix();
    let lower_ok = lower == 0
        || (lower == 1 && zero_excluded)
        || (lower == 2
            && zero_excluded
            && matches!(rankone_any(alpha, budgets)?, RankOneDecision::Refuted(_)))
        || (lower == p.min(q) && decide_full_rank(alpha, budgets)?.is_full_rank());
    ensure!(lower_ok, "lower bound {lower} on the minimal rank does not hold");
    Ok(Verdict::ok("rank bounds certified"))
}

fn verify_detc(r: &DetcReport, s: &SubsetMatrix) -> Result<Verdict, CliError> {
    ensure!(s.rows() == s.cols(), "matrix is not square");
    let value = rat(&r.value)?;
    ensure!(detc(s)? == value, "value differs from the recomputed det^c");
    Ok(Verdict::ok("det^c recomputed"))
}

fn verify_strongly_singular(
    r: &StronglySingularReport,
    s: &SubsetMatrix,
    budgets: &Budgets,
) -> Result<Verdict, CliError> {
    ensure!(s.rows() == s.cols(), "matrix is not square");
    if r.decision {
        ensure!(r.diagonal.is_none(), "a strong-singularity claim carries no diagonal");
        ensure!(
            strongly_singular(s, budgets)?.is_none(),
            "some pg-diagonal certifies a nonsingular realization"
        );
        return Ok(Verdict::ok("no pg-diagonal certifies a nonsingular realization"));
    }
    let Some(cells) = &r.diagonal else {
        return Ok(Verdict::bad("negative claim without diagonal"));
    };
    let Ok(d) = PgDiagonal::new(cells.iter().map(|&[r, c]| (r, c)).collect()) else {
        return Ok(Verdict::bad("diagonal repeats a row or column"));
    };
    ensure!(diagonal_certifies(s, &d), "diagonal does not certify a nonsingular realization");
    Ok(Verdict::ok("pg-diagonal certifies a nonsingular realization"))
}
