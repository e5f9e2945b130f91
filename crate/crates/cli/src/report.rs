//! JSON reports. Field order is fixed by declaration order, rationals are
//! canonical strings, indices are 0-based, and absent values are `null`.

use qrank_core::{
    format_rational, BranchReason, CriterionViolation, MaxRankCertificate,
    RankOneDecision, RankOneRefutation, RankOneWitness, Rational, RationalMatrix, SignVector,
};
use serde::{Deserialize, Serialize};

pub type Cell = [usize; 2];

pub fn q(v: &Rational) -> String {
    format_rational(v)
}

pub fn qs(v: &[Rational]) -> Vec<String> {
    v.iter().map(q).collect()
}

pub fn qm(m: &RationalMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| qs(m.row(i))).collect()
}

pub fn signs(s: &SignVector) -> Vec<i8> {
    s.components().to_vec()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPair {
    pub x: Vec<i8>,
    pub y: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthantInfeasibility {
    pub signs: Vec<i8>,
    pub multipliers: Vec<String>,
}

/// `fullrank` and `singular-witness`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullRankReport {
    pub command: String,
    pub decision: bool,
    /// The kernel search ran on the transpose; `witness_x` is then a left
    /// kernel vector.
    pub transposed: bool,
    pub witness_x: Option<Vec<String>>,
    #[serde(rename = "witness_A")]
    pub witness_a: Option<Vec<Vec<String>>>,
    /// Square inputs: sign vectors whose vertex determinant product is not
    /// positive.
    pub violating_signs: Option<SignPair>,
    pub infeasibility: Option<Vec<OrthantInfeasibility>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub u: Vec<String>,
    pub v: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
}

impl WitnessJson {
    pub fn from_witness(w: &RankOneWitness) -> Self {
        Self {
            u: qs(&w.u),
            v: qs(&w.v),
            b: qm(&w.matrix()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub h: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub sigma: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

impl ViolationJson {
    pub fn new(v: &CriterionViolation, lhs: &Rational, rhs: &Rational) -> Self {
        Self {
            h: v.h(),
            rows: v.rows.clone(),
            cols: v.cols.clone(),
            sigma: v.sigma.clone(),
            lhs: q(lhs),
            rhs: q(rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchJson {
    pub index: u64,
    pub splits: Vec<bool>,
    pub row_signs: Vec<i8>,
    pub col_signs: Vec<i8>,
    pub negative_entry: Option<Cell>,
    pub violation: Option<ViolationJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationJson {
    pub zero_matrix_only: bool,
    pub branches: Vec<BranchJson>,
}

/// `rankone` and `rankone-witness`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneReport {
    pub command: String,
    pub decision: bool,
    pub witness: Option<WitnessJson>,
    /// The first violated product inequality among the branches.
    pub violation: Option<ViolationJson>,
    pub refutation: Option<RefutationJson>,
}

impl RankOneReport {
    pub fn new(command: &str, d: &RankOneDecision) -> Self {
        match d {
            RankOneDecision::Found(w) => Self {
                command: command.into(),
                decision: true,
                witness: Some(WitnessJson::from_witness(w)),
                violation: None,
                refutation: None,
            },
            RankOneDecision::Refuted(r) => {
                let refutation = refutation_json(r);
                Self {
                    command: command.into(),
                    decision: false,
                    witness: None,
                    violation: refutation.branches.iter().find_map(|b| b.violation.clone()),
                    refutation: Some(refutation),
                }
            }
        }
    }
}

fn refutation_json(r: &RankOneRefutation) -> RefutationJson {
    match r {
        RankOneRefutation::ZeroMatrixOnly => RefutationJson {
            zero_matrix_only: true,
            branches: vec![],
        },
        RankOneRefutation::Branches(bs) => RefutationJson {
            zero_matrix_only: false,
            branches: bs
                .iter()
                .map(|b| {
                    let (negative_entry, violation) = match &b.reason {
                        BranchReason::NegativeEntry { row, col } => (Some([*row, *col]), None),
                        BranchReason::Violation { violation, lhs, rhs } => {
                            (None, Some(ViolationJson::new(violation, lhs, rhs)))
                        }
                    };
                    BranchJson {
                        index: b.index as u64,
                        splits: b.splits.clone(),
                        row_signs: signs(&b.row_signs),
                        col_signs: signs(&b.col_signs),
                        negative_entry,
                        violation,
                    }
                })
                .collect(),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub diagonal: Vec<Cell>,
}

impl CertificateJson {
    pub fn new(c: &MaxRankCertificate) -> Self {
        Self {
            rows: c.rows.clone(),
            cols: c.cols.clone(),
            diagonal: c.diagonal.cells().iter().map(|&(r, c)| [r, c]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxRankReport {
    pub command: String,
    pub max_rank: usize,
    pub certificate: CertificateJson,
    pub witness: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecidedRank {
    pub rank: usize,
    pub witness: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRangeJson {
    pub command: String,
    pub max_rank: usize,
    pub min_rank_lower: usize,
    pub min_rank_upper: usize,
    pub max_certificate: CertificateJson,
    pub decided: Vec<DecidedRank>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetcReport {
    pub command: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StronglySingularReport {
    pub command: String,
    pub decision: bool,
    /// Certifying pg-diagonal when the matrix is not strongly singular.
    pub diagonal: Option<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Report {
    FullRank(FullRankReport),
    RankOne(RankOneReport),
    MaxRank(MaxRankReport),
    RankRange(RankRangeJson),
    Detc(DetcReport),
    StronglySingular(StronglySingularReport),
}

impl Report {
    pub fn to_json(&self) -> String {
        let out = match self {
            Report::FullRank(r) => serde_json::to_string_pretty(r),
            Report::RankOne(r) => serde_json::to_string_pretty(r),
            Report::MaxRank(r) => serde_json::to_string_pretty(r),
            Report::RankRange(r) => serde_json::to_string_pretty(r),
            Report::Detc(r) => serde_json::to_string_pretty(r),
            Report::StronglySingular(r) => serde_json::to_string_pretty(r),
        };
        out.expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        match self {
            Report::FullRank(r) => {
                line(format!(
                    "{}: {}",
                    r.command,
                    if r.decision {
                        "every contained matrix has full rank"
                    } else {
                        "a contained matrix is rank deficient"
                    }
                ));
                if let (Some(x), Some(a)) = (&r.witness_x, &r.witness_a) {
                    let side = if r.transposed { "x^T A = 0" } else { "A x = 0" };
                    line(format!("{side} with x = ({})", x.join(", ")));
                    line("A =".into());
                    grid_lines(a, &mut line);
                }
                if let Some(s) = &r.violating_signs {
                    line(format!("vertex signs x = {:?}, y = {:?}", s.x, s.y));
                }
                if let Some(inf) = &r.infeasibility {
                    line(format!("{} sign orthants refuted", inf.len()));
                }
            }
            Report::RankOne(r) => {
                line(format!(
                    "{}: {}",
                    r.command,
                    if r.decision {
                        "contains a rank-one matrix"
                    } else {
                        "contains no rank-one matrix"
                    }
                ));
                if let Some(w) = &r.witness {
                    line(format!("u = ({})", w.u.join(", ")));
                    line(format!("v = ({})", w.v.join(", ")));
                    line("B =".into());
                    grid_lines(&w.b, &mut line);
                }
                if let Some(v) = &r.violation {
                    line(format!(
                        "violated product inequality, h = {}: {} > {}",
                        v.h, v.lhs, v.rhs
                    ));
                }
                if let Some(rf) = &r.refutation {
                    if rf.zero_matrix_only {
                        line("only the zero matrix is contained".into());
                    } else {
                        line(format!("{} sign branches refuted", rf.branches.len()));
                    }
                }
            }
            Report::MaxRank(r) => {
                line(format!("{}: maximal rank {}", r.command, r.max_rank));
                line(format!(
                    "certified on rows {:?}, columns {:?}, diagonal {:?}",
                    r.certificate.rows, r.certificate.cols, r.certificate.diagonal
                ));
                line("witness =".into());
                grid_lines(&r.witness, &mut line);
            }
            Report::RankRange(r) => {
                let min = if r.min_rank_lower == r.min_rank_upper {
                    r.min_rank_lower.to_string()
                } else {
                    format!("between {} and {}", r.min_rank_lower, r.min_rank_upper)
                };
                line(format!("{}: minimal rank {min}, maximal rank {}", r.command, r.max_rank));
                for d in &r.decided {
                    line(format!("rank {} attained by", d.rank));
                    grid_lines(&d.witness, &mut line);
                }
            }
            Report::Detc(r) => line(format!("{}: {}", r.command, r.value)),
            Report::StronglySingular(r) => {
                line(format!(
                    "{}: {}",
                    r.command,
                    if r.decision {
                        "every realization is singular"
                    } else {
                        "some realization is nonsingular"
                    }
                ));
                if let Some(d) = &r.diagonal {
                    line(format!("certifying diagonal {d:?}"));
                }
            }
        }
        out
    }
}

fn grid_lines(rows: &[Vec<String>], line: &mut impl FnMut(String)) {
    for row in rows {
        line(format!("  [{}]", row.join(", ")));
    }
}
