//! Bounds on the set of ranks attained inside an interval matrix. That set
//! is an integer interval `[mrk, Mrk]`; the maximum is computed exactly,
//! the minimum is bracketed.

use crate::budget::Budgets;
use crate::error::Result;
use crate::field::FieldDescriptor;
use crate::fullrank::decide_full_rank;
use crate::linalg::{exact_rank, RationalMatrix};
use crate::model::IntervalMatrix;
use crate::rankone::{rankone_any, RankOneDecision};
use crate::subsetmat::{interval_as_subset, max_rank, witness_for_certificate, MaxRankCertificate};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankRangeReport {
    pub max_rank: usize,
    pub max_certificate: MaxRankCertificate,
    pub min_rank_lower: usize,
    pub min_rank_upper: usize,
    /// Contained matrices, one per rank shown to be attained, by rank.
    pub decided: Vec<(usize, RationalMatrix)>,
}

impl RankRangeReport {
    pub fn is_min_rank_exact(&self) -> bool {
        self.min_rank_lower == self.min_rank_upper
    }
}

pub fn rank_range_report(alpha: &IntervalMatrix, budgets: &Budgets) -> Result<RankRangeReport> {
    let (p, q) = alpha.shape();
    let subset = interval_as_subset(alpha);
    let cert = max_rank(&subset, budgets)?;
    let top = witness_for_certificate(&subset, &cert, budgets)?;
    let max = cert.rank;
    let mut decided = vec![(max, top)];
    let mut lower = 0;
    let mut upper = max;

    if alpha.contains_zero_matrix() {
        upper = 0;
        decided.push((0, RationalMatrix::zeros(p, q)));
    } else {
        lower = 1;
        match rankone_any(alpha, budgets)? {
            RankOneDecision::Found(w) => {
                upper = 1;
                decided.push((1, w.matrix()));
            }
            RankOneDecision::Refuted(_) => lower = 2,
        }
    }

    if lower < upper {
        let decision = decide_full_rank(alpha, budgets)?;
        match decision.witness() {
            None => lower = p.min(q),
            Some((_, m)) => {
                let r = exact_rank(&m, FieldDescriptor::Rationals);
                if r < upper {
                    upper = r;
                    decided.push((r, m));
                }
            }
        }
    }
    lower = lower.min(upper);

    decided.sort_by_key(|(r, _)| *r);
    decided.dedup_by_key(|(r, _)| *r);
    Ok(RankRangeReport {
        max_rank: max,
        max_certificate: cert,
        min_rank_lower: lower,
        min_rank_upper: upper,
        decided,
    })
}
