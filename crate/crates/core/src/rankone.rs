//! Rank-one realizability of interval matrices.
//!
//! For a reduced matrix with nonnegative entries, a contained rank-one
//! matrix exists iff for every `h` in `2..=2^(min(p,q)-1)`, all index tuples
//! (repetition allowed) and every permutation σ,
//!
//! ```text
//! lo[i1,j1] ··· lo[ih,jh] <= hi[i1,jσ(1)] ··· hi[ih,jσ(h)]
//! ```
//!
//! [`rankone_criterion_bruteforce`] checks that family directly. The scalable
//! route, [`rankone_feasibility_witness`], looks for positive `u, v` with
//! `lo <= u_i v_j <= hi`: a system of difference constraints over the
//! multiplicative group of positive rationals, solved by Bellman-Ford. A
//! cycle with product below 1 is exactly one of the inequalities above
//! failing, with σ a cyclic shift.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::linalg::{exact_rank, RationalMatrix};
use crate::interval::Interval;
use crate::model::{first_line_nonnegative, IntervalMatrix, Normalization, Reduction};
use crate::rational::{lcm_of_denominators, Rational};
use crate::signs::SignVector;
use crate::FieldDescriptor;

/// Rank-one witness `B = u vᵀ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneWitness {
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
}

impl RankOneWitness {
    pub fn matrix(&self) -> RationalMatrix {
        RationalMatrix::outer(&self.u, &self.v)
    }

    pub fn verify(&self, alpha: &IntervalMatrix) -> bool {
        if self.u.len() != alpha.rows() || self.v.len() != alpha.cols() {
            return false;
        }
        let b = self.matrix();
        alpha.contains(&b).unwrap_or(false) && exact_rank(&b, FieldDescriptor::Rationals) == 1
    }
}

/// A failing product inequality: `Π lo[rows[t], cols[t]] > Π hi[rows[t],
/// cols[sigma[t]]]`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionViolation {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub sigma: Vec<usize>,
}

impl CriterionViolation {
    pub fn h(&self) -> usize {
        self.rows.len()
    }

    fn well_formed(&self, alpha: &IntervalMatrix) -> bool {
        let h = self.rows.len();
        if h < 2 || self.cols.len() != h || self.sigma.len() != h {
            return false;
        }
        let mut seen = vec![false; h];
        for &s in &self.sigma {
            if s >= h || seen[s] {
                return false;
            }
            seen[s] = true;
        }
        self.rows.iter().all(|&i| i < alpha.rows()) && self.cols.iter().all(|&j| j < alpha.cols())
    }

    /// `(lhs, rhs)`; panics on indices out of range.
    pub fn sides(&self, alpha: &IntervalMatrix) -> (Rational, Rational) {
        let lhs = (0..self.h()).fold(Rational::one(), |acc, t| {
            acc * alpha.get(self.rows[t], self.cols[t]).lo()
        });
        let rhs = (0..self.h()).fold(Rational::one(), |acc, t| {
            acc * alpha.get(self.rows[t], self.cols[self.sigma[t]]).hi()
        });
        (lhs, rhs)
    }

    /// A valid violation in a nonnegative matrix rules out every contained
    /// matrix of rank at most one.
    pub fn verify(&self, alpha: &IntervalMatrix) -> bool {
        if !self.well_formed(alpha) || !alpha.is_nonnegative() {
            return false;
        }
        let (lhs, rhs) = self.sides(alpha);
        lhs > rhs
    }
}

fn check_nonnegative_reduced(alpha: &IntervalMatrix) -> Result<()> {
    if alpha.is_empty() {
        return Err(Error::PreconditionViolated("matrix is empty".into()));
    }
    if !alpha.is_nonnegative() {
        return Err(Error::PreconditionViolated("entries must be nonnegative".into()));
    }
    if !alpha.is_reduced() {
        return Err(Error::PreconditionViolated("matrix must be reduced".into()));
    }
    Ok(())
}

/// Checks the product inequalities for every `h <= 2^(min(p,q)-1)`. Returns
/// the first violation in enumeration order: by `h`, then by the sorted
/// multiset of cells `(i_t, j_t)`, then by σ in lexicographic order.
pub fn rankone_criterion_bruteforce(
    alpha: &IntervalMatrix,
    budgets: &Budgets,
) -> Result<Option<CriterionViolation>> {
    check_nonnegative_reduced(alpha)?;
    let (p, q) = alpha.shape();
    if p < 2 || q < 2 {
        return Err(Error::PreconditionViolated(
            "the product criterion needs at least two rows and two columns".into(),
        ));
    }
    let exp = p.min(q) - 1;
    let h_max: u128 = 1u128.checked_shl(exp as u32).unwrap_or(u128::MAX);
    if exp >= 64 || h_max > budgets.h_cap as u128 {
        return Err(Error::SizeLimitExceeded {
            what: "criterion length h",
            required: h_max,
            limit: budgets.h_cap as u128,
        });
    }
    let h_max = h_max as usize;

    // Both sides scale by the same power of the common denominator.
    let scale = Rational::from_integer(lcm_of_denominators(
        alpha.iter().flat_map(|e| [e.lo(), e.hi()]),
    ));
    let lo: Vec<BigInt> = alpha.iter().map(|e| (e.lo() * &scale).to_integer()).collect();
    let hi: Vec<BigInt> = alpha.iter().map(|e| (e.hi() * &scale).to_integer()).collect();
    let positive: Vec<usize> = (0..p * q).filter(|&c| !lo[c].is_zero()).collect();

    for h in 2..=h_max {
        let perms = permutations(h);
        let mut cells = vec![0usize; h];
        // Multisets drawn from cells with a positive lower endpoint; any zero
        // factor makes the left side 0, which never exceeds the right.
        let mut found = None;
        for_each_multiset(positive.len(), h, &mut |pick| {
            for (t, &k) in pick.iter().enumerate() {
                cells[t] = positive[k];
            }
            let lhs = cells.iter().fold(BigInt::one(), |acc, &c| acc * &lo[c]);
            for sigma in &perms {
                let rhs = (0..h).fold(BigInt::one(), |acc, t| {
                    acc * &hi[(cells[t] / q) * q + cells[sigma[t]] % q]
                });
                if lhs > rhs {
                    found = Some(CriterionViolation {
                        rows: cells.iter().map(|c| c / q).collect(),
                        cols: cells.iter().map(|c| c % q).collect(),
                        sigma: sigma.clone(),
                    });
                    return false;
                }
            }
            true
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Calls `f` on every nondecreasing sequence of length `k` over `0..n` in
/// lexicographic order until it returns `false`.
fn for_each_multiset(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    if n == 0 {
        return;
    }
    let mut pick = vec![0usize; k];
    loop {
        if !f(&pick) {
            return;
        }
        let Some(t) = (0..k).rev().find(|&t| pick[t] + 1 < n) else {
            return;
        };
        let next = pick[t] + 1;
        for slot in &mut pick[t..] {
            *slot = next;
        }
    }
}

/// All permutations of `0..h` in lexicographic order.
fn permutations(h: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..h).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (0..h.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..h).rev().find(|&j| current[j] > current[i]).expect("successor exists");
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(current.clone());
    }
}

/// Searches positive rationals `u, v` with `lo_ij <= u_i v_j <= hi_ij`.
///
/// With `a_i = u_i` and `b_j = 1/v_j` the constraints become
/// `a_i <= hi_ij · b_j` and `b_j <= a_i / lo_ij` (the latter only when
/// `lo_ij > 0`), a shortest-path system under multiplication. Either the
/// relaxation settles and yields `u, v`, or a cycle with product below 1
/// is returned as a violated product inequality.
pub fn rankone_feasibility_witness(
    alpha: &IntervalMatrix,
) -> Result<std::result::Result<RankOneWitness, CriterionViolation>> {
    check_nonnegative_reduced(alpha)?;
    let (p, q) = alpha.shape();

    // An entry pinned at 0 is incompatible with all u_i, v_j nonzero.
    if let Some(((i, j), _)) = alpha.indexed().find(|(_, e)| e.hi().is_zero()) {
        let jr = (0..q).find(|&c| !alpha.get(i, c).lo().is_zero()).expect("row is reduced");
        let ic = (0..p).find(|&r| !alpha.get(r, j).lo().is_zero()).expect("column is reduced");
        let v = CriterionViolation {
            rows: vec![i, ic],
            cols: vec![jr, j],
            sigma: vec![1, 0],
        };
        debug_assert!(v.verify(alpha));
        return Ok(Err(v));
    }

    // Nodes 0..p are rows (a_i), p..p+q are columns (b_j).
    let n = p + q;
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    for i in 0..p {
        for j in 0..q {
            let e = alpha.get(i, j);
            edges.push((p + j, i, e.hi().clone()));
            if !e.lo().is_zero() {
                edges.push((i, p + j, e.lo().recip()));
            }
        }
    }
    let mut dist = vec![Rational::one(); n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut settled = false;
    for _ in 0..n {
        let mut changed = false;
        for (from, to, w) in &edges {
            let candidate = &dist[*from] * w;
            if candidate < dist[*to] {
                dist[*to] = candidate;
                pred[*to] = Some(*from);
                changed = true;
            }
        }
        if !changed {
            settled = true;
            break;
        }
    }
    if settled {
        let a0 = dist[0].clone();
        let u: Vec<Rational> = (0..p).map(|i| &dist[i] / &a0).collect();
        let v: Vec<Rational> = (0..q).map(|j| &a0 / &dist[p + j]).collect();
        let w = RankOneWitness { u, v };
        assert!(w.verify(alpha), "settled potentials must give a contained rank-one matrix");
        return Ok(Ok(w));
    }

    // Still relaxing after n rounds: some edge is improvable, and walking
    // predecessors from its head lands on a cycle with product below 1.
    let (from, to) = edges
        .iter()
        .find(|(f, t, w)| &dist[*f] * w < dist[*t])
        .map(|(f, t, _)| (*f, *t))
        .expect("an improvable edge remains");
    pred[to] = Some(from);
    let mut x = to;
    for _ in 0..n {
        x = pred[x].expect("predecessor chain");
    }
    let mut cycle = vec![x];
    let mut cur = pred[x].expect("predecessor chain");
    while cur != x {
        cycle.push(cur);
        cur = pred[cur].expect("predecessor chain");
    }
    cycle.reverse();
    // Rotate so the cycle starts at a row node: row, col, row, col, ...
    let start = cycle.iter().position(|&v| v < p).expect("cycle alternates");
    cycle.rotate_left(start);
    let h = cycle.len() / 2;
    let rows: Vec<usize> = (0..h).map(|t| cycle[2 * t]).collect();
    let cols: Vec<usize> = (0..h).map(|t| cycle[2 * t + 1] - p).collect();
    let sigma: Vec<usize> = (0..h).map(|t| (t + h - 1) % h).collect();
    let violation = CriterionViolation { rows, cols, sigma };
    assert!(violation.verify(alpha), "negative cycle must violate the product inequality");
    Ok(Err(violation))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchReason {
    /// After the recorded sign flips, this entry lies in the negative reals
    /// while the first row and column are nonnegative.
    NegativeEntry { row: usize, col: usize },
    /// Violated product inequality in the flipped and clamped branch, with
    /// both sides evaluated there (`lhs > rhs`).
    Violation {
        violation: CriterionViolation,
        lhs: Rational,
        rhs: Rational,
    },
}

/// Why one sign branch contains no rank-one matrix. Indices and signs refer
/// to the original matrix; deleted lines carry sign `+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchRefutation {
    pub index: u128,
    pub splits: Vec<bool>,
    pub row_signs: SignVector,
    pub col_signs: SignVector,
    pub reason: BranchReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankOneRefutation {
    /// Every entry is `[0, 0]`.
    ZeroMatrixOnly,
    /// One refutation per sign branch of the reduced matrix, in branch order.
    Branches(Vec<BranchRefutation>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankOneDecision {
    Found(RankOneWitness),
    Refuted(RankOneRefutation),
}

impl RankOneDecision {
    pub fn witness(&self) -> Option<&RankOneWitness> {
        match self {
            RankOneDecision::Found(w) => Some(w),
            RankOneDecision::Refuted(_) => None,
        }
    }
}

fn embed_signs(map: &[usize], len: usize, signs: &SignVector) -> SignVector {
    let mut out = vec![1i8; len];
    for (k, &i) in map.iter().enumerate() {
        out[i] = signs.get(k);
    }
    SignVector::new(out).expect("signs are ±1")
}

/// Decides whether any rational interval matrix contains a rank-one matrix,
/// returning a verified rational witness or a per-branch refutation.
pub fn rankone_any(alpha: &IntervalMatrix, budgets: &Budgets) -> Result<RankOneDecision> {
    let (p, q) = alpha.shape();
    let reduction = alpha.reduce_zero_rows_cols();
    if reduction.is_empty() {
        let nonzero = alpha.indexed().find(|(_, e)| !e.is_degenerate() || !e.lo().is_zero());
        return Ok(match nonzero {
            Some(((i, j), e)) => {
                let value = if e.hi().is_zero() { e.lo().clone() } else { e.hi().clone() };
                let mut u = vec![Rational::zero(); p];
                let mut v = vec![Rational::zero(); q];
                u[i] = value;
                v[j] = Rational::one();
                let w = RankOneWitness { u, v };
                assert!(w.verify(alpha));
                RankOneDecision::Found(w)
            }
            None => RankOneDecision::Refuted(RankOneRefutation::ZeroMatrixOnly),
        });
    }

    let reduced = &reduction.matrix;
    let mut refutations = Vec::new();
    for branch in reduced.sign_branches() {
        if branch.index >= budgets.branch_limit as u128 {
            return Err(Error::SizeLimitExceeded {
                what: "sign branches",
                required: reduced.sign_branches().total().unwrap_or(u128::MAX),
                limit: budgets.branch_limit as u128,
            });
        }
        let to_original = |row_signs: &SignVector, col_signs: &SignVector| {
            (
                embed_signs(&reduction.row_map, p, row_signs),
                embed_signs(&reduction.col_map, q, col_signs),
            )
        };
        match branch.matrix.normalize_and_clamp()? {
            Normalization::NegativeEntry {
                row,
                col,
                row_signs,
                col_signs,
            } => {
                let (row_signs, col_signs) = to_original(&row_signs, &col_signs);
                refutations.push(BranchRefutation {
                    index: branch.index,
                    splits: branch.splits,
                    row_signs,
                    col_signs,
                    reason: BranchReason::NegativeEntry {
                        row: reduction.row_map[row],
                        col: reduction.col_map[col],
                    },
                });
            }
            Normalization::Clamped {
                matrix,
                row_signs,
                col_signs,
            } => match rankone_feasibility_witness(&matrix)? {
                Ok(w) => {
                    let u: Vec<Rational> =
                        w.u.iter().enumerate().map(|(i, x)| signed(x, row_signs.get(i))).collect();
                    let v: Vec<Rational> =
                        w.v.iter().enumerate().map(|(j, x)| signed(x, col_signs.get(j))).collect();
                    let w = RankOneWitness {
                        u: Reduction::embed_vector(&reduction.row_map, p, &u),
                        v: Reduction::embed_vector(&reduction.col_map, q, &v),
                    };
                    assert!(w.verify(alpha), "pipeline witness must verify");
                    return Ok(RankOneDecision::Found(w));
                }
                Err(violation) => {
                    let (lhs, rhs) = violation.sides(&matrix);
                    let (row_signs, col_signs) = to_original(&row_signs, &col_signs);
                    refutations.push(BranchRefutation {
                        index: branch.index,
                        splits: branch.splits,
                        row_signs,
                        col_signs,
                        reason: BranchReason::Violation {
                            violation: CriterionViolation {
                                rows: violation.rows.iter().map(|&i| reduction.row_map[i]).collect(),
                                cols: violation.cols.iter().map(|&j| reduction.col_map[j]).collect(),
                                sigma: violation.sigma,
                            },
                            lhs,
                            rhs,
                        },
                    });
                }
            },
        }
    }
    Ok(RankOneDecision::Refuted(RankOneRefutation::Branches(refutations)))
}

/// Independently checks a refutation against `alpha` by recomputing the
/// reduction and every sign branch.
pub fn verify_rankone_refutation(alpha: &IntervalMatrix, refutation: &RankOneRefutation) -> bool {
    let branches = match refutation {
        RankOneRefutation::ZeroMatrixOnly => {
            return alpha.iter().all(|e| e.is_degenerate() && e.lo().is_zero());
        }
        RankOneRefutation::Branches(b) => b,
    };
    let reduction = alpha.reduce_zero_rows_cols();
    if reduction.is_empty() {
        return false;
    }
    let reduced = &reduction.matrix;
    let all = reduced.sign_branches();
    if all.total() != Some(branches.len() as u128) {
        return false;
    }
    let local = |map: &[usize], i: usize| map.iter().position(|&x| x == i);
    let restrict = |map: &[usize], signs: &SignVector, len: usize| -> Option<SignVector> {
        if signs.len() != len {
            return None;
        }
        if (0..len).any(|i| !map.contains(&i) && signs.get(i) != 1) {
            return None;
        }
        SignVector::new(map.iter().map(|&i| signs.get(i)).collect()).ok()
    };
    branches.iter().enumerate().all(|(k, r)| {
        let branch = all.branch(k as u128);
        if r.index != k as u128 || r.splits != branch.splits {
            return false;
        }
        let (Some(rs), Some(cs)) = (
            restrict(&reduction.row_map, &r.row_signs, alpha.rows()),
            restrict(&reduction.col_map, &r.col_signs, alpha.cols()),
        ) else {
            return false;
        };
        let flipped = branch.matrix.apply_signs(&rs, &cs);
        if !first_line_nonnegative(&flipped) {
            return false;
        }
        match &r.reason {
            BranchReason::NegativeEntry { row, col } => {
                match (local(&reduction.row_map, *row), local(&reduction.col_map, *col)) {
                    (Some(i), Some(j)) => flipped.get(i, j).is_negative(),
                    _ => false,
                }
            }
            BranchReason::Violation { violation: v, lhs, rhs } => {
                if flipped.iter().any(Interval::is_negative) {
                    return false;
                }
                let rows: Option<Vec<usize>> =
                    v.rows.iter().map(|&i| local(&reduction.row_map, i)).collect();
                let cols: Option<Vec<usize>> =
                    v.cols.iter().map(|&j| local(&reduction.col_map, j)).collect();
                let (Some(rows), Some(cols)) = (rows, cols) else {
                    return false;
                };
                let clamped = flipped.map(Interval::clamp_nonnegative);
                let local_violation = CriterionViolation {
                    rows,
                    cols,
                    sigma: v.sigma.clone(),
                };
                local_violation.verify(&clamped) && local_violation.sides(&clamped) == (lhs.clone(), rhs.clone())
            }
        }
    })
}

fn signed(x: &Rational, sign: i8) -> Rational {
    if sign < 0 {
        -x
    } else {
        x.clone()
    }
}
