//! Full-rank decisions for interval matrices and rational witnesses of rank
//! deficiency.
//!
//! Square matrices are decided by the sign-pair determinant test: α is full
//! rank iff `det(mid) · det(mid - T_x rad T_y) > 0` for all sign vectors x, y.
//! Any shape is decided by searching, orthant by orthant, for a nonzero x
//! with `|mid·x| <= rad·|x|`; such an x is exactly the kernel vector of some
//! contained matrix, and a contained matrix with that kernel vector is built
//! row by row.

use num_traits::{Signed, Zero};

use crate::budget::{check_pow2, Budgets};
use crate::error::{Error, Result};
use crate::fourier_motzkin::{FarkasCertificate, Feasibility, LinearSystem};
use crate::interval::Interval;
use crate::linalg::{determinant, exact_rank, Matrix, RationalMatrix};
use crate::model::IntervalMatrix;
use crate::rational::Rational;
use crate::signs::SignVector;
use crate::FieldDescriptor;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RohnOutcome {
    pub full_rank: bool,
    pub det_mid: Rational,
    /// First `(x, y)` whose determinant product is not positive.
    pub violation: Option<(SignVector, SignVector)>,
}

/// Perturbed midpoint `mid - T_x rad T_y`.
pub fn vertex_shift(a: &IntervalMatrix, x: &SignVector, y: &SignVector) -> RationalMatrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| {
        let e = a.get(i, j);
        if x.get(i) * y.get(j) > 0 {
            e.midpoint() - e.radius()
        } else {
            e.midpoint() + e.radius()
        }
    })
}

/// Determinant product `det(mid) · det(mid - T_x rad T_y)`.
pub fn rohn_product(a: &IntervalMatrix, x: &SignVector, y: &SignVector) -> Rational {
    let q = FieldDescriptor::Rationals;
    determinant(&a.midpoint(), q) * determinant(&vertex_shift(a, x, y), q)
}

/// Sign-pair determinant test. `(x, y)` and `(-x, -y)` give the same matrix,
/// so only `x` with a leading `+1` is enumerated: `2^(2p-1)` pairs.
pub fn rohn_square_full_rank(a: &IntervalMatrix, budgets: &Budgets) -> Result<RohnOutcome> {
    let p = a.rows();
    if p != a.cols() || p == 0 {
        return Err(Error::PreconditionViolated(format!(
            "sign-pair test needs a nonempty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    check_pow2("sign pairs", 2 * p - 1, budgets.orthant_limit)?;
    let q = FieldDescriptor::Rationals;
    let det_mid = determinant(&a.midpoint(), q);
    for xi in 0..1u64 << (p - 1) {
        let x = SignVector::from_index(p, xi << 1);
        for yi in 0..1u64 << p {
            let y = SignVector::from_index(p, yi);
            let product = &det_mid * determinant(&vertex_shift(a, &x, &y), q);
            if !product.is_positive() {
                return Ok(RohnOutcome {
                    full_rank: false,
                    det_mid,
                    violation: Some((x, y)),
                });
            }
        }
    }
    Ok(RohnOutcome {
        full_rank: true,
        det_mid,
        violation: None,
    })
}

/// A contained matrix `a` and a nonzero `x` with `a·x = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullPair {
    pub x: Vec<Rational>,
    pub a: RationalMatrix,
}

impl NullPair {
    pub fn verify(&self, alpha: &IntervalMatrix) -> bool {
        self.x.len() == alpha.cols()
            && self.x.iter().any(|v| !v.is_zero())
            && alpha.contains(&self.a).unwrap_or(false)
            && self.a.mul_vec(&self.x).iter().all(Zero::is_zero)
    }
}

/// The orthant's system has no solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthantRefutation {
    pub signs: SignVector,
    pub certificate: FarkasCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NullSearch {
    Found(NullPair),
    /// Only the trivial solution exists; one refutation per searched orthant.
    FullRank(Vec<OrthantRefutation>),
}

/// The linear system for the orthant `T_s x >= 0`, in this order:
/// `s_j x_j >= 0` for each column, `mid_i·x - rad_i·T_s x <= 0` and
/// `-mid_i·x - rad_i·T_s x <= 0` for each row, then `Σ s_j x_j = 1`.
pub fn orthant_system(a: &IntervalMatrix, s: &SignVector) -> LinearSystem {
    let (p, q) = a.shape();
    let (mid, rad) = (a.midpoint(), a.radius());
    let sign = |j: usize| Rational::from_integer(s.get(j).into());
    let mut sys = LinearSystem::new(q);
    for j in 0..q {
        let mut coeffs = vec![Rational::zero(); q];
        coeffs[j] = sign(j);
        sys.push_ge(coeffs, Rational::zero());
    }
    for i in 0..p {
        let weighted: Vec<Rational> = (0..q).map(|j| rad.get(i, j) * sign(j)).collect();
        sys.push_le(
            (0..q).map(|j| mid.get(i, j) - &weighted[j]).collect(),
            Rational::zero(),
        );
        sys.push_le(
            (0..q).map(|j| -mid.get(i, j) - &weighted[j]).collect(),
            Rational::zero(),
        );
    }
    sys.push_eq((0..q).map(sign).collect(), Rational::from_integer(1.into()));
    sys
}

/// Builds a contained matrix with kernel vector `x`, given that
/// `|mid·x| <= rad·|x|`: row i is `mid_i - d_i (rad_i ∘ sign(x))` with
/// `d_i = mid_i·x / rad_i·|x|`, so `|d_i| <= 1`.
pub fn matrix_with_kernel_vector(a: &IntervalMatrix, x: &[Rational]) -> Option<RationalMatrix> {
    let (mid, rad) = (a.midpoint(), a.radius());
    let abs_x: Vec<Rational> = x.iter().map(Signed::abs).collect();
    let mut out = mid.clone();
    for i in 0..a.rows() {
        let mx: Rational = mid.row(i).iter().zip(x).map(|(m, v)| m * v).sum();
        let rx: Rational = rad.row(i).iter().zip(&abs_x).map(|(r, v)| r * v).sum();
        let d = if rx.is_zero() {
            if !mx.is_zero() {
                return None;
            }
            Rational::zero()
        } else {
            mx / rx
        };
        if d.abs() > Rational::from_integer(1.into()) {
            return None;
        }
        for j in 0..a.cols() {
            let sj = if x[j].is_negative() { -&d } else { d.clone() };
            out.set(i, j, mid.get(i, j) - sj * rad.get(i, j));
        }
    }
    Some(out)
}

/// Searches the orthants `s` with `s_0 = +1` (x and -x are both solutions)
/// in index order; the lowest feasible orthant wins.
pub fn null_pair_search(a: &IntervalMatrix, budgets: &Budgets) -> Result<NullSearch> {
    let q = a.cols();
    if q == 0 {
        return Ok(NullSearch::FullRank(Vec::new()));
    }
    check_pow2("sign orthants", q - 1, budgets.orthant_limit)?;
    let mut refutations = Vec::new();
    for index in 0..1u64 << (q - 1) {
        let s = SignVector::from_index(q, index << 1);
        match orthant_system(a, &s).solve(budgets.elimination_limit)? {
            Feasibility::Feasible(x) => {
                let m = matrix_with_kernel_vector(a, &x)
                    .expect("orthant solution satisfies the absolute-value system");
                let pair = NullPair { x, a: m };
                assert!(pair.verify(a), "constructed null pair must verify");
                return Ok(NullSearch::Found(pair));
            }
            Feasibility::Infeasible(certificate) => refutations.push(OrthantRefutation {
                signs: s,
                certificate,
            }),
        }
    }
    Ok(NullSearch::FullRank(refutations))
}

/// Checks that `refutations` covers every orthant `s` with `s_0 = +1` in
/// index order and that each certificate refutes its orthant's system.
/// Together these show the only solution of `A x = 0`, `A` in `a`, is 0.
pub fn verify_full_rank_refutations(a: &IntervalMatrix, refutations: &[OrthantRefutation]) -> bool {
    let q = a.cols();
    if q == 0 {
        return refutations.is_empty();
    }
    if q - 1 >= 64 || refutations.len() as u128 != 1u128 << (q - 1) {
        return false;
    }
    refutations.iter().enumerate().all(|(index, r)| {
        r.signs == SignVector::from_index(q, (index as u64) << 1)
            && orthant_system(a, &r.signs).is_refuted_by(&r.certificate)
    })
}

/// Outcome of the shape-independent full-rank decision. For `p < q` the
/// search runs on the transpose, and the pair's `x` is a left kernel vector
/// of `a` (`xᵀ a = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullRankDecision {
    pub transposed: bool,
    pub search: NullSearch,
}

impl FullRankDecision {
    pub fn is_full_rank(&self) -> bool {
        matches!(self.search, NullSearch::FullRank(_))
    }

    /// The kernel vector and witness matrix, in the original orientation.
    pub fn witness(&self) -> Option<(Vec<Rational>, RationalMatrix)> {
        match &self.search {
            NullSearch::Found(pair) => Some((
                pair.x.clone(),
                if self.transposed {
                    pair.a.transpose()
                } else {
                    pair.a.clone()
                },
            )),
            NullSearch::FullRank(_) => None,
        }
    }
}

pub fn decide_full_rank(a: &IntervalMatrix, budgets: &Budgets) -> Result<FullRankDecision> {
    if a.rows() >= a.cols() {
        Ok(FullRankDecision {
            transposed: false,
            search: null_pair_search(a, budgets)?,
        })
    } else {
        Ok(FullRankDecision {
            transposed: true,
            search: null_pair_search(&a.transpose(), budgets)?,
        })
    }
}

/// Every contained matrix has rank `min(p, q)`.
pub fn full_rank_rectangular(a: &IntervalMatrix, budgets: &Budgets) -> Result<bool> {
    Ok(decide_full_rank(a, budgets)?.is_full_rank())
}

/// A rational contained matrix of rank below `min(p, q)`, if one exists.
pub fn rank_deficient_rational_witness(
    a: &IntervalMatrix,
    budgets: &Budgets,
) -> Result<Option<RationalMatrix>> {
    let witness = decide_full_rank(a, budgets)?.witness().map(|(_, m)| m);
    if let Some(m) = &witness {
        debug_assert!(exact_rank(m, FieldDescriptor::Rationals) < a.rows().min(a.cols()));
    }
    Ok(witness)
}

/// A rational `x` in the box with `m·x = 0`, or `None` if no real one
/// exists. With rational data the solution polyhedron has rational points
/// whenever it is nonempty.
pub fn rational_kernel_point_in_box(
    m: &RationalMatrix,
    bounds: &[Interval],
    elimination_limit: usize,
) -> Result<Option<Vec<Rational>>> {
    if bounds.len() != m.cols() {
        return Err(Error::DimensionMismatch {
            expected: (m.cols(), 1),
            found: (bounds.len(), 1),
        });
    }
    let n = m.cols();
    let mut sys = LinearSystem::new(n);
    for i in 0..m.rows() {
        sys.push_eq(m.row(i).to_vec(), Rational::zero());
    }
    for (j, b) in bounds.iter().enumerate() {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::from_integer(1.into());
        sys.push_ge(e.clone(), b.lo().clone());
        sys.push_le(e, b.hi().clone());
    }
    crate::fourier_motzkin::fourier_motzkin_feasible(&sys, elimination_limit)
}
