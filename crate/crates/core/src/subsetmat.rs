//! Subset matrices: every entry is a nonempty subset of a field.
//!
//! A pg-diagonal (partial generalized diagonal) is a set of cells with
//! pairwise distinct rows and columns. A square subset matrix is strongly
//! singular (every realization singular) iff it has no totally
//! nondegenerate pg-diagonal of full length and, for every totally
//! nondegenerate pg-diagonal of smaller length, the complementary matrix has
//! `det^c = 0`. Here `det^c` sums the Leibniz terms whose whole diagonal is
//! degenerate, which is the determinant after zeroing nondegenerate cells.

use std::fmt;

use num_traits::{One, Zero};

use crate::budget::{check_count, check_pow2, Budgets};
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::linalg::{determinant, exact_rank, Matrix, RationalMatrix};
use crate::model::IntervalMatrix;
use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetEntry {
    Singleton(Rational),
    /// At least two distinct values.
    FiniteSet(Vec<Rational>),
    /// The whole field; only allowed over an infinite field.
    Any,
}

impl SubsetEntry {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, SubsetEntry::Singleton(_))
    }

    pub fn contains(&self, value: &Rational) -> bool {
        match self {
            SubsetEntry::Singleton(v) => v == value,
            SubsetEntry::FiniteSet(vs) => vs.contains(value),
            SubsetEntry::Any => true,
        }
    }

    /// One value for a degenerate entry, two distinct values otherwise.
    /// The determinant is affine in each entry, so these suffice to decide
    /// whether a minor can be made nonzero.
    pub fn representatives(&self) -> Vec<Rational> {
        match self {
            SubsetEntry::Singleton(v) => vec![v.clone()],
            SubsetEntry::FiniteSet(vs) => vs[..2].to_vec(),
            SubsetEntry::Any => vec![Rational::zero(), Rational::one()],
        }
    }

    /// Value used for cells outside a certified submatrix.
    pub fn fill_value(&self) -> Rational {
        match self {
            SubsetEntry::Singleton(v) => v.clone(),
            SubsetEntry::FiniteSet(vs) => vs[0].clone(),
            SubsetEntry::Any => Rational::zero(),
        }
    }
}

impl fmt::Display for SubsetEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsetEntry::Singleton(v) => write!(f, "{}", format_rational(v)),
            SubsetEntry::FiniteSet(vs) => {
                let parts: Vec<String> = vs.iter().map(format_rational).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            SubsetEntry::Any => write!(f, "*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetMatrix {
    field: FieldDescriptor,
    entries: Matrix<SubsetEntry>,
}

impl SubsetMatrix {
    /// Validates every entry against `field`.
    pub fn new(field: FieldDescriptor, entries: Matrix<SubsetEntry>) -> Result<Self> {
        for ((row, col), e) in entries.indexed() {
            let bad = |value: String, reason: &str| Error::InvalidFieldElement {
                row,
                col,
                value,
                reason: reason.to_string(),
            };
            match e {
                SubsetEntry::Singleton(v) => {
                    if !field.contains(v) {
                        return Err(bad(format_rational(v), "not an element of the field"));
                    }
                }
                SubsetEntry::FiniteSet(vs) => {
                    if vs.len() < 2 {
                        return Err(bad(e.to_string(), "a finite set needs at least two values"));
                    }
                    for (k, v) in vs.iter().enumerate() {
                        if !field.contains(v) {
                            return Err(bad(format_rational(v), "not an element of the field"));
                        }
                        if vs[..k].contains(v) {
                            return Err(bad(format_rational(v), "duplicate value in set"));
                        }
                    }
                }
                SubsetEntry::Any => {
                    if field.is_finite() {
                        return Err(bad("any".into(), "use an explicit set over a finite field"));
                    }
                }
            }
        }
        Ok(Self { field, entries })
    }

    pub fn from_rows(field: FieldDescriptor, rows: Vec<Vec<SubsetEntry>>) -> Result<Self> {
        Self::new(field, Matrix::from_rows(rows)?)
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn entries(&self) -> &Matrix<SubsetEntry> {
        &self.entries
    }

    pub fn rows(&self) -> usize {
        self.entries.rows()
    }

    pub fn cols(&self) -> usize {
        self.entries.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.entries.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> &SubsetEntry {
        self.entries.get(i, j)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SubsetMatrix {
        SubsetMatrix {
            field: self.field,
            entries: self.entries.submatrix(rows, cols),
        }
    }

    /// Whether `a` is a realization: same shape and every entry contained.
    pub fn contains(&self, a: &RationalMatrix) -> bool {
        a.shape() == self.shape() && self.entries.indexed().all(|((i, j), e)| e.contains(a.get(i, j)))
    }

    fn check_square(&self) -> Result<usize> {
        let (p, q) = self.shape();
        if p != q {
            return Err(Error::DimensionMismatch {
                expected: (p, p),
                found: (p, q),
            });
        }
        Ok(p)
    }
}

impl fmt::Display for SubsetMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "over {}", self.field)?;
        write!(f, "{}", self.entries)
    }
}

/// Cells with pairwise distinct rows and pairwise distinct columns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PgDiagonal {
    cells: Vec<(usize, usize)>,
}

impl PgDiagonal {
    pub fn new(cells: Vec<(usize, usize)>) -> Result<Self> {
        for (k, &(r, c)) in cells.iter().enumerate() {
            if cells[..k].iter().any(|&(r2, _)| r2 == r) {
                return Err(Error::InvalidDiagonal(format!("row {r} is used twice")));
            }
            if cells[..k].iter().any(|&(_, c2)| c2 == c) {
                return Err(Error::InvalidDiagonal(format!("column {c} is used twice")));
            }
        }
        Ok(Self { cells })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Every referenced entry is nondegenerate.
    pub fn is_totally_nondegenerate(&self, alpha: &SubsetMatrix) -> bool {
        self.cells.iter().all(|&(r, c)| !alpha.get(r, c).is_degenerate())
    }

    fn check_within(&self, alpha: &SubsetMatrix) -> Result<()> {
        let (p, q) = alpha.shape();
        match self.cells.iter().find(|&&(r, c)| r >= p || c >= q) {
            Some(&(r, c)) => Err(Error::InvalidDiagonal(format!(
                "cell ({r}, {c}) is outside a {p}x{q} matrix"
            ))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for PgDiagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cells.iter().map(|(r, c)| format!("({r},{c})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The submatrix on the rows and columns not touched by `d`.
pub fn complementary_matrix(alpha: &SubsetMatrix, d: &PgDiagonal) -> Result<SubsetMatrix> {
    d.check_within(alpha)?;
    let rows: Vec<usize> = (0..alpha.rows()).filter(|&i| d.cells.iter().all(|&(r, _)| r != i)).collect();
    let cols: Vec<usize> = (0..alpha.cols()).filter(|&j| d.cells.iter().all(|&(_, c)| c != j)).collect();
    Ok(alpha.submatrix(&rows, &cols))
}

/// Signed sum over permutations whose whole diagonal is degenerate; `1`
/// for the 0×0 matrix.
pub fn detc(alpha: &SubsetMatrix) -> Result<Rational> {
    alpha.check_square()?;
    let field = alpha.field();
    let m = alpha.entries.map(|e| match e {
        SubsetEntry::Singleton(v) => v.clone(),
        _ => field.zero(),
    });
    Ok(determinant(&m, field))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Number of pg-diagonals of every length in a `p×q` matrix.
fn diagonal_count(p: usize, q: usize) -> u128 {
    (0..=p.min(q)).fold(0u128, |acc, k| {
        let falling = (0..k).fold(1u128, |f, i| f.saturating_mul((q - i) as u128));
        acc.saturating_add(binomial(p, k).saturating_mul(falling))
    })
}

/// Calls `f` on each totally nondegenerate pg-diagonal of length `k`, cells
/// sorted by row, in lexicographic order of the cell list, until `f`
/// returns `false`. Returns `false` if stopped early.
fn for_each_nondegenerate_diagonal(
    alpha: &SubsetMatrix,
    k: usize,
    f: &mut dyn FnMut(&[(usize, usize)]) -> bool,
) -> bool {
    fn go(
        alpha: &SubsetMatrix,
        k: usize,
        next_row: usize,
        used: &mut Vec<bool>,
        cells: &mut Vec<(usize, usize)>,
        f: &mut dyn FnMut(&[(usize, usize)]) -> bool,
    ) -> bool {
        if cells.len() == k {
            return f(cells);
        }
        let remaining = k - cells.len();
        for r in next_row..=alpha.rows().saturating_sub(remaining) {
            for c in 0..alpha.cols() {
                if used[c] || alpha.get(r, c).is_degenerate() {
                    continue;
                }
                used[c] = true;
                cells.push((r, c));
                let go_on = go(alpha, k, r + 1, used, cells, f);
                cells.pop();
                used[c] = false;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
    if k > alpha.rows().min(alpha.cols()) {
        return true;
    }
    go(alpha, k, 0, &mut vec![false; alpha.cols()], &mut Vec::with_capacity(k), f)
}

/// Whether `d` shows that the square matrix `alpha` has a nonsingular
/// realization: `d` is totally nondegenerate and either has full length or
/// its complementary matrix has nonzero `det^c`.
pub fn diagonal_certifies(alpha: &SubsetMatrix, d: &PgDiagonal) -> bool {
    let Ok(p) = alpha.check_square() else {
        return false;
    };
    if d.check_within(alpha).is_err() || !d.is_totally_nondegenerate(alpha) {
        return false;
    }
    if d.len() == p {
        return true;
    }
    complementary_matrix(alpha, d)
        .and_then(|c| detc(&c))
        .map(|v| !v.is_zero())
        .unwrap_or(false)
}

/// `None` if every realization of the square matrix `alpha` is singular;
/// otherwise the first certifying pg-diagonal, by length descending and
/// then lexicographically.
pub fn strongly_singular(alpha: &SubsetMatrix, budgets: &Budgets) -> Result<Option<PgDiagonal>> {
    let p = alpha.check_square()?;
    check_count("pg-diagonals", diagonal_count(p, p), budgets.grid_limit)?;
    for k in (0..=p).rev() {
        let mut found = None;
        for_each_nondegenerate_diagonal(alpha, k, &mut |cells| {
            let d = PgDiagonal { cells: cells.to_vec() };
            if diagonal_certifies(alpha, &d) {
                found = Some(d);
                false
            } else {
                true
            }
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// A `rank×rank` submatrix together with a pg-diagonal (in original
/// coordinates) certifying that it has a nonsingular realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxRankCertificate {
    pub rank: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub diagonal: PgDiagonal,
}

impl MaxRankCertificate {
    /// Checks the lower bound `Mrk >= rank`. The upper bound needs every
    /// larger square submatrix to be strongly singular, which is a separate
    /// recomputation.
    pub fn verify_lower_bound(&self, alpha: &SubsetMatrix) -> bool {
        let t = self.rank;
        let increasing = |v: &[usize], n: usize| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|&x| x < n);
        if self.rows.len() != t
            || self.cols.len() != t
            || !increasing(&self.rows, alpha.rows())
            || !increasing(&self.cols, alpha.cols())
        {
            return false;
        }
        if t == 0 {
            return self.diagonal.is_empty();
        }
        let mut local = Vec::with_capacity(self.diagonal.len());
        for &(r, c) in self.diagonal.cells() {
            match (
                self.rows.iter().position(|&x| x == r),
                self.cols.iter().position(|&x| x == c),
            ) {
                (Some(lr), Some(lc)) => local.push((lr, lc)),
                _ => return false,
            }
        }
        match PgDiagonal::new(local) {
            Ok(d) => diagonal_certifies(&alpha.submatrix(&self.rows, &self.cols), &d),
            Err(_) => false,
        }
    }
}

fn for_each_combination(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let mut pick: Vec<usize> = (0..k).collect();
    if k > n {
        return true;
    }
    loop {
        if !f(&pick) {
            return false;
        }
        let Some(t) = (0..k).rev().find(|&t| pick[t] < n - k + t) else {
            return true;
        };
        pick[t] += 1;
        for s in t + 1..k {
            pick[s] = pick[s - 1] + 1;
        }
    }
}

/// Tests whether some `t×t` submatrix has a nonsingular realization;
/// submatrices are scanned in lexicographic order of (rows, cols).
pub fn square_submatrix_certificate(
    alpha: &SubsetMatrix,
    t: usize,
    budgets: &Budgets,
) -> Result<Option<MaxRankCertificate>> {
    let (p, q) = alpha.shape();
    if t > p.min(q) {
        return Ok(None);
    }
    check_count(
        "square submatrices",
        binomial(p, t).saturating_mul(binomial(q, t)),
        budgets.grid_limit,
    )?;
    let mut result: Result<Option<MaxRankCertificate>> = Ok(None);
    for_each_combination(p, t, &mut |rows| {
        for_each_combination(q, t, &mut |cols| {
            let sub = alpha.submatrix(rows, cols);
            match strongly_singular(&sub, budgets) {
                Ok(None) => true,
                Ok(Some(d)) => {
                    let cells = d.cells().iter().map(|&(r, c)| (rows[r], cols[c])).collect();
                    result = Ok(Some(MaxRankCertificate {
                        rank: t,
                        rows: rows.to_vec(),
                        cols: cols.to_vec(),
                        diagonal: PgDiagonal { cells },
                    }));
                    false
                }
                Err(e) => {
                    result = Err(e);
                    false
                }
            }
        })
    });
    result
}

/// The maximal rank over all realizations, with a certifying submatrix.
pub fn max_rank(alpha: &SubsetMatrix, budgets: &Budgets) -> Result<MaxRankCertificate> {
    let (p, q) = alpha.shape();
    for t in (1..=p.min(q)).rev() {
        if let Some(cert) = square_submatrix_certificate(alpha, t, budgets)? {
            return Ok(cert);
        }
    }
    Ok(MaxRankCertificate {
        rank: 0,
        rows: vec![],
        cols: vec![],
        diagonal: PgDiagonal::empty(),
    })
}

/// A realization of maximal rank.
pub fn max_rank_witness(alpha: &SubsetMatrix, budgets: &Budgets) -> Result<RationalMatrix> {
    let cert = max_rank(alpha, budgets)?;
    witness_for_certificate(alpha, &cert, budgets)
}

/// Realization whose certified submatrix is nonsingular, found on the grid
/// of representatives of that submatrix.
pub fn witness_for_certificate(
    alpha: &SubsetMatrix,
    cert: &MaxRankCertificate,
    budgets: &Budgets,
) -> Result<RationalMatrix> {
    if !cert.verify_lower_bound(alpha) {
        return Err(Error::PreconditionViolated("certificate does not fit the matrix".into()));
    }
    let field = alpha.field();
    let mut a = alpha.entries.map(SubsetEntry::fill_value);
    let t = cert.rank;
    let cells: Vec<(usize, usize)> = cert
        .rows
        .iter()
        .flat_map(|&r| cert.cols.iter().map(move |&c| (r, c)))
        .filter(|&(r, c)| !alpha.get(r, c).is_degenerate())
        .collect();
    let total = check_pow2("representative grid", cells.len(), budgets.grid_limit)?;
    for index in 0..total {
        for (k, &(r, c)) in cells.iter().enumerate() {
            let choice = (index >> k & 1) as usize;
            a.set(r, c, alpha.get(r, c).representatives()[choice].clone());
        }
        let sub = a.submatrix(&cert.rows, &cert.cols);
        if !determinant(&sub, field).is_zero() {
            assert_eq!(exact_rank(&a, field), t, "witness rank must match the certified rank");
            return Ok(a);
        }
    }
    unreachable!("a certified submatrix has a nonsingular realization on the representative grid")
}

/// Degenerate intervals become singletons, the rest `{lo, hi}`.
pub fn interval_as_subset(alpha: &IntervalMatrix) -> SubsetMatrix {
    SubsetMatrix {
        field: FieldDescriptor::Rationals,
        entries: alpha.map(|e| {
            if e.is_degenerate() {
                SubsetEntry::Singleton(e.lo().clone())
            } else {
                SubsetEntry::FiniteSet(vec![e.lo().clone(), e.hi().clone()])
            }
        }),
    }
}

/// Maximal rank by enumerating every realization. Entries must be finite.
pub fn brute_force_max_rank_oracle(alpha: &SubsetMatrix, budgets: &Budgets) -> Result<usize> {
    let mut sizes = Vec::new();
    for e in alpha.entries.iter() {
        match e {
            SubsetEntry::Singleton(_) => sizes.push(1usize),
            SubsetEntry::FiniteSet(vs) => sizes.push(vs.len()),
            SubsetEntry::Any => {
                return Err(Error::PreconditionViolated(
                    "exhaustive enumeration needs finite entries".into(),
                ))
            }
        }
    }
    let total = sizes.iter().fold(1u128, |acc, &s| acc.saturating_mul(s as u128));
    check_count("realizations", total, budgets.grid_limit)?;
    let field = alpha.field();
    let cap = alpha.rows().min(alpha.cols());
    let values: Vec<Vec<Rational>> = alpha
        .entries
        .iter()
        .map(|e| match e {
            SubsetEntry::Singleton(v) => vec![v.clone()],
            SubsetEntry::FiniteSet(vs) => vs.clone(),
            SubsetEntry::Any => unreachable!(),
        })
        .collect();
    let mut digits = vec![0usize; sizes.len()];
    let mut best = 0;
    loop {
        let data = digits.iter().zip(&values).map(|(&d, vs)| vs[d].clone()).collect();
        let a = RationalMatrix::new(alpha.rows(), alpha.cols(), data)?;
        best = best.max(exact_rank(&a, field));
        if best == cap {
            return Ok(best);
        }
        let Some(k) = (0..digits.len()).find(|&k| digits[k] + 1 < sizes[k]) else {
            return Ok(best);
        };
        digits[k] += 1;
        for d in &mut digits[..k] {
            *d = 0;
        }
    }
}
