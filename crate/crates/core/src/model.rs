//! Interval matrices: derived point matrices, containment, and the
//! preprocessing transforms used by the rank decisions.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{Matrix, RationalMatrix};
use crate::rational::Rational;
use crate::signs::SignVector;

pub type IntervalMatrix = Matrix<Interval>;

impl IntervalMatrix {
    /// Builds from `(lo, hi)` pairs, reporting the first inverted entry.
    pub fn from_bounds(rows: Vec<Vec<(Rational, Rational)>>) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            let mut cells = Vec::with_capacity(row.len());
            for (j, (lo, hi)) in row.into_iter().enumerate() {
                cells.push(Interval::new(lo, hi).map_err(|_| Error::InvalidInterval { row: i, col: j })?);
            }
            out.push(cells);
        }
        Matrix::from_rows(out)
    }

    pub fn from_points(m: &RationalMatrix) -> Self {
        m.map(|v| Interval::point(v.clone()))
    }

    pub fn midpoint(&self) -> RationalMatrix {
        self.map(Interval::midpoint)
    }

    pub fn radius(&self) -> RationalMatrix {
        self.map(Interval::radius)
    }

    pub fn magnitude(&self) -> RationalMatrix {
        self.map(Interval::magnitude)
    }

    /// `(mid, rad, |α|)`.
    pub fn mid_rad_mod(&self) -> (RationalMatrix, RationalMatrix, RationalMatrix) {
        (self.midpoint(), self.radius(), self.magnitude())
    }

    pub fn lower(&self) -> RationalMatrix {
        self.map(|e| e.lo().clone())
    }

    pub fn upper(&self) -> RationalMatrix {
        self.map(|e| e.hi().clone())
    }

    pub fn contains(&self, a: &RationalMatrix) -> Result<bool> {
        self.check_same_shape(a)?;
        Ok(self.iter().zip(a.iter()).all(|(e, v)| e.contains(v)))
    }

    /// First position where `a` leaves the matrix, if any.
    pub fn first_excluded(&self, a: &RationalMatrix) -> Result<Option<(usize, usize)>> {
        self.check_same_shape(a)?;
        Ok(self
            .indexed()
            .find(|(pos, e)| !e.contains(a.get(pos.0, pos.1)))
            .map(|(pos, _)| pos))
    }

    pub fn contains_zero_matrix(&self) -> bool {
        self.iter().all(Interval::contains_zero)
    }

    pub fn is_point(&self) -> bool {
        self.iter().all(Interval::is_degenerate)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.iter().all(Interval::is_nonnegative)
    }

    /// Every row and every column has an entry not containing 0.
    pub fn is_reduced(&self) -> bool {
        let rows_ok = (0..self.rows()).all(|i| self.row(i).iter().any(|e| !e.contains_zero()));
        let cols_ok =
            (0..self.cols()).all(|j| (0..self.rows()).any(|i| !self.get(i, j).contains_zero()));
        rows_ok && cols_ok
    }

    /// Deletes every row and every column all of whose entries contain 0.
    pub fn reduce_zero_rows_cols(&self) -> Reduction {
        let mut rows: Vec<usize> = (0..self.rows()).collect();
        let mut cols: Vec<usize> = (0..self.cols()).collect();
        // Iterate to a fixpoint; one pass already suffices.
        loop {
            let kept_rows: Vec<usize> = rows
                .iter()
                .copied()
                .filter(|&i| cols.iter().any(|&j| !self.get(i, j).contains_zero()))
                .collect();
            let kept_cols: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&j| kept_rows.iter().any(|&i| !self.get(i, j).contains_zero()))
                .collect();
            if kept_rows == rows && kept_cols == cols {
                break;
            }
            rows = kept_rows;
            cols = kept_cols;
        }
        if rows.is_empty() || cols.is_empty() {
            rows.clear();
            cols.clear();
        }
        Reduction {
            matrix: self.submatrix(&rows, &cols),
            row_map: rows,
            col_map: cols,
            original_shape: self.shape(),
        }
    }

    pub fn apply_row_op(&self, op: &RowOp) -> Result<IntervalMatrix> {
        let mut out = self.clone();
        match op {
            RowOp::Swap(a, b) => {
                self.check_row(*a)?;
                self.check_row(*b)?;
                out.swap_rows(*a, *b);
            }
            RowOp::Scale(i, c) => {
                self.check_row(*i)?;
                if c.is_zero() {
                    return Err(Error::ZeroScale);
                }
                for j in 0..self.cols() {
                    out.set(*i, j, self.get(*i, j).scale(c));
                }
            }
            RowOp::AddMultiple {
                target,
                source,
                factor,
            } => {
                self.check_row(*target)?;
                self.check_row(*source)?;
                if target == source {
                    return Err(Error::PreconditionViolated(
                        "row operation must add a multiple of a different row".into(),
                    ));
                }
                for j in 0..self.cols() {
                    let added = self.get(*source, j).scale(factor);
                    out.set(*target, j, self.get(*target, j).add(&added));
                }
            }
        }
        Ok(out)
    }

    /// Column operations, applied through the transpose.
    pub fn apply_col_op(&self, op: &RowOp) -> Result<IntervalMatrix> {
        Ok(self.transpose().apply_row_op(op)?.transpose())
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if i >= self.rows() {
            return Err(Error::PreconditionViolated(format!(
                "row {i} out of range for {} rows",
                self.rows()
            )));
        }
        Ok(())
    }

    /// Positions (row-major) of entries with `lo < 0 < hi`.
    pub fn straddling_positions(&self) -> Vec<(usize, usize)> {
        self.indexed()
            .filter(|(_, e)| e.straddles_zero())
            .map(|(pos, _)| pos)
            .collect()
    }

    /// Lazily enumerates the `2^k` matrices obtained by splitting each of the
    /// `k` zero-straddling entries into its nonpositive or nonnegative part.
    pub fn sign_branches(&self) -> SignBranches<'_> {
        SignBranches::new(self)
    }

    /// Multiplies rows and columns by the given signs.
    pub fn apply_signs(&self, rows: &SignVector, cols: &SignVector) -> IntervalMatrix {
        Matrix::from_fn(self.rows(), self.cols(), |i, j| {
            let e = self.get(i, j);
            if rows.get(i) * cols.get(j) < 0 {
                e.neg()
            } else {
                e.clone()
            }
        })
    }

    /// Flips signs of rows and columns so the first row and column are
    /// nonnegative, then clamps every entry to its nonnegative part. Requires
    /// every entry to be sign-definite (no `lo < 0 < hi`).
    pub fn normalize_and_clamp(&self) -> Result<Normalization> {
        if let Some((i, j)) = self.straddling_positions().first() {
            return Err(Error::PreconditionViolated(format!(
                "entry ({i}, {j}) straddles zero"
            )));
        }
        let mut row_signs = SignVector::positive(self.rows());
        let mut col_signs = SignVector::positive(self.cols());
        if self.is_empty() {
            return Ok(Normalization::Clamped {
                matrix: self.clone(),
                row_signs,
                col_signs,
            });
        }
        let wants_flip = |e: &Interval| e.is_nonpositive() && !e.is_nonnegative();
        for i in 0..self.rows() {
            if wants_flip(self.get(i, 0)) {
                row_signs.flip(i);
            }
        }
        for j in 1..self.cols() {
            let e = self.get(0, j);
            let e = if row_signs.get(0) < 0 { e.neg() } else { e.clone() };
            if wants_flip(&e) {
                col_signs.flip(j);
            }
        }
        let flipped = self.apply_signs(&row_signs, &col_signs);
        if let Some(((row, col), _)) = flipped.indexed().find(|(_, e)| e.is_negative()) {
            return Ok(Normalization::NegativeEntry {
                row,
                col,
                row_signs,
                col_signs,
            });
        }
        Ok(Normalization::Clamped {
            matrix: flipped.map(Interval::clamp_nonnegative),
            row_signs,
            col_signs,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOp {
    Swap(usize, usize),
    Scale(usize, Rational),
    AddMultiple {
        target: usize,
        source: usize,
        factor: Rational,
    },
}

/// A reduced matrix together with the original indices of its rows and
/// columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub matrix: IntervalMatrix,
    pub row_map: Vec<usize>,
    pub col_map: Vec<usize>,
    pub original_shape: (usize, usize),
}

impl Reduction {
    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.row_map.len() == self.original_shape.0 && self.col_map.len() == self.original_shape.1
    }

    /// Re-embeds a matrix of the reduced shape, padding deleted lines with
    /// zeros.
    pub fn embed(&self, reduced: &RationalMatrix) -> RationalMatrix {
        assert_eq!(reduced.shape(), self.matrix.shape());
        let mut out = RationalMatrix::zeros(self.original_shape.0, self.original_shape.1);
        for (ri, &i) in self.row_map.iter().enumerate() {
            for (rj, &j) in self.col_map.iter().enumerate() {
                out.set(i, j, reduced.get(ri, rj).clone());
            }
        }
        out
    }

    /// Extends a vector over reduced rows (or columns) with zeros.
    pub fn embed_vector(map: &[usize], len: usize, values: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (k, &i) in map.iter().enumerate() {
            out[i] = values[k].clone();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalization {
    /// Sign-flipped and clamped matrix with all entries nonnegative.
    Clamped {
        matrix: IntervalMatrix,
        row_signs: SignVector,
        col_signs: SignVector,
    },
    /// After the flips, entry `(row, col)` lies in the negative reals, so no
    /// rank-one matrix is contained.
    NegativeEntry {
        row: usize,
        col: usize,
        row_signs: SignVector,
        col_signs: SignVector,
    },
}

/// One matrix from [`IntervalMatrix::sign_branches`]; bit `k` of `index`
/// selects the nonnegative half of the `k`-th straddling entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignBranch {
    pub index: u128,
    pub splits: Vec<bool>,
    pub matrix: IntervalMatrix,
}

pub struct SignBranches<'a> {
    base: &'a IntervalMatrix,
    positions: Vec<(usize, usize)>,
    next: u128,
    total: Option<u128>,
}

impl<'a> SignBranches<'a> {
    fn new(base: &'a IntervalMatrix) -> Self {
        let positions = base.straddling_positions();
        let total = 1u128.checked_shl(positions.len() as u32);
        Self {
            base,
            positions,
            next: 0,
            total,
        }
    }

    /// `2^k`, or `None` when that does not fit in 128 bits.
    pub fn total(&self) -> Option<u128> {
        self.total
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    pub fn branch(&self, index: u128) -> SignBranch {
        let splits: Vec<bool> = (0..self.positions.len()).map(|k| index >> k & 1 == 1).collect();
        let mut matrix = self.base.clone();
        for (&(i, j), &upper) in self.positions.iter().zip(&splits) {
            let e = self.base.get(i, j);
            let part = if upper {
                Interval::new(Rational::zero(), e.hi().clone())
            } else {
                Interval::new(e.lo().clone(), Rational::zero())
            }
            .expect("straddling entry splits at zero");
            matrix.set(i, j, part);
        }
        SignBranch {
            index,
            splits,
            matrix,
        }
    }
}

impl Iterator for SignBranches<'_> {
    type Item = SignBranch;

    fn next(&mut self) -> Option<SignBranch> {
        let total = self.total.unwrap_or(u128::MAX);
        if self.next >= total {
            return None;
        }
        let b = self.branch(self.next);
        self.next += 1;
        Some(b)
    }
}

/// First row and first column lie in the nonnegative reals.
pub(crate) fn first_line_nonnegative(m: &IntervalMatrix) -> bool {
    if m.is_empty() {
        return true;
    }
    (0..m.rows()).all(|i| m.get(i, 0).is_nonnegative())
        && (0..m.cols()).all(|j| m.get(0, j).is_nonnegative())
}
