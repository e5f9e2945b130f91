//! Dense matrices and exact rank/determinant over Q and GF(p).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::rational::{lcm_of_denominators, Rational};

/// Row-major `rows x cols` grid. Zero-sized matrices are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RationalMatrix = Matrix<Rational>;

impl<T> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: (rows, cols),
                found: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds from nested rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: (n, m),
                    found: (n, row.len()),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n,
            cols: m,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    /// Entries with their `(row, col)` positions in row-major order.
    pub fn indexed(&self) -> impl Iterator<Item = ((usize, usize), &T)> {
        let cols = self.cols.max(1);
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| ((k / cols, k % cols), v))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix<T>
    where
        T: Clone,
    {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<T>
    where
        T: Clone,
    {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn check_same_shape<U>(&self, other: &Matrix<U>) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(())
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        })
    }

    /// Outer product `u vᵀ`.
    pub fn outer(u: &[Rational], v: &[Rational]) -> RationalMatrix {
        Matrix::from_fn(u.len(), v.len(), |i, j| &u[i] * &v[j])
    }

    /// Row `i` scaled to integers by the lcm of its denominators.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale_product = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let l = lcm_of_denominators(self.row(i));
                scale_product *= &l;
                let l = Rational::from_integer(l);
                self.row(i).iter().map(|v| (v * &l).to_integer()).collect()
            })
            .collect();
        (rows, scale_product)
    }
}

/// Rank of `m` over `field`.
///
/// Over Q this clears denominators row by row and runs fraction-free
/// (Bareiss) elimination on integers; over GF(p) it is plain modular
/// Gaussian elimination.
pub fn exact_rank(m: &RationalMatrix, field: FieldDescriptor) -> usize {
    match field {
        FieldDescriptor::Rationals => {
            let (mut rows, _) = m.integer_rows();
            bareiss_echelon(&mut rows, m.cols).0
        }
        FieldDescriptor::Prime(_) => modular_echelon(m, field).0,
    }
}

/// Determinant of a square matrix over `field`; the 0x0 determinant is 1.
pub fn determinant(m: &RationalMatrix, field: FieldDescriptor) -> Rational {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    match field {
        FieldDescriptor::Rationals => {
            let (mut rows, scale) = m.integer_rows();
            let (rank, det) = bareiss_echelon(&mut rows, m.cols);
            if rank < m.rows {
                Rational::zero()
            } else {
                Rational::new(det, scale)
            }
        }
        FieldDescriptor::Prime(_) => {
            let (rank, det) = modular_echelon(m, field);
            if rank < m.rows {
                Rational::zero()
            } else {
                det
            }
        }
    }
}

/// Fraction-free row echelon reduction in place. Returns the rank and, for a
/// full-rank square input, the determinant (the last pivot, sign-corrected).
fn bareiss_echelon(a: &mut [Vec<BigInt>], cols: usize) -> (usize, BigInt) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign_flip = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        // Smallest nonzero pivot keeps intermediate numbers short.
        let pivot = (rank..rows)
            .filter(|&r| !a[r][col].is_zero())
            .min_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()));
        let Some(pivot) = pivot else { continue };
        if pivot != rank {
            a.swap(pivot, rank);
            sign_flip = !sign_flip;
        }
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division is exact");
                a[r][c] = q;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    let det = if sign_flip { -prev } else { prev };
    (rank, det)
}

fn modular_echelon(m: &RationalMatrix, field: FieldDescriptor) -> (usize, Rational) {
    let mut a = m.to_rows();
    let (rows, cols) = m.shape();
    let mut rank = 0;
    let mut det = field.one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            a.swap(pivot, rank);
            det = field.neg(&det);
        }
        let inv = field.inv(&a[rank][col]);
        det = field.mul(&det, &a[rank][col]);
        for r in rank + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = field.mul(&a[r][col], &inv);
            for c in col..cols {
                let delta = field.mul(&factor, &a[rank][c]);
                a[r][c] = field.sub(&a[r][c], &delta);
            }
        }
        rank += 1;
    }
    (rank, det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn qm(rows: &[&[i64]]) -> RationalMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(exact_rank(&RationalMatrix::identity(3), FieldDescriptor::Rationals), 3);
        assert_eq!(exact_rank(&qm(&[&[1, 2], &[2, 4]]), FieldDescriptor::Rationals), 1);
        // Over GF(2): det = 1*0 - 1*1 = 1 != 0.
        let gf2 = FieldDescriptor::prime(2).unwrap();
        assert_eq!(exact_rank(&qm(&[&[1, 1], &[1, 0]]), gf2), 2);
        assert_eq!(exact_rank(&qm(&[&[1, 1], &[1, 1]]), gf2), 1);
        assert_eq!(exact_rank(&RationalMatrix::zeros(2, 3), FieldDescriptor::Rationals), 0);
        assert_eq!(exact_rank(&RationalMatrix::zeros(0, 3), FieldDescriptor::Rationals), 0);
    }

    #[test]
    fn rank_with_fractions_and_skipped_columns() {
        let m = Matrix::from_rows(vec![
            vec![int(0), ratio(1, 2), int(1)],
            vec![int(0), ratio(1, 3), ratio(2, 3)],
            vec![int(0), int(0), int(5)],
        ])
        .unwrap();
        assert_eq!(exact_rank(&m, FieldDescriptor::Rationals), 2);
    }

    #[test]
    fn determinant_examples() {
        let q = FieldDescriptor::Rationals;
        assert_eq!(determinant(&qm(&[&[2, 1], &[1, 2]]), q), int(3));
        assert_eq!(determinant(&qm(&[&[0, 1], &[1, 0]]), q), int(-1));
        assert_eq!(determinant(&qm(&[&[1, 2], &[2, 4]]), q), int(0));
        assert_eq!(determinant(&RationalMatrix::zeros(0, 0), q), int(1));
        let m = Matrix::from_rows(vec![
            vec![ratio(1, 2), int(1)],
            vec![int(1), ratio(1, 3)],
        ])
        .unwrap();
        assert_eq!(determinant(&m, q), ratio(1, 6) - int(1));
        let gf3 = FieldDescriptor::prime(3).unwrap();
        assert_eq!(determinant(&qm(&[&[0, 1], &[1, 0]]), gf3), int(2));
    }

    /// Leibniz expansion, used as an independent reference.
    fn leibniz(m: &RationalMatrix, field: FieldDescriptor) -> Rational {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = vec![];
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.rows();
        let mut total = field.zero();
        for p in perms(n) {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let mut term = field.one();
            for (i, &pi) in p.iter().enumerate() {
                term = field.mul(&term, m.get(i, pi));
            }
            if inversions % 2 == 1 {
                term = field.neg(&term);
            }
            total = field.add(&total, &term);
        }
        total
    }

    /// Rank by largest nonvanishing minor.
    fn minor_rank(m: &RationalMatrix, field: FieldDescriptor) -> usize {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        for t in (1..=m.rows().min(m.cols())).rev() {
            for r in subsets(m.rows(), t) {
                for c in subsets(m.cols(), t) {
                    if !leibniz(&m.submatrix(&r, &c), field).is_zero() {
                        return t;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rank_agrees_with_minor_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..600 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let m = Matrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-2..=2)));
            let q = FieldDescriptor::Rationals;
            assert_eq!(exact_rank(&m, q), minor_rank(&m, q), "{m}");
            if rows == cols {
                assert_eq!(determinant(&m, q), leibniz(&m, q));
            }
            for p in [2, 3, 5] {
                let f = FieldDescriptor::prime(p).unwrap();
                let mp = m.map(|v| f.from_int(v.to_integer().try_into().unwrap()));
                assert_eq!(exact_rank(&mp, f), minor_rank(&mp, f));
                if rows == cols {
                    assert_eq!(determinant(&mp, f), leibniz(&mp, f));
                }
            }
        }
    }
}
