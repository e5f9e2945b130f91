//! Deterministic benchmark instances.

use qrank_core::{Interval, IntervalMatrix, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// A diagonally dominant p x p matrix with small radii: full rank.
pub fn dominant(p: usize) -> IntervalMatrix {
    IntervalMatrix::from_fn(p, p, |i, j| {
        let c = if i == j { q(4 * p as i64, 1) } else { q(((i * 7 + j * 3) % 5) as i64 - 2, 2) };
        Interval::new(&c - q(1, 4), &c + q(1, 4)).unwrap()
    })
}

/// A p x q matrix whose entries all straddle zero except for a positive diagonal.
pub fn wide(p: usize, q_: usize) -> IntervalMatrix {
    IntervalMatrix::from_fn(p, q_, |i, j| {
        if i == j {
            Interval::new(q(1, 1), q(2, 1)).unwrap()
        } else {
            Interval::new(q(-((i + j) as i64 % 3) - 1, 2), q((i * j) as i64 % 4 + 1, 2)).unwrap()
        }
    })
}

/// Intervals around the outer product of (1, 2, ..., p) and (1, -1, 2, -2, ...).
pub fn near_rank_one(p: usize, q_: usize) -> IntervalMatrix {
    IntervalMatrix::from_fn(p, q_, |i, j| {
        let v = if j % 2 == 0 { (j / 2 + 1) as i64 } else { -((j / 2 + 1) as i64) };
        let c = q((i as i64 + 1) * v, 1);
        if (i + j) % 3 == 0 {
            Interval::point(c)
        } else {
            Interval::new(&c - q(1, 3), &c + q(1, 2)).unwrap()
        }
    })
}
