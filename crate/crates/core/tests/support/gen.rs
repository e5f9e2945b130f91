//! Seeded random instances.
#![allow(dead_code)]

use qrank_core::{Interval, IntervalMatrix, Rational};
use rand::Rng;

pub fn rational(rng: &mut impl Rng, num: i64, dens: &[i64]) -> Rational {
    let d = dens[rng.gen_range(0..dens.len())];
    Rational::new(rng.gen_range(-num..=num).into(), d.into())
}

/// Endpoints drawn independently and sorted; degenerate with probability
/// `point`.
pub fn interval(rng: &mut impl Rng, num: i64, dens: &[i64], point: f64) -> Interval {
    let a = rational(rng, num, dens);
    if rng.gen_bool(point) {
        return Interval::point(a);
    }
    let b = rational(rng, num, dens);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Interval::new(lo, hi).unwrap()
}

pub fn interval_matrix(rng: &mut impl Rng, p: usize, q: usize, num: i64, dens: &[i64], point: f64) -> IntervalMatrix {
    IntervalMatrix::from_fn(p, q, |_, _| interval(rng, num, dens, point))
}

/// Nonnegative intervals with positive lower ends in every row and column.
pub fn reduced_nonnegative(rng: &mut impl Rng, p: usize, q: usize, num: i64, point: f64) -> IntervalMatrix {
    loop {
        let m = IntervalMatrix::from_fn(p, q, |_, _| {
            let a = Rational::from_integer(rng.gen_range(0..=num).into());
            let b = Rational::from_integer(rng.gen_range(0..=num).into());
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            if rng.gen_bool(point) {
                Interval::point(lo)
            } else {
                Interval::new(lo, hi).unwrap()
            }
        });
        if m.is_reduced() {
            return m;
        }
    }
}

/// A point from the interval: an endpoint or an interior rational.
pub fn point_in(rng: &mut impl Rng, e: &Interval) -> Rational {
    match rng.gen_range(0..3) {
        0 => e.lo().clone(),
        1 => e.hi().clone(),
        _ => {
            let t = Rational::new(rng.gen_range(0..=8).into(), 8.into());
            e.lo() + (e.hi() - e.lo()) * t
        }
    }
}
