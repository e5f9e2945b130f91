//! The scalar fields a subset matrix may live over.
//!
//! Elements are carried as [`Rational`] values in both cases; over GF(p) an
//! element is an integer residue in `0..p`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    Prime(u64),
}

impl FieldDescriptor {
    pub fn prime(modulus: u64) -> Result<Self> {
        if is_prime(modulus) {
            Ok(FieldDescriptor::Prime(modulus))
        } else {
            Err(Error::NotPrime { modulus })
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldDescriptor::Prime(_))
    }

    /// Whether `value` is a canonical element of this field.
    pub fn contains(&self, value: &Rational) -> bool {
        match self {
            FieldDescriptor::Rationals => true,
            FieldDescriptor::Prime(p) => {
                value.is_integer()
                    && value.numer() >= &BigInt::zero()
                    && value.numer() < &BigInt::from(*p)
            }
        }
    }

    /// Maps an integer into the field.
    pub fn from_int(&self, value: i64) -> Rational {
        match self {
            FieldDescriptor::Rationals => Rational::from_integer(value.into()),
            FieldDescriptor::Prime(p) => {
                let r = (value as i128).rem_euclid(*p as i128) as u64;
                residue(r)
            }
        }
    }

    pub fn zero(&self) -> Rational {
        Rational::zero()
    }

    pub fn one(&self) -> Rational {
        self.from_int(1)
    }

    pub fn add(&self, a: &Rational, b: &Rational) -> Rational {
        match self {
            FieldDescriptor::Rationals => a + b,
            FieldDescriptor::Prime(p) => {
                residue(((to_u64(a) as u128 + to_u64(b) as u128) % *p as u128) as u64)
            }
        }
    }

    pub fn neg(&self, a: &Rational) -> Rational {
        match self {
            FieldDescriptor::Rationals => -a,
            FieldDescriptor::Prime(p) => {
                let r = to_u64(a);
                residue(if r == 0 { 0 } else { p - r })
            }
        }
    }

    pub fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        match self {
            FieldDescriptor::Rationals => a * b,
            FieldDescriptor::Prime(p) => {
                residue(((to_u64(a) as u128 * to_u64(b) as u128) % *p as u128) as u64)
            }
        }
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: &Rational) -> Rational {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            FieldDescriptor::Rationals => a.recip(),
            FieldDescriptor::Prime(p) => residue(pow_mod(to_u64(a), p - 2, *p)),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Prime(p) => write!(f, "GF:{p}"),
        }
    }
}

fn residue(r: u64) -> Rational {
    Rational::from_integer(BigInt::from(r))
}

fn to_u64(a: &Rational) -> u64 {
    a.to_integer()
        .to_u64()
        .expect("prime-field element is a residue in 0..p")
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
