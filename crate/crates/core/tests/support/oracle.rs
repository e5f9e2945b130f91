//! Reference implementations for tests. They use i128 fractions parsed from
//! the canonical strings, so nothing is shared with the library arithmetic.
#![allow(dead_code)]

use std::cmp::Ordering;

use qrank_core::{format_rational, Interval, IntervalMatrix, RationalMatrix};

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frac {
    pub n: i128,
    pub d: i128,
}

impl Frac {
    pub fn new(n: i128, d: i128) -> Self {
        assert!(d != 0);
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Frac { n: s * n / g, d: s * d / g }
    }

    pub fn int(n: i128) -> Self {
        Frac { n, d: 1 }
    }

    pub fn parse(s: &str) -> Self {
        match s.split_once('/') {
            Some((n, d)) => Frac::new(n.parse().unwrap(), d.parse().unwrap()),
            None => Frac::int(s.parse().unwrap()),
        }
    }

    pub fn of(r: &qrank_core::Rational) -> Self {
        Frac::parse(&format_rational(r))
    }

    pub fn add(self, o: Frac) -> Frac {
        Frac::new(self.n * o.d + o.n * self.d, self.d * o.d)
    }

    pub fn sub(self, o: Frac) -> Frac {
        Frac::new(self.n * o.d - o.n * self.d, self.d * o.d)
    }

    pub fn mul(self, o: Frac) -> Frac {
        Frac::new(self.n * o.n, self.d * o.d)
    }

    pub fn div(self, o: Frac) -> Frac {
        Frac::new(self.n * o.d, self.d * o.n)
    }

    pub fn is_zero(self) -> bool {
        self.n == 0
    }

    pub fn signum(self) -> i128 {
        self.n.signum()
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, o: &Frac) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Frac {
    fn cmp(&self, o: &Frac) -> Ordering {
        (self.n * o.d).cmp(&(o.n * self.d))
    }
}

pub type Grid = Vec<Vec<Frac>>;

pub fn grid(m: &RationalMatrix) -> Grid {
    (0..m.rows()).map(|i| m.row(i).iter().map(Frac::of).collect()).collect()
}

/// Rank by plain Gaussian elimination.
pub fn rank(rows: &Grid) -> usize {
    let mut a = rows.clone();
    let (p, q) = (a.len(), a.first().map_or(0, Vec::len));
    let mut r = 0;
    for c in 0..q {
        let Some(k) = (r..p).find(|&k| !a[k][c].is_zero()) else { continue };
        a.swap(r, k);
        for i in r + 1..p {
            let f = a[i][c].div(a[r][c]);
            for j in c..q {
                a[i][j] = a[i][j].sub(f.mul(a[r][j]));
            }
        }
        r += 1;
    }
    r
}

/// Determinant by cofactor expansion.
pub fn det(rows: &Grid) -> Frac {
    let n = rows.len();
    if n == 0 {
        return Frac::int(1);
    }
    let mut total = Frac::int(0);
    for j in 0..n {
        let minor: Grid = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| *v).collect())
            .collect();
        let term = rows[0][j].mul(det(&minor));
        total = if j % 2 == 0 { total.add(term) } else { total.sub(term) };
    }
    total
}

pub fn bounds(a: &IntervalMatrix) -> Vec<Vec<(Frac, Frac)>> {
    (0..a.rows())
        .map(|i| a.row(i).iter().map(|e: &Interval| (Frac::of(e.lo()), Frac::of(e.hi()))).collect())
        .collect()
}

/// Every vertex matrix: each entry at one of its endpoints.
pub fn vertices(a: &IntervalMatrix) -> Vec<Grid> {
    let b = bounds(a);
    let cells: Vec<(usize, usize)> = (0..a.rows())
        .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
        .filter(|&(i, j)| b[i][j].0 != b[i][j].1)
        .collect();
    (0..1u64 << cells.len())
        .map(|mask| {
            let mut g: Grid = b.iter().map(|r| r.iter().map(|e| e.0).collect()).collect();
            for (k, &(i, j)) in cells.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    g[i][j] = b[i][j].1;
                }
            }
            g
        })
        .collect()
}

/// Largest rank over the box; minors are affine in each entry, so some
/// vertex attains it.
pub fn vertex_max_rank(a: &IntervalMatrix) -> usize {
    vertices(a).iter().map(rank).max().unwrap_or(0)
}

/// A square box is regular iff all vertex determinants share a strict sign.
pub fn vertex_regular(a: &IntervalMatrix) -> bool {
    let signs: Vec<i128> = vertices(a).iter().map(|g| det(g).signum()).collect();
    signs.iter().all(|&s| s == 1) || signs.iter().all(|&s| s == -1)
}

pub fn contains(a: &IntervalMatrix, m: &RationalMatrix) -> bool {
    let b = bounds(a);
    let g = grid(m);
    g.len() == b.len()
        && g.iter().zip(&b).all(|(gr, br)| {
            gr.len() == br.len() && gr.iter().zip(br).all(|(v, (lo, hi))| lo <= v && v <= hi)
        })
}

pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|v| v % p).collect()).collect();
    let (n, q) = (a.len(), a.first().map_or(0, Vec::len));
    let inv = |x: u64| (1..p).find(|y| x * y % p == 1).unwrap();
    let mut r = 0;
    for c in 0..q {
        let Some(k) = (r..n).find(|&k| a[k][c] != 0) else { continue };
        a.swap(r, k);
        let f = inv(a[r][c]);
        for i in r + 1..n {
            let m = a[i][c] * f % p;
            for j in c..q {
                a[i][j] = (a[i][j] + p * p - m * a[r][j] % p) % p;
            }
        }
        r += 1;
    }
    r
}
