//! Exact feasibility of closed rational linear systems by Fourier-Motzkin
//! elimination.
//!
//! Every derived inequality carries the nonnegative combination of input
//! constraints that produced it, so an infeasible system comes back with a
//! Farkas certificate: multipliers `y` (nonnegative on inequalities, free on
//! equalities) with `yᵀA = 0` and `yᵀb < 0`.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_ELIMINATION_LIMIT: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `a·x <= b`
    Le,
    /// `a·x = b`
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    vars: usize,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// One multiplier per constraint of the system it refutes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            constraints: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.vars, "coefficient vector length");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn push_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push(coeffs, Relation::Le, rhs);
    }

    /// `a·x >= b`, stored as `-a·x <= -b`.
    pub fn push_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push(coeffs.into_iter().map(|c| -c).collect(), Relation::Le, -rhs);
    }

    pub fn push_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push(coeffs, Relation::Eq, rhs);
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.vars
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coeffs, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    /// Checks a Farkas certificate against this system.
    pub fn is_refuted_by(&self, cert: &FarkasCertificate) -> bool {
        if cert.multipliers.len() != self.constraints.len() {
            return false;
        }
        let mut combined = vec![Rational::zero(); self.vars];
        let mut rhs = Rational::zero();
        for (y, c) in cert.multipliers.iter().zip(&self.constraints) {
            if c.relation == Relation::Le && y.is_negative() {
                return false;
            }
            for (acc, a) in combined.iter_mut().zip(&c.coeffs) {
                *acc += y * a;
            }
            rhs += y * &c.rhs;
        }
        combined.iter().all(Zero::is_zero) && rhs.is_negative()
    }

    /// Decides feasibility; the derived-constraint count may not exceed
    /// `limit`.
    pub fn solve(&self, limit: usize) -> Result<Feasibility> {
        let m = self.constraints.len();
        let mut rows = Vec::with_capacity(m);
        for (idx, c) in self.constraints.iter().enumerate() {
            rows.push(Row::input(idx, m, c.coeffs.clone(), c.rhs.clone(), Rational::from_integer(1.into())));
            if c.relation == Relation::Eq {
                rows.push(Row::input(
                    idx,
                    m,
                    c.coeffs.iter().map(|v| -v).collect(),
                    -&c.rhs,
                    Rational::from_integer((-1).into()),
                ));
            }
        }
        let mut rows = match dedupe(rows) {
            Ok(rows) => rows,
            Err(combo) => return Ok(Feasibility::Infeasible(FarkasCertificate { multipliers: combo })),
        };
        check_limit(rows.len(), limit)?;

        // bounds[k]: the constraints that still mentioned x_k when it was
        // eliminated; they only involve x_0..=x_k.
        let mut bounds: Vec<Vec<(Vec<Rational>, Rational)>> = vec![Vec::new(); self.vars];
        for k in (0..self.vars).rev() {
            let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
            for row in rows {
                match row.coeffs[k].sign_class() {
                    std::cmp::Ordering::Greater => pos.push(row),
                    std::cmp::Ordering::Less => neg.push(row),
                    std::cmp::Ordering::Equal => rest.push(row),
                }
            }
            check_limit(rest.len() + pos.len() * neg.len(), limit)?;
            for p in &pos {
                for n in &neg {
                    rest.push(p.combine(n, k));
                }
            }
            bounds[k] = pos
                .into_iter()
                .chain(neg)
                .map(|r| (r.coeffs, r.rhs))
                .collect();
            rows = match dedupe(rest) {
                Ok(rows) => rows,
                Err(combo) => {
                    return Ok(Feasibility::Infeasible(FarkasCertificate { multipliers: combo }))
                }
            };
        }
        debug_assert!(rows.is_empty());

        let mut x = vec![Rational::zero(); self.vars];
        for k in 0..self.vars {
            let mut lo: Option<Rational> = None;
            let mut hi: Option<Rational> = None;
            for (coeffs, rhs) in &bounds[k] {
                let partial = (0..k).fold(rhs.clone(), |acc, j| acc - &coeffs[j] * &x[j]);
                let bound = partial / &coeffs[k];
                if coeffs[k].is_positive() {
                    if hi.as_ref().map_or(true, |h| &bound < h) {
                        hi = Some(bound);
                    }
                } else if lo.as_ref().map_or(true, |l| &bound > l) {
                    lo = Some(bound);
                }
            }
            x[k] = closest_to_zero(lo, hi);
        }
        debug_assert!(self.is_satisfied_by(&x), "back-substitution produced an infeasible point");
        Ok(Feasibility::Feasible(x))
    }
}

/// Returns a rational feasible point, or `None` when the system is infeasible.
pub fn fourier_motzkin_feasible(system: &LinearSystem, limit: usize) -> Result<Option<Vec<Rational>>> {
    Ok(match system.solve(limit)? {
        Feasibility::Feasible(x) => Some(x),
        Feasibility::Infeasible(_) => None,
    })
}

fn check_limit(constraints: usize, limit: usize) -> Result<()> {
    if constraints > limit {
        return Err(Error::EliminationBlowup { constraints, limit });
    }
    Ok(())
}

fn closest_to_zero(lo: Option<Rational>, hi: Option<Rational>) -> Rational {
    let zero = Rational::zero();
    match (lo, hi) {
        (Some(l), _) if l.is_positive() => l,
        (_, Some(h)) if h.is_negative() => h,
        _ => zero,
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

trait SignClass {
    fn sign_class(&self) -> std::cmp::Ordering;
}

impl SignClass for Rational {
    fn sign_class(&self) -> std::cmp::Ordering {
        if self.is_positive() {
            std::cmp::Ordering::Greater
        } else if self.is_negative() {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Equal
        }
    }
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<Rational>,
    rhs: Rational,
    /// Multipliers over the original constraints.
    combo: Vec<Rational>,
}

impl Row {
    fn input(idx: usize, m: usize, coeffs: Vec<Rational>, rhs: Rational, weight: Rational) -> Self {
        let mut combo = vec![Rational::zero(); m];
        combo[idx] = weight;
        Row { coeffs, rhs, combo }
    }

    /// Positive combination of `self` (coefficient > 0 on `k`) and `other`
    /// (coefficient < 0 on `k`) that cancels `x_k`.
    fn combine(&self, other: &Row, k: usize) -> Row {
        let wp = -&other.coeffs[k];
        let wn = self.coeffs[k].clone();
        let mix = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
            a.iter().zip(b).map(|(x, y)| x * &wp + y * &wn).collect()
        };
        let mut coeffs = mix(&self.coeffs, &other.coeffs);
        coeffs[k] = Rational::zero();
        Row {
            coeffs,
            rhs: &self.rhs * &wp + &other.rhs * &wn,
            combo: mix(&self.combo, &other.combo),
        }
    }

    /// Scales by a positive factor so the first nonzero coefficient is ±1.
    fn normalized(mut self) -> Row {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(Signed::abs) {
            for c in self.coeffs.iter_mut().chain(self.combo.iter_mut()) {
                *c /= &lead;
            }
            self.rhs /= &lead;
        }
        self
    }
}

/// Drops trivially true rows and keeps the tightest of parallel rows.
/// Returns the combination of a contradictory row `0 <= negative` if found.
fn dedupe(rows: Vec<Row>) -> std::result::Result<Vec<Row>, Vec<Rational>> {
    let mut out: Vec<Row> = Vec::with_capacity(rows.len());
    let mut seen: HashMap<Vec<Rational>, usize> = HashMap::new();
    for row in rows {
        if row.coeffs.iter().all(Zero::is_zero) {
            if row.rhs.is_negative() {
                return Err(row.combo);
            }
            continue;
        }
        let row = row.normalized();
        match seen.get(&row.coeffs) {
            Some(&at) => {
                if row.rhs < out[at].rhs {
                    out[at] = row;
                }
            }
            None => {
                seen.insert(row.coeffs.clone(), out.len());
                out.push(row);
            }
        }
    }
    Ok(out)
}
