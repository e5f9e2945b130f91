use crate::error::{Error, Result};
use crate::fourier_motzkin::DEFAULT_ELIMINATION_LIMIT;

/// Explicit limits on the exponential searches. Exceeding one is an error,
/// never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Sign orthants (null-vector search) and sign-pair classes (square test).
    pub orthant_limit: u64,
    /// Sign branches explored by the rank-one pipeline.
    pub branch_limit: u64,
    /// Largest `h` the brute-force rank-one criterion may be asked to reach.
    pub h_cap: u64,
    /// Enumerated realizations, submatrices or diagonals in subset-matrix work.
    pub grid_limit: u64,
    /// Constraints alive during Fourier-Motzkin elimination.
    pub elimination_limit: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            orthant_limit: 1 << 12,
            branch_limit: 1 << 12,
            h_cap: 4,
            grid_limit: 1 << 20,
            elimination_limit: DEFAULT_ELIMINATION_LIMIT,
        }
    }
}

/// `2^exp` checked against `limit`.
pub(crate) fn check_pow2(what: &'static str, exp: usize, limit: u64) -> Result<u64> {
    let required = 1u128.checked_shl(exp as u32).unwrap_or(u128::MAX);
    if exp >= 127 || required > limit as u128 {
        return Err(Error::SizeLimitExceeded {
            what,
            required,
            limit: limit as u128,
        });
    }
    Ok(required as u64)
}

pub(crate) fn check_count(what: &'static str, required: u128, limit: u64) -> Result<()> {
    if required > limit as u128 {
        return Err(Error::SizeLimitExceeded {
            what,
            required,
            limit: limit as u128,
        });
    }
    Ok(())
}
