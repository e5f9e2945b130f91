use std::fmt;

use crate::error::{Error, Result};

/// A vector over `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(components: Vec<i8>) -> Result<Self> {
        if components.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::PreconditionViolated(
                "sign vector components must be -1 or +1".into(),
            ));
        }
        Ok(Self(components))
    }

    pub fn positive(len: usize) -> Self {
        Self(vec![1; len])
    }

    /// The sign vector whose bit `k` (least significant first) selects `-1`
    /// for component `k`.
    pub fn from_index(len: usize, index: u64) -> Self {
        Self(
            (0..len)
                .map(|k| if index >> k & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, k: usize) -> i8 {
        self.0[k]
    }

    pub fn components(&self) -> &[i8] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    pub(crate) fn flip(&mut self, k: usize) {
        self.0[k] = -self.0[k];
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self.0.iter().map(|&v| if v > 0 { "+" } else { "-" }).collect();
        write!(f, "({})", s.join(""))
    }
}
