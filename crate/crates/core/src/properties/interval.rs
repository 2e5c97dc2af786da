//! Integer intervals with optional infinite endpoints, and properties built
//! from rows of them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::PropertyError;

/// `[lower, upper]` where `None` stands for −∞ (lower) or +∞ (upper).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lower: Option<BigInt>,
    upper: Option<BigInt>,
}

impl Interval {
    pub fn new(lower: Option<BigInt>, upper: Option<BigInt>) -> Result<Self, PropertyError> {
        if let (Some(a), Some(b)) = (&lower, &upper) {
            if a > b {
                return Err(PropertyError::EmptyInterval {
                    lower: a.clone(),
                    upper: b.clone(),
                });
            }
        }
        Ok(Interval { lower, upper })
    }

    /// `(−∞, +∞)`.
    pub fn all() -> Self {
        Interval {
            lower: None,
            upper: None,
        }
    }

    /// `[a, +∞)`.
    pub fn at_least(a: impl Into<BigInt>) -> Self {
        Interval {
            lower: Some(a.into()),
            upper: None,
        }
    }

    /// `(−∞, b]`.
    pub fn at_most(b: impl Into<BigInt>) -> Self {
        Interval {
            lower: None,
            upper: Some(b.into()),
        }
    }

    /// `[a, b]`.
    pub fn between(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self, PropertyError> {
        Interval::new(Some(a.into()), Some(b.into()))
    }

    pub fn lower(&self) -> Option<&BigInt> {
        self.lower.as_ref()
    }

    pub fn upper(&self) -> Option<&BigInt> {
        self.upper.as_ref()
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        self.lower.as_ref().is_none_or(|a| a <= x) && self.upper.as_ref().is_none_or(|b| x <= b)
    }

    /// Largest absolute value among the finite endpoints.
    pub fn magnitude(&self) -> Option<BigInt> {
        [&self.lower, &self.upper]
            .into_iter()
            .flatten()
            .map(|v| v.abs())
            .max()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.lower, &self.upper) {
            (None, None) => write!(f, "(-inf,inf)"),
            (Some(a), None) => write!(f, "[{a},inf)"),
            (None, Some(b)) => write!(f, "(-inf,{b}]"),
            (Some(a), Some(b)) => write!(f, "[{a},{b}]"),
        }
    }
}

/// A nonempty sequence of rows, each an `n`-tuple of intervals constraining
/// the effect of one loop segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GupProperty {
    dim: usize,
    rows: Vec<Vec<Interval>>,
}

impl GupProperty {
    pub fn new(dim: usize, rows: Vec<Vec<Interval>>) -> Result<Self, PropertyError> {
        if rows.is_empty() {
            return Err(PropertyError::EmptyProperty);
        }
        if dim == 0 {
            return Err(PropertyError::ArityMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(row) = rows.iter().find(|r| r.len() != dim) {
            return Err(PropertyError::ArityMismatch {
                expected: dim,
                found: row.len(),
            });
        }
        Ok(GupProperty { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rows(&self) -> &[Vec<Interval>] {
        &self.rows
    }

    /// Row `l`, 1-based.
    pub fn row(&self, l: usize) -> &[Interval] {
        &self.rows[l - 1]
    }

    /// Maximum of 1 and every finite endpoint's absolute value.
    pub fn scale(&self) -> BigInt {
        self.rows
            .iter()
            .flatten()
            .filter_map(Interval::magnitude)
            .fold(BigInt::from(1), |m, v| m.max(v))
    }
}
