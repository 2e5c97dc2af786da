//! Witness-run properties: interval rows, ordered unboundedness sequences,
//! decompositions of runs into loop segments, and the constructions that
//! repeat those loops.

mod decomposition;
mod interval;
mod pumping;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

pub use decomposition::{find_decomposition, verify, Check, Decomposition, DecompositionSearch};
pub use interval::{GupProperty, Interval};
pub use pumping::{pseudo_to_run, pseudorun_length_bound, pump, repeat_loops};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropertyError {
    #[error("property has no rows")]
    EmptyProperty,

    #[error("expected {expected} entries, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("empty interval [{lower},{upper}]")]
    EmptyInterval { lower: BigInt, upper: BigInt },

    #[error("invalid component sequence: {0}")]
    InvalidSequence(String),

    #[error("row {row} out of range 1..={len}")]
    RowOutOfRange { row: usize, len: usize },

    #[error("finite window bound must be at least 2")]
    BoundTooSmall,

    #[error("malformed decomposition: {0}")]
    MalformedDecomposition(String),

    #[error("decomposition search exceeded its budget of {budget} candidates")]
    SearchCap { budget: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("repaired run exceeds the length bound {bound}")]
    BoundExceeded { bound: BigInt },

    #[error(transparent)]
    Model(#[from] crate::model::ModelError),
}

/// Pairwise disjoint nonempty component sets `X_1 ⋯ X_K` (0-based components).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DisjointnessSequence {
    sets: Vec<BTreeSet<usize>>,
}

impl DisjointnessSequence {
    pub fn new(sets: Vec<BTreeSet<usize>>, dim: usize) -> Result<Self, PropertyError> {
        if sets.is_empty() {
            return Err(PropertyError::InvalidSequence("no sets".into()));
        }
        let mut seen = BTreeSet::new();
        for s in &sets {
            if s.is_empty() {
                return Err(PropertyError::InvalidSequence("empty set".into()));
            }
            for &j in s {
                if j >= dim {
                    return Err(PropertyError::InvalidSequence(format!(
                        "component {} exceeds dimension {dim}",
                        j + 1
                    )));
                }
                if !seen.insert(j) {
                    return Err(PropertyError::InvalidSequence(format!(
                        "component {} appears twice",
                        j + 1
                    )));
                }
            }
        }
        Ok(DisjointnessSequence { sets })
    }

    pub fn sets(&self) -> &[BTreeSet<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `X_1 ∪ ⋯ ∪ X_{l−1}` for 1-based `l`.
    pub fn union_before(&self, l: usize) -> BTreeSet<usize> {
        self.sets[..l - 1].iter().flatten().copied().collect()
    }

    pub fn union(&self) -> BTreeSet<usize> {
        self.sets.iter().flatten().copied().collect()
    }

    /// Every sequence over `0..dim` with `x ⊆ X_1 ∪ ⋯ ∪ X_K` and
    /// `x ∩ X_K ≠ ∅`, shortest first, then lexicographically.
    pub fn covering(x: &BTreeSet<usize>, dim: usize) -> Vec<DisjointnessSequence> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        enumerate_sequences(dim, &mut current, &BTreeSet::new(), &mut out);
        let mut out: Vec<_> = out
            .into_iter()
            .filter(|sets: &Vec<BTreeSet<usize>>| {
                let union: BTreeSet<usize> = sets.iter().flatten().copied().collect();
                x.is_subset(&union) && !sets.last().expect("nonempty").is_disjoint(x)
            })
            .map(|sets| DisjointnessSequence { sets })
            .collect();
        out.sort_by(|a, b| {
            a.len().cmp(&b.len()).then_with(|| {
                let ka: Vec<Vec<usize>> = a.sets.iter().map(|s| s.iter().copied().collect()).collect();
                let kb: Vec<Vec<usize>> = b.sets.iter().map(|s| s.iter().copied().collect()).collect();
                ka.cmp(&kb)
            })
        });
        out
    }
}

fn enumerate_sequences(
    dim: usize,
    current: &mut Vec<BTreeSet<usize>>,
    used: &BTreeSet<usize>,
    out: &mut Vec<Vec<BTreeSet<usize>>>,
) {
    if !current.is_empty() {
        out.push(current.clone());
    }
    let free: Vec<usize> = (0..dim).filter(|j| !used.contains(j)).collect();
    for mask in 1u64..(1u64 << free.len()) {
        let set: BTreeSet<usize> = free
            .iter()
            .enumerate()
            .filter(|(b, _)| mask & (1 << b) != 0)
            .map(|(_, &j)| j)
            .collect();
        let mut next_used = used.clone();
        next_used.extend(set.iter().copied());
        current.push(set);
        enumerate_sequences(dim, current, &next_used, out);
        current.pop();
    }
}

/// The interval rows equivalent to the ordered unboundedness condition of `sigma`.
pub fn encode_pb_sigma(sigma: &DisjointnessSequence, dim: usize) -> GupProperty {
    let mut rows = Vec::with_capacity(sigma.len());
    let mut seen = BTreeSet::new();
    for set in sigma.sets() {
        let row = (0..dim)
            .map(|j| {
                if set.contains(&j) {
                    Interval::at_least(1)
                } else if !seen.contains(&j) {
                    Interval::at_least(0)
                } else {
                    Interval::all()
                }
            })
            .collect();
        rows.push(row);
        seen.extend(set.iter().copied());
    }
    GupProperty::new(dim, rows).expect("rows have the model's arity")
}

/// One property per component `i`: a loop strictly increasing `i` followed by
/// a loop strictly decreasing it.
pub fn nonregularity_properties(dim: usize) -> Vec<GupProperty> {
    (0..dim)
        .map(|i| {
            let first = (0..dim)
                .map(|j| {
                    if j == i {
                        Interval::at_least(1)
                    } else {
                        Interval::at_least(0)
                    }
                })
                .collect();
            let second = (0..dim)
                .map(|j| {
                    if j == i {
                        Interval::at_most(-1)
                    } else {
                        Interval::all()
                    }
                })
                .collect();
            GupProperty::new(dim, vec![first, second]).expect("well formed")
        })
        .collect()
}

/// A property together with a requirement that loop segments be nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopProperty {
    pub property: GupProperty,
    pub nonempty_loops: bool,
}

/// A single nonempty loop that does not decrease any component.
pub fn termination_property(dim: usize) -> LoopProperty {
    LoopProperty {
        property: GupProperty::new(dim, vec![vec![Interval::at_least(0); dim]])
            .expect("well formed"),
        nonempty_loops: true,
    }
}

/// Parameters of the suffix relaxation checked by [`Check::Approx`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxContext {
    pub property: GupProperty,
    /// First constrained row, 1-based.
    pub l: usize,
    /// Components whose negative values are excused from the start.
    pub incr: BTreeSet<usize>,
    /// Components whose values are windowed.
    pub window: BTreeSet<usize>,
    /// Exclusive upper end of the window; `None` drops the upper limit.
    pub bound: Option<BigInt>,
}

impl ApproxContext {
    pub fn new(
        property: GupProperty,
        l: usize,
        incr: BTreeSet<usize>,
        window: BTreeSet<usize>,
        bound: Option<BigInt>,
    ) -> Result<Self, PropertyError> {
        if l == 0 || l > property.len() {
            return Err(PropertyError::RowOutOfRange {
                row: l,
                len: property.len(),
            });
        }
        let dim = property.dim();
        if let Some(&j) = incr.iter().chain(window.iter()).find(|&&j| j >= dim) {
            return Err(PropertyError::ArityMismatch {
                expected: dim,
                found: j + 1,
            });
        }
        if let Some(b) = &bound {
            if *b < BigInt::from(2) {
                return Err(PropertyError::BoundTooSmall);
            }
        }
        Ok(ApproxContext {
            property,
            l,
            incr,
            window,
            bound,
        })
    }

    /// The context equivalent to weak satisfaction of `property`.
    pub fn weak(property: GupProperty) -> Self {
        let dim = property.dim();
        ApproxContext {
            property,
            l: 1,
            incr: BTreeSet::new(),
            window: (0..dim).collect(),
            bound: None,
        }
    }
}
