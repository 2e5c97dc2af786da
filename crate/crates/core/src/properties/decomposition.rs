//! Marking a (pseudo-)run as `x_0 →π′_0 x_1 →π_1 x_2 ⋯ x_{2K−1} →π_K x_{2K}`
//! and checking the loop conditions against it.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;

use super::{ApproxContext, DisjointnessSequence, GupProperty, PropertyError};
use crate::model::{PseudoConfiguration, PseudoRun, Vass};

/// Positions `f(0) ≤ f(1) ≤ ⋯ ≤ f(2K)` of the marked configurations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub marks: Vec<usize>,
}

impl Decomposition {
    pub fn new(marks: Vec<usize>) -> Self {
        Decomposition { marks }
    }

    /// Number of loop segments.
    pub fn rows(&self) -> usize {
        self.marks.len() / 2
    }

    /// Start of loop `l` (1-based).
    pub fn loop_start(&self, l: usize) -> usize {
        self.marks[2 * l - 1]
    }

    /// End of loop `l` (1-based).
    pub fn loop_end(&self, l: usize) -> usize {
        self.marks[2 * l]
    }

    fn check_shape(&self, k: usize, path_len: usize, fixed_prefix: usize) -> Result<(), PropertyError> {
        let bad = |msg: String| Err(PropertyError::MalformedDecomposition(msg));
        if self.marks.len() != 2 * k + 1 {
            return bad(format!("expected {} marks, found {}", 2 * k + 1, self.marks.len()));
        }
        if self.marks.windows(2).any(|w| w[0] > w[1]) {
            return bad("marks are not nondecreasing".into());
        }
        if self.marks[..=fixed_prefix].iter().any(|&m| m != 0) {
            return bad(format!("marks 0..={fixed_prefix} must be 0"));
        }
        if self.marks[2 * k] != path_len {
            return bad(format!(
                "last mark is {} but the path has {} steps",
                self.marks[2 * k],
                path_len
            ));
        }
        Ok(())
    }
}

/// The condition set evaluated by [`verify`].
#[derive(Debug, Clone, Copy)]
pub enum Check<'a> {
    /// Loop conditions on a genuine run.
    GupRun(&'a GupProperty),
    /// Loop conditions on a pseudo-run, with negative values excused only
    /// after a loop that strictly increased the component.
    GupWeak(&'a GupProperty),
    /// Ordered unboundedness of a disjointness sequence on a genuine run.
    PbSigma(&'a DisjointnessSequence),
    /// Suffix relaxation starting at row `l`; the pseudo-run starts at the
    /// first configuration of that suffix, so marks `0..=2l−2` are all 0.
    Approx(&'a ApproxContext),
}

impl Check<'_> {
    fn rows(&self) -> usize {
        match self {
            Check::GupRun(p) | Check::GupWeak(p) => p.len(),
            Check::PbSigma(s) => s.len(),
            Check::Approx(c) => c.property.len(),
        }
    }

    fn first_row(&self) -> usize {
        match self {
            Check::Approx(c) => c.l,
            _ => 1,
        }
    }

    fn needs_genuine(&self) -> bool {
        matches!(self, Check::GupRun(_) | Check::PbSigma(_))
    }

    fn dim(&self) -> Option<usize> {
        match self {
            Check::GupRun(p) | Check::GupWeak(p) => Some(p.dim()),
            Check::Approx(c) => Some(c.property.dim()),
            Check::PbSigma(_) => None,
        }
    }

    /// Row-local conditions of row `l` given the effects of rows before it.
    fn row_ok(&self, l: usize, delta: &[BigInt], earlier: &[Vec<BigInt>]) -> bool {
        let positive_before = |j: usize, from: usize| {
            earlier[from - 1..l - 1].iter().any(|d| d[j].is_positive())
        };
        match self {
            Check::GupRun(p) | Check::GupWeak(p) => delta.iter().enumerate().all(|(j, d)| {
                p.row(l)[j].contains(d) && (!d.is_negative() || positive_before(j, 1))
            }),
            Check::PbSigma(s) => {
                let xl = &s.sets()[l - 1];
                let before = s.union_before(l);
                xl.iter().all(|&j| delta[j].is_positive())
                    && delta.iter().enumerate().all(|(j, d)| {
                        xl.contains(&j) || !d.is_negative() || before.contains(&j)
                    })
            }
            Check::Approx(c) => delta.iter().enumerate().all(|(j, d)| {
                c.property.row(l)[j].contains(d)
                    && (!d.is_negative() || c.incr.contains(&j) || positive_before(j, c.l))
            }),
        }
    }
}

/// Evaluates `check` on `run` marked by `dec`.
pub fn verify(
    vass: &Vass,
    run: &PseudoRun,
    dec: &Decomposition,
    check: Check<'_>,
) -> Result<bool, PropertyError> {
    let replay = vass.replay(&run.init, &run.path)?;
    verify_configs(&replay.configs, replay.genuine, dec, check)
}

/// [`verify`] on an already materialized configuration sequence.
pub(crate) fn verify_configs(
    configs: &[PseudoConfiguration],
    genuine: bool,
    dec: &Decomposition,
    check: Check<'_>,
) -> Result<bool, PropertyError> {
    let k = check.rows();
    let first = check.first_row();
    dec.check_shape(k, configs.len() - 1, 2 * first - 2)?;
    if let Some(dim) = check.dim() {
        if configs[0].values.len() != dim {
            return Err(PropertyError::ArityMismatch {
                expected: dim,
                found: configs[0].values.len(),
            });
        }
    }
    if check.needs_genuine() && !genuine {
        return Ok(false);
    }
    let mut deltas: Vec<Vec<BigInt>> = vec![vec![]; first - 1];
    for l in first..=k {
        let a = &configs[dec.loop_start(l)];
        let b = &configs[dec.loop_end(l)];
        if a.state != b.state {
            return Ok(false);
        }
        let delta: Vec<BigInt> = b.values.iter().zip(&a.values).map(|(y, x)| y - x).collect();
        if !check.row_ok(l, &delta, &deltas) {
            return Ok(false);
        }
        deltas.push(delta);
    }
    let ok = match check {
        Check::GupWeak(_) => negatives_excused(configs, dec, &deltas, &BTreeSet::new(), None, 1),
        Check::Approx(c) => negatives_excused(
            configs,
            dec,
            &deltas,
            &c.incr,
            Some((&c.window, c.bound.as_ref())),
            c.l,
        ),
        _ => true,
    };
    Ok(ok)
}

/// Checks every position against the components it must keep in range.
///
/// Position `p` with `f(2l′) ≤ p < f(2l′+2)` may leave the range only on
/// components in `incr` or strictly increased by a loop `l..=l′`. Without a
/// window every component must stay nonnegative; with `(I, B)` the
/// components of `I` must lie in `[0, B−1]` (or just be nonnegative when
/// `B` is absent) and the others are unconstrained.
fn negatives_excused(
    configs: &[PseudoConfiguration],
    dec: &Decomposition,
    deltas: &[Vec<BigInt>],
    incr: &BTreeSet<usize>,
    window: Option<(&BTreeSet<usize>, Option<&BigInt>)>,
    first: usize,
) -> bool {
    let k = deltas.len();
    let dim = configs[0].values.len();
    let mut excused: Vec<bool> = (0..dim).map(|j| incr.contains(&j)).collect();
    let controlled: Vec<bool> = match window {
        Some((w, _)) => (0..dim).map(|j| w.contains(&j)).collect(),
        None => vec![true; dim],
    };
    let limit = window.and_then(|(_, b)| b);
    let mut p = dec.marks[2 * first - 2];
    for lp in (first - 1)..=k {
        if lp >= first {
            for (j, d) in deltas[lp - 1].iter().enumerate() {
                if d.is_positive() {
                    excused[j] = true;
                }
            }
        }
        let end = if lp == k {
            configs.len()
        } else {
            dec.marks[2 * lp + 2]
        };
        while p < end {
            let x = &configs[p].values;
            for j in 0..dim {
                if excused[j] || !controlled[j] {
                    continue;
                }
                if x[j].is_negative() || limit.is_some_and(|b| x[j] >= *b) {
                    return false;
                }
            }
            p += 1;
        }
    }
    true
}

/// Options for [`find_decomposition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionSearch {
    /// Require every loop segment to contain at least one transition.
    pub nonempty_loops: bool,
    /// Maximum number of candidate rows examined.
    pub budget: u64,
}

impl Default for DecompositionSearch {
    fn default() -> Self {
        DecompositionSearch {
            nonempty_loops: false,
            budget: 10_000_000,
        }
    }
}

/// First decomposition (lexicographically by marks) of `run` satisfying `check`.
pub fn find_decomposition(
    vass: &Vass,
    run: &PseudoRun,
    check: Check<'_>,
    opts: &DecompositionSearch,
) -> Result<Option<Decomposition>, PropertyError> {
    let replay = vass.replay(&run.init, &run.path)?;
    if check.needs_genuine() && !replay.genuine {
        return Ok(None);
    }
    let k = check.rows();
    let first = check.first_row();
    let mut marks = vec![0usize; 2 * k + 1];
    let mut search = Search {
        configs: &replay.configs,
        genuine: replay.genuine,
        check,
        opts,
        k,
        spent: 0,
        deltas: vec![vec![]; first - 1],
    };
    search.row(first, &mut marks)
}

struct Search<'a> {
    configs: &'a [PseudoConfiguration],
    genuine: bool,
    check: Check<'a>,
    opts: &'a DecompositionSearch,
    k: usize,
    spent: u64,
    deltas: Vec<Vec<BigInt>>,
}

impl Search<'_> {
    fn row(&mut self, l: usize, marks: &mut Vec<usize>) -> Result<Option<Decomposition>, PropertyError> {
        let last = self.configs.len() - 1;
        if l > self.k {
            let dec = Decomposition::new(marks.clone());
            return if verify_configs(self.configs, self.genuine, &dec, self.check)? {
                Ok(Some(dec))
            } else {
                Ok(None)
            };
        }
        let prev = marks[2 * l - 2];
        for start in prev..=last {
            let ends: Vec<usize> = if l == self.k {
                vec![last]
            } else {
                (start..=last).collect()
            };
            for end in ends {
                if end < start || (self.opts.nonempty_loops && end == start) {
                    continue;
                }
                self.spent += 1;
                if self.spent > self.opts.budget {
                    return Err(PropertyError::SearchCap {
                        budget: self.opts.budget,
                    });
                }
                let a = &self.configs[start];
                let b = &self.configs[end];
                if a.state != b.state {
                    continue;
                }
                let delta: Vec<BigInt> = b.values.iter().zip(&a.values).map(|(y, x)| y - x).collect();
                if !self.check.row_ok(l, &delta, &self.deltas) {
                    continue;
                }
                marks[2 * l - 1] = start;
                marks[2 * l] = end;
                self.deltas.push(delta);
                let found = self.row(l + 1, marks)?;
                self.deltas.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
        marks[2 * l - 1] = 0;
        marks[2 * l] = 0;
        Ok(None)
    }
}

/// Effect of each loop segment, rows `1..=K`.
pub(crate) fn loop_effects(configs: &[PseudoConfiguration], dec: &Decomposition) -> Vec<Vec<BigInt>> {
    (1..=dec.rows())
        .map(|l| {
            let a = &configs[dec.loop_start(l)].values;
            let b = &configs[dec.loop_end(l)].values;
            b.iter().zip(a).map(|(y, x)| y - x).collect()
        })
        .collect()
}
