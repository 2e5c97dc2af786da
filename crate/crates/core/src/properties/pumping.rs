//! Repeating loop segments: plain pumping and the repair of pseudo-runs into runs.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::decomposition::{loop_effects, verify_configs};
use super::{ApproxContext, Check, Decomposition, GupProperty, PropertyError};
use crate::model::{PseudoRun, Run, Vass};

/// Replaces loop `l` by `counts[l−1]` copies of itself for every row.
///
/// The mark opening each loop is placed at the start of its last copy, so
/// every row's effect is unchanged.
pub fn repeat_loops(path: &[usize], dec: &Decomposition, counts: &[usize]) -> (Vec<usize>, Decomposition) {
    let k = dec.rows();
    debug_assert_eq!(counts.len(), k);
    let mut out = Vec::new();
    let mut marks = vec![0usize; 2 * k + 1];
    let mut cursor = 0;
    for l in 1..=k {
        let (s, e) = (dec.loop_start(l), dec.loop_end(l));
        out.extend_from_slice(&path[cursor..s]);
        for _ in 1..counts[l - 1] {
            out.extend_from_slice(&path[s..e]);
        }
        marks[2 * l - 1] = out.len();
        out.extend_from_slice(&path[s..e]);
        marks[2 * l] = out.len();
        cursor = e;
    }
    out.extend_from_slice(&path[cursor..]);
    (out, Decomposition::new(marks))
}

/// Repeats loops `l..=K` of a pseudo-run satisfying the unwindowed suffix
/// relaxation `ctx`; `counts[i]` applies to row `l + i`.
pub fn pump(
    vass: &Vass,
    run: &PseudoRun,
    dec: &Decomposition,
    ctx: &ApproxContext,
    counts: &[usize],
) -> Result<(PseudoRun, Decomposition), PropertyError> {
    if ctx.bound.is_some() {
        return Err(PropertyError::PreconditionViolated(
            "pumping needs an unbounded window".into(),
        ));
    }
    let k = ctx.property.len();
    if counts.len() != k + 1 - ctx.l || counts.contains(&0) {
        return Err(PropertyError::PreconditionViolated(format!(
            "expected {} positive counts",
            k + 1 - ctx.l
        )));
    }
    let replay = vass.replay(&run.init, &run.path)?;
    if !verify_configs(&replay.configs, replay.genuine, dec, Check::Approx(ctx))? {
        return Err(PropertyError::PreconditionViolated(
            "input does not satisfy the relaxation".into(),
        ));
    }
    let mut all = vec![1usize; ctx.l - 1];
    all.extend_from_slice(counts);
    let (path, dec) = repeat_loops(&run.path, dec, &all);
    Ok((
        PseudoRun {
            init: run.init.clone(),
            path,
        },
        dec,
    ))
}

/// `((L·pic)^K)·(1 + K²·L·pic) + L`.
pub fn pseudorun_length_bound(len: usize, pic: &BigInt, k: usize) -> BigInt {
    let lp = BigInt::from(len) * pic;
    let kk = BigInt::from(k * k);
    num_traits::pow(lp.clone(), k) * (BigInt::from(1) + kk * &lp) + BigInt::from(len)
}

/// Turns a pseudo-run weakly satisfying `property` into a run satisfying it
/// by repeating earlier loops until no counter goes negative.
pub fn pseudo_to_run(
    vass: &Vass,
    run: &PseudoRun,
    property: &GupProperty,
    dec: &Decomposition,
) -> Result<(Run, Decomposition), PropertyError> {
    let replay = vass.replay(&run.init, &run.path)?;
    if !verify_configs(&replay.configs, replay.genuine, dec, Check::GupWeak(property))? {
        return Err(PropertyError::PreconditionViolated(
            "input does not weakly satisfy the property".into(),
        ));
    }
    let k = property.len();
    let bound = pseudorun_length_bound(replay.configs.len(), &vass.norms().pic_for_bounds(), k);
    let mut counts = repair_counts(&replay.configs, dec);
    loop {
        let (path, new_dec) = repeat_loops(&run.path, dec, &counts);
        if BigInt::from(path.len() + 1) > bound {
            return Err(PropertyError::BoundExceeded { bound });
        }
        let out = vass.replay(&run.init, &path)?;
        if out.genuine && verify_configs(&out.configs, true, &new_dec, Check::GupRun(property))? {
            let r = out.run.to_run(vass)?;
            return Ok((r, new_dec));
        }
        for c in counts.iter_mut().take(k.saturating_sub(1)) {
            *c *= 2;
        }
    }
}

/// Smallest repetition counts, computed from the last row backwards, that
/// keep every component nonnegative after the loop first raising it.
fn repair_counts(configs: &[crate::model::PseudoConfiguration], dec: &Decomposition) -> Vec<usize> {
    let k = dec.rows();
    let dim = configs[0].values.len();
    let deltas = loop_effects(configs, dec);
    let first_positive: Vec<Option<usize>> = (0..dim)
        .map(|j| (1..=k).find(|&l| deltas[l - 1][j].is_positive()))
        .collect();
    let mut counts = vec![1usize; k];
    for l in (1..k).rev() {
        let mut need = BigInt::zero();
        for j in (0..dim).filter(|&j| first_positive[j] == Some(l)) {
            let mut worst = BigInt::zero();
            for p in dec.loop_end(l)..configs.len() {
                let mut v = configs[p].values[j].clone();
                for r in (l + 1)..=k {
                    let extra = BigInt::from(counts[r - 1] - 1) * &deltas[r - 1][j];
                    if dec.loop_end(r) <= p || (dec.loop_start(r) <= p && extra.is_negative()) {
                        v += extra;
                    }
                }
                if v < worst {
                    worst = v;
                }
            }
            let deficit = -worst;
            let gain = &deltas[l - 1][j];
            let reps = (&deficit + gain - 1u32) / gain;
            if reps > need {
                need = reps;
            }
        }
        let need: usize = need.try_into().expect("repetition count fits in memory");
        counts[l - 1] = 1 + need;
    }
    counts
}
