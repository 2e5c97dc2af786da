//! Shared fixtures and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vass_unbounded::coverability::{ExtValue, KmTree};
use vass_unbounded::model::{vector, Configuration, PseudoConfiguration, Transition, Vass};
use vass_unbounded::properties::{Decomposition, GupProperty, Interval};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random model with at most 3 components, 3 states and 5 transitions,
/// updates in `[-2, 2]`, and an initial configuration in `[0, 2]^n`.
pub fn random_model(r: &mut ChaCha8Rng) -> (Vass, Configuration) {
    let dim = r.gen_range(1..=3);
    let states = r.gen_range(1..=3);
    let count = r.gen_range(1..=5);
    let transitions = (0..count)
        .map(|_| {
            let u: Vec<i64> = (0..dim).map(|_| r.gen_range(-2..=2)).collect();
            Transition::new(r.gen_range(0..states), r.gen_range(0..states), vector(&u))
        })
        .collect();
    let names = (0..states).map(|i| format!("s{i}")).collect();
    let v = Vass::new(names, dim, transitions).unwrap();
    let init: Vec<i64> = (0..dim).map(|_| r.gen_range(0..=2)).collect();
    (v, Configuration::new(0, vector(&init)).unwrap())
}

/// A random run: at each step an enabled transition is chosen uniformly.
pub fn random_run(r: &mut ChaCha8Rng, v: &Vass, init: &Configuration, max_len: usize) -> Vec<usize> {
    let mut cur = init.clone();
    let mut path = Vec::new();
    for _ in 0..max_len {
        let enabled: Vec<(usize, Configuration)> = v
            .outgoing(cur.state())
            .filter_map(|(i, t)| cur.fire(t).ok().map(|c| (i, c)))
            .collect();
        if enabled.is_empty() {
            break;
        }
        let (i, next) = enabled[r.gen_range(0..enabled.len())].clone();
        path.push(i);
        cur = next;
    }
    path
}

/// A random control path, ignoring counter signs.
pub fn random_control_path(r: &mut ChaCha8Rng, v: &Vass, q: usize, max_len: usize) -> Vec<usize> {
    let mut cur = q;
    let mut path = Vec::new();
    for _ in 0..max_len {
        let out: Vec<usize> = v.outgoing(cur).map(|(i, _)| i).collect();
        if out.is_empty() {
            break;
        }
        let i = out[r.gen_range(0..out.len())];
        path.push(i);
        cur = v.transitions()[i].to;
    }
    path
}

/// A random decomposition of a sequence with `len` configurations whose
/// loops start and end in equal states, if one is found quickly.
pub fn random_decomposition(
    r: &mut ChaCha8Rng,
    configs: &[PseudoConfiguration],
    k: usize,
) -> Option<Decomposition> {
    let last = configs.len() - 1;
    'attempt: for _ in 0..50 {
        let mut marks = vec![0usize; 2 * k + 1];
        for l in 1..=k {
            let lo = marks[2 * l - 2];
            let start = r.gen_range(lo..=last);
            let ends: Vec<usize> = (start..=last)
                .filter(|&e| configs[e].state == configs[start].state)
                .collect();
            let end = if l == k {
                if configs[last].state != configs[start].state {
                    continue 'attempt;
                }
                last
            } else {
                ends[r.gen_range(0..ends.len())]
            };
            marks[2 * l - 1] = start;
            marks[2 * l] = end;
        }
        return Some(Decomposition::new(marks));
    }
    None
}

/// Effect of every loop under `dec`.
pub fn row_effects(configs: &[PseudoConfiguration], dec: &Decomposition) -> Vec<Vec<BigInt>> {
    (1..=dec.rows())
        .map(|l| {
            let a = &configs[dec.marks[2 * l - 1]].values;
            let b = &configs[dec.marks[2 * l]].values;
            b.iter().zip(a).map(|(y, x)| y - x).collect()
        })
        .collect()
}

/// A property each of whose rows contains the given effects, with random
/// slack and a random choice of the four interval shapes.
pub fn property_around(r: &mut ChaCha8Rng, effects: &[Vec<BigInt>]) -> GupProperty {
    let dim = effects[0].len();
    let rows = effects
        .iter()
        .map(|row| {
            row.iter()
                .map(|d| {
                    let lo = d - BigInt::from(r.gen_range(0..=2));
                    let hi = d + BigInt::from(r.gen_range(0..=2));
                    match r.gen_range(0..4) {
                        0 => Interval::all(),
                        1 => Interval::at_least(lo),
                        2 => Interval::at_most(hi),
                        _ => Interval::between(lo, hi).unwrap(),
                    }
                })
                .collect()
        })
        .collect();
    GupProperty::new(dim, rows).unwrap()
}

/// Number of direction changes of every component along `path`, starting
/// in increasing direction.
pub fn direct_reversal_count(v: &Vass, path: &[usize]) -> Vec<u64> {
    let n = v.dim();
    let mut direction = vec![1i8; n];
    let mut count = vec![0u64; n];
    for &i in path {
        for (j, b) in v.transitions()[i].update.iter().enumerate() {
            let sign = match b.sign() {
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::Plus => 1,
                num_bigint::Sign::NoSign => continue,
            };
            if sign != direction[j] {
                count[j] += 1;
                direction[j] = sign;
            }
        }
    }
    count
}

/// Breadth-first exploration of concrete configurations, stopping at the
/// first one accepted by `goal` or after `cap` distinct configurations.
/// Returns `Some(true)` on success, `Some(false)` when the reachable set was
/// exhausted, and `None` at the cap.
pub fn bfs_find<F>(v: &Vass, init: &Configuration, cap: usize, mut goal: F) -> Option<bool>
where
    F: FnMut(&Configuration) -> bool,
{
    let mut seen: HashSet<Configuration> = HashSet::from([init.clone()]);
    let mut queue = VecDeque::from([init.clone()]);
    while let Some(c) = queue.pop_front() {
        if goal(&c) {
            return Some(true);
        }
        for (_, t) in v.outgoing(c.state()) {
            if let Ok(next) = c.fire(t) {
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    Some(false)
}

/// Largest value of `min_{j ∈ x} y(j)` over tree nodes, `None` if some node
/// is ω on all of `x`.
pub fn km_min_bound<S: Clone + Eq + std::fmt::Debug>(tree: &KmTree<S>, x: &BTreeSet<usize>) -> Option<BigInt> {
    let mut best = BigInt::from(0);
    for n in &tree.nodes {
        let finite: Vec<&BigInt> = x
            .iter()
            .filter_map(|&j| match n.vector.get(j) {
                ExtValue::Finite(k) => Some(k),
                ExtValue::Omega => None,
            })
            .collect();
        let m = finite.into_iter().min()?;
        if *m > best {
            best = m.clone();
        }
    }
    Some(best)
}

fn vass(states: &[&str], dim: usize, ts: &[(usize, usize, &[i64])]) -> Vass {
    Vass::new(
        states.iter().map(|s| s.to_string()).collect(),
        dim,
        ts.iter().map(|(a, b, u)| Transition::new(*a, *b, vector(u))).collect(),
    )
    .unwrap()
}

pub fn cfg(q: usize, xs: &[i64]) -> Configuration {
    Configuration::new(q, vector(xs)).unwrap()
}

/// A-loop `(+1,0)`, jump to B, B-loop `(−1,+1)`.
pub fn two_loop_transfer() -> Vass {
    vass(&["A", "B"], 2, &[(0, 0, &[1, 0]), (0, 1, &[0, 0]), (1, 1, &[-1, 1])])
}

/// A-loop `+1`, jump to B, B and C alternate with `−1`.
pub fn decreasing_cycle() -> Vass {
    vass(&["A", "B", "C"], 1, &[(0, 0, &[1]), (0, 1, &[0]), (1, 2, &[-1]), (2, 1, &[-1])])
}

/// Raising loop at q, lowering loop at p, jumps both ways.
pub fn up_down() -> Vass {
    vass(&["q", "p"], 1, &[(0, 0, &[1]), (0, 1, &[0]), (1, 1, &[-1]), (1, 0, &[0])])
}

pub fn monotone() -> Vass {
    Vass::vas(2, vec![vector(&[1, 0]), vector(&[0, 2])]).unwrap()
}

/// Alternates `+1` and `−1` forever, never above 1.
pub fn oscillator() -> Vass {
    vass(&["q", "p"], 1, &[(0, 1, &[1]), (1, 0, &[-1])])
}

/// Three loops in sequence moving tokens from component 1 to 2 to 3.
pub fn three_stage() -> Vass {
    vass(
        &["A", "B", "C"],
        3,
        &[
            (0, 0, &[1, 0, 0]),
            (0, 1, &[0, 0, 0]),
            (1, 1, &[-1, 1, 0]),
            (1, 2, &[0, 0, 0]),
            (2, 2, &[-1, -1, 1]),
        ],
    )
}

/// Twenty small models with short witnesses.
pub fn curated() -> Vec<(&'static str, Vass, Configuration)> {
    vec![
        ("two-loop transfer", two_loop_transfer(), cfg(0, &[0, 0])),
        ("decreasing cycle", decreasing_cycle(), cfg(0, &[0])),
        ("up-down", up_down(), cfg(0, &[0])),
        ("monotone", monotone(), cfg(0, &[0, 0])),
        ("oscillator", oscillator(), cfg(0, &[0])),
        ("increment", Vass::vas(1, vec![vector(&[1])]).unwrap(), cfg(0, &[0])),
        ("decrement", Vass::vas(1, vec![vector(&[-1])]).unwrap(), cfg(0, &[5])),
        (
            "swap",
            Vass::vas(2, vec![vector(&[1, -1]), vector(&[-1, 1])]).unwrap(),
            cfg(0, &[1, 0]),
        ),
        (
            "feed and transfer",
            Vass::vas(2, vec![vector(&[1, 0]), vector(&[-1, 1])]).unwrap(),
            cfg(0, &[0, 0]),
        ),
        ("three stage", three_stage(), cfg(0, &[0, 0, 0])),
        ("doubling drain", Vass::vas(2, vec![vector(&[-1, 2])]).unwrap(), cfg(0, &[1, 0])),
        (
            "weighted growth",
            Vass::vas(2, vec![vector(&[-1, 2]), vector(&[1, -1])]).unwrap(),
            cfg(0, &[1, 0]),
        ),
        (
            "alternating growth",
            vass(&["p", "q"], 2, &[(0, 1, &[1, 0]), (1, 0, &[0, 1])]),
            cfg(0, &[0, 0]),
        ),
        (
            "pipeline",
            Vass::vas(3, vec![vector(&[1, 0, 0]), vector(&[-1, 1, 0]), vector(&[0, -1, 1])]).unwrap(),
            cfg(0, &[0, 0, 0]),
        ),
        (
            "pay two get one",
            Vass::vas(2, vec![vector(&[2, -1]), vector(&[-1, 0])]).unwrap(),
            cfg(0, &[0, 1]),
        ),
        (
            "dead branch",
            vass(&["A", "B"], 3, &[(0, 1, &[-1, 0, 0]), (0, 0, &[0, 1, 0]), (1, 1, &[0, 0, 1])]),
            cfg(0, &[0, 0, 0]),
        ),
        (
            "finite budget",
            Vass::vas(3, vec![vector(&[1, 1, -1])]).unwrap(),
            cfg(0, &[0, 0, 3]),
        ),
        (
            "two-loop drain",
            vass(&["A", "B"], 2, &[(0, 0, &[1, 0]), (0, 1, &[0, 0]), (1, 1, &[-2, 1]), (1, 0, &[0, 0])]),
            cfg(0, &[0, 0]),
        ),
        (
            "triangle",
            vass(&["A", "B", "C"], 2, &[(0, 1, &[1, 0]), (1, 2, &[0, 1]), (2, 0, &[-1, 0])]),
            cfg(0, &[0, 0]),
        ),
        (
            "stuck",
            vass(&["A", "B"], 2, &[(0, 1, &[0, -1]), (1, 1, &[1, 1])]),
            cfg(0, &[0, 0]),
        ),
    ]
}

/// All singletons and pairs of components.
pub fn small_component_sets(dim: usize) -> Vec<BTreeSet<usize>> {
    let mut out: Vec<BTreeSet<usize>> = (0..dim).map(|i| BTreeSet::from([i])).collect();
    for i in 0..dim {
        for j in i + 1..dim {
            out.push(BTreeSet::from([i, j]));
        }
    }
    out
}

/// Replays a configuration list reported as strings.
pub fn parse_values(values: &serde_json::Value) -> Vec<String> {
    values
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect()
}
