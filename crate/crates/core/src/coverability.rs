//! Karp–Miller coverability trees over any finitely branching counter system.
//!
//! The tree variant is used: a node equal to an ancestor with the same control
//! state becomes a leaf, and a node strictly dominating same-state ancestors
//! has the strictly larger components replaced by ω. Each node records the
//! batches of components that became ω along its branch.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::{self, Write as _};
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::model::{StateId, Vass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverabilityError {
    #[error("coverability tree exceeded the node cap of {cap}")]
    ResourceCap { cap: usize },

    #[error("initial vector has {found} entries, expected {expected}")]
    ArityMismatch { expected: usize, found: usize },
}

/// One outgoing move of a counter system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step<S> {
    /// Identifies the move, e.g. a transition index.
    pub label: usize,
    pub target: S,
    pub update: Vec<BigInt>,
}

/// A counter system given by its control successors.
pub trait CounterSystem {
    type State: Clone + Eq + Hash + fmt::Debug;

    fn dim(&self) -> usize;

    /// Moves leaving `state`, in a fixed order.
    fn steps(&self, state: &Self::State) -> Vec<Step<Self::State>>;

    fn state_label(&self, state: &Self::State) -> String;
}

impl CounterSystem for Vass {
    type State = StateId;

    fn dim(&self) -> usize {
        Vass::dim(self)
    }

    fn steps(&self, state: &StateId) -> Vec<Step<StateId>> {
        self.outgoing(*state)
            .map(|(i, t)| Step {
                label: i,
                target: t.to,
                update: t.update.clone(),
            })
            .collect()
    }

    fn state_label(&self, state: &StateId) -> String {
        self.state_name(*state).to_string()
    }
}

/// A natural number or ω.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtValue {
    Finite(BigInt),
    Omega,
}

impl ExtValue {
    pub fn is_omega(&self) -> bool {
        matches!(self, ExtValue::Omega)
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            ExtValue::Finite(v) => Some(v),
            ExtValue::Omega => None,
        }
    }

    /// `self ≤ other` with ω above every natural.
    pub fn le(&self, other: &ExtValue) -> bool {
        match (self, other) {
            (_, ExtValue::Omega) => true,
            (ExtValue::Omega, ExtValue::Finite(_)) => false,
            (ExtValue::Finite(a), ExtValue::Finite(b)) => a <= b,
        }
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(v) => write!(f, "{v}"),
            ExtValue::Omega => write!(f, "w"),
        }
    }
}

/// A vector over the naturals extended with ω.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedVector(pub Vec<ExtValue>);

impl ExtendedVector {
    pub fn from_naturals(values: &[BigInt]) -> Self {
        ExtendedVector(values.iter().cloned().map(ExtValue::Finite).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> &ExtValue {
        &self.0[i]
    }

    /// Adds an integer update; `None` if a finite entry would drop below zero.
    pub fn add(&self, update: &[BigInt]) -> Option<ExtendedVector> {
        let mut out = Vec::with_capacity(self.0.len());
        for (x, b) in self.0.iter().zip(update) {
            match x {
                ExtValue::Omega => out.push(ExtValue::Omega),
                ExtValue::Finite(v) => {
                    let s = v + b;
                    if s.is_negative() {
                        return None;
                    }
                    out.push(ExtValue::Finite(s));
                }
            }
        }
        Some(ExtendedVector(out))
    }

    /// Componentwise `≤`.
    pub fn le(&self, other: &ExtendedVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.le(b))
    }

    pub fn omega_positions(&self) -> BTreeSet<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_omega())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_omega(&self) -> bool {
        self.0.iter().any(ExtValue::is_omega)
    }
}

impl fmt::Display for ExtendedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('(')?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_char(')')
    }
}

/// Why a node has no children.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Expanded; children (if any) are listed.
    Interior,
    /// Equal to the given ancestor; not expanded.
    Repeated { ancestor: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmNode<S> {
    pub state: S,
    pub vector: ExtendedVector,
    pub parent: Option<usize>,
    /// Label of the move from the parent.
    pub via: Option<usize>,
    /// Batches of components turned into ω along the branch, oldest first.
    pub accel_history: Vec<BTreeSet<usize>>,
    /// Whether this node was created with a fresh ω batch.
    pub accelerated: bool,
    pub kind: NodeKind,
    pub children: Vec<usize>,
    pub depth: usize,
}

/// A Karp–Miller tree; node 0 is the root and nodes are stored in BFS order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmTree<S> {
    pub nodes: Vec<KmNode<S>>,
}

/// Root-to-node path in a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmBranch {
    /// Move labels, one per edge.
    pub labels: Vec<usize>,
    /// `(state label, extended vector)` for every node from the root.
    pub nodes: Vec<(String, ExtendedVector)>,
}

impl KmBranch {
    /// Whether the branch is consistent with `vass`: every edge is a
    /// transition between the named states, finite entries follow the update
    /// exactly or turn into ω, and ω entries stay ω.
    pub fn replays_on(&self, vass: &Vass) -> bool {
        if self.nodes.len() != self.labels.len() + 1 {
            return false;
        }
        self.labels.iter().enumerate().all(|(k, &label)| {
            let Ok(t) = vass.transition(label) else {
                return false;
            };
            let (from, x) = &self.nodes[k];
            let (to, y) = &self.nodes[k + 1];
            vass.state_name(t.from) == from.as_str()
                && vass.state_name(t.to) == to.as_str()
                && x.0.len() == t.update.len()
                && y.0.len() == t.update.len()
                && x.0.iter().zip(&y.0).zip(&t.update).all(|((a, b), d)| match (a, b) {
                    (ExtValue::Omega, b) => b.is_omega(),
                    (ExtValue::Finite(a), ExtValue::Finite(b)) => !(a + d).is_negative() && *b == a + d,
                    (ExtValue::Finite(a), ExtValue::Omega) => !(a + d).is_negative(),
                })
        })
    }
}

/// Builds the tree from `(init_state, init_vector)`, failing past `cap` nodes.
pub fn build_km<T: CounterSystem>(
    sys: &T,
    init_state: T::State,
    init_vector: ExtendedVector,
    cap: usize,
) -> Result<KmTree<T::State>, CoverabilityError> {
    if init_vector.len() != sys.dim() {
        return Err(CoverabilityError::ArityMismatch {
            expected: sys.dim(),
            found: init_vector.len(),
        });
    }
    let initial_omegas = init_vector.omega_positions();
    let mut accel_history = Vec::new();
    if !initial_omegas.is_empty() {
        accel_history.push(initial_omegas);
    }
    let mut nodes = vec![KmNode {
        state: init_state,
        vector: init_vector,
        parent: None,
        via: None,
        accelerated: !accel_history.is_empty(),
        accel_history,
        kind: NodeKind::Interior,
        children: Vec::new(),
        depth: 0,
    }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        if nodes[idx].kind != NodeKind::Interior {
            continue;
        }
        let steps = sys.steps(&nodes[idx].state);
        for step in steps {
            let Some(mut vector) = nodes[idx].vector.add(&step.update) else {
                continue;
            };
            let batch = accelerate(&nodes, idx, &step.target, &mut vector);
            let repeated = ancestors(&nodes, idx)
                .find(|&a| nodes[a].state == step.target && nodes[a].vector == vector);
            let mut accel_history = nodes[idx].accel_history.clone();
            let accelerated = !batch.is_empty();
            if accelerated {
                accel_history.push(batch);
            }
            if nodes.len() >= cap {
                return Err(CoverabilityError::ResourceCap { cap });
            }
            let child = nodes.len();
            nodes.push(KmNode {
                state: step.target,
                vector,
                parent: Some(idx),
                via: Some(step.label),
                accel_history,
                accelerated,
                kind: match repeated {
                    Some(ancestor) => NodeKind::Repeated { ancestor },
                    None => NodeKind::Interior,
                },
                children: Vec::new(),
                depth: nodes[idx].depth + 1,
            });
            nodes[idx].children.push(child);
            if repeated.is_none() {
                queue.push_back(child);
            }
        }
    }
    Ok(KmTree { nodes })
}

/// `idx` and its ancestors up to the root.
fn ancestors<S>(nodes: &[KmNode<S>], idx: usize) -> impl Iterator<Item = usize> + '_ {
    std::iter::successors(Some(idx), move |&i| nodes[i].parent)
}

/// Applies ω-acceleration against every same-state ancestor of a prospective
/// child of `parent`, to a fixpoint; returns the components turned into ω.
fn accelerate<S: Eq>(
    nodes: &[KmNode<S>],
    parent: usize,
    state: &S,
    vector: &mut ExtendedVector,
) -> BTreeSet<usize> {
    let mut batch = BTreeSet::new();
    loop {
        let mut changed = false;
        for a in ancestors(nodes, parent) {
            let anc = &nodes[a];
            if anc.state != *state || !anc.vector.le(vector) || anc.vector == *vector {
                continue;
            }
            for (i, (old, new)) in anc.vector.0.iter().zip(vector.0.iter_mut()).enumerate() {
                if let (ExtValue::Finite(o), ExtValue::Finite(n)) = (old, &*new) {
                    if n > o {
                        *new = ExtValue::Omega;
                        batch.insert(i);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return batch;
        }
    }
}

impl<S: Clone + Eq + fmt::Debug> KmTree<S> {
    pub fn root(&self) -> &KmNode<S> {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn has_omega(&self) -> bool {
        self.nodes.iter().any(|n| n.vector.has_omega())
    }

    /// Node indices from the root to `idx`.
    pub fn path_to(&self, idx: usize) -> Vec<usize> {
        let mut path: Vec<usize> = ancestors(&self.nodes, idx).collect();
        path.reverse();
        path
    }

    pub fn branch<T>(&self, sys: &T, idx: usize) -> KmBranch
    where
        T: CounterSystem<State = S>,
    {
        let path = self.path_to(idx);
        KmBranch {
            labels: path.iter().filter_map(|&i| self.nodes[i].via).collect(),
            nodes: path
                .iter()
                .map(|&i| {
                    let n = &self.nodes[i];
                    (sys.state_label(&n.state), n.vector.clone())
                })
                .collect(),
        }
    }

    /// First node in BFS order whose vector is ω on every component of `x`.
    pub fn find_omega_on(&self, x: &BTreeSet<usize>) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| x.iter().all(|&i| n.vector.get(i).is_omega()))
    }

    /// First node (BFS order) with a nonempty prefix of its acceleration
    /// history accepted by `pred`, shortest prefix first.
    pub fn find_history<F>(&self, mut pred: F) -> Option<(usize, Vec<BTreeSet<usize>>)>
    where
        F: FnMut(&[BTreeSet<usize>]) -> bool,
    {
        for (idx, n) in self.nodes.iter().enumerate() {
            for k in 1..=n.accel_history.len() {
                if pred(&n.accel_history[..k]) {
                    return Some((idx, n.accel_history[..k].to_vec()));
                }
            }
        }
        None
    }

    /// First node (BFS order) that covers a proper ancestor with the same
    /// state, paired with that ancestor.
    pub fn find_self_covering(&self) -> Option<(usize, usize)> {
        for (idx, n) in self.nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                if let Some(a) = ancestors(&self.nodes, p)
                    .find(|&a| self.nodes[a].state == n.state && self.nodes[a].vector.le(&n.vector))
                {
                    return Some((idx, a));
                }
            }
        }
        None
    }

    /// Graphviz rendering; ω is written `w` and accelerating edges are dashed.
    pub fn to_dot<T>(&self, sys: &T) -> String
    where
        T: CounterSystem<State = S>,
    {
        let mut out = String::from("digraph km {\n  node [shape=box];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let mut label = format!("{} {}", sys.state_label(&n.state), n.vector);
            if let NodeKind::Repeated { ancestor } = n.kind {
                let _ = write!(label, " = n{ancestor}");
            }
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape(&label));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let (Some(p), Some(via)) = (n.parent, n.via) {
                let style = if n.accelerated { ", style=dashed" } else { "" };
                let _ = writeln!(out, "  n{p} -> n{i} [label=\"t{via}\"{style}];");
            }
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Convenience: the tree of a plain model from a concrete configuration.
pub fn build_km_vass(
    vass: &Vass,
    state: StateId,
    values: &[BigInt],
    cap: usize,
) -> Result<KmTree<StateId>, CoverabilityError> {
    build_km(vass, state, ExtendedVector::from_naturals(values), cap)
}

/// First node carrying ω on every component of `x`; one exists iff `x` is
/// simultaneously unbounded.
pub fn simultaneously_unbounded_km<S: Clone + Eq + fmt::Debug>(
    tree: &KmTree<S>,
    x: &BTreeSet<usize>,
) -> Option<usize> {
    tree.find_omega_on(x)
}

/// First branch whose acceleration history has a prefix accepted by `pred`.
pub fn disjointness_witness_km<S, F>(
    tree: &KmTree<S>,
    pred: F,
) -> Option<(usize, Vec<BTreeSet<usize>>)>
where
    S: Clone + Eq + fmt::Debug,
    F: FnMut(&[BTreeSet<usize>]) -> bool,
{
    tree.find_history(pred)
}
