//! Breadth-first search for pseudo-runs weakly satisfying a property.
//!
//! The search walks an abstraction of partial decompositions: the current
//! control state, the values of components not yet strictly increased by a
//! completed loop (the others may go negative and are forgotten), and, while
//! inside a loop segment, its start state and accumulated effect. Opening and
//! closing a loop are free moves, so the first witness found has the fewest
//! transitions. When the abstraction is finite and exhausted, no witness exists.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::model::{Configuration, PseudoConfiguration, PseudoRun, StateId, Transition, Vass};
use crate::properties::{Decomposition, GupProperty};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Abstract {
    /// Completed loop segments.
    row: usize,
    in_loop: bool,
    state: StateId,
    /// `None` once a completed loop strictly increased the component.
    values: Vec<Option<BigInt>>,
    loop_state: StateId,
    effect: Vec<BigInt>,
    nonempty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    Start,
    Fire(usize),
    Open,
    Close,
}

#[derive(Debug)]
struct Node {
    parent: usize,
    mv: Move,
}

/// Result of advancing a search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Progress {
    /// Still running; the next level will be explored on the next call.
    Running,
    Found(PseudoRun, Decomposition),
    /// Every reachable abstract state has been explored.
    Exhausted,
    /// Stopped at the depth cap with unexplored moves left.
    DepthCap,
    /// Stopped after storing too many abstract states.
    StateCap,
}

/// Limits for one search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of transitions in a witness.
    pub depth_cap: usize,
    /// Maximum number of stored abstract states.
    pub state_cap: usize,
}

/// One search, advanced a depth level at a time.
pub struct GupSearch<'a> {
    vass: &'a Vass,
    init: Configuration,
    property: &'a GupProperty,
    nonempty_loops: bool,
    limits: SearchLimits,
    nodes: Vec<Node>,
    states: Vec<Abstract>,
    seen: HashSet<Abstract>,
    frontier: Vec<usize>,
    depth: usize,
    blocked: bool,
    done: Option<Progress>,
}

impl<'a> GupSearch<'a> {
    pub fn new(
        vass: &'a Vass,
        init: &Configuration,
        property: &'a GupProperty,
        nonempty_loops: bool,
        limits: SearchLimits,
    ) -> Self {
        let start = Abstract {
            row: 0,
            in_loop: false,
            state: init.state(),
            values: init.values().iter().cloned().map(Some).collect(),
            loop_state: 0,
            effect: Vec::new(),
            nonempty: false,
        };
        GupSearch {
            vass,
            init: init.clone(),
            property,
            nonempty_loops,
            limits,
            nodes: vec![Node {
                parent: 0,
                mv: Move::Start,
            }],
            states: vec![start],
            seen: HashSet::new(),
            frontier: vec![0],
            depth: 0,
            blocked: false,
            done: None,
        }
    }

    /// Number of transitions explored so far.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn stored_states(&self) -> usize {
        self.states.len()
    }

    /// Runs to completion.
    pub fn run(mut self) -> Progress {
        loop {
            match self.advance() {
                Progress::Running => continue,
                other => return other,
            }
        }
    }

    /// Explores every abstract state reachable with exactly the current
    /// number of transitions.
    pub fn advance(&mut self) -> Progress {
        if let Some(p) = &self.done {
            return p.clone();
        }
        let result = self.level();
        if result != Progress::Running {
            self.done = Some(result.clone());
        }
        result
    }

    fn level(&mut self) -> Progress {
        let mut queue: Vec<usize> = std::mem::take(&mut self.frontier)
            .into_iter()
            .filter(|&i| self.seen.insert(self.states[i].clone()))
            .collect();
        let mut next = Vec::new();
        let mut next_seen: HashSet<Abstract> = HashSet::new();
        let mut head = 0;
        while head < queue.len() {
            let idx = queue[head];
            head += 1;
            let cur = self.states[idx].clone();
            let k = self.property.len();
            // free moves
            let mut free = Vec::new();
            if !cur.in_loop && cur.row < k {
                free.push((Move::Open, self.open(&cur)));
            }
            if cur.in_loop {
                if let Some(closed) = self.close(&cur) {
                    if closed.row == k {
                        let node = self.push(idx, Move::Close, closed);
                        let (run, dec) = self.witness(node);
                        return Progress::Found(run, dec);
                    }
                    free.push((Move::Close, closed));
                }
            }
            for (mv, s) in free {
                if !self.seen.contains(&s) {
                    self.seen.insert(s.clone());
                    let node = self.push(idx, mv, s);
                    queue.push(node);
                }
            }
            // transitions
            for (ti, t) in self.vass.outgoing(cur.state) {
                let Some(s) = fire(&cur, t) else { continue };
                if self.depth >= self.limits.depth_cap {
                    self.blocked = true;
                    continue;
                }
                if self.seen.contains(&s) || next_seen.contains(&s) {
                    continue;
                }
                next_seen.insert(s.clone());
                let node = self.push(idx, Move::Fire(ti), s);
                next.push(node);
            }
            if self.states.len() > self.limits.state_cap {
                return Progress::StateCap;
            }
        }
        if next.is_empty() {
            return if self.blocked {
                Progress::DepthCap
            } else {
                Progress::Exhausted
            };
        }
        self.frontier = next;
        self.depth += 1;
        Progress::Running
    }

    fn push(&mut self, parent: usize, mv: Move, s: Abstract) -> usize {
        self.nodes.push(Node { parent, mv });
        self.states.push(s);
        self.nodes.len() - 1
    }

    fn open(&self, cur: &Abstract) -> Abstract {
        Abstract {
            in_loop: true,
            loop_state: cur.state,
            effect: vec![BigInt::from(0); self.vass.dim()],
            nonempty: false,
            ..cur.clone()
        }
    }

    fn close(&self, cur: &Abstract) -> Option<Abstract> {
        if cur.state != cur.loop_state || (self.nonempty_loops && !cur.nonempty) {
            return None;
        }
        let row = self.property.row(cur.row + 1);
        for (j, d) in cur.effect.iter().enumerate() {
            if !row[j].contains(d) {
                return None;
            }
            if d.is_negative() && cur.values[j].is_some() {
                return None;
            }
        }
        let values = cur
            .values
            .iter()
            .zip(&cur.effect)
            .map(|(v, d)| if d.is_positive() { None } else { v.clone() })
            .collect();
        Some(Abstract {
            row: cur.row + 1,
            in_loop: false,
            state: cur.state,
            values,
            loop_state: 0,
            effect: Vec::new(),
            nonempty: false,
        })
    }

    fn witness(&self, mut node: usize) -> (PseudoRun, Decomposition) {
        let mut moves = Vec::new();
        while node != 0 {
            moves.push(self.nodes[node].mv);
            node = self.nodes[node].parent;
        }
        moves.reverse();
        let k = self.property.len();
        let mut path = Vec::new();
        let mut marks = vec![0usize; 2 * k + 1];
        let mut row = 0;
        for mv in moves {
            match mv {
                Move::Fire(t) => path.push(t),
                Move::Open => marks[2 * row + 1] = path.len(),
                Move::Close => {
                    row += 1;
                    marks[2 * row] = path.len();
                }
                Move::Start => {}
            }
        }
        let run = PseudoRun {
            init: PseudoConfiguration::new(self.init.state(), self.init.values().to_vec()),
            path,
        };
        (run, Decomposition::new(marks))
    }
}

fn fire(cur: &Abstract, t: &Transition) -> Option<Abstract> {
    let mut values = Vec::with_capacity(cur.values.len());
    for (v, b) in cur.values.iter().zip(&t.update) {
        match v {
            Some(x) => {
                let y = x + b;
                if y.is_negative() {
                    return None;
                }
                values.push(Some(y));
            }
            None => values.push(None),
        }
    }
    let (effect, nonempty) = if cur.in_loop {
        (
            cur.effect.iter().zip(&t.update).map(|(e, b)| e + b).collect(),
            true,
        )
    } else {
        (Vec::new(), false)
    };
    Some(Abstract {
        row: cur.row,
        in_loop: cur.in_loop,
        state: t.to,
        values,
        loop_state: cur.loop_state,
        effect,
        nonempty,
    })
}

/// Outcome of running several searches side by side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lockstep {
    /// Index of the first candidate (in the given order) with a witness at
    /// the smallest depth.
    Found(usize, PseudoRun, Decomposition),
    Exhausted,
    /// At least one candidate hit a cap; the note names it.
    Capped(String),
}

/// Advances every search one depth level at a time, stopping once the
/// searches together store more than `state_budget` abstract states.
pub fn lockstep(mut searches: Vec<GupSearch<'_>>, state_budget: usize) -> Lockstep {
    let mut status: Vec<Option<Progress>> = vec![None; searches.len()];
    loop {
        let stored: usize = searches.iter().map(GupSearch::stored_states).sum();
        if stored > state_budget {
            return Lockstep::Capped("search stopped at the state cap".into());
        }
        let mut found = None;
        let mut running = false;
        for (i, s) in searches.iter_mut().enumerate() {
            if status[i].is_some() {
                continue;
            }
            match s.advance() {
                Progress::Running => running = true,
                Progress::Found(r, d) => {
                    if found.is_none() {
                        found = Some((i, r, d));
                    }
                    status[i] = Some(Progress::Exhausted);
                }
                other => status[i] = Some(other),
            }
        }
        if let Some((i, r, d)) = found {
            return Lockstep::Found(i, r, d);
        }
        if !running {
            break;
        }
    }
    if status.iter().all(|s| *s == Some(Progress::Exhausted)) {
        return Lockstep::Exhausted;
    }
    let depth = status.contains(&Some(Progress::DepthCap));
    let states = status.contains(&Some(Progress::StateCap));
    let mut caps = Vec::new();
    if depth {
        caps.push("depth cap");
    }
    if states {
        caps.push("state cap");
    }
    Lockstep::Capped(format!("search stopped at the {}", caps.join(" and ")))
}
