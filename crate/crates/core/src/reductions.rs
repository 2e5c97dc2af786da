//! Model transformations: the reversal-counting product, its thresholded
//! variant, two encodings of control states into plain vector addition
//! systems, the globalization gadget and the promptness image.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::coverability::{CounterSystem, Step};
use crate::model::{Configuration, ModelError, StateId, Transition, Vass};

/// Whether a counter is currently in a nondecreasing or nonincreasing phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Inc,
    Dec,
}

/// Control state of the reversal-counting product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RbState {
    pub state: StateId,
    pub modes: Vec<Mode>,
}

/// Mode after applying `b` and whether that step is a reversal.
fn mode_step(mode: Mode, b: &BigInt) -> (Mode, bool) {
    if b.is_negative() {
        (Mode::Dec, mode == Mode::Inc)
    } else if b.is_positive() {
        (Mode::Inc, mode == Mode::Dec)
    } else {
        (mode, false)
    }
}

/// The product of a model with one phase bit per counter, with `n` extra
/// counters that count reversals. Explored lazily.
#[derive(Debug, Clone)]
pub struct RbProduct<'a> {
    base: &'a Vass,
}

/// A concrete configuration of the product: modes plus `2n` counters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductConfiguration {
    pub state: RbState,
    pub values: Vec<BigInt>,
}

impl<'a> RbProduct<'a> {
    pub fn new(base: &'a Vass) -> Self {
        RbProduct { base }
    }

    pub fn base(&self) -> &Vass {
        self.base
    }

    pub fn initial_state(&self, q: StateId) -> RbState {
        RbState {
            state: q,
            modes: vec![Mode::Inc; self.base.dim()],
        }
    }

    /// Initial product configuration: base values, zero reversal counters.
    pub fn lift(&self, c: &Configuration) -> ProductConfiguration {
        let mut values = c.values().to_vec();
        values.extend(std::iter::repeat_n(BigInt::zero(), self.base.dim()));
        ProductConfiguration {
            state: self.initial_state(c.state()),
            values,
        }
    }

    /// The product move induced by base transition `index` from `state`.
    pub fn step(&self, state: &RbState, index: usize) -> Step<RbState> {
        let t = &self.base.transitions()[index];
        let n = self.base.dim();
        let mut modes = Vec::with_capacity(n);
        let mut update = t.update.clone();
        update.resize(2 * n, BigInt::zero());
        for (i, b) in t.update.iter().enumerate() {
            let (m, rev) = mode_step(state.modes[i], b);
            modes.push(m);
            if rev {
                update[n + i] = BigInt::from(1);
            }
        }
        Step {
            label: index,
            target: RbState { state: t.to, modes },
            update,
        }
    }

    /// Concrete successors, keeping only those with nonnegative counters.
    pub fn successors(&self, cfg: &ProductConfiguration) -> Vec<(usize, ProductConfiguration)> {
        self.steps(&cfg.state)
            .into_iter()
            .filter_map(|s| {
                let values: Vec<BigInt> =
                    cfg.values.iter().zip(&s.update).map(|(x, b)| x + b).collect();
                if values.iter().any(|v| v.is_negative()) {
                    return None;
                }
                Some((
                    s.label,
                    ProductConfiguration {
                        state: s.target,
                        values,
                    },
                ))
            })
            .collect()
    }

    /// Lifts every configuration of a base run.
    pub fn lift_run(
        &self,
        init: &Configuration,
        path: &[usize],
    ) -> Result<Vec<ProductConfiguration>, ModelError> {
        let mut out = vec![self.lift(init)];
        for (k, &ti) in path.iter().enumerate() {
            let t = self.base.transition(ti)?;
            let cur = out.last().expect("nonempty");
            if t.from != cur.state.state {
                return Err(ModelError::BrokenPath(k));
            }
            let s = self.step(&cur.state, ti);
            let values: Vec<BigInt> =
                cur.values.iter().zip(&s.update).map(|(x, b)| x + b).collect();
            if let Some(component) = values.iter().position(|v| v.is_negative()) {
                return Err(ModelError::NegativeCounter { component });
            }
            out.push(ProductConfiguration {
                state: s.target,
                values,
            });
        }
        Ok(out)
    }

    /// The part of the product reachable in the control graph from `q`, as
    /// an explicit model, together with the image of `q`.
    ///
    /// Transition labels of the result map back to base transitions through
    /// the returned vector.
    pub fn materialize_from(&self, q: StateId) -> (Vass, StateId, Vec<usize>) {
        let init = self.initial_state(q);
        let mut ids: HashMap<RbState, usize> = HashMap::from([(init.clone(), 0)]);
        let mut order = vec![init];
        let mut queue = VecDeque::from([0usize]);
        let mut transitions = Vec::new();
        let mut origin = Vec::new();
        while let Some(i) = queue.pop_front() {
            let s = order[i].clone();
            for step in self.steps(&s) {
                let j = *ids.entry(step.target.clone()).or_insert_with(|| {
                    order.push(step.target.clone());
                    queue.push_back(order.len() - 1);
                    order.len() - 1
                });
                transitions.push(Transition::new(i, j, step.update));
                origin.push(step.label);
            }
        }
        let names = order.iter().map(|s| self.state_label(s)).collect();
        let vass = Vass::new(names, 2 * self.base.dim(), transitions)
            .expect("product is well formed");
        (vass, 0, origin)
    }
}

impl CounterSystem for RbProduct<'_> {
    type State = RbState;

    fn dim(&self) -> usize {
        2 * self.base.dim()
    }

    fn steps(&self, state: &RbState) -> Vec<Step<RbState>> {
        self.base
            .outgoing(state.state)
            .map(|(i, _)| self.step(state, i))
            .collect()
    }

    fn state_label(&self, state: &RbState) -> String {
        let modes: String = state
            .modes
            .iter()
            .map(|m| match m {
                Mode::Inc => 'I',
                Mode::Dec => 'D',
            })
            .collect();
        format!("{}[{}]", self.base.state_name(state.state), modes)
    }
}

/// The product counting only reversals that happen while the counter is above `bound`.
#[derive(Debug, Clone)]
pub struct TsB<'a> {
    pub base: &'a Vass,
    pub bound: BigInt,
}

impl<'a> TsB<'a> {
    pub fn new(base: &'a Vass, bound: BigInt) -> Self {
        TsB { base, bound }
    }

    /// One-step successors from `cfg` with nonnegative base counters.
    pub fn successors(&self, cfg: &ProductConfiguration) -> Vec<(usize, ProductConfiguration)> {
        let n = self.base.dim();
        let mut out = Vec::new();
        'next: for (ti, t) in self.base.outgoing(cfg.state.state) {
            let mut values = cfg.values.clone();
            let mut modes = Vec::with_capacity(n);
            for (i, b) in t.update.iter().enumerate() {
                let (m, rev) = mode_step(cfg.state.modes[i], b);
                modes.push(m);
                if rev && cfg.values[i] > self.bound {
                    values[n + i] += 1;
                }
                values[i] += b;
                if values[i].is_negative() {
                    continue 'next;
                }
            }
            out.push((
                ti,
                ProductConfiguration {
                    state: RbState { state: t.to, modes },
                    values,
                },
            ));
        }
        out
    }
}

/// A plain vector addition system simulating a model, with its initial vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VasImage {
    pub vas: Vass,
    pub init: Configuration,
}

/// Encodes control states as `|Q|` extra counters holding a one-hot vector.
///
/// A self-loop leaves its state counter unchanged, so in a model with more
/// than one state it is enabled from every state of the image. Runs
/// correspond one to one only for models without such loops.
pub fn vass_to_vas_simple(v: &Vass, c: &Configuration) -> VasImage {
    let n = v.dim();
    let k = v.num_states();
    let updates = v
        .transitions()
        .iter()
        .map(|t| {
            let mut u = t.update.clone();
            u.resize(n + k, BigInt::zero());
            u[n + t.from] -= 1;
            u[n + t.to] += 1;
            u
        })
        .collect();
    let mut init = c.values().to_vec();
    init.resize(n + k, BigInt::zero());
    init[n + c.state()] = BigInt::from(1);
    VasImage {
        vas: Vass::vas(n + k, updates).expect("well formed"),
        init: Configuration::new(0, init).expect("nonnegative"),
    }
}

/// Encodes control states with three extra counters.
///
/// With `m = |Q| + 1`, state `i` (1-based) uses `a = i` and `b = m·(m − i + 1)`
/// and is represented in three rotating phases `(a, b, 0)`, `(0, a, b)` and
/// `(b, 0, a)`. Model transitions move from the first phase of the source to
/// the second phase of the target; two fixed moves per state rotate back to
/// the first phase. No move is enabled from any other encoding.
pub fn vass_to_vas_hp(v: &Vass, c: &Configuration) -> VasImage {
    let n = v.dim();
    let m = v.num_states() as i64 + 1;
    let a = |q: StateId| BigInt::from(q as i64 + 1);
    let b = |q: StateId| BigInt::from(m * (m - q as i64));
    let extend = |base: &[BigInt], e: [BigInt; 3]| {
        let mut u = base.to_vec();
        u.extend(e);
        u
    };
    let zero = vec![BigInt::zero(); n];
    let mut updates = Vec::new();
    for t in v.transitions() {
        updates.push(extend(
            &t.update,
            [-a(t.from), a(t.to) - b(t.from), b(t.to)],
        ));
    }
    for q in 0..v.num_states() {
        updates.push(extend(&zero, [b(q), -a(q), a(q) - b(q)]));
        updates.push(extend(&zero, [a(q) - b(q), b(q), -a(q)]));
    }
    let init = extend(c.values(), [a(c.state()), b(c.state()), BigInt::zero()]);
    VasImage {
        vas: Vass::vas(n + 3, updates).expect("well formed"),
        init: Configuration::new(0, init).expect("nonnegative"),
    }
}

/// Adds a fresh state with one unit self-loop per counter and a zero jump to
/// every original state. Returns the new model and the fresh state.
pub fn globalize(v: &Vass) -> (Vass, StateId) {
    let mut name = "q_new".to_string();
    while v.state_id(&name).is_some() {
        name.push('\'');
    }
    let fresh = v.num_states();
    let mut states = v.states().to_vec();
    states.push(name);
    let mut transitions = v.transitions().to_vec();
    for i in 0..v.dim() {
        let mut u = vec![BigInt::zero(); v.dim()];
        u[i] = BigInt::from(1);
        transitions.push(Transition::new(fresh, fresh, u));
    }
    for q in 0..v.num_states() {
        transitions.push(Transition::new(fresh, q, vec![BigInt::zero(); v.dim()]));
    }
    (
        Vass::new(states, v.dim(), transitions).expect("well formed"),
        fresh,
    )
}

/// A model whose transitions are split into internal and external ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptnessInstance {
    pub base: Vass,
    internal: BTreeSet<usize>,
}

impl PromptnessInstance {
    pub fn new(base: Vass, internal: BTreeSet<usize>) -> Result<Self, ModelError> {
        if let Some(&k) = internal.iter().find(|&&k| k >= base.transitions().len()) {
            return Err(ModelError::TransitionOutOfRange(k));
        }
        Ok(PromptnessInstance { base, internal })
    }

    pub fn internal(&self) -> &BTreeSet<usize> {
        &self.internal
    }

    pub fn external(&self) -> BTreeSet<usize> {
        (0..self.base.transitions().len())
            .filter(|k| !self.internal.contains(k))
            .collect()
    }
}

/// Output of [`promptness_reduction`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptnessImage {
    pub model: Vass,
    pub init: Configuration,
    /// The extra counter counting internal steps (0-based).
    pub target: usize,
}

/// Two copies of the model: the first runs freely, a zero move per state
/// enters the second, where only internal transitions remain and each one
/// increments an extra counter.
pub fn promptness_reduction(p: &PromptnessInstance, c: &Configuration) -> PromptnessImage {
    let v = &p.base;
    let n = v.dim();
    let k = v.num_states();
    let mut states: Vec<String> = v.states().iter().map(|s| format!("{s}/1")).collect();
    states.extend(v.states().iter().map(|s| format!("{s}/2")));
    let mut transitions = Vec::new();
    for t in v.transitions() {
        let mut u = t.update.clone();
        u.push(BigInt::zero());
        transitions.push(Transition::new(t.from, t.to, u));
    }
    for q in 0..k {
        transitions.push(Transition::new(q, k + q, vec![BigInt::zero(); n + 1]));
    }
    for &i in p.internal() {
        let t = &v.transitions()[i];
        let mut u = t.update.clone();
        u.push(BigInt::from(1));
        transitions.push(Transition::new(k + t.from, k + t.to, u));
    }
    let mut init = c.values().to_vec();
    init.push(BigInt::zero());
    PromptnessImage {
        model: Vass::new(states, n + 1, transitions).expect("well formed"),
        init: Configuration::new(c.state(), init).expect("nonnegative"),
        target: n,
    }
}
