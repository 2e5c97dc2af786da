//! Vector addition systems with states: syntax, configurations, runs and
//! pseudo-runs, and the size measures used by the length bounds.
//!
//! Component indices are 0-based throughout the library. Text formats and the
//! CLI translate to and from the 1-based numbering users write.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Index of a control state inside a [`Vass`].
pub type StateId = usize;

/// Errors raised while building or executing a model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("model has no control states")]
    EmptyModel,

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("duplicate state `{0}`")]
    DuplicateState(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("transition {transition}: expected {expected} entries, found {found}")]
    DimensionMismatch {
        transition: usize,
        expected: usize,
        found: usize,
    },

    #[error("vector has {found} entries but the model has dimension {expected}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("state index {0} out of range")]
    StateOutOfRange(StateId),

    #[error("transition index {0} out of range")]
    TransitionOutOfRange(usize),

    #[error("counter {} would become negative", component + 1)]
    NegativeCounter { component: usize },

    #[error("transition does not start in the current control state")]
    WrongSource,

    #[error("path breaks at step {0}: transition source does not match the current state")]
    BrokenPath(usize),
}

/// Shorthand for building integer vectors in code and tests.
pub fn vector(values: &[i64]) -> Vec<BigInt> {
    values.iter().map(|&v| BigInt::from(v)).collect()
}

/// `q --update--> q'`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: StateId,
    pub to: StateId,
    pub update: Vec<BigInt>,
}

impl Transition {
    pub fn new(from: StateId, to: StateId, update: Vec<BigInt>) -> Self {
        Transition { from, to, update }
    }
}

/// Unvalidated model as produced by a parser.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawModel {
    pub dim: usize,
    pub states: Vec<String>,
    pub transitions: Vec<RawTransition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTransition {
    pub from: String,
    pub to: String,
    pub update: Vec<BigInt>,
}

/// A vector addition system with states.
///
/// Transitions are identified by their position in the declaration order;
/// structurally identical transitions are kept distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vass {
    states: Vec<String>,
    dim: usize,
    transitions: Vec<Transition>,
}

impl Vass {
    pub fn new(
        states: Vec<String>,
        dim: usize,
        transitions: Vec<Transition>,
    ) -> Result<Self, ModelError> {
        if states.is_empty() {
            return Err(ModelError::EmptyModel);
        }
        if dim == 0 {
            return Err(ModelError::ZeroDimension);
        }
        let mut seen = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if seen.insert(s.as_str(), i).is_some() {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        for (k, t) in transitions.iter().enumerate() {
            if t.from >= states.len() {
                return Err(ModelError::StateOutOfRange(t.from));
            }
            if t.to >= states.len() {
                return Err(ModelError::StateOutOfRange(t.to));
            }
            if t.update.len() != dim {
                return Err(ModelError::DimensionMismatch {
                    transition: k,
                    expected: dim,
                    found: t.update.len(),
                });
            }
        }
        Ok(Vass {
            states,
            dim,
            transitions,
        })
    }

    /// A VAS: a single synthetic control state `q` carrying every update as a self-loop.
    pub fn vas(dim: usize, updates: Vec<Vec<BigInt>>) -> Result<Self, ModelError> {
        let transitions = updates
            .into_iter()
            .map(|u| Transition::new(0, 0, u))
            .collect();
        Vass::new(vec!["q".to_string()], dim, transitions)
    }

    /// Resolves state names and checks arities.
    pub fn validate(raw: &RawModel) -> Result<Self, ModelError> {
        if raw.states.is_empty() {
            return Err(ModelError::EmptyModel);
        }
        let mut index = HashMap::new();
        for (i, s) in raw.states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::UnknownState(name.to_string()))
        };
        let mut transitions = Vec::with_capacity(raw.transitions.len());
        for (k, t) in raw.transitions.iter().enumerate() {
            if t.update.len() != raw.dim {
                return Err(ModelError::DimensionMismatch {
                    transition: k,
                    expected: raw.dim,
                    found: t.update.len(),
                });
            }
            transitions.push(Transition::new(
                lookup(&t.from)?,
                lookup(&t.to)?,
                t.update.clone(),
            ));
        }
        Vass::new(raw.states.clone(), raw.dim, transitions)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, index: usize) -> Result<&Transition, ModelError> {
        self.transitions
            .get(index)
            .ok_or(ModelError::TransitionOutOfRange(index))
    }

    pub fn is_vas(&self) -> bool {
        self.states.len() == 1
    }

    /// Transitions leaving `q`, with their indices, in declaration order.
    pub fn outgoing(&self, q: StateId) -> impl Iterator<Item = (usize, &Transition)> {
        self.transitions
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.from == q)
    }

    pub fn norms(&self) -> Norms {
        Norms::of(self)
    }

    /// Checks that `values` has the model's arity.
    pub fn check_arity(&self, values: &[BigInt]) -> Result<(), ModelError> {
        if values.len() != self.dim {
            return Err(ModelError::ArityMismatch {
                expected: self.dim,
                found: values.len(),
            });
        }
        Ok(())
    }

    /// Replays `path` from `init`, materializing every pseudo-configuration.
    pub fn replay(
        &self,
        init: &PseudoConfiguration,
        path: &[usize],
    ) -> Result<Replay, ModelError> {
        self.check_arity(&init.values)?;
        if init.state >= self.states.len() {
            return Err(ModelError::StateOutOfRange(init.state));
        }
        let mut configs = Vec::with_capacity(path.len() + 1);
        configs.push(init.clone());
        let mut genuine = init.values.iter().all(|v| !v.is_negative());
        for (k, &ti) in path.iter().enumerate() {
            let t = self.transition(ti)?;
            let last = configs.last().expect("nonempty");
            let next = last.fire(t).map_err(|_| ModelError::BrokenPath(k))?;
            genuine &= next.values.iter().all(|v| !v.is_negative());
            configs.push(next);
        }
        Ok(Replay {
            run: PseudoRun {
                init: init.clone(),
                path: path.to_vec(),
            },
            configs,
            genuine,
        })
    }
}

/// `⟨q, x⟩` with `x` over the naturals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    state: StateId,
    values: Vec<BigInt>,
}

impl Configuration {
    pub fn new(state: StateId, values: Vec<BigInt>) -> Result<Self, ModelError> {
        if let Some(component) = values.iter().position(|v| v.is_negative()) {
            return Err(ModelError::NegativeCounter { component });
        }
        Ok(Configuration { state, values })
    }

    pub fn state(&self) -> StateId {
        self.state
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Fires `t`, failing if a counter would drop below zero.
    pub fn fire(&self, t: &Transition) -> Result<Configuration, ModelError> {
        if t.from != self.state {
            return Err(ModelError::WrongSource);
        }
        let mut values = Vec::with_capacity(self.values.len());
        for (component, (x, b)) in self.values.iter().zip(&t.update).enumerate() {
            let v = x + b;
            if v.is_negative() {
                return Err(ModelError::NegativeCounter { component });
            }
            values.push(v);
        }
        Ok(Configuration {
            state: t.to,
            values,
        })
    }

    pub fn to_pseudo(&self) -> PseudoConfiguration {
        PseudoConfiguration {
            state: self.state,
            values: self.values.clone(),
        }
    }
}

impl TryFrom<PseudoConfiguration> for Configuration {
    type Error = ModelError;

    fn try_from(p: PseudoConfiguration) -> Result<Self, ModelError> {
        Configuration::new(p.state, p.values)
    }
}

/// `⟨q, x⟩` with `x` over the integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PseudoConfiguration {
    pub state: StateId,
    pub values: Vec<BigInt>,
}

impl PseudoConfiguration {
    pub fn new(state: StateId, values: Vec<BigInt>) -> Self {
        PseudoConfiguration { state, values }
    }

    /// Plain vector addition; only the source state is checked.
    pub fn fire(&self, t: &Transition) -> Result<PseudoConfiguration, ModelError> {
        if t.from != self.state {
            return Err(ModelError::WrongSource);
        }
        Ok(PseudoConfiguration {
            state: t.to,
            values: self
                .values
                .iter()
                .zip(&t.update)
                .map(|(x, b)| x + b)
                .collect(),
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }
}

/// An initial pseudo-configuration and a path respecting the control graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PseudoRun {
    pub init: PseudoConfiguration,
    pub path: Vec<usize>,
}

impl PseudoRun {
    /// Checks state adjacency along `path`.
    pub fn new(
        vass: &Vass,
        init: PseudoConfiguration,
        path: Vec<usize>,
    ) -> Result<Self, ModelError> {
        vass.replay(&init, &path).map(|r| r.run)
    }

    /// Number of pseudo-configurations, i.e. `path.len() + 1`.
    pub fn len(&self) -> usize {
        self.path.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn configurations(&self, vass: &Vass) -> Result<Vec<PseudoConfiguration>, ModelError> {
        vass.replay(&self.init, &self.path).map(|r| r.configs)
    }

    /// Converts to a [`Run`] when no pseudo-configuration has a negative entry.
    pub fn to_run(&self, vass: &Vass) -> Result<Run, ModelError> {
        let init = Configuration::try_from(self.init.clone())?;
        Run::new(vass, init, self.path.clone())
    }
}

/// A finite run: firing `path` from `init` never leaves the naturals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run {
    init: Configuration,
    path: Vec<usize>,
}

impl Run {
    pub fn new(vass: &Vass, init: Configuration, path: Vec<usize>) -> Result<Self, ModelError> {
        vass.check_arity(init.values())?;
        let mut cur = init.clone();
        for (k, &ti) in path.iter().enumerate() {
            let t = vass.transition(ti)?;
            cur = cur.fire(t).map_err(|e| match e {
                ModelError::WrongSource => ModelError::BrokenPath(k),
                other => other,
            })?;
        }
        Ok(Run { init, path })
    }

    pub fn init(&self) -> &Configuration {
        &self.init
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.path.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn configurations(&self, vass: &Vass) -> Result<Vec<Configuration>, ModelError> {
        let mut out = Vec::with_capacity(self.len());
        out.push(self.init.clone());
        for &ti in &self.path {
            let next = out.last().expect("nonempty").fire(vass.transition(ti)?)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn to_pseudo(&self) -> PseudoRun {
        PseudoRun {
            init: self.init.to_pseudo(),
            path: self.path.clone(),
        }
    }
}

/// Result of [`Vass::replay`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub run: PseudoRun,
    pub configs: Vec<PseudoConfiguration>,
    /// True when the initial values and every intermediate value are nonnegative.
    pub genuine: bool,
}

/// Size measures of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Norms {
    /// Largest decrement on any component, 0 when nothing decreases.
    pub pic: BigInt,
    pub absmax: BigInt,
    /// `|Q| + n·|δ|·(2|Q| + 2 + ⌈log2(1 + absmax)⌉)`.
    pub size: BigInt,
}

impl Norms {
    pub fn of(vass: &Vass) -> Norms {
        let mut pic = BigInt::zero();
        let mut absmax = BigInt::zero();
        for t in vass.transitions() {
            for b in &t.update {
                if b.is_negative() && -b > pic {
                    pic = -b;
                }
                if b.abs() > absmax {
                    absmax = b.abs();
                }
            }
        }
        let q = BigInt::from(vass.num_states());
        let bits = BigInt::from(ceil_log2(&(BigInt::from(1) + &absmax)));
        let per_entry = BigInt::from(2) * &q + BigInt::from(2) + bits;
        let size = &q
            + BigInt::from(vass.dim()) * BigInt::from(vass.transitions().len()) * per_entry;
        Norms { pic, absmax, size }
    }

    /// `pic` clamped to at least 1, as used in length bounds.
    pub fn pic_for_bounds(&self) -> BigInt {
        if self.pic < BigInt::from(1) {
            BigInt::from(1)
        } else {
            self.pic.clone()
        }
    }
}

/// `⌈log2(m)⌉` for `m ≥ 1`.
pub(crate) fn ceil_log2(m: &BigInt) -> u64 {
    debug_assert!(m >= &BigInt::from(1));
    (m - 1u32).bits()
}

impl fmt::Display for Vass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VASS(dim {}, {} states, {} transitions)",
            self.dim,
            self.states.len(),
            self.transitions.len()
        )
    }
}

/// Formats a vector as `(a, b, c)`.
pub fn format_vector(values: &[BigInt]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}
