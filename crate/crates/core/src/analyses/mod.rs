//! Decision procedures combining Karp–Miller trees with witness search.

pub mod bounds;
pub mod search;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::coverability::{
    build_km, disjointness_witness_km, simultaneously_unbounded_km, CounterSystem,
    CoverabilityError, ExtValue, ExtendedVector, KmBranch, KmTree,
};
use crate::model::{Configuration, ModelError, PseudoRun, Run, Vass};
use crate::properties::{
    encode_pb_sigma, nonregularity_properties, pseudo_to_run, termination_property, verify, Check,
    Decomposition, DisjointnessSequence, GupProperty, PropertyError,
};
use crate::reductions::{promptness_reduction, PromptnessInstance, RbProduct};
use bounds::BoundParams;
use search::{lockstep, GupSearch, Lockstep, SearchLimits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("{problem}: coverability says {km} but witness search says {search}")]
    OracleDisagreement {
        problem: String,
        km: Answer,
        search: Answer,
    },

    #[error("component {} out of range for dimension {dim}", component + 1)]
    ComponentOutOfRange { component: usize, dim: usize },

    #[error("component set is empty")]
    EmptyComponentSet,

    #[error("witness check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error(transparent)]
    Property(#[from] PropertyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn negate(self) -> Answer {
        match self {
            Answer::Yes => Answer::No,
            Answer::No => Answer::Yes,
            Answer::Unknown => Answer::Unknown,
        }
    }

    pub fn is_definite(self) -> bool {
        self != Answer::Unknown
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Km,
    Search,
    Both,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Km => "km",
            Method::Search => "search",
            Method::Both => "both",
        }
    }

    fn km(self) -> bool {
        self != Method::Search
    }

    fn search(self) -> bool {
        self != Method::Km
    }
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A run with its loop marks. `model` is set when the run lives in a
    /// derived model rather than the analysed one.
    Run {
        run: Run,
        decomposition: Decomposition,
        model: Option<Vass>,
    },
    /// Coverability tree branches; a second segment restarts from the end of
    /// the first with one counter reset. `model` as for runs.
    Branches {
        segments: Vec<KmBranch>,
        model: Option<Vass>,
    },
    /// A reason that needs no trace.
    Static(String),
}

/// Bound values reported on request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub params: BoundParams,
    /// `g(0), …, g(n)` in decimal, or as `2^x` once too large to print.
    pub g: Vec<String>,
    /// `log2` of the closed bound.
    pub closed_log2: String,
}

/// Values up to this many bits are printed exactly.
const PRINTED_BITS: f64 = 4096.0;

impl BoundReport {
    pub fn new(params: BoundParams) -> Self {
        let e = params.n.pow(params.c1);
        let two_mu = num_bigint::BigUint::from(2u32) * params.mu();
        let step = &two_mu * &params.pic_t;
        let (log_first, log_step) = (bounds::log2_biguint(&two_mu), bounds::log2_biguint(&step));
        let mut g = Vec::new();
        let mut prev: Option<num_bigint::BigUint> = None;
        let mut log = 0.0;
        for i in 0..=params.n {
            log = f64::from(e) * if i == 0 { log_first } else { log_step + log };
            prev = if log <= PRINTED_BITS {
                let v = match &prev {
                    None => two_mu.pow(e),
                    Some(p) => (&step * p).pow(e) + p,
                };
                g.push(v.to_string());
                Some(v)
            } else {
                g.push(format!("2^{log:.3}"));
                None
            };
        }
        let closed_log2 = format!("{:.3}", bounds::closed_bound_log2(&params));
        BoundReport {
            params,
            g,
            closed_log2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub witness: Option<Witness>,
    pub method: Method,
    pub note: String,
    pub bounds: Option<BoundReport>,
}

impl Verdict {
    fn new(answer: Answer, method: Method, note: impl Into<String>) -> Self {
        Verdict {
            answer,
            witness: None,
            method,
            note: note.into(),
            bounds: None,
        }
    }

    fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    /// Flips the answer, keeping the evidence.
    pub fn negated(mut self) -> Self {
        self.answer = self.answer.negate();
        self
    }
}

/// Aggregates independent verdicts: any Yes wins, No needs every verdict
/// to be No, anything else is Unknown.
pub fn any_of(verdicts: Vec<Verdict>, method: Method) -> Verdict {
    if let Some(v) = verdicts.iter().find(|v| v.answer == Answer::Yes) {
        return v.clone();
    }
    if !verdicts.is_empty() && verdicts.iter().all(|v| v.answer == Answer::No) {
        let note = verdicts
            .iter()
            .map(|v| v.note.as_str())
            .collect::<Vec<_>>()
            .join("; ");
        return Verdict::new(Answer::No, method, note);
    }
    let note = verdicts
        .iter()
        .filter(|v| v.answer == Answer::Unknown)
        .map(|v| v.note.as_str())
        .collect::<Vec<_>>()
        .join("; ");
    Verdict::new(Answer::Unknown, method, note)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub method: Method,
    /// Maximum witness length in transitions.
    pub depth_cap: usize,
    /// Maximum number of coverability tree nodes.
    pub km_cap: usize,
    /// Maximum number of abstract states per witness search.
    pub state_cap: usize,
    pub c1: u32,
    pub c: u32,
    pub show_bounds: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            method: Method::Km,
            depth_cap: 10_000,
            km_cap: 1_000_000,
            state_cap: 2_000_000,
            c1: 2,
            c: 3,
            show_bounds: false,
        }
    }
}

impl Options {
    fn limits(&self) -> SearchLimits {
        SearchLimits {
            depth_cap: self.depth_cap,
            state_cap: self.state_cap,
        }
    }
}

fn check_components(x: &BTreeSet<usize>, dim: usize) -> Result<(), AnalysisError> {
    if x.is_empty() {
        return Err(AnalysisError::EmptyComponentSet);
    }
    if let Some(&component) = x.iter().find(|&&j| j >= dim) {
        return Err(AnalysisError::ComponentOutOfRange { component, dim });
    }
    Ok(())
}

/// Combines the two routes, failing if both are definite and disagree.
fn reconcile(
    problem: &str,
    km: Option<Verdict>,
    search: Option<Verdict>,
) -> Result<Verdict, AnalysisError> {
    match (km, search) {
        (Some(k), None) => Ok(k),
        (None, Some(s)) => Ok(s),
        (Some(k), Some(s)) => {
            if k.answer.is_definite() && s.answer.is_definite() && k.answer != s.answer {
                return Err(AnalysisError::OracleDisagreement {
                    problem: problem.to_string(),
                    km: k.answer,
                    search: s.answer,
                });
            }
            let primary = if s.answer.is_definite() && s.witness.is_some() {
                &s
            } else if k.answer.is_definite() {
                &k
            } else {
                &s
            };
            let mut v = primary.clone();
            v.method = Method::Both;
            v.note = format!("km: {}; search: {}", k.note, s.note);
            Ok(v)
        }
        (None, None) => unreachable!("at least one method runs"),
    }
}

fn km_tree<T: CounterSystem>(
    sys: &T,
    state: T::State,
    vector: ExtendedVector,
    cap: usize,
) -> Result<KmTree<T::State>, String> {
    build_km(sys, state, vector, cap).map_err(|e| match e {
        CoverabilityError::ResourceCap { cap } => format!("coverability tree node cap {cap} reached"),
        other => other.to_string(),
    })
}

/// Simultaneous unboundedness of `x` on a counter system via its tree.
fn simul_km(
    sys: &Vass,
    state: usize,
    values: &[BigInt],
    x: &BTreeSet<usize>,
    cap: usize,
    model: Option<&Vass>,
) -> Verdict {
    match km_tree(sys, state, ExtendedVector::from_naturals(values), cap) {
        Err(note) => Verdict::new(Answer::Unknown, Method::Km, note),
        Ok(tree) => match simultaneously_unbounded_km(&tree, x) {
            Some(node) => Verdict::new(Answer::Yes, Method::Km, "tree node with omega on every target")
                .with_witness(Witness::Branches {
                    segments: vec![tree.branch(sys, node)],
                    model: model.cloned(),
                }),
            None => Verdict::new(
                Answer::No,
                Method::Km,
                format!("complete tree of {} nodes has no such omega pattern", tree.len()),
            ),
        },
    }
}

/// Runs the given properties side by side and certifies the first witness.
fn search_any(
    vass: &Vass,
    init: &Configuration,
    properties: &[GupProperty],
    nonempty_loops: bool,
    opts: &Options,
    model: Option<&Vass>,
) -> Result<(Verdict, Option<usize>), AnalysisError> {
    let searches = properties
        .iter()
        .map(|p| GupSearch::new(vass, init, p, nonempty_loops, opts.limits()))
        .collect();
    match lockstep(searches, opts.state_cap) {
        Lockstep::Found(i, pseudo, dec) => {
            let witness = certify(vass, &pseudo, &properties[i], &dec, model)?;
            Ok((
                Verdict::new(Answer::Yes, Method::Search, "witness run found").with_witness(witness),
                Some(i),
            ))
        }
        Lockstep::Exhausted => Ok((
            Verdict::new(Answer::No, Method::Search, "search space exhausted"),
            None,
        )),
        Lockstep::Capped(note) => Ok((
            Verdict::new(
                Answer::Unknown,
                Method::Search,
                format!(
                    "{note} (depth cap {}, state cap {})",
                    opts.depth_cap, opts.state_cap
                ),
            ),
            None,
        )),
    }
}

/// Checks a found pseudo-run and turns it into a run witness.
fn certify(
    vass: &Vass,
    pseudo: &PseudoRun,
    property: &GupProperty,
    dec: &Decomposition,
    model: Option<&Vass>,
) -> Result<Witness, AnalysisError> {
    if !verify(vass, pseudo, dec, Check::GupWeak(property))? {
        return Err(AnalysisError::Internal(
            "search returned a pseudo-run that does not weakly satisfy the property".into(),
        ));
    }
    let (run, decomposition) = pseudo_to_run(vass, pseudo, property, dec)?;
    if !verify(vass, &run.to_pseudo(), &decomposition, Check::GupRun(property))? {
        return Err(AnalysisError::Internal("repaired run fails the property".into()));
    }
    Ok(Witness::Run {
        run,
        decomposition,
        model: model.cloned(),
    })
}

fn pb_properties(sigmas: &[DisjointnessSequence], dim: usize) -> Vec<GupProperty> {
    sigmas.iter().map(|s| encode_pb_sigma(s, dim)).collect()
}

fn attach_bounds(
    mut v: Verdict,
    vass: &Vass,
    init: &Configuration,
    k: usize,
    scale: &BigInt,
    opts: &Options,
) -> Verdict {
    if opts.show_bounds {
        v.bounds = Some(BoundReport::new(BoundParams::for_instance(
            vass, init, k, scale, opts.c1, opts.c,
        )));
    }
    v
}

fn simul_on(
    problem: &str,
    vass: &Vass,
    init: &Configuration,
    x: &BTreeSet<usize>,
    opts: &Options,
    model: Option<&Vass>,
) -> Result<Verdict, AnalysisError> {
    check_components(x, vass.dim())?;
    let km = opts
        .method
        .km()
        .then(|| simul_km(vass, init.state(), init.values(), x, opts.km_cap, model));
    let search = if opts.method.search() {
        let sigmas = DisjointnessSequence::covering(x, vass.dim());
        let (v, _) = search_any(vass, init, &pb_properties(&sigmas, vass.dim()), false, opts, model)?;
        Some(v)
    } else {
        None
    };
    let v = reconcile(problem, km, search)?;
    Ok(attach_bounds(v, vass, init, vass.dim(), &BigInt::from(1), opts))
}

/// Whether the components in `x` (0-based) are simultaneously unbounded.
pub fn simultaneously_unbounded(
    v: &Vass,
    init: &Configuration,
    x: &BTreeSet<usize>,
    opts: &Options,
) -> Result<Verdict, AnalysisError> {
    simul_on("simultaneous unboundedness", v, init, x, opts, None)
}

/// Whether component `i` is bounded.
pub fn place_bounded(
    v: &Vass,
    init: &Configuration,
    i: usize,
    opts: &Options,
) -> Result<Verdict, AnalysisError> {
    Ok(simul_on("place boundedness", v, init, &BTreeSet::from([i]), opts, None)?.negated())
}

/// Whether the reachability set is finite.
pub fn bounded(v: &Vass, init: &Configuration, opts: &Options) -> Result<Verdict, AnalysisError> {
    let km = opts.method.km().then(|| {
        match km_tree(v, init.state(), ExtendedVector::from_naturals(init.values()), opts.km_cap) {
            Err(note) => Verdict::new(Answer::Unknown, Method::Km, note),
            Ok(tree) => match tree.nodes.iter().position(|n| n.vector.has_omega()) {
                Some(node) => Verdict::new(Answer::No, Method::Km, "tree node with omega")
                    .with_witness(Witness::Branches {
                        segments: vec![tree.branch(v, node)],
                        model: None,
                    }),
                None => Verdict::new(
                    Answer::Yes,
                    Method::Km,
                    format!("complete tree of {} nodes has no omega", tree.len()),
                ),
            },
        }
    });
    let search = if opts.method.search() {
        let mut sigmas = Vec::new();
        for i in 0..v.dim() {
            for s in DisjointnessSequence::covering(&BTreeSet::from([i]), v.dim()) {
                if !sigmas.contains(&s) {
                    sigmas.push(s);
                }
            }
        }
        let (verdict, _) = search_any(v, init, &pb_properties(&sigmas, v.dim()), false, opts, None)?;
        Some(verdict.negated())
    } else {
        None
    };
    let verdict = reconcile("boundedness", km, search)?;
    Ok(attach_bounds(verdict, v, init, v.dim(), &BigInt::from(1), opts))
}

/// Whether every run from `init` is finite.
pub fn terminates(v: &Vass, init: &Configuration, opts: &Options) -> Result<Verdict, AnalysisError> {
    let all_nonnegative = v
        .transitions()
        .iter()
        .all(|t| t.update.iter().all(|b| !b.is_negative()));
    if all_nonnegative && reachable_cycle(v, init.state()) {
        return Ok(Verdict::new(
            Answer::No,
            opts.method,
            "every update is nonnegative and a control cycle is reachable",
        )
        .with_witness(Witness::Static(
            "a reachable control cycle can be repeated forever".into(),
        )));
    }
    let km = opts.method.km().then(|| {
        match km_tree(v, init.state(), ExtendedVector::from_naturals(init.values()), opts.km_cap) {
            Err(note) => Verdict::new(Answer::Unknown, Method::Km, note),
            Ok(tree) => match tree.find_self_covering() {
                Some((node, _)) => {
                    Verdict::new(Answer::No, Method::Km, "branch covers an earlier node with the same state")
                        .with_witness(Witness::Branches {
                            segments: vec![tree.branch(v, node)],
                            model: None,
                        })
                }
                None => Verdict::new(
                    Answer::Yes,
                    Method::Km,
                    format!("complete tree of {} nodes has no self-covering branch", tree.len()),
                ),
            },
        }
    });
    let search = if opts.method.search() {
        let t = termination_property(v.dim());
        let (verdict, _) = search_any(
            v,
            init,
            std::slice::from_ref(&t.property),
            t.nonempty_loops,
            opts,
            None,
        )?;
        Some(verdict.negated())
    } else {
        None
    };
    let verdict = reconcile("termination", km, search)?;
    Ok(attach_bounds(verdict, v, init, 1, &BigInt::from(1), opts))
}

fn reachable_cycle(v: &Vass, from: usize) -> bool {
    let n = v.num_states();
    let mut reach = vec![false; n];
    let mut stack = vec![from];
    reach[from] = true;
    while let Some(q) = stack.pop() {
        for (_, t) in v.outgoing(q) {
            if !reach[t.to] {
                reach[t.to] = true;
                stack.push(t.to);
            }
        }
    }
    // a cycle exists among reachable states iff repeatedly removing
    // reachable states without reachable successors leaves something
    let mut alive = reach.clone();
    loop {
        let mut changed = false;
        for q in 0..n {
            if alive[q] && !v.outgoing(q).any(|(_, t)| alive[t.to]) {
                alive[q] = false;
                changed = true;
            }
        }
        if !changed {
            return alive.iter().any(|&a| a);
        }
    }
}

/// Whether component `i` has a bounded number of reversals.
pub fn reversal_bounded(
    v: &Vass,
    init: &Configuration,
    i: usize,
    opts: &Options,
) -> Result<Verdict, AnalysisError> {
    check_components(&BTreeSet::from([i]), v.dim())?;
    let n = v.dim();
    let (product, start) = rb_image(v, init)?;
    let target = BTreeSet::from([n + i]);
    let km = opts.method.km().then(|| {
        simul_km(&product, start.state(), start.values(), &target, opts.km_cap, Some(&product))
    });
    let search = if opts.method.search() {
        let sigmas = DisjointnessSequence::covering(&target, 2 * n);
        let (verdict, _) = search_any(
            &product,
            &start,
            &pb_properties(&sigmas, 2 * n),
            false,
            opts,
            Some(&product),
        )?;
        Some(verdict)
    } else {
        None
    };
    let verdict = reconcile("reversal-boundedness", km, search)?.negated();
    Ok(attach_bounds(verdict, v, init, 2 * n, &BigInt::from(1), opts))
}

/// Whether, for some threshold, reversals of component `i` above the
/// threshold are bounded in number.
pub fn weakly_reversal_bounded(
    v: &Vass,
    init: &Configuration,
    i: usize,
    opts: &Options,
) -> Result<Verdict, AnalysisError> {
    check_components(&BTreeSet::from([i]), v.dim())?;
    let n = v.dim();
    let (product, start) = rb_image(v, init)?;
    let km = opts.method.km().then(|| weak_rb_km(&product, &start, i, n, opts.km_cap));
    let search = if opts.method.search() {
        let sigmas: Vec<DisjointnessSequence> =
            DisjointnessSequence::covering(&BTreeSet::from([n + i]), 2 * n)
                .into_iter()
                .filter(|s| s.sets().last().expect("nonempty").contains(&(n + i)) && s.union_before(s.len()).contains(&i))
                .collect();
        let (verdict, _) = search_any(
            &product,
            &start,
            &pb_properties(&sigmas, 2 * n),
            false,
            opts,
            Some(&product),
        )?;
        Some(verdict)
    } else {
        None
    };
    let verdict = reconcile("weak reversal-boundedness", km, search)?.negated();
    Ok(attach_bounds(verdict, v, init, 2 * n, &BigInt::from(1), opts))
}

/// The reversal-counting product reachable from `init`, as an explicit model.
fn rb_image(v: &Vass, init: &Configuration) -> Result<(Vass, Configuration), AnalysisError> {
    let rb = RbProduct::new(v);
    let lifted = rb.lift(init);
    let (product, q0, _) = rb.materialize_from(init.state());
    let start = Configuration::new(q0, lifted.values)?;
    Ok((product, start))
}

/// Yes when reversals of `i` can be made unboundedly many while `i` itself is
/// arbitrarily large.
///
/// First the tree of the product is built. From every node where `i` is ω,
/// a second tree starts with the reversal counter of `i` reset to 0; the
/// reversal counter turning ω there is the witness.
fn weak_rb_km(product: &Vass, start: &Configuration, i: usize, n: usize, cap: usize) -> Verdict {
    let tree = match km_tree(
        product,
        start.state(),
        ExtendedVector::from_naturals(start.values()),
        cap,
    ) {
        Ok(t) => t,
        Err(note) => return Verdict::new(Answer::Unknown, Method::Km, note),
    };
    let counter = n + i;
    let witness = |segments: Vec<KmBranch>| Witness::Branches {
        segments,
        model: Some(product.clone()),
    };
    // Fast path: the batch order on a single branch already shows it.
    if let Some((node, _)) = disjointness_witness_km(&tree, |h| {
        let (last, rest) = h.split_last().expect("nonempty prefix");
        last.contains(&counter) && rest.iter().any(|s| s.contains(&i))
    }) {
        return Verdict::new(
            Answer::Yes,
            Method::Km,
            "reversal counter accelerated after the counter itself",
        )
        .with_witness(witness(vec![tree.branch(product, node)]));
    }
    let mut tried = std::collections::HashSet::new();
    for (idx, node) in tree.nodes.iter().enumerate() {
        if !node.vector.get(i).is_omega() {
            continue;
        }
        let mut from = node.vector.clone();
        from.0[counter] = ExtValue::Finite(BigInt::from(0));
        if !tried.insert((node.state, from.clone())) {
            continue;
        }
        let sub = match km_tree(product, node.state, from, cap) {
            Ok(t) => t,
            Err(note) => return Verdict::new(Answer::Unknown, Method::Km, note),
        };
        if let Some(hit) = sub.find_omega_on(&BTreeSet::from([counter])) {
            return Verdict::new(
                Answer::Yes,
                Method::Km,
                "reversal counter unbounded from a node where the counter is omega",
            )
            .with_witness(witness(vec![tree.branch(product, idx), sub.branch(product, hit)]));
        }
    }
    Verdict::new(
        Answer::No,
        Method::Km,
        "no reversal counter grows unboundedly above every threshold",
    )
}

/// Whether some run has a loop strictly raising a component followed by a
/// loop strictly lowering it.
pub fn nonregular(v: &Vass, init: &Configuration, opts: &Options) -> Result<Verdict, AnalysisError> {
    let any_negative = v
        .transitions()
        .iter()
        .any(|t| t.update.iter().any(|b| b.is_negative()));
    let verdict = if !any_negative {
        Verdict::new(Answer::No, Method::Search, "no update is negative")
            .with_witness(Witness::Static("no counter can ever decrease".into()))
    } else {
        let props = nonregularity_properties(v.dim());
        search_any(v, init, &props, false, opts, None)?.0
    };
    Ok(attach_bounds(verdict, v, init, 2, &BigInt::from(1), opts))
}

/// Whether internal-only segments from reachable configurations have
/// uniformly bounded length.
pub fn strongly_prompt(
    p: &PromptnessInstance,
    init: &Configuration,
    opts: &Options,
) -> Result<Verdict, AnalysisError> {
    let img = promptness_reduction(p, init);
    let x = BTreeSet::from([img.target]);
    Ok(simul_on(
        "strong promptness",
        &img.model,
        &img.init,
        &x,
        opts,
        Some(&img.model),
    )?
    .negated())
}

/// Whether some run from `init` satisfies `property`.
pub fn gup_holds(
    v: &Vass,
    init: &Configuration,
    property: &GupProperty,
    opts: &Options,
) -> Result<Verdict, AnalysisError> {
    if property.dim() != v.dim() {
        return Err(PropertyError::ArityMismatch {
            expected: v.dim(),
            found: property.dim(),
        }
        .into());
    }
    let (mut verdict, _) = search_any(v, init, std::slice::from_ref(property), false, opts, None)?;
    let params = BoundParams::for_instance(v, init, property.len(), &property.scale(), opts.c1, opts.c);
    if verdict.answer == Answer::Unknown {
        let depth = num_bigint::BigUint::from(opts.depth_cap);
        if bounds::compare_to_closed_bound(&depth, &params) != std::cmp::Ordering::Less {
            verdict.answer = Answer::No;
            verdict.note = format!("{}; depth cap reaches the completeness bound", verdict.note);
        } else {
            verdict.note = format!(
                "{}; completeness bound is 2^{:.1}",
                verdict.note,
                bounds::closed_bound_log2(&params)
            );
        }
    }
    if opts.show_bounds {
        verdict.bounds = Some(BoundReport::new(params));
    }
    Ok(verdict)
}
