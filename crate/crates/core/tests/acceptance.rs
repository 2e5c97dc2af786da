//! End-to-end acceptance checks. Prints one PASS or FAIL line per criterion
//! and exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::Rng;

use common::{
    curated, decreasing_cycle, direct_reversal_count, oscillator, property_around, random_control_path,
    random_decomposition, random_model, random_run, rng, row_effects, small_component_sets, two_loop_transfer,
    up_down,
};
use vass_unbounded::analyses::bounds::{compare_to_closed_bound, rackoff_g_all, BoundParams};
use vass_unbounded::analyses::{
    bounded, nonregular, reversal_bounded, simultaneously_unbounded, strongly_prompt, terminates,
    weakly_reversal_bounded, Answer, Method, Options, Verdict, Witness,
};
use vass_unbounded::model::{vector, Configuration, PseudoRun, Run, Vass};
use vass_unbounded::properties::{
    pseudo_to_run, pseudorun_length_bound, pump, verify, ApproxContext, Check, Decomposition,
    DisjointnessSequence, GupProperty, Interval,
};
use vass_unbounded::reductions::{PromptnessInstance, RbProduct};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn opts(method: Method) -> Options {
    Options {
        method,
        ..Options::default()
    }
}

fn cfg(q: usize, xs: &[i64]) -> Configuration {
    Configuration::new(q, vector(xs)).unwrap()
}

/// Checks that a witness replays on the model it belongs to.
fn replays(v: &Vass, init: &Configuration, verdict: &Verdict) -> Result<(), String> {
    match &verdict.witness {
        Some(Witness::Run { run, model, .. }) => {
            let m = model.as_ref().unwrap_or(v);
            if model.is_none() {
                ensure(run.init() == init, || "witness starts elsewhere".into())?;
            }
            Run::new(m, run.init().clone(), run.path().to_vec())
                .map(|_| ())
                .map_err(|e| format!("run witness does not replay: {e}"))
        }
        Some(Witness::Branches { segments, model }) => {
            let m = model.as_ref().unwrap_or(v);
            ensure(segments.iter().all(|s| s.replays_on(m)), || "branch witness does not replay".into())
        }
        _ => Ok(()),
    }
}

/// Every run of length at most `depth`, as configuration sequences.
fn all_runs(v: &Vass, init: &Configuration, depth: usize, visit: &mut dyn FnMut(&[Configuration])) {
    fn go(v: &Vass, seq: &mut Vec<Configuration>, depth: usize, visit: &mut dyn FnMut(&[Configuration])) {
        visit(seq);
        if seq.len() > depth {
            return;
        }
        let last = seq.last().unwrap().clone();
        for (_, t) in v.outgoing(last.state()) {
            if let Ok(next) = last.fire(t) {
                seq.push(next);
                go(v, seq, depth, visit);
                seq.pop();
            }
        }
    }
    go(v, &mut vec![init.clone()], depth, visit);
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let v = two_loop_transfer();
    let init = cfg(0, &[0, 0]);
    let x = BTreeSet::from([1]);
    let km = simultaneously_unbounded(&v, &init, &x, &opts(Method::Km)).map_err(|e| e.to_string())?;
    ensure(km.answer == Answer::Yes, || format!("KM answered {}", km.answer))?;
    let search = simultaneously_unbounded(&v, &init, &x, &opts(Method::Search)).map_err(|e| e.to_string())?;
    ensure(search.answer == Answer::Yes, || format!("search answered {}", search.answer))?;
    let Some(Witness::Run { run, decomposition, model: None }) = &search.witness else {
        return Err("search gave no run witness".into());
    };
    ensure(run.path().len() <= 6, || format!("witness length {}", run.path().len()))?;
    let sigma = DisjointnessSequence::new(vec![BTreeSet::from([0]), BTreeSet::from([1])], 2).unwrap();
    let ok = verify(&v, &run.to_pseudo(), decomposition, Check::PbSigma(&sigma)).map_err(|e| e.to_string())?;
    ensure(ok, || "witness does not verify the ordered sequence {1}.{2}".into())?;

    // no pair of configurations at the same state, the later covering the
    // earlier and strictly larger on component 2
    let mut naive = 0usize;
    let mut runs = 0usize;
    all_runs(&v, &init, 20, &mut |seq| {
        runs += 1;
        let last = seq.last().unwrap();
        for c in &seq[..seq.len() - 1] {
            if c.state() == last.state()
                && c.values().iter().zip(last.values()).all(|(a, b)| a <= b)
                && last.values()[1] > c.values()[1]
            {
                naive += 1;
            }
        }
    });
    ensure(naive == 0, || format!("{naive} naive self-covering witnesses"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("witness length {}, {runs} runs up to depth 20 without a naive witness", run.path().len()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let p = PromptnessInstance::new(decreasing_cycle(), BTreeSet::from([2, 3])).map_err(|e| e.to_string())?;
    let r = strongly_prompt(&p, &cfg(0, &[0]), &opts(Method::Km)).map_err(|e| e.to_string())?;
    ensure(r.answer == Answer::No, || format!("answered {}", r.answer))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("not strongly prompt ({})", r.note))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let search_opts = Options {
        method: Method::Search,
        depth_cap: 12,
        state_cap: 20_000,
        ..Options::default()
    };
    let km_opts = opts(Method::Km);
    let mut yes = 0;
    let mut queries = 0;
    for seed in 0..200u64 {
        let (v, init) = random_model(&mut rng(0xC0FFEE + seed));
        for x in small_component_sets(v.dim()) {
            queries += 1;
            let s = simultaneously_unbounded(&v, &init, &x, &search_opts).map_err(|e| e.to_string())?;
            if s.answer == Answer::Yes {
                yes += 1;
                replays(&v, &init, &s)?;
                let k = simultaneously_unbounded(&v, &init, &x, &km_opts).map_err(|e| e.to_string())?;
                ensure(k.answer == Answer::Yes, || format!("seed {seed}, X = {x:?}: search yes, KM {}", k.answer))?;
            }
        }
    }
    let mut curated_yes = 0;
    let deep = Options {
        method: Method::Search,
        depth_cap: 10_000,
        ..Options::default()
    };
    for (name, v, init) in curated() {
        for x in small_component_sets(v.dim()) {
            let k = simultaneously_unbounded(&v, &init, &x, &km_opts).map_err(|e| e.to_string())?;
            if k.answer == Answer::Yes {
                curated_yes += 1;
                let s = simultaneously_unbounded(&v, &init, &x, &deep).map_err(|e| e.to_string())?;
                ensure(s.answer == Answer::Yes, || format!("{name}, X = {x:?}: KM yes, search {}", s.answer))?;
                replays(&v, &init, &s)?;
            }
        }
    }
    within(start, Duration::from_secs(180))?;
    Ok(format!(
        "{queries} random queries ({yes} search yes), {curated_yes} curated KM yes all found by search"
    ))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut steps = 0;
    for k in 0..1000 {
        let (v, init) = random_model(&mut r);
        let path = random_run(&mut r, &v, &init, 20);
        steps += path.len();
        let lifted = RbProduct::new(&v).lift_run(&init, &path).map_err(|e| e.to_string())?;
        let n = v.dim();
        for (step, c) in lifted.iter().enumerate() {
            let direct = direct_reversal_count(&v, &path[..step]);
            for j in 0..n {
                ensure(c.values[n + j] == BigInt::from(direct[j]), || {
                    format!("run {k}, step {step}, component {}: lifted {} vs direct {}", j + 1, c.values[n + j], direct[j])
                })?;
            }
        }
    }
    Ok(format!("1000 runs, {steps} steps, exact agreement"))
}

fn criterion_5() -> Outcome {
    // fixed case: the two-loop witness with the first loop tripled
    let v = two_loop_transfer();
    let pseudo = PseudoRun::new(&v, cfg(0, &[0, 0]).to_pseudo(), vec![0, 1, 2]).unwrap();
    let dec = Decomposition::new(vec![0, 0, 1, 2, 3]);
    let p = GupProperty::new(
        2,
        vec![vec![Interval::at_least(1), Interval::at_least(0)], vec![Interval::all(), Interval::at_least(1)]],
    )
    .unwrap();
    let ctx = ApproxContext::new(p, 1, BTreeSet::new(), BTreeSet::from([0, 1]), None).map_err(|e| e.to_string())?;
    let (out, out_dec) = pump(&v, &pseudo, &dec, &ctx, &[3, 1]).map_err(|e| e.to_string())?;
    ensure(verify(&v, &out, &out_dec, Check::Approx(&ctx)).unwrap(), || "fixed case no longer verifies".into())?;
    let configs = out.configurations(&v).unwrap();
    ensure(configs[out_dec.marks[2]].values[0] == BigInt::from(3), || "component 1 at second mark is not 3".into())?;

    let mut r = rng(5);
    let mut triples = 0;
    let mut attempts = 0;
    while triples < 500 {
        attempts += 1;
        ensure(attempts < 1_000_000, || format!("only {triples} triples generated"))?;
        let k = r.gen_range(1..=3);
        let (v, init) = random_model(&mut r);
        let path = random_control_path(&mut r, &v, init.state(), 10);
        let pseudo = PseudoRun::new(&v, init.to_pseudo(), path).unwrap();
        let configs = pseudo.configurations(&v).unwrap();
        let Some(dec) = random_decomposition(&mut r, &configs, k) else { continue };
        let l = r.gen_range(1..=k);
        let mut marks = dec.marks.clone();
        for m in marks.iter_mut().take(2 * l - 1) {
            *m = 0;
        }
        let dec = Decomposition::new(marks);
        if (1..=k).any(|e| configs[dec.loop_start(e)].state != configs[dec.loop_end(e)].state) {
            continue;
        }
        let p = property_around(&mut r, &row_effects(&configs, &dec));
        let incr: BTreeSet<usize> = (0..v.dim()).filter(|_| r.gen_bool(0.5)).collect();
        let window: BTreeSet<usize> = (0..v.dim()).filter(|_| r.gen_bool(0.5)).collect();
        let ctx = ApproxContext::new(p, l, incr, window, None).map_err(|e| e.to_string())?;
        if !verify(&v, &pseudo, &dec, Check::Approx(&ctx)).unwrap() {
            continue;
        }
        triples += 1;
        let counts: Vec<usize> = (l..=k).map(|_| r.gen_range(1..=5)).collect();
        let (out, out_dec) = pump(&v, &pseudo, &dec, &ctx, &counts).map_err(|e| e.to_string())?;
        ensure(verify(&v, &out, &out_dec, Check::Approx(&ctx)).unwrap(), || {
            format!("triple {triples} stops verifying after pumping by {counts:?}")
        })?;
    }
    Ok(format!("500/500 pumped triples still verify ({attempts} candidates drawn)"))
}

fn check_repair(v: &Vass, pseudo: &PseudoRun, p: &GupProperty, dec: &Decomposition) -> Result<Run, String> {
    let (run, out_dec) = pseudo_to_run(v, pseudo, p, dec).map_err(|e| e.to_string())?;
    Run::new(v, run.init().clone(), run.path().to_vec()).map_err(|e| e.to_string())?;
    ensure(verify(v, &run.to_pseudo(), &out_dec, Check::GupRun(p)).unwrap(), || "output does not satisfy the property".into())?;
    let l = pseudo.len() + 1;
    let bound = pseudorun_length_bound(l, &v.norms().pic_for_bounds(), p.len());
    // independent evaluation of ((L·pic)^K)(1 + K²·L·pic) + L
    let lp = BigUint::from(l) * v.norms().pic_for_bounds().to_biguint().unwrap();
    let k = p.len() as u32;
    let expected = lp.pow(k) * (BigUint::one() + BigUint::from(k * k) * &lp) + BigUint::from(l);
    ensure(bound.to_biguint() == Some(expected.clone()), || format!("bound {bound} vs {expected}"))?;
    ensure(BigUint::from(run.len()) <= expected, || format!("length {} exceeds {expected}", run.len()))?;
    Ok(run)
}

fn criterion_6() -> Outcome {
    let v = two_loop_transfer();
    let p = GupProperty::new(
        2,
        vec![vec![Interval::at_least(1), Interval::at_least(0)], vec![Interval::all(), Interval::at_least(1)]],
    )
    .unwrap();
    // already genuine
    let genuine = PseudoRun::new(&v, cfg(0, &[0, 0]).to_pseudo(), vec![0, 1, 2]).unwrap();
    let run = check_repair(&v, &genuine, &p, &Decomposition::new(vec![0, 0, 1, 2, 3]))?;
    ensure(run.path() == [0, 1, 2], || format!("genuine input changed to {:?}", run.path()))?;
    // the second loop drives component 1 to -1
    let negative = PseudoRun::new(&v, cfg(0, &[0, 0]).to_pseudo(), vec![0, 1, 2, 2]).unwrap();
    let run = check_repair(&v, &negative, &p, &Decomposition::new(vec![0, 0, 1, 2, 4]))?;
    ensure(run.path().iter().filter(|&&t| t == 0).count() >= 2, || "first loop was not repeated".into())?;

    let mut r = rng(6);
    let mut fixtures = 2;
    let mut attempts = 0;
    while fixtures < 302 {
        attempts += 1;
        ensure(attempts < 1_000_000, || format!("only {fixtures} fixtures generated"))?;
        let k = r.gen_range(1..=3);
        let (v, init) = random_model(&mut r);
        let path = random_control_path(&mut r, &v, init.state(), 10);
        let pseudo = PseudoRun::new(&v, init.to_pseudo(), path).unwrap();
        let configs = pseudo.configurations(&v).unwrap();
        let Some(dec) = random_decomposition(&mut r, &configs, k) else { continue };
        let p = property_around(&mut r, &row_effects(&configs, &dec));
        if !verify(&v, &pseudo, &dec, Check::GupWeak(&p)).unwrap() {
            continue;
        }
        fixtures += 1;
        check_repair(&v, &pseudo, &p, &dec).map_err(|e| format!("fixture {fixtures}: {e}"))?;
    }
    Ok(format!("{fixtures} fixtures repaired within the length bound"))
}

/// `(2μ)^{n^{C1}}`, then `(2μ·pic·g)^{n^{C1}} + g`, by repeated multiplication.
fn g_oracle(n: u32, k: u32, absmax_t: u32, absmax_p: u32, pic: u32, c1: u32) -> Vec<BigUint> {
    let two_mu = BigUint::from(2 * (1 + k) * absmax_t * absmax_p);
    let e = n.pow(c1);
    let power = |b: &BigUint| (0..e).fold(BigUint::one(), |acc, _| acc * b);
    let mut out = vec![power(&two_mu)];
    for _ in 0..n {
        let prev = out.last().unwrap().clone();
        out.push(power(&(&two_mu * BigUint::from(pic) * &prev)) + prev);
    }
    out
}

fn criterion_7() -> Outcome {
    let worked = BoundParams::new(2, 1, 1u32.into(), 1u32.into(), 1u32.into(), 1, 2);
    let g = rackoff_g_all(&worked, 2);
    ensure(g[0] == BigUint::from(16u32) && g[1] == BigUint::from(4112u32), || format!("g = {:?}", &g[..2]))?;
    ensure(g == g_oracle(2, 1, 1, 1, 1, 1), || "worked values differ from the oracle".into())?;

    let mut points = 0;
    let shapes: [(u32, u32); 5] = [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2)];
    let norms: [(u32, u32, u32); 5] = [(1, 1, 1), (2, 1, 1), (2, 3, 2), (5, 2, 4), (100, 7, 50)];
    for (n, c1) in shapes {
        for k in [1u32, 2] {
            for (at, ap, pic) in norms {
                points += 1;
                let p = BoundParams::new(n, k, at.into(), ap.into(), pic.into(), c1, c1 + 1);
                let g = rackoff_g_all(&p, n as usize);
                ensure(g == g_oracle(n, k, at, ap, pic, c1), || format!("{p:?}: differs from the oracle"))?;
                ensure(g.windows(2).all(|w| w[0] < w[1]), || format!("{p:?}: not increasing"))?;
                let last = g.last().unwrap();
                ensure(compare_to_closed_bound(last, &p) != std::cmp::Ordering::Greater, || {
                    format!("{p:?}: g(n) above the closed bound")
                })?;
                // independent estimate: log2 g(n) against n^((2n+1)C)·log2(2μ·pic)
                let base = f64::from(2 * (1 + k) * at * ap * pic);
                let exp = f64::from(n).powi(((2 * n + 1) * (c1 + 1)) as i32);
                let lg = last.bits() as f64;
                ensure(lg <= exp * base.log2() + 1.0, || format!("{p:?}: {lg} bits vs {}", exp * base.log2()))?;
            }
        }
    }
    Ok(format!("g(0)=16, g(1)=4112; {points} grid points increasing and under the closed bound"))
}

fn criterion_8() -> Outcome {
    let o = Options {
        method: Method::Both,
        state_cap: 200_000,
        ..Options::default()
    };
    let check = |name: &str, v: &Vass, init: &Configuration, rb: Option<Answer>, weak: Option<Answer>| -> Result<(), String> {
        if let Some(want) = rb {
            let got = reversal_bounded(v, init, 0, &o).map_err(|e| e.to_string())?;
            ensure(got.answer == want, || format!("{name}: rb {} expected {want}", got.answer))?;
            replays(v, init, &got)?;
        }
        if let Some(want) = weak {
            let got = weakly_reversal_bounded(v, init, 0, &o).map_err(|e| e.to_string())?;
            ensure(got.answer == want, || format!("{name}: weak rb {} expected {want}", got.answer))?;
            replays(v, init, &got)?;
        }
        Ok(())
    };
    check("up-down", &up_down(), &cfg(0, &[0]), Some(Answer::No), Some(Answer::No))?;
    check("monotone", &common::monotone(), &cfg(0, &[0, 0]), Some(Answer::Yes), None)?;
    check("oscillator", &oscillator(), &cfg(0, &[0]), Some(Answer::No), Some(Answer::Yes))?;
    Ok("up-down no/no, monotone yes, oscillator no/yes".into())
}

fn criterion_9() -> Outcome {
    let o = opts(Method::Search);
    let v = Vass::vas(1, vec![vector(&[1]), vector(&[-1])]).unwrap();
    let r = nonregular(&v, &cfg(0, &[0]), &o).map_err(|e| e.to_string())?;
    ensure(r.answer == Answer::Yes, || format!("up/down answered {}", r.answer))?;
    let Some(Witness::Run { run, .. }) = &r.witness else {
        return Err("no run witness".into());
    };
    ensure(run.path().len() == 2, || format!("witness length {}", run.path().len()))?;
    replays(&v, &cfg(0, &[0]), &r)?;
    let v = Vass::vas(1, vec![vector(&[-1])]).unwrap();
    let r = nonregular(&v, &cfg(0, &[5]), &o).map_err(|e| e.to_string())?;
    ensure(r.answer == Answer::No, || format!("countdown answered {} ({})", r.answer, r.note))?;
    Ok(format!("2-step witness; countdown regular ({})", r.note))
}

enum Query {
    Bounded,
    Terminates,
    Nonregular,
    Simul(BTreeSet<usize>),
    Rb(usize),
    WeakRb(usize),
}

fn ask(q: &Query, v: &Vass, init: &Configuration, o: &Options) -> Result<Verdict, String> {
    match q {
        Query::Bounded => bounded(v, init, o),
        Query::Terminates => terminates(v, init, o),
        Query::Nonregular => nonregular(v, init, o),
        Query::Simul(x) => simultaneously_unbounded(v, init, x, o),
        Query::Rb(i) => reversal_bounded(v, init, *i, o),
        Query::WeakRb(i) => weakly_reversal_bounded(v, init, *i, o),
    }
    .map_err(|e| e.to_string())
}

fn criterion_10(suite_start: Instant) -> Outcome {
    let o = Options {
        method: Method::Both,
        depth_cap: 40,
        state_cap: 200_000,
        ..Options::default()
    };
    let mut reports = 0;
    for (name, v, init) in curated() {
        let mut queries = vec![Query::Bounded, Query::Terminates, Query::Nonregular];
        queries.extend(small_component_sets(v.dim()).into_iter().map(Query::Simul));
        queries.extend((0..v.dim()).flat_map(|i| [Query::Rb(i), Query::WeakRb(i)]));
        for q in &queries {
            let a = ask(q, &v, &init, &o).map_err(|e| format!("{name}: {e}"))?;
            let b = ask(q, &v, &init, &o).map_err(|e| format!("{name}: {e}"))?;
            ensure(a == b, || format!("{name}: two runs differ"))?;
            replays(&v, &init, &a).map_err(|e| format!("{name}: {e}"))?;
            reports += 1;
        }
    }
    within(suite_start, Duration::from_secs(300))?;
    Ok(format!("{reports} reports reproduced and replayed; suite {:?}", suite_start.elapsed()))
}

fn main() {
    let suite_start = Instant::now();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 two-loop example simultaneously unbounded", Box::new(criterion_1)),
        ("2 decreasing cycle not strongly prompt", Box::new(criterion_2)),
        ("3 search and coverability tree agree", Box::new(criterion_3)),
        ("4 reversal counters match direct count", Box::new(criterion_4)),
        ("5 pumping preserves verification", Box::new(criterion_5)),
        ("6 pseudo-runs repaired within the bound", Box::new(criterion_6)),
        ("7 bound calculator", Box::new(criterion_7)),
        ("8 reversal-boundedness triple", Box::new(criterion_8)),
        ("9 regularity", Box::new(criterion_9)),
        ("10 determinism and replay", Box::new(move || criterion_10(suite_start))),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{:?}]", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} [{:?}]", t.elapsed());
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
