//! End-to-end acceptance checks. Runs as a plain binary so that every line
//! is printed under `cargo test`; exits non-zero if any check fails.

use std::collections::{BTreeSet, HashMap};
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use seqproc::automata::{
    compile_pda, stack_of, suffset, Move, NameSet, Pda, PdaSpace, Rtm, RtmSpace, RtmTransition,
    StackSymbol,
};
use seqproc::encodings::{
    hc_term, ref_lts, rtm_encoding, stack_encoding, ReferenceProcess,
};
use seqproc::experiments::gen;
use seqproc::equiv::{
    branching_bisim, check_relation, dp_branching_bisim, k_bisim, rooted_check, strong_bisim,
    Outcome, RelationCandidate, RelationKind, RootBase,
};
use seqproc::lts::{explore_visible, explore_with, TermSpace};
use seqproc::semantics::SemanticsError;
use seqproc::syntax::{check_guardedness, parse_term, to_gnf_view};
use seqproc::{
    explore, explore_term, explore_window, parse_spec, Action, Engine, ExploreLimits, Lts, Mode,
    RecursiveSpec, Term,
};

type Check = fn() -> Result<String, String>;

const RUNNING: &str = "X = a.X ; Y + b.1\nY = c.1 + 1";

fn main() {
    let checks: [(&str, Check); 11] = [
        ("branching degree under both sequential rules", branching_degree),
        ("compiled PDA of the running example", pda_shape),
        ("specification vs compiled PDA", pda_bisimilar),
        ("rooted dp-branching is a congruence", congruence),
        ("plain rooted branching is not a congruence", rooted_non_congruence),
        ("no right distributivity; associativity", distributivity_and_associativity),
        ("half counter relation", half_counter),
        ("stack encoding", stack),
        ("reactive Turing machine encoding", rtm),
        ("guardedness gate", guardedness),
        ("equivalence lattice", lattice),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Err(format!("panicked: {}", panic_text(&e))));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn running() -> (RecursiveSpec, Term) {
    parse_spec(RUNNING).expect("running example parses")
}

fn explore_finite(term: &Term, spec: &RecursiveSpec) -> Result<Lts, String> {
    let lts = explore_term(term, spec, Mode::Revised, ExploreLimits::new(200, 100_000))
        .map_err(|e| e.to_string())?;
    ensure(!lts.has_frontier(), || format!("{term} did not finish exploring"))?;
    Ok(lts)
}

fn branching_degree() -> Result<String, String> {
    let (spec, root) = running();
    for n in 1..=8usize {
        let mut trace = vec![Action::plain("a"); n];
        trace.push(Action::plain("b"));
        for (mode, expected) in [(Mode::Standard, n), (Mode::Revised, 1)] {
            let lts = explore_term(&root, &spec, mode, ExploreLimits::depth(n + 2))
                .map_err(|e| e.to_string())?;
            let s = lts.follow(&trace).ok_or_else(|| format!("a^{n}b not found in {mode}"))?;
            let c = lts
                .outgoing(s)
                .filter(|t| t.label == Action::plain("c"))
                .count();
            ensure(c == expected, || format!("n={n} {mode}: {c} c-transitions, expected {expected}"))?;
        }
    }
    Ok("n=1..8 exact".into())
}

fn pda_shape() -> Result<String, String> {
    let (spec, _) = running();
    let gnf = to_gnf_view(&spec, "X").map_err(|e| e.to_string())?;
    let pda = compile_pda(&gnf, "X", true).map_err(|e| e.to_string())?;
    ensure(pda.states.len() == 4, || format!("{} states", pda.states.len()))?;
    ensure(pda.transitions.len() == 6, || format!("{} transitions", pda.transitions.len()))?;
    let accepting: BTreeSet<NameSet> = pda.accepting.iter().cloned().collect();
    let expected: BTreeSet<NameSet> = [NameSet::new(), NameSet::from(["Y".to_string()])].into();
    ensure(accepting == expected, || format!("accepting {accepting:?}"))?;

    // Figure states A (initial), B, C, D (C and D accepting) and its edges.
    let figure = [
        (0, "a", "X!", "X! Y!", 1),
        (0, "b", "X!", "", 3),
        (1, "a", "X!", "X! Y", 1),
        (1, "b", "X!", "", 2),
        (2, "c", "Y", "", 2),
        (2, "c", "Y!", "", 3),
    ];
    let edge_set = |map: &[usize]| -> BTreeSet<(usize, String, String, String, usize)> {
        figure
            .iter()
            .map(|&(s, a, top, push, t)| (map[s], a.into(), top.into(), push.into(), map[t]))
            .collect()
    };
    let index: HashMap<&NameSet, usize> = pda.states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let actual: BTreeSet<(usize, String, String, String, usize)> = pda
        .transitions
        .iter()
        .map(|t| {
            let push: Vec<String> = t.push.iter().map(StackSymbol::to_string).collect();
            (index[&t.from], t.label.to_string(), t.top.to_string(), push.join(" "), index[&t.to])
        })
        .collect();
    let init = index[&pda.initial];
    let accepting_ids: BTreeSet<usize> = pda.accepting.iter().map(|s| index[s]).collect();
    let iso = permutations(4).into_iter().any(|map| {
        map[0] == init
            && accepting_ids == BTreeSet::from([map[2], map[3]])
            && edge_set(&map) == actual
    });
    ensure(iso, || format!("no state renaming matches the figure; got {actual:?}"))?;
    Ok("4 states, 6 transitions, isomorphic to the figure".into())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn pda_lts(pda: &Pda, limits: ExploreLimits) -> Lts {
    explore(&PdaSpace { pda }, pda.initial_config(), limits)
}

fn spec_vs_pda(spec: &RecursiveSpec, root: &str, k: usize) -> Result<(), String> {
    let gnf = to_gnf_view(spec, root).map_err(|e| e.to_string())?;
    let pda = compile_pda(&gnf, root, true).map_err(|e| e.to_string())?;
    let limits = ExploreLimits::depth(k);
    let lt = explore_term(&Term::name(root), spec, Mode::Revised, limits).map_err(|e| e.to_string())?;
    let lp = pda_lts(&pda, limits);
    let v = k_bisim(&lt, &lp, k).map_err(|e| e.to_string())?;
    ensure(v.outcome == Outcome::Equivalent, || {
        format!("k={k} {}: {spec}", v.outcome)
    })?;

    // The stack relation, restricted to sequences of at most four names.
    let engine = Engine::new(spec, Mode::Revised).map_err(|e| e.to_string())?;
    let window = ExploreLimits::new(64, 100_000);
    let lt = explore_window(&TermSpace { engine: &engine }, engine.canonical(&Term::name(root)), window, |t| {
        t.seq_factors().len() <= 4
    });
    let lp = explore_window(&PdaSpace { pda: &pda }, pda.initial_config(), window, |c| c.stack.len() <= 4);
    let mut pairs = Vec::new();
    for s in &lt.states {
        let term = parse_term(&s.label, spec).map_err(|e| format!("{}: {e}", s.label))?;
        let xi: Vec<String> = term
            .seq_factors()
            .into_iter()
            .filter(|f| **f != Term::Skip)
            .map(|f| match f {
                Term::Name(n) => Ok(n.clone()),
                other => Err(format!("state {other} is not a name sequence")),
            })
            .collect::<Result<_, _>>()?;
        if xi.len() > 4 {
            continue;
        }
        let cfg = seqproc::automata::PdaConfig {
            state: suffset(&xi, 0).map_err(|e| e.to_string())?,
            stack: stack_of(&xi),
        };
        let r = lp
            .state_by_label(&cfg.to_string())
            .ok_or_else(|| format!("configuration {cfg} of {} not reached", s.label))?;
        pairs.push((s.id, r));
    }
    let cand = RelationCandidate {
        kind: RelationKind::Strong,
        pairs,
    };
    let v = check_relation(&lt, &lp, &cand).map_err(|e| e.to_string())?;
    ensure(!v.is_inequivalent(), || format!("stack relation fails: {:?} for {spec}", v.witness))
}

fn pda_bisimilar() -> Result<String, String> {
    let (spec, _) = running();
    spec_vs_pda(&spec, "X", 8)?;
    let mut rng = gen::rng(0x5eed_0003);
    for _ in 0..50 {
        let spec = gen::random_gnf_spec(&mut rng);
        spec_vs_pda(&spec, "X0", 6)?;
    }
    Ok("running example k=8, 50 random specs k=6, stack relation in window".into())
}

fn contexts(p: &Term, r: &Term) -> Vec<(&'static str, Term)> {
    vec![
        ("a.[]", Term::prefix(Action::plain("a"), p.clone())),
        ("[] + R", Term::alt(p.clone(), r.clone())),
        ("R + []", Term::alt(r.clone(), p.clone())),
        ("[] ; R", Term::seq(p.clone(), r.clone())),
        ("R ; []", Term::seq(r.clone(), p.clone())),
        ("[[] || R]{c}", Term::par(["c"], p.clone(), r.clone())),
    ]
}

fn congruence() -> Result<String, String> {
    let empty = RecursiveSpec::empty();
    let mut rng = gen::rng(0x5eed_0004);
    let mut related = 0;
    for _ in 0..200 {
        let (p, q) = gen::random_pair(&mut rng);
        let r = gen::random_term(&mut rng, 2, true);
        let v = rooted_check(&explore_finite(&p, &empty)?, &explore_finite(&q, &empty)?, RootBase::DpBranching);
        if !v.is_equivalent() {
            continue;
        }
        related += 1;
        for ((ctx, cp), (_, cq)) in contexts(&p, &r).into_iter().zip(contexts(&q, &r)) {
            let w = rooted_check(&explore_finite(&cp, &empty)?, &explore_finite(&cq, &empty)?, RootBase::DpBranching);
            ensure(w.is_equivalent(), || {
                format!("context {ctx} breaks P={p}, Q={q}, R={r}: {}", w.outcome)
            })?;
        }
    }
    ensure(related >= 50, || format!("only {related} related pairs generated"))?;
    Ok(format!("{related} related pairs of 200, six contexts each, zero violations"))
}

fn parse_closed(text: &str) -> Term {
    parse_term(text, &RecursiveSpec::empty()).expect("closed term parses")
}

fn rooted_non_congruence() -> Result<String, String> {
    let empty = RecursiveSpec::empty();
    let lts = |t: &str| explore_finite(&parse_closed(t), &empty);
    let v = rooted_check(&lts("tau.1")?, &lts("(tau.1)*")?, RootBase::Branching);
    ensure(v.is_equivalent(), || format!("tau.1 vs (tau.1)*: {}", v.outcome))?;
    let v = rooted_check(&lts("(tau.1) ; a.1")?, &lts("(tau.1)* ; a.1")?, RootBase::Branching);
    ensure(v.is_inequivalent(), || format!("in context ; a.1: {}", v.outcome))?;
    let v = dp_branching_bisim(&lts("tau.1")?, &lts("(tau.1)*")?);
    ensure(v.is_inequivalent(), || format!("dp-branching: {}", v.outcome))?;
    Ok("rooted branching holds, breaks under ; a.1, dp-branching separates".into())
}

fn distributivity_and_associativity() -> Result<String, String> {
    let empty = RecursiveSpec::empty();
    let lts = |t: &str| explore_finite(&parse_closed(t), &empty);
    let v = strong_bisim(&lts("(a.1 + 1) ; b.1")?, &lts("(a.1 ; b.1) + (1 ; b.1)")?);
    ensure(v.is_inequivalent(), || format!("distributivity: {}", v.outcome))?;

    let engine = Engine::without_normalization(&empty, Mode::Revised).map_err(|e| e.to_string())?;
    let limits = ExploreLimits::new(200, 100_000);
    let mut rng = gen::rng(0x5eed_0006);
    for _ in 0..200 {
        let [p, q, r] = [0; 3].map(|_| gen::random_term(&mut rng, 2, false));
        let left = explore_with(&engine, &Term::seq(Term::seq(p.clone(), q.clone()), r.clone()), limits);
        let right = explore_with(&engine, &Term::seq(p.clone(), Term::seq(q.clone(), r.clone())), limits);
        ensure(!left.has_frontier() && !right.has_frontier(), || "exploration cut short".into())?;
        let v = strong_bisim(&left, &right);
        ensure(v.is_equivalent(), || format!("({p};{q});{r}: {}", v.outcome))?;
    }
    Ok("distributivity refuted, associativity on 200 random triples".into())
}

/// `(n, true)` for C_n, `(n, false)` for B_n: the number of `a.1 + 1` factors
/// pending, and whether the counter still has its `#` factor (or is back at the star).
fn counter_index(t: &Term) -> (usize, bool) {
    let factors = t.seq_factors();
    let a = parse_closed("a.1 + 1");
    let count = factors.iter().filter(|f| ***f == a).count();
    let up = matches!(factors.first().map(|f| &**f), Some(Term::Nest(..)) | Some(Term::Star(_)));
    (count, up)
}

fn half_counter() -> Result<String, String> {
    const N: usize = 10;
    let reference = ref_lts(&ReferenceProcess::half_counter(), ExploreLimits::depth(N + 3));
    let empty = RecursiveSpec::empty();
    let engine = Engine::new(&empty, Mode::Revised).map_err(|e| e.to_string())?;
    let hc = explore_window(&TermSpace { engine: &engine }, engine.canonical(&hc_term()), ExploreLimits::new(200, 100_000), |t| {
        counter_index(t).0 <= N
    });
    ensure(!hc.truncated, || "state cap reached".into())?;
    let mut pairs = Vec::new();
    let mut matched = BTreeSet::new();
    for s in &hc.states {
        let t = parse_closed(&s.label);
        let (n, up) = counter_index(&t);
        if n > N {
            continue;
        }
        let name = format!("{}{n}", if up { "C" } else { "B" });
        let r = reference.state_by_label(&name).ok_or_else(|| format!("{name} missing"))?;
        pairs.push((r, s.id));
        matched.insert(name);
    }
    ensure(matched.len() == 2 * (N + 1), || format!("matched only {matched:?}"))?;
    let tau_free = [&reference, &hc]
        .iter()
        .all(|l| l.transitions.iter().all(|t| !t.label.is_tau()));
    ensure(tau_free, || "tau transition found".into())?;
    let cand = RelationCandidate {
        kind: RelationKind::DpBranching,
        pairs,
    };
    let v = check_relation(&reference, &hc, &cand).map_err(|e| e.to_string())?;
    ensure(!v.is_inequivalent(), || format!("{:?}", v.witness))?;
    Ok(format!("{} pairs for n<=10, {} frontier obligations skipped", cand.pairs.len(), v.skipped))
}

/// Explore an encoding up to `visible` observable steps.
fn explore_encoding(spec: &RecursiveSpec, term: &Term, visible: usize) -> Result<Lts, String> {
    let engine = Engine::new(spec, Mode::Revised).map_err(|e| e.to_string())?;
    let lts = explore_visible(&TermSpace { engine: &engine }, engine.canonical(term), visible, 100_000);
    ensure(!lts.truncated, || format!("state cap reached at {} states", lts.len()))?;
    Ok(lts)
}

fn stack() -> Result<String, String> {
    let data = ["d1".to_string(), "d2".to_string()];
    let reference = ref_lts(&ReferenceProcess::stack(&["d1", "d2"]), ExploreLimits::depth(8));
    let sys = stack_encoding(&data).map_err(|e| e.to_string())?;
    let enc = explore_encoding(&sys.spec, &sys.term, 7)?;
    let v = branching_bisim(&reference, &enc);
    ensure(!v.is_inequivalent(), || format!("{:?}", v.witness))?;

    // Negative control: the encoding must be told apart from a smaller stack.
    let smaller = ref_lts(&ReferenceProcess::stack(&["d1"]), ExploreLimits::depth(8));
    ensure(branching_bisim(&smaller, &enc).is_inequivalent(), || {
        "encoding not separated from a one-datum stack".into()
    })?;
    Ok(format!(
        "{}, {} reference states vs {} encoding states up to 7 visible steps",
        v.outcome,
        reference.len(),
        enc.len()
    ))
}

fn toy_rtm() -> Rtm {
    let d = || Some("d".to_string());
    let rule = |from: &str, read, label: &str, mv, to: &str| RtmTransition {
        from: from.into(),
        read,
        label: Action::plain(label),
        write: d(),
        mv,
        to: to.into(),
    };
    Rtm {
        states: vec!["s".into(), "t".into()],
        alphabet: vec!["d".into()],
        transitions: vec![
            rule("s", None, "a", Move::R, "t"),
            rule("t", None, "b", Move::L, "s"),
            rule("s", d(), "c", Move::R, "t"),
            rule("t", d(), "e", Move::R, "t"),
        ],
        initial: "s".into(),
        finals: BTreeSet::from(["s".to_string()]),
    }
}

fn rtm_reference(machine: &Rtm, depth: usize) -> Lts {
    explore(
        &RtmSpace { rtm: machine, trim: true },
        machine.initial_config(),
        ExploreLimits::depth(depth),
    )
}

fn rtm() -> Result<String, String> {
    let machine = toy_rtm();
    machine.validate().map_err(|e| e.to_string())?;
    let reference = rtm_reference(&machine, 6);
    let sys = rtm_encoding(&machine).map_err(|e| e.to_string())?;
    let enc = explore_encoding(&sys.spec, &sys.term, 6)?;
    let v = dp_branching_bisim(&reference, &enc);
    ensure(!v.is_inequivalent(), || format!("{:?}", v.witness))?;

    // Negative control: relabelling one rule must be detected inside the window.
    let mut altered = machine.clone();
    altered.transitions[3].label = Action::plain("f");
    ensure(dp_branching_bisim(&rtm_reference(&altered, 6), &enc).is_inequivalent(), || {
        "encoding not separated from an altered machine".into()
    })?;
    Ok(format!(
        "{}, {} reference states vs {} encoding states up to 6 visible steps",
        v.outcome,
        reference.len(),
        enc.len()
    ))
}

fn guardedness() -> Result<String, String> {
    let (spec, root) = parse_spec("X = X ; Y + 1\nY = a.1").map_err(|e| e.to_string())?;
    let report = check_guardedness(&spec);
    ensure(report.offending_names == ["X"], || format!("{report:?}"))?;
    match Engine::new(&spec, Mode::Revised) {
        Err(e @ SemanticsError::Unguarded(_)) => {
            ensure(e.to_string() == "unguarded: X", || e.to_string())?
        }
        other => return Err(format!("engine accepted the spec: {:?}", other.map(|_| ()))),
    }
    let explored = explore_term(&root, &spec, Mode::Standard, ExploreLimits::depth(3));
    ensure(explored.is_err(), || "exploration ran".into())?;
    Ok("rejected with \"unguarded: X\"".into())
}

fn lattice() -> Result<String, String> {
    let mut rng = gen::rng(0x5eed_0011);
    let mut counts = [0usize; 5];
    for i in 0..200 {
        let n = 1 + i % 15;
        let l1 = gen::random_lts(&mut rng, n);
        let l2 = if i % 4 == 0 {
            gen::random_lts(&mut rng, n)
        } else {
            gen::random_variant(&mut rng, &l1)
        };
        let strong = strong_bisim(&l1, &l2).is_equivalent();
        let dp = dp_branching_bisim(&l1, &l2).is_equivalent();
        let br = branching_bisim(&l1, &l2).is_equivalent();
        let rdp = rooted_check(&l1, &l2, RootBase::DpBranching).is_equivalent();
        let rbr = rooted_check(&l1, &l2, RootBase::Branching).is_equivalent();
        let at = || format!("pair {i}: {}\nvs\n{}", l1.to_json(), l2.to_json());
        ensure(!strong || dp, || format!("strong but not dp-branching, {}", at()))?;
        ensure(!dp || br, || format!("dp-branching but not branching, {}", at()))?;
        ensure(!rdp || dp, || format!("rooted dp but not dp, {}", at()))?;
        ensure(!rbr || br, || format!("rooted branching but not branching, {}", at()))?;
        ensure(!rdp || rbr, || format!("rooted dp but not rooted branching, {}", at()))?;
        let k = l1.len() + l2.len();
        let kb = k_bisim(&l1, &l2, k).map_err(|e| e.to_string())?.is_equivalent();
        ensure(kb == strong, || format!("k={k} disagrees with strong, {}", at()))?;
        for (c, hit) in counts.iter_mut().zip([strong, dp, br, rdp, rbr]) {
            *c += hit as usize;
        }
    }
    Ok(format!(
        "200 pairs; equivalent: strong {}, dp {}, branching {}, rooted dp {}, rooted branching {}",
        counts[0], counts[1], counts[2], counts[3], counts[4]
    ))
}
