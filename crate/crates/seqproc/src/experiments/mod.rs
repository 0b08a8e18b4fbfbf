//! Built-in experiments run by `seqproc demo`.

pub mod gen;

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::automata::{compile_pda, Move, NameSet, PdaSpace, Rtm, RtmSpace, RtmTransition};
use crate::encodings::{hc_term, ref_lts, rtm_encoding, stack_encoding, ReferenceProcess};
use crate::equiv::{
    branching_bisim, check_relation, dp_branching_bisim, k_bisim, rooted_check, strong_bisim,
    RelationCandidate, RelationKind, RootBase,
};
use crate::lts::{explore_visible, explore_with, TermSpace};
use crate::syntax::{check_guardedness, parse_term, to_gnf_view};
use crate::{
    explore, explore_term, explore_window, parse_spec, Action, Engine, ExploreLimits, Lts, Mode,
    RecursiveSpec, Term,
};

/// The spec whose branching degree differs between the two sequential rules.
pub const RUNNING_EXAMPLE: &str = "X = a.X ; Y + b.1\nY = c.1 + 1";

const FINITE: ExploreLimits = ExploreLimits {
    max_depth: 200,
    max_states: 100_000,
};

pub struct Experiment {
    pub name: &'static str,
    pub description: &'static str,
    pub reference: &'static str,
    pub encoded: &'static str,
    pub kind: &'static str,
    pub limits: &'static str,
    run: fn() -> Result<Report, String>,
}

impl Experiment {
    pub fn run(&self) -> Result<Report, String> {
        (self.run)()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "name": self.name,
            "description": self.description,
            "reference": self.reference,
            "encoded": self.encoded,
            "kind": self.kind,
            "limits": self.limits,
        })
    }
}

/// Outcome of one experiment: whether the expected claim held, a printable
/// table and the same data as JSON.
#[derive(Debug, Clone)]
pub struct Report {
    pub holds: bool,
    pub lines: Vec<String>,
    pub data: Value,
}

pub const EXPERIMENTS: &[Experiment] = &[
    Experiment {
        name: "branching-degree",
        description: "c-transitions after a^n b under standard and revised sequential composition, n = 1..8",
        reference: RUNNING_EXAMPLE,
        encoded: "-",
        kind: "transition count",
        limits: "depth n+2",
        run: branching_degree,
    },
    Experiment {
        name: "pda-figure",
        description: "reachable-only PDA compiled from the running example",
        reference: RUNNING_EXAMPLE,
        encoded: "compile-pda --reachable-only",
        kind: "structure",
        limits: "-",
        run: pda_figure,
    },
    Experiment {
        name: "pda-bisim",
        description: "specification vs compiled PDA, running example and 50 random GNF specs",
        reference: "X of the spec",
        encoded: "configuration graph of the compiled PDA",
        kind: "k",
        limits: "k=8 (running example), k=6 (random)",
        run: pda_bisim,
    },
    Experiment {
        name: "congruence",
        description: "rooted dp-branching bisimilarity preserved by prefix, choice, sequencing and parallel contexts",
        reference: "200 random recursion-free pairs",
        encoded: "pairs placed in six contexts",
        kind: "rooted-dp",
        limits: "finite state spaces",
        run: congruence,
    },
    Experiment {
        name: "rooted-non-congruence",
        description: "tau.1 and (tau.1)* are rooted branching bisimilar but differ under ; a.1",
        reference: "tau.1",
        encoded: "(tau.1)*",
        kind: "rooted-branching, dp-branching",
        limits: "finite state spaces",
        run: rooted_non_congruence,
    },
    Experiment {
        name: "distributivity",
        description: "(a.1 + 1) ; b.1 vs (a.1 ; b.1) + (1 ; b.1), and associativity of ; on 200 random triples",
        reference: "(a.1 + 1) ; b.1",
        encoded: "(a.1 ; b.1) + (1 ; b.1)",
        kind: "strong",
        limits: "finite state spaces",
        run: distributivity,
    },
    Experiment {
        name: "half-counter",
        description: "candidate relation between the reference half counter and the iteration/nesting term",
        reference: "counterHalf",
        encoded: "(((a.1 + 1) # (b.1 + 1)) ; (c.1 + 1))*",
        kind: "dpBranching relation",
        limits: "counter values n <= 10",
        run: half_counter,
    },
    Experiment {
        name: "stack",
        description: "reference stack over {d1, d2} vs its encoding with two half counters",
        reference: "stack(d1, d2)",
        encoded: "stack_encoding(d1, d2)",
        kind: "branching",
        limits: "reference depth 8; encoding 7 visible steps, 100000 states",
        run: stack,
    },
    Experiment {
        name: "rtm",
        description: "two-state reactive Turing machine vs its encoding with a tape of two stacks",
        reference: "toy RTM",
        encoded: "rtm_encoding(toy RTM)",
        kind: "dp-branching",
        limits: "depth 6 visible steps",
        run: rtm,
    },
    Experiment {
        name: "guardedness",
        description: "X = X ; Y + 1 is rejected before any transition is derived",
        reference: "X = X ; Y + 1, Y = a.1",
        encoded: "-",
        kind: "static check",
        limits: "-",
        run: guardedness,
    },
    Experiment {
        name: "lattice",
        description: "strong => dp-branching => branching and rooted => unrooted on 200 random finite LTS pairs",
        reference: "random LTS",
        encoded: "random variant",
        kind: "all",
        limits: "at most 30 states",
        run: lattice,
    },
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    EXPERIMENTS.iter().find(|e| e.name == name)
}

pub fn manifest() -> Value {
    Value::Array(EXPERIMENTS.iter().map(Experiment::to_value).collect())
}

fn running() -> (RecursiveSpec, Term) {
    parse_spec(RUNNING_EXAMPLE).expect("running example parses")
}

fn closed(text: &str) -> Term {
    parse_term(text, &RecursiveSpec::empty()).expect("closed term parses")
}

fn finite(term: &Term) -> Result<Lts, String> {
    let lts = explore_term(term, &RecursiveSpec::empty(), Mode::Revised, FINITE).map_err(|e| e.to_string())?;
    if lts.has_frontier() {
        return Err(format!("{term} did not finish exploring"));
    }
    Ok(lts)
}

fn branching_degree() -> Result<Report, String> {
    let (spec, root) = running();
    let mut holds = true;
    let mut lines = vec![format!("{:>2}  {:>8}  {:>7}", "n", "standard", "revised")];
    let mut rows = Vec::new();
    for n in 1..=8usize {
        let mut trace = vec![Action::plain("a"); n];
        trace.push(Action::plain("b"));
        let degree = |mode| -> Result<usize, String> {
            let lts = explore_term(&root, &spec, mode, ExploreLimits::depth(n + 2)).map_err(|e| e.to_string())?;
            let s = lts.follow(&trace).ok_or("trace a^n b not found")?;
            Ok(lts.outgoing(s).filter(|t| t.label == Action::plain("c")).count())
        };
        let (std, rev) = (degree(Mode::Standard)?, degree(Mode::Revised)?);
        holds &= std == n && rev == 1;
        lines.push(format!("{n:>2}  {std:>8}  {rev:>7}"));
        rows.push(json!({"n": n, "standard": std, "revised": rev}));
    }
    Ok(Report {
        holds,
        lines,
        data: json!({ "rows": rows }),
    })
}

fn pda_figure() -> Result<Report, String> {
    let (spec, _) = running();
    let gnf = to_gnf_view(&spec, "X").map_err(|e| e.to_string())?;
    let pda = compile_pda(&gnf, "X", true).map_err(|e| e.to_string())?;
    let accepting: BTreeSet<&NameSet> = pda.accepting.iter().collect();
    let expected_accepting: BTreeSet<NameSet> = [NameSet::new(), NameSet::from(["Y".to_string()])].into();
    let holds = pda.states.len() == 4
        && pda.transitions.len() == 6
        && accepting == expected_accepting.iter().collect();
    let mut lines = vec![format!(
        "{} states, {} transitions",
        pda.states.len(),
        pda.transitions.len()
    )];
    lines.extend(pda.transitions.iter().map(ToString::to_string));
    let data: Value = serde_json::from_str(&pda.to_json()).map_err(|e| e.to_string())?;
    Ok(Report { holds, lines, data })
}

fn spec_vs_pda(spec: &RecursiveSpec, root: &str, k: usize) -> Result<bool, String> {
    let gnf = to_gnf_view(spec, root).map_err(|e| e.to_string())?;
    let pda = compile_pda(&gnf, root, true).map_err(|e| e.to_string())?;
    let limits = ExploreLimits::depth(k);
    let lt = explore_term(&Term::name(root), spec, Mode::Revised, limits).map_err(|e| e.to_string())?;
    let lp = explore(&PdaSpace { pda: &pda }, pda.initial_config(), limits);
    Ok(k_bisim(&lt, &lp, k).map_err(|e| e.to_string())?.is_equivalent())
}

fn pda_bisim() -> Result<Report, String> {
    let (spec, _) = running();
    let running_ok = spec_vs_pda(&spec, "X", 8)?;
    let mut rng = gen::rng(0x5eed_0003);
    let mut agree = 0;
    for _ in 0..50 {
        let spec = gen::random_gnf_spec(&mut rng);
        agree += usize::from(spec_vs_pda(&spec, "X0", 6)?);
    }
    Ok(Report {
        holds: running_ok && agree == 50,
        lines: vec![
            format!("running example, k=8: {}", verdict_word(running_ok)),
            format!("random specs, k=6: {agree}/50 equivalent"),
        ],
        data: json!({"running": running_ok, "random": 50, "equivalent": agree}),
    })
}

fn verdict_word(eq: bool) -> &'static str {
    if eq {
        "equivalent"
    } else {
        "inequivalent"
    }
}

fn congruence() -> Result<Report, String> {
    let mut rng = gen::rng(0x5eed_0004);
    let (mut related, mut violations) = (0, Vec::new());
    for _ in 0..200 {
        let (p, q) = gen::random_pair(&mut rng);
        let r = gen::random_term(&mut rng, 2, true);
        if !rooted_check(&finite(&p)?, &finite(&q)?, RootBase::DpBranching).is_equivalent() {
            continue;
        }
        related += 1;
        let contexts = |x: &Term| {
            [
                Term::prefix(Action::plain("a"), x.clone()),
                Term::alt(x.clone(), r.clone()),
                Term::alt(r.clone(), x.clone()),
                Term::seq(x.clone(), r.clone()),
                Term::seq(r.clone(), x.clone()),
                Term::par(["c"], x.clone(), r.clone()),
            ]
        };
        for (cp, cq) in contexts(&p).into_iter().zip(contexts(&q)) {
            if !rooted_check(&finite(&cp)?, &finite(&cq)?, RootBase::DpBranching).is_equivalent() {
                violations.push(format!("{cp}  vs  {cq}"));
            }
        }
    }
    let mut lines = vec![
        format!("related pairs: {related} of 200"),
        format!("context violations: {}", violations.len()),
    ];
    lines.extend(violations.iter().cloned());
    Ok(Report {
        holds: violations.is_empty(),
        lines,
        data: json!({"pairs": 200, "related": related, "violations": violations}),
    })
}

fn rooted_non_congruence() -> Result<Report, String> {
    let plain = rooted_check(&finite(&closed("tau.1"))?, &finite(&closed("(tau.1)*"))?, RootBase::Branching);
    let ctx = rooted_check(
        &finite(&closed("(tau.1) ; a.1"))?,
        &finite(&closed("(tau.1)* ; a.1"))?,
        RootBase::Branching,
    );
    let dp = dp_branching_bisim(&finite(&closed("tau.1"))?, &finite(&closed("(tau.1)*"))?);
    Ok(Report {
        holds: plain.is_equivalent() && ctx.is_inequivalent() && dp.is_inequivalent(),
        lines: vec![
            format!("rooted branching, tau.1 vs (tau.1)*: {}", plain.outcome),
            format!("rooted branching, in context ; a.1: {}", ctx.outcome),
            format!("dp-branching, tau.1 vs (tau.1)*: {}", dp.outcome),
        ],
        data: json!({"rooted": plain.to_value(), "inContext": ctx.to_value(), "dpBranching": dp.to_value()}),
    })
}

fn distributivity() -> Result<Report, String> {
    let v = strong_bisim(
        &finite(&closed("(a.1 + 1) ; b.1"))?,
        &finite(&closed("(a.1 ; b.1) + (1 ; b.1)"))?,
    );
    let engine = Engine::without_normalization(&RecursiveSpec::empty(), Mode::Revised).map_err(|e| e.to_string())?;
    let mut rng = gen::rng(0x5eed_0006);
    let mut associative = 0;
    for _ in 0..200 {
        let [p, q, r] = [0; 3].map(|_| gen::random_term(&mut rng, 2, false));
        let left = explore_with(&engine, &Term::seq(Term::seq(p.clone(), q.clone()), r.clone()), FINITE);
        let right = explore_with(&engine, &Term::seq(p, Term::seq(q, r)), FINITE);
        associative += usize::from(strong_bisim(&left, &right).is_equivalent());
    }
    Ok(Report {
        holds: v.is_inequivalent() && associative == 200,
        lines: vec![
            format!("(a.1 + 1) ; b.1 vs (a.1 ; b.1) + (1 ; b.1): {}", v.outcome),
            format!("witness: {}", v.witness.to_value()),
            format!("associativity: {associative}/200 strongly bisimilar"),
        ],
        data: json!({"distributivity": v.to_value(), "associative": associative, "triples": 200}),
    })
}

/// Pending `a.1 + 1` factors and whether the counter is still counting up.
fn counter_index(t: &Term) -> (usize, bool) {
    let a = closed("a.1 + 1");
    let factors = t.seq_factors();
    let count = factors.iter().filter(|f| ***f == a).count();
    let up = matches!(factors.first().map(|f| &**f), Some(Term::Nest(..) | Term::Star(_)));
    (count, up)
}

fn half_counter() -> Result<Report, String> {
    const N: usize = 10;
    let reference = ref_lts(&ReferenceProcess::half_counter(), ExploreLimits::depth(N + 3));
    let engine = Engine::new(&RecursiveSpec::empty(), Mode::Revised).map_err(|e| e.to_string())?;
    let hc = explore_window(&TermSpace { engine: &engine }, engine.canonical(&hc_term()), FINITE, |t| {
        counter_index(t).0 <= N
    });
    let mut pairs = Vec::new();
    for s in &hc.states {
        let (n, up) = counter_index(&closed(&s.label));
        if n > N {
            continue;
        }
        let name = format!("{}{n}", if up { "C" } else { "B" });
        let r = reference.state_by_label(&name).ok_or_else(|| format!("{name} missing"))?;
        pairs.push((r, s.id));
    }
    let cand = RelationCandidate {
        kind: RelationKind::DpBranching,
        pairs,
    };
    let v = check_relation(&reference, &hc, &cand).map_err(|e| e.to_string())?;
    Ok(Report {
        holds: !v.is_inequivalent() && cand.pairs.len() == 2 * (N + 1),
        lines: vec![
            format!("pairs: {}", cand.pairs.len()),
            format!("relation: {}", v.outcome),
            format!("obligations skipped at the horizon: {}", v.skipped),
        ],
        data: json!({"pairs": cand.pairs, "verdict": v.to_value()}),
    })
}

fn encoding_report(reference: &Lts, enc: &Lts, v: crate::equiv::EquivVerdict) -> Report {
    Report {
        holds: !v.is_inequivalent() && !enc.truncated,
        lines: vec![
            format!("reference states: {}", reference.len()),
            format!("encoding states: {}{}", enc.len(), if enc.truncated { " (state cap hit)" } else { "" }),
            format!("verdict: {}", v.outcome),
        ],
        data: json!({"referenceStates": reference.len(), "encodingStates": enc.len(), "verdict": v.to_value()}),
    }
}

fn explore_encoding(spec: &RecursiveSpec, term: &Term, visible: usize) -> Result<Lts, String> {
    let engine = Engine::new(spec, Mode::Revised).map_err(|e| e.to_string())?;
    Ok(explore_visible(&TermSpace { engine: &engine }, engine.canonical(term), visible, 100_000))
}

fn stack() -> Result<Report, String> {
    let reference = ref_lts(&ReferenceProcess::stack(&["d1", "d2"]), ExploreLimits::depth(8));
    let sys = stack_encoding(&["d1".to_string(), "d2".to_string()]).map_err(|e| e.to_string())?;
    let enc = explore_encoding(&sys.spec, &sys.term, 7)?;
    let v = branching_bisim(&reference, &enc);
    Ok(encoding_report(&reference, &enc, v))
}

/// Two states, one datum: `s` is final; `a`/`c` move right into `t`, `b` moves left back to `s`.
pub fn toy_rtm() -> Rtm {
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

fn rtm() -> Result<Report, String> {
    let machine = toy_rtm();
    let reference = explore(
        &RtmSpace { rtm: &machine, trim: true },
        machine.initial_config(),
        ExploreLimits::depth(6),
    );
    let sys = rtm_encoding(&machine).map_err(|e| e.to_string())?;
    let enc = explore_encoding(&sys.spec, &sys.term, 6)?;
    let v = dp_branching_bisim(&reference, &enc);
    Ok(encoding_report(&reference, &enc, v))
}

fn guardedness() -> Result<Report, String> {
    let (spec, _) = parse_spec("X = X ; Y + 1\nY = a.1").map_err(|e| e.to_string())?;
    let report = check_guardedness(&spec);
    let diagnostic = match Engine::new(&spec, Mode::Revised) {
        Ok(_) => None,
        Err(e) => Some(e.to_string()),
    };
    Ok(Report {
        holds: report.offending_names == ["X"] && diagnostic.as_deref() == Some("unguarded: X"),
        lines: vec![format!(
            "engine: {}",
            diagnostic.as_deref().unwrap_or("accepted")
        )],
        data: json!({"offending": report.offending_names, "diagnostic": diagnostic}),
    })
}

fn lattice() -> Result<Report, String> {
    let mut rng = gen::rng(0x5eed_0011);
    let mut counts = [0usize; 5];
    let mut violations = Vec::new();
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
        let kb = k_bisim(&l1, &l2, l1.len() + l2.len())
            .map_err(|e| e.to_string())?
            .is_equivalent();
        let implications = [
            (strong, dp, "strong => dp-branching"),
            (dp, br, "dp-branching => branching"),
            (rdp, dp, "rooted dp => dp-branching"),
            (rbr, br, "rooted branching => branching"),
            (rdp, rbr, "rooted dp => rooted branching"),
        ];
        for (p, q, what) in implications {
            if p && !q {
                violations.push(format!("pair {i}: {what}"));
            }
        }
        if kb != strong {
            violations.push(format!("pair {i}: k-bisimilarity disagrees with strong"));
        }
        for (c, hit) in counts.iter_mut().zip([strong, dp, br, rdp, rbr]) {
            *c += usize::from(hit);
        }
    }
    let mut lines = vec![
        format!(
            "equivalent pairs: strong {}, dp-branching {}, branching {}, rooted dp {}, rooted branching {}",
            counts[0], counts[1], counts[2], counts[3], counts[4]
        ),
        format!("violations: {}", violations.len()),
    ];
    lines.extend(violations.iter().cloned());
    Ok(Report {
        holds: violations.is_empty(),
        lines,
        data: json!({"pairs": 200, "equivalent": counts, "violations": violations}),
    })
}
