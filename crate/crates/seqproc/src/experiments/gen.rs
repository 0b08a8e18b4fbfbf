//! Seeded random generators for specs, terms and transition systems.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use crate::lts::{Lts, LtsState, LtsTransition};
use crate::syntax::{Action, RecursiveSpec, Term};

pub fn rng(seed: u64) -> StdRng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A GNF spec over `X0..X{n-1}` rooted at `X0`: up to three summands, tails of up to three names.
pub fn random_gnf_spec(rng: &mut StdRng) -> RecursiveSpec {
    let n = rng.gen_range(1..=4);
    let names: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
    let actions = ["a", "b", "c"];
    let equations = names.iter().map(|name| {
        let k = rng.gen_range(1..=3);
        let mut summands: Vec<Term> = (0..k)
            .map(|_| {
                let a = Action::plain(*actions.choose(rng).unwrap());
                let len = rng.gen_range(0..=3);
                let tail = (0..len).map(|_| Term::name(names.choose(rng).unwrap().clone()));
                Term::prefix(a, Term::seq_all(tail))
            })
            .collect();
        if rng.gen_bool(0.4) {
            summands.push(Term::Skip);
        }
        (name.clone(), Term::sum(summands))
    });
    let equations: Vec<(String, Term)> = equations.collect();
    RecursiveSpec::new(equations).expect("generated spec is closed")
}

fn random_action(rng: &mut StdRng, comm: bool) -> Action {
    let pick = rng.gen_range(0..if comm { 6 } else { 4 });
    match pick {
        0 => Action::plain("a"),
        1 => Action::plain("b"),
        2 | 3 => Action::Tau,
        4 => Action::send("c", "d"),
        _ => Action::receive("c", "d"),
    }
}

/// Recursion-free, nesting-free term of bounded height, so its state space is finite; `comm` enables `c!d` / `c?d` prefixes.
pub fn random_term(rng: &mut StdRng, height: u32, comm: bool) -> Term {
    if height == 0 {
        return match rng.gen_range(0..5) {
            0 => Term::Deadlock,
            1 => Term::Skip,
            _ => Term::act(random_action(rng, comm)),
        };
    }
    match rng.gen_range(0..8) {
        0 | 1 => Term::prefix(random_action(rng, comm), random_term(rng, height - 1, comm)),
        2 | 3 => Term::alt(random_term(rng, height - 1, comm), random_term(rng, height - 1, comm)),
        4 | 5 => Term::seq(random_term(rng, height - 1, comm), random_term(rng, height - 1, comm)),
        6 => Term::star(random_term(rng, height - 1, comm)),
        _ => random_term(rng, 0, comm),
    }
}

/// A pair of terms related by a law of rooted divergence-preserving branching
/// bisimilarity, or by a law that only holds unrooted, or by nothing at all.
pub fn random_pair(rng: &mut StdRng) -> (Term, Term) {
    let t = random_term(rng, 2, true);
    match rng.gen_range(0..10) {
        0 => (t.clone(), Term::alt(t.clone(), t)),
        1 => (t.clone(), Term::seq(t, Term::Skip)),
        2 => (t.clone(), Term::seq(Term::Skip, t)),
        3 => (t.clone(), Term::alt(t, Term::Deadlock)),
        // a.(tau.(P + Q) + P) = a.(P + Q)
        4 => {
            let q = random_term(rng, 1, true);
            let a = random_action(rng, true);
            let lhs = Term::prefix(
                a.clone(),
                Term::alt(Term::prefix(Action::Tau, Term::alt(t.clone(), q.clone())), t.clone()),
            );
            (lhs, Term::prefix(a, Term::alt(t, q)))
        }
        5 => {
            let a = random_action(rng, true);
            (Term::prefix(a.clone(), Term::prefix(Action::Tau, t.clone())), Term::prefix(a, t))
        }
        // unrooted only
        6 => (t.clone(), Term::prefix(Action::Tau, t)),
        7 => (Term::act(Action::Tau), Term::star(Term::act(Action::Tau))),
        8 => match &t {
            Term::Alt(l, r) => (t.clone(), Term::Alt(r.clone(), l.clone())),
            _ => (t.clone(), t),
        },
        _ => (t, random_term(rng, 2, true)),
    }
}

/// Random finite LTS with `n` states over `a`, `b` and tau; every state is reachable from 0.
pub fn random_lts(rng: &mut StdRng, n: usize) -> Lts {
    let labels = [Action::Tau, Action::plain("a"), Action::plain("b")];
    let states = (0..n)
        .map(|id| LtsState {
            id,
            label: format!("s{id}"),
            terminating: rng.gen_bool(0.3),
            frontier: false,
            depth: 0,
        })
        .collect();
    let mut transitions = Vec::new();
    for dst in 1..n {
        let src = rng.gen_range(0..dst);
        transitions.push(LtsTransition {
            src,
            label: labels.choose(rng).unwrap().clone(),
            dst,
        });
    }
    for _ in 0..rng.gen_range(0..=n) {
        transitions.push(LtsTransition {
            src: rng.gen_range(0..n),
            label: labels.choose(rng).unwrap().clone(),
            dst: rng.gen_range(0..n),
        });
    }
    transitions.sort_by(|x, y| (x.src, &x.label, x.dst).cmp(&(y.src, &y.label, y.dst)));
    transitions.dedup();
    Lts::new(0, states, transitions).expect("well-formed")
}

/// A variant of `lts` that is often equivalent to it: states are
/// renumbered, and at most one tweak applied: a visible step routed through
/// a tau, a dropped transition, or a flipped termination flag.
pub fn random_variant(rng: &mut StdRng, lts: &Lts) -> Lts {
    let n = lts.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm[1..].shuffle(rng);
    let mut states: Vec<LtsState> = (0..n)
        .map(|id| LtsState {
            id,
            label: format!("v{id}"),
            terminating: false,
            frontier: false,
            depth: 0,
        })
        .collect();
    for s in &lts.states {
        states[perm[s.id]].terminating = s.terminating;
    }
    let mut transitions = Vec::new();
    let tweak = rng.gen_range(0..4);
    for t in &lts.transitions {
        let (src, dst) = (perm[t.src], perm[t.dst]);
        if tweak == 1 && !t.label.is_tau() && rng.gen_bool(0.3) && states.len() < 30 {
            // src --tau--> mid --a--> dst
            let mid = states.len();
            states.push(LtsState {
                id: mid,
                label: format!("v{mid}"),
                terminating: false,
                frontier: false,
                depth: 0,
            });
            transitions.push(LtsTransition { src, label: Action::Tau, dst: mid });
            transitions.push(LtsTransition { src: mid, label: t.label.clone(), dst });
        } else {
            transitions.push(LtsTransition { src, label: t.label.clone(), dst });
        }
    }
    if tweak == 2 && n > 1 {
        // drop one transition
        let i = rng.gen_range(0..transitions.len().max(1));
        if i < transitions.len() {
            transitions.remove(i);
        }
    }
    if tweak == 3 {
        let s = rng.gen_range(0..n);
        states[s].terminating = !states[s].terminating;
    }
    transitions.sort_by(|x, y| (x.src, &x.label, x.dst).cmp(&(y.src, &y.label, y.dst)));
    transitions.dedup();
    Lts::new(0, states, transitions).expect("well-formed")
}
