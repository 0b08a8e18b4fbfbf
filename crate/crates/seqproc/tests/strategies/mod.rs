//! Proptest strategies shared by the property suites.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::rngs::StdRng;
use seqproc::automata::{Cell, Move, Rtm, RtmTransition};
use seqproc::experiments::gen;
use seqproc::{Action, Term};

pub fn action() -> impl Strategy<Value = Action> {
    prop_oneof![
        Just(Action::Tau),
        prop::sample::select(vec!["a", "b", "c"]).prop_map(Action::plain),
        (prop::sample::select(vec!["c", "k"]), prop::sample::select(vec!["d", "e"]), any::<bool>())
            .prop_map(|(ch, d, send)| if send { Action::send(ch, d) } else { Action::receive(ch, d) }),
    ]
}

fn leaf(names: Vec<String>) -> BoxedStrategy<Term> {
    let base = prop_oneof![
        Just(Term::Deadlock),
        Just(Term::Skip),
        action().prop_map(Term::act),
    ];
    if names.is_empty() {
        base.boxed()
    } else {
        prop_oneof![3 => base, 1 => prop::sample::select(names).prop_map(Term::name)].boxed()
    }
}

/// Any term over the given names, every operator included.
pub fn term_over(names: Vec<String>) -> impl Strategy<Value = Term> {
    leaf(names).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (action(), inner.clone()).prop_map(|(a, t)| Term::prefix(a, t)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::alt(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::seq(l, r)),
            inner.clone().prop_map(Term::star),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::nest(l, r)),
            (prop::collection::btree_set(prop::sample::select(vec!["c", "k"]), 0..=2), inner.clone(), inner)
                .prop_map(|(chs, l, r)| Term::par(chs, l, r)),
        ]
    })
}

pub fn closed_term() -> impl Strategy<Value = Term> {
    term_over(Vec::new())
}

/// Recursion-free terms without nesting, so their state spaces are finite.
pub fn finite_term() -> impl Strategy<Value = Term> {
    prop_oneof![Just(Term::Deadlock), Just(Term::Skip), action().prop_map(Term::act)].prop_recursive(
        3,
        12,
        2,
        |inner| {
            prop_oneof![
                (action(), inner.clone()).prop_map(|(a, t)| Term::prefix(a, t)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::alt(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::seq(l, r)),
                inner.clone().prop_map(Term::star),
            ]
        },
    )
}

/// Terms in which no subterm both terminates and can step: no `1` beside
/// anything that acts, no iteration, no nesting.
pub fn eager_term() -> impl Strategy<Value = Term> {
    prop_oneof![Just(Term::Deadlock), action().prop_map(Term::act)].prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (action(), inner.clone()).prop_map(|(a, t)| Term::prefix(a, t)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::alt(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::seq(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Term::par(["c"], l, r)),
        ]
    })
}

/// Values drawn from a seeded generator; shrinking moves between seeds only.
pub fn seeded<T: std::fmt::Debug>(f: fn(&mut StdRng) -> T) -> impl Strategy<Value = T> {
    any::<u64>().prop_map(move |seed| f(&mut gen::rng(seed)))
}

fn cell() -> impl Strategy<Value = Cell> {
    prop_oneof![Just(None), prop::sample::select(vec!["d1", "d2"]).prop_map(|d| Some(d.to_string()))]
}

/// Small machines over states s0..s2 and data d1, d2.
pub fn rtm() -> impl Strategy<Value = Rtm> {
    let state = || prop::sample::select(vec!["s0", "s1", "s2"]).prop_map(String::from);
    let rule = (
        state(),
        cell(),
        prop::sample::select(vec!["a", "b", "tau"]),
        cell(),
        prop_oneof![Just(Move::L), Just(Move::R)],
        state(),
    )
        .prop_map(|(from, read, label, write, mv, to)| RtmTransition {
            from,
            read,
            label: if label == "tau" { Action::Tau } else { Action::plain(label) },
            write,
            mv,
            to,
        });
    (prop::collection::vec(rule, 1..8), prop::collection::btree_set(state(), 0..3)).prop_map(
        |(transitions, finals)| Rtm {
            states: vec!["s0".into(), "s1".into(), "s2".into()],
            alphabet: vec!["d1".into(), "d2".into()],
            transitions,
            initial: "s0".into(),
            finals,
        },
    )
}
