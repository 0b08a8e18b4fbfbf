//! Structural operational semantics: termination and one-step transitions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{check_guardedness, Action, RecursiveSpec, Term};

/// Interpretation of sequential composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// The second component may start whenever the first can terminate.
    Standard,
    /// The second component may start only once the first can terminate and has no transition left.
    #[default]
    Revised,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Standard => "standard",
            Mode::Revised => "revised",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(Mode::Standard),
            "revised" => Ok(Mode::Revised),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unguarded: {}", .0.join(", "))]
    Unguarded(Vec<String>),
    #[error("undefined name: {0}")]
    UndefinedName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub label: Action,
    pub target: Term,
}

/// Evaluator for one guarded specification in one mode.
///
/// Guardedness is checked on construction, so every query bottoms out after
/// at most one unfolding of each name.
#[derive(Debug, Clone)]
pub struct Engine {
    spec: Arc<RecursiveSpec>,
    mode: Mode,
    normalize: bool,
    name_terminates: HashMap<String, bool>,
    name_steps: HashMap<String, Arc<[Transition]>>,
}

impl Engine {
    pub fn new(spec: &RecursiveSpec, mode: Mode) -> Result<Engine, SemanticsError> {
        Engine::build(spec, mode, true)
    }

    /// Engine that keeps `1 ; P` and `P ; 1` in targets as generated.
    pub fn without_normalization(spec: &RecursiveSpec, mode: Mode) -> Result<Engine, SemanticsError> {
        Engine::build(spec, mode, false)
    }

    fn build(spec: &RecursiveSpec, mode: Mode, normalize: bool) -> Result<Engine, SemanticsError> {
        let report = check_guardedness(spec);
        if !report.guarded {
            return Err(SemanticsError::Unguarded(report.offending_names));
        }
        let spec = if normalize {
            RecursiveSpec::new(
                spec.equations()
                    .map(|(n, t)| (n.to_string(), normalize_term(t))),
            )
            .expect("normalization preserves well-formedness")
        } else {
            spec.clone()
        };
        let mut engine = Engine {
            spec: Arc::new(spec),
            mode,
            normalize,
            name_terminates: HashMap::new(),
            name_steps: HashMap::new(),
        };

        // Least fixpoint of the termination predicate over names.
        for name in engine.spec.names() {
            engine.name_terminates.insert(name.to_string(), false);
        }
        loop {
            let mut changed = false;
            let names: Vec<String> = engine.spec.names().map(str::to_string).collect();
            for name in names {
                if engine.name_terminates[&name] {
                    continue;
                }
                let body = engine.spec.get(&name).unwrap().clone();
                if engine.terminates(&body) {
                    engine.name_terminates.insert(name, true);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let names: Vec<String> = engine.spec.names().map(str::to_string).collect();
        for name in names {
            let steps = engine.compute_name_steps(&name);
            engine.name_steps.insert(name, steps);
        }
        Ok(engine)
    }

    fn compute_name_steps(&self, name: &str) -> Arc<[Transition]> {
        if let Some(s) = self.name_steps.get(name) {
            return s.clone();
        }
        let body = self.spec.get(name).unwrap().clone();
        let mut out = Vec::new();
        self.raw_steps(&body, &mut out);
        finish(out).into()
    }

    pub fn spec(&self) -> &RecursiveSpec {
        &self.spec
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn normalizes(&self) -> bool {
        self.normalize
    }

    /// Bring a term into the engine's canonical form.
    pub fn canonical(&self, term: &Term) -> Term {
        if self.normalize {
            normalize_term(term)
        } else {
            term.clone()
        }
    }

    pub fn terminates(&self, term: &Term) -> bool {
        match term {
            Term::Deadlock | Term::Prefix(..) => false,
            Term::Skip | Term::Star(_) => true,
            Term::Alt(l, r) => self.terminates(l) || self.terminates(r),
            Term::Seq(l, r) | Term::Par(_, l, r) => self.terminates(l) && self.terminates(r),
            Term::Nest(_, r) => self.terminates(r),
            Term::Name(n) => self.name_terminates.get(n).copied().unwrap_or(false),
        }
    }

    pub fn can_step(&self, term: &Term) -> bool {
        match term {
            Term::Deadlock | Term::Skip => false,
            Term::Prefix(..) => true,
            Term::Alt(l, r) => self.can_step(l) || self.can_step(r),
            // Rule 3 fires exactly when the left side terminates and, in revised
            // mode, cannot step; either way the disjunction reduces to this.
            Term::Seq(l, r) => self.can_step(l) || (self.terminates(l) && self.can_step(r)),
            Term::Star(b) => self.can_step(b),
            Term::Nest(l, r) => self.can_step(l) || self.can_step(r),
            Term::Name(n) => match self.name_steps.get(n) {
                Some(s) => !s.is_empty(),
                None => self.can_step(self.spec.get(n).expect("defined name")),
            },
            Term::Par(channels, l, r) => {
                let left = self.initials(l);
                if left.iter().any(|a| !blocked(a, channels)) {
                    return true;
                }
                let right = self.initials(r);
                if right.iter().any(|a| !blocked(a, channels)) {
                    return true;
                }
                left.iter().any(|a| blocked(a, channels) && right.iter().any(|b| a.complements(b)))
            }
        }
    }

    /// Labels of the outgoing transitions, without building targets.
    pub fn initials(&self, term: &Term) -> BTreeSet<Action> {
        let mut out = BTreeSet::new();
        self.collect_initials(term, &mut out);
        out
    }

    fn collect_initials(&self, term: &Term, out: &mut BTreeSet<Action>) {
        match term {
            Term::Deadlock | Term::Skip => {}
            Term::Prefix(a, _) => {
                out.insert(a.clone());
            }
            Term::Alt(l, r) | Term::Nest(l, r) => {
                self.collect_initials(l, out);
                self.collect_initials(r, out);
            }
            Term::Seq(l, r) => {
                self.collect_initials(l, out);
                if self.rule3(l) {
                    self.collect_initials(r, out);
                }
            }
            Term::Star(b) => self.collect_initials(b, out),
            Term::Name(n) => match self.name_steps.get(n) {
                Some(s) => out.extend(s.iter().map(|t| t.label.clone())),
                None => self.collect_initials(self.spec.get(n).expect("defined name"), out),
            },
            Term::Par(channels, l, r) => {
                let left = self.initials(l);
                let right = self.initials(r);
                out.extend(left.iter().filter(|a| !blocked(a, channels)).cloned());
                out.extend(right.iter().filter(|a| !blocked(a, channels)).cloned());
                if left.iter().any(|a| blocked(a, channels) && right.iter().any(|b| a.complements(b))) {
                    out.insert(Action::Tau);
                }
            }
        }
    }

    /// Whether the right operand of `left ; _` may contribute transitions.
    fn rule3(&self, left: &Term) -> bool {
        self.terminates(left) && (self.mode == Mode::Standard || !self.can_step(left))
    }

    /// All one-step transitions, sorted and duplicate-free.
    pub fn step(&self, term: &Term) -> Vec<Transition> {
        let term = self.canonical(term);
        self.step_canonical(&term)
    }

    /// `step` for a term already in canonical form, e.g. an explored state.
    pub fn step_canonical(&self, term: &Term) -> Vec<Transition> {
        let mut out = Vec::new();
        self.raw_steps(term, &mut out);
        finish(out)
    }

    fn mk_seq(&self, left: Term, right: Arc<Term>) -> Term {
        if self.normalize {
            if left == Term::Skip {
                return right.as_ref().clone();
            }
            if *right == Term::Skip {
                return left;
            }
        }
        Term::Seq(Arc::new(left), right)
    }

    fn raw_steps(&self, term: &Term, out: &mut Vec<Transition>) {
        match term {
            Term::Deadlock | Term::Skip => {}
            Term::Prefix(a, body) => out.push(Transition {
                label: a.clone(),
                target: body.as_ref().clone(),
            }),
            Term::Alt(l, r) => {
                self.raw_steps(l, out);
                self.raw_steps(r, out);
            }
            Term::Seq(l, r) => {
                let mut left = Vec::new();
                self.raw_steps(l, &mut left);
                let left_can_step = !left.is_empty();
                for t in left {
                    out.push(Transition {
                        label: t.label,
                        target: self.mk_seq(t.target, r.clone()),
                    });
                }
                let rule3 = self.terminates(l) && (self.mode == Mode::Standard || !left_can_step);
                if rule3 {
                    self.raw_steps(r, out);
                }
            }
            Term::Name(n) => match self.name_steps.get(n) {
                Some(s) => out.extend(s.iter().cloned()),
                None => self.raw_steps(self.spec.get(n).expect("defined name"), out),
            },
            Term::Star(b) => {
                let mut inner = Vec::new();
                self.raw_steps(b, &mut inner);
                let again = Arc::new(term.clone());
                for t in inner {
                    out.push(Transition {
                        label: t.label,
                        target: self.mk_seq(t.target, again.clone()),
                    });
                }
            }
            Term::Nest(l, r) => {
                let mut inner = Vec::new();
                self.raw_steps(l, &mut inner);
                let whole = Arc::new(term.clone());
                for t in inner {
                    let first = self.mk_seq(t.target, whole.clone());
                    out.push(Transition {
                        label: t.label,
                        target: self.mk_seq(first, l.clone()),
                    });
                }
                self.raw_steps(r, out);
            }
            Term::Par(channels, l, r) => {
                let mut left = Vec::new();
                self.raw_steps(l, &mut left);
                let mut right = Vec::new();
                self.raw_steps(r, &mut right);
                for t in &left {
                    if !blocked(&t.label, channels) {
                        out.push(Transition {
                            label: t.label.clone(),
                            target: Term::Par(channels.clone(), Arc::new(t.target.clone()), r.clone()),
                        });
                    }
                }
                for t in &right {
                    if !blocked(&t.label, channels) {
                        out.push(Transition {
                            label: t.label.clone(),
                            target: Term::Par(channels.clone(), l.clone(), Arc::new(t.target.clone())),
                        });
                    }
                }
                for lt in &left {
                    if !blocked(&lt.label, channels) {
                        continue;
                    }
                    for rt in &right {
                        if lt.label.complements(&rt.label) {
                            out.push(Transition {
                                label: Action::Tau,
                                target: Term::Par(
                                    channels.clone(),
                                    Arc::new(lt.target.clone()),
                                    Arc::new(rt.target.clone()),
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
}

fn blocked(action: &Action, channels: &BTreeSet<String>) -> bool {
    action.channel().is_some_and(|c| channels.contains(c))
}

fn finish(mut out: Vec<Transition>) -> Vec<Transition> {
    out.sort();
    out.dedup();
    out
}

/// Rewrite `1 ; P` to `P` and `P ; 1` to `P` everywhere in the term.
pub fn normalize_term(term: &Term) -> Term {
    fn go(t: &Arc<Term>) -> Arc<Term> {
        match t.as_ref() {
            Term::Deadlock | Term::Skip | Term::Name(_) => t.clone(),
            Term::Prefix(a, b) => {
                let nb = go(b);
                if Arc::ptr_eq(&nb, b) {
                    t.clone()
                } else {
                    Arc::new(Term::Prefix(a.clone(), nb))
                }
            }
            Term::Star(b) => {
                let nb = go(b);
                if Arc::ptr_eq(&nb, b) {
                    t.clone()
                } else {
                    Arc::new(Term::Star(nb))
                }
            }
            Term::Seq(l, r) => {
                let (nl, nr) = (go(l), go(r));
                if *nl == Term::Skip {
                    return nr;
                }
                if *nr == Term::Skip {
                    return nl;
                }
                if Arc::ptr_eq(&nl, l) && Arc::ptr_eq(&nr, r) {
                    t.clone()
                } else {
                    Arc::new(Term::Seq(nl, nr))
                }
            }
            Term::Alt(l, r) | Term::Nest(l, r) | Term::Par(_, l, r) => {
                let (nl, nr) = (go(l), go(r));
                if Arc::ptr_eq(&nl, l) && Arc::ptr_eq(&nr, r) {
                    return t.clone();
                }
                Arc::new(match t.as_ref() {
                    Term::Alt(..) => Term::Alt(nl, nr),
                    Term::Nest(..) => Term::Nest(nl, nr),
                    Term::Par(c, ..) => Term::Par(c.clone(), nl, nr),
                    _ => unreachable!(),
                })
            }
        }
    }
    go(&Arc::new(term.clone())).as_ref().clone()
}

/// `terminates` over a spec; fails on unguarded specs.
pub fn terminates(term: &Term, spec: &RecursiveSpec) -> Result<bool, SemanticsError> {
    let engine = Engine::new(spec, Mode::Revised)?;
    check_defined(term, spec)?;
    Ok(engine.terminates(term))
}

/// One-step transitions of `term`; fails on unguarded specs.
pub fn step(term: &Term, spec: &RecursiveSpec, mode: Mode) -> Result<Vec<Transition>, SemanticsError> {
    let engine = Engine::new(spec, mode)?;
    check_defined(term, spec)?;
    Ok(engine.step(term))
}

pub fn can_step(term: &Term, spec: &RecursiveSpec, mode: Mode) -> Result<bool, SemanticsError> {
    let engine = Engine::new(spec, mode)?;
    check_defined(term, spec)?;
    Ok(engine.can_step(term))
}

fn check_defined(term: &Term, spec: &RecursiveSpec) -> Result<(), SemanticsError> {
    match term.names().into_iter().find(|n| !spec.contains(n)) {
        Some(n) => Err(SemanticsError::UndefinedName(n)),
        None => Ok(()),
    }
}
