//! Bounded breadth-first state-space generation, storage and export.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semantics::{Engine, Mode, SemanticsError};
use crate::syntax::{render_term, Action, RecursiveSpec, Term};

#[derive(Debug, Error)]
pub enum LtsError {
    #[error("state {0} is a frontier state; its branching degree is unknown")]
    Frontier(usize),
    #[error("no state with id {0}")]
    UnknownState(usize),
    #[error("malformed LTS: {0}")]
    Malformed(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Anything that can be unfolded into a transition system.
pub trait StateSpace {
    type State: Clone + Eq + Hash;

    /// Outgoing transitions in a fixed, deterministic order.
    fn successors(&self, state: &Self::State) -> Vec<(Action, Self::State)>;
    fn terminates(&self, state: &Self::State) -> bool;
    fn label(&self, state: &Self::State) -> String;
}

/// Process terms under one engine.
pub struct TermSpace<'e> {
    pub engine: &'e Engine,
}

impl StateSpace for TermSpace<'_> {
    type State = Term;

    fn successors(&self, state: &Term) -> Vec<(Action, Term)> {
        self.engine
            .step_canonical(state)
            .into_iter()
            .map(|t| (t.label, t.target))
            .collect()
    }

    fn terminates(&self, state: &Term) -> bool {
        self.engine.terminates(state)
    }

    fn label(&self, state: &Term) -> String {
        render_term(state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploreLimits {
    /// Edges from the initial state; states at this depth are not expanded.
    pub max_depth: usize,
    pub max_states: usize,
}

impl ExploreLimits {
    pub const DEFAULT_MAX_STATES: usize = 100_000;

    pub fn depth(max_depth: usize) -> ExploreLimits {
        ExploreLimits {
            max_depth,
            max_states: Self::DEFAULT_MAX_STATES,
        }
    }

    pub fn new(max_depth: usize, max_states: usize) -> ExploreLimits {
        ExploreLimits {
            max_depth,
            max_states: max_states.max(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LtsState {
    pub id: usize,
    pub label: String,
    pub terminating: bool,
    pub frontier: bool,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LtsTransition {
    pub src: usize,
    #[serde(with = "action_text")]
    pub label: Action,
    pub dst: usize,
}

mod action_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::syntax::Action;

    pub fn serialize<S: Serializer>(a: &Action, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(a)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Action, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lts {
    pub initial: usize,
    pub states: Vec<LtsState>,
    pub transitions: Vec<LtsTransition>,
    /// Set when the state cap cut exploration short.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
}

impl std::str::FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

impl Lts {
    /// Build from parts, checking that every id is in range and frontier states have no transitions.
    pub fn new(
        initial: usize,
        states: Vec<LtsState>,
        transitions: Vec<LtsTransition>,
    ) -> Result<Lts, LtsError> {
        let lts = Lts {
            initial,
            states,
            transitions,
            truncated: false,
        };
        lts.validate()?;
        Ok(lts)
    }

    pub fn validate(&self) -> Result<(), LtsError> {
        let n = self.states.len();
        if self.initial >= n {
            return Err(LtsError::Malformed(format!("initial state {} missing", self.initial)));
        }
        for (i, s) in self.states.iter().enumerate() {
            if s.id != i {
                return Err(LtsError::Malformed(format!("state at position {i} has id {}", s.id)));
            }
        }
        for t in &self.transitions {
            if t.src >= n || t.dst >= n {
                return Err(LtsError::Malformed(format!(
                    "transition {} -> {} references a missing state",
                    t.src, t.dst
                )));
            }
            if self.states[t.src].frontier {
                return Err(LtsError::Malformed(format!(
                    "frontier state {} has outgoing transitions",
                    t.src
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn has_frontier(&self) -> bool {
        self.states.iter().any(|s| s.frontier)
    }

    /// Outgoing transitions per state.
    pub fn adjacency(&self) -> Vec<Vec<(Action, usize)>> {
        let mut adj = vec![Vec::new(); self.states.len()];
        for t in &self.transitions {
            adj[t.src].push((t.label.clone(), t.dst));
        }
        adj
    }

    pub fn outgoing(&self, state: usize) -> impl Iterator<Item = &LtsTransition> {
        self.transitions.iter().filter(move |t| t.src == state)
    }

    pub fn branching_degree(&self, state: usize) -> Result<usize, LtsError> {
        let s = self.states.get(state).ok_or(LtsError::UnknownState(state))?;
        if s.frontier {
            return Err(LtsError::Frontier(state));
        }
        Ok(self.outgoing(state).count())
    }

    /// Follow a trace from the initial state, taking the first matching transition each time.
    pub fn follow(&self, trace: &[Action]) -> Option<usize> {
        let mut cur = self.initial;
        for a in trace {
            cur = self.outgoing(cur).find(|t| &t.label == a)?.dst;
        }
        Some(cur)
    }

    pub fn state_by_label(&self, label: &str) -> Option<usize> {
        self.states.iter().position(|s| s.label == label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("LTS serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Lts, LtsError> {
        let lts: Lts = serde_json::from_str(text)?;
        lts.validate()?;
        Ok(lts)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lts {\n  node [shape=circle];\n");
        for s in &self.states {
            let mut attrs = vec![format!("label=\"{}\"", escape(&s.label))];
            if s.terminating {
                attrs.push("shape=doublecircle".into());
            }
            let mut styles = Vec::new();
            if s.id == self.initial {
                styles.push("bold");
            }
            if s.frontier {
                styles.push("dashed");
            }
            if !styles.is_empty() {
                attrs.push(format!("style=\"{}\"", styles.join(",")));
            }
            let _ = writeln!(out, "  {} [{}];", s.id, attrs.join(", "));
        }
        for t in &self.transitions {
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"{}\"];",
                t.src,
                t.dst,
                escape(&t.label.to_string())
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn export(&self, format: ExportFormat) -> Vec<u8> {
        match format {
            ExportFormat::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s.into_bytes()
            }
            ExportFormat::Dot => self.to_dot().into_bytes(),
        }
    }

    /// Disjoint union; states of `other` are shifted by `self.len()`.
    pub fn disjoint_union(&self, other: &Lts) -> (Lts, usize) {
        let offset = self.states.len();
        let mut states = self.states.clone();
        states.extend(other.states.iter().map(|s| LtsState {
            id: s.id + offset,
            ..s.clone()
        }));
        let mut transitions = self.transitions.clone();
        transitions.extend(other.transitions.iter().map(|t| LtsTransition {
            src: t.src + offset,
            label: t.label.clone(),
            dst: t.dst + offset,
        }));
        let joined = Lts {
            initial: self.initial,
            states,
            transitions,
            truncated: self.truncated || other.truncated,
        };
        (joined, offset)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Breadth-first exploration with a depth horizon and a state cap.
///
/// When the cap would be exceeded while expanding a state, that state and
/// every state still waiting become frontier states and the result is
/// flagged truncated.
pub fn explore<S: StateSpace>(space: &S, initial: S::State, limits: ExploreLimits) -> Lts {
    explore_window(space, initial, limits, |_| true)
}

/// Like `explore`, but states rejected by `expand` are kept as frontier
/// states without computing their successors.
pub fn explore_window<S: StateSpace>(
    space: &S,
    initial: S::State,
    limits: ExploreLimits,
    expand: impl Fn(&S::State) -> bool,
) -> Lts {
    let mut index: HashMap<S::State, usize> = HashMap::new();
    let mut keys: Vec<S::State> = Vec::new();
    let mut states: Vec<LtsState> = Vec::new();
    let mut transitions = Vec::new();
    let mut truncated = false;

    let add = |key: S::State,
               depth: usize,
               index: &mut HashMap<S::State, usize>,
               keys: &mut Vec<S::State>,
               states: &mut Vec<LtsState>| {
        let id = states.len();
        states.push(LtsState {
            id,
            label: space.label(&key),
            terminating: space.terminates(&key),
            frontier: false,
            depth,
        });
        index.insert(key.clone(), id);
        keys.push(key);
        id
    };
    add(initial, 0, &mut index, &mut keys, &mut states);

    let mut next = 0;
    while next < states.len() {
        let depth = states[next].depth;
        if depth >= limits.max_depth || !expand(&keys[next]) {
            states[next].frontier = true;
            next += 1;
            continue;
        }
        let succs = space.successors(&keys[next]);
        let fresh = {
            let mut seen = std::collections::HashSet::new();
            succs
                .iter()
                .filter(|(_, s)| !index.contains_key(s) && seen.insert(s))
                .count()
        };
        if states.len() + fresh > limits.max_states {
            truncated = true;
            for s in &mut states[next..] {
                s.frontier = true;
            }
            break;
        }
        for (label, succ) in succs {
            let dst = match index.get(&succ) {
                Some(&id) => id,
                None => add(succ, depth + 1, &mut index, &mut keys, &mut states),
            };
            transitions.push(LtsTransition {
                src: next,
                label,
                dst,
            });
        }
        next += 1;
    }
    Lts {
        initial: 0,
        states,
        transitions,
        truncated,
    }
}

/// Explore a process term under `spec`; fails on unguarded specs.
pub fn explore_term(
    term: &Term,
    spec: &RecursiveSpec,
    mode: Mode,
    limits: ExploreLimits,
) -> Result<Lts, SemanticsError> {
    let engine = Engine::new(spec, mode)?;
    if let Some(n) = term.names().into_iter().find(|n| !spec.contains(n)) {
        return Err(SemanticsError::UndefinedName(n));
    }
    Ok(explore_with(&engine, term, limits))
}

pub fn explore_with(engine: &Engine, term: &Term, limits: ExploreLimits) -> Lts {
    explore(&TermSpace { engine }, engine.canonical(term), limits)
}

/// Pairs each state with the number of visible actions taken to reach it,
/// so a window can be cut by observable depth rather than raw steps.
pub struct VisibleDepth<S>(pub S);

impl<S: StateSpace> StateSpace for VisibleDepth<S> {
    type State = (S::State, usize);

    fn successors(&self, (s, k): &(S::State, usize)) -> Vec<(Action, (S::State, usize))> {
        self.0
            .successors(s)
            .into_iter()
            .map(|(a, t)| {
                let k = k + usize::from(!a.is_tau());
                (a, (t, k))
            })
            .collect()
    }

    fn terminates(&self, (s, _): &(S::State, usize)) -> bool {
        self.0.terminates(s)
    }

    fn label(&self, (s, k): &(S::State, usize)) -> String {
        format!("{k}: {}", self.0.label(s))
    }
}

/// Explore until every path has taken `visible` non-tau steps. The state cap
/// of `max_states` still applies.
pub fn explore_visible<S: StateSpace>(
    space: &S,
    initial: S::State,
    visible: usize,
    max_states: usize,
) -> Lts
where
    S::State: Clone,
{
    explore_window(
        &VisibleDepth(space),
        (initial, 0),
        ExploreLimits::new(usize::MAX, max_states),
        |(_, k)| *k < visible,
    )
}

impl<S: StateSpace> StateSpace for &S {
    type State = S::State;

    fn successors(&self, s: &S::State) -> Vec<(Action, S::State)> {
        (**self).successors(s)
    }

    fn terminates(&self, s: &S::State) -> bool {
        (**self).terminates(s)
    }

    fn label(&self, s: &S::State) -> String {
        (**self).label(s)
    }
}

pub fn branching_degree(lts: &Lts, state: usize) -> Result<usize, LtsError> {
    lts.branching_degree(state)
}

pub fn export(lts: &Lts, format: ExportFormat) -> Vec<u8> {
    lts.export(format)
}
