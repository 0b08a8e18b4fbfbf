//! Pushdown automata compiled from GNF specifications, and reactive Turing
//! machines, together with their configuration-level step functions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lts::StateSpace;
use crate::syntax::{Action, GnfSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomataError {
    #[error("suffix index {index} out of range for a sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("undefined root name `{0}`")]
    UndefinedRoot(String),
    #[error("full construction over {0} names is too large (limit 16)")]
    TooManyNames(usize),
    #[error("malformed machine: {0}")]
    Malformed(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}

pub type NameSet = BTreeSet<String>;

fn render_set(set: &NameSet) -> String {
    let items: Vec<&str> = set.iter().map(String::as_str).collect();
    format!("{{{}}}", items.join(","))
}

/// A stack symbol is a name, possibly marked as the deepest occurrence of that name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StackSymbol {
    Plain(String),
    Marked(String),
}

impl StackSymbol {
    pub fn name(&self) -> &str {
        match self {
            StackSymbol::Plain(n) | StackSymbol::Marked(n) => n,
        }
    }

    pub fn is_marked(&self) -> bool {
        matches!(self, StackSymbol::Marked(_))
    }
}

impl fmt::Display for StackSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StackSymbol::Plain(n) => f.write_str(n),
            StackSymbol::Marked(n) => write!(f, "{n}!"),
        }
    }
}

impl std::str::FromStr for StackSymbol {
    type Err = AutomataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, marked) = match s.strip_suffix('!') {
            Some(n) => (n, true),
            None => (s, false),
        };
        if !crate::syntax::is_identifier(name) {
            return Err(AutomataError::Malformed(format!("bad stack symbol `{s}`")));
        }
        Ok(if marked {
            StackSymbol::Marked(name.into())
        } else {
            StackSymbol::Plain(name.into())
        })
    }
}

/// Names occurring strictly after position `i` (positions counted from 1).
pub fn suffset(xi: &[String], i: usize) -> Result<NameSet, AutomataError> {
    if i > xi.len() {
        return Err(AutomataError::IndexOutOfRange { index: i, len: xi.len() });
    }
    Ok(xi[i..].iter().cloned().collect())
}

fn base_set(d: &NameSet, top: &StackSymbol) -> NameSet {
    let mut base = d.clone();
    if top.is_marked() {
        base.remove(top.name());
    }
    base
}

/// Stack string pushed in place of `top` when its name unfolds to `xi`:
/// position k is marked iff its name occurs neither in the rest of the old
/// stack nor later in `xi`.
pub fn push_string(d: &NameSet, top: &StackSymbol, xi: &[String]) -> Vec<StackSymbol> {
    let base = base_set(d, top);
    xi.iter()
        .enumerate()
        .map(|(k, name)| {
            let later = xi[k + 1..].iter().any(|n| n == name);
            if base.contains(name) || later {
                StackSymbol::Plain(name.clone())
            } else {
                StackSymbol::Marked(name.clone())
            }
        })
        .collect()
}

/// Control state after replacing `top` by `xi`.
pub fn next_state(d: &NameSet, top: &StackSymbol, xi: &[String]) -> NameSet {
    let mut next = base_set(d, top);
    next.extend(xi.iter().cloned());
    next
}

/// Stack encoding of a name sequence: the deepest occurrence of each name is marked.
pub fn stack_of(xi: &[String]) -> Vec<StackSymbol> {
    push_string(&NameSet::new(), &StackSymbol::Plain(String::new()), xi)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PdaTransition {
    pub from: NameSet,
    pub top: StackSymbol,
    pub label: Action,
    pub push: Vec<StackSymbol>,
    pub to: NameSet,
}

impl fmt::Display for PdaTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let push: Vec<String> = self.push.iter().map(ToString::to_string).collect();
        let push = if push.is_empty() { "eps".into() } else { push.join(" ") };
        write!(
            f,
            "{} --{}[{}/{}]--> {}",
            render_set(&self.from),
            self.label,
            self.top,
            push,
            render_set(&self.to)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pda {
    pub states: Vec<NameSet>,
    pub inputs: BTreeSet<Action>,
    pub stack_symbols: BTreeSet<StackSymbol>,
    pub transitions: Vec<PdaTransition>,
    pub initial: NameSet,
    pub initial_stack: StackSymbol,
    pub accepting: Vec<NameSet>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct PdaJson {
    states: Vec<Vec<String>>,
    inputs: Vec<String>,
    stack_symbols: Vec<String>,
    transitions: Vec<PdaTransitionJson>,
    initial: Vec<String>,
    initial_stack: String,
    accepting: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct PdaTransitionJson {
    from: Vec<String>,
    top: String,
    label: String,
    push: Vec<String>,
    to: Vec<String>,
}

fn set_vec(s: &NameSet) -> Vec<String> {
    s.iter().cloned().collect()
}

impl Pda {
    pub fn is_accepting(&self, state: &NameSet) -> bool {
        self.accepting.contains(state)
    }

    pub fn to_json(&self) -> String {
        let json = PdaJson {
            states: self.states.iter().map(set_vec).collect(),
            inputs: self.inputs.iter().map(ToString::to_string).collect(),
            stack_symbols: self.stack_symbols.iter().map(ToString::to_string).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|t| PdaTransitionJson {
                    from: set_vec(&t.from),
                    top: t.top.to_string(),
                    label: t.label.to_string(),
                    push: t.push.iter().map(ToString::to_string).collect(),
                    to: set_vec(&t.to),
                })
                .collect(),
            initial: set_vec(&self.initial),
            initial_stack: self.initial_stack.to_string(),
            accepting: self.accepting.iter().map(set_vec).collect(),
        };
        serde_json::to_string_pretty(&json).expect("PDA serializes")
    }

    pub fn from_json(text: &str) -> Result<Pda, AutomataError> {
        let json: PdaJson =
            serde_json::from_str(text).map_err(|e| AutomataError::Json(e.to_string()))?;
        let set = |v: Vec<String>| v.into_iter().collect::<NameSet>();
        let action = |s: &str| {
            s.parse::<Action>()
                .map_err(|_| AutomataError::Malformed(format!("bad label `{s}`")))
        };
        let symbols = |v: Vec<String>| {
            v.iter()
                .map(|s| s.parse::<StackSymbol>())
                .collect::<Result<Vec<_>, _>>()
        };
        let transitions = json
            .transitions
            .into_iter()
            .map(|t| {
                Ok(PdaTransition {
                    from: set(t.from),
                    top: t.top.parse()?,
                    label: action(&t.label)?,
                    push: symbols(t.push)?,
                    to: set(t.to),
                })
            })
            .collect::<Result<Vec<_>, AutomataError>>()?;
        let pda = Pda {
            states: json.states.into_iter().map(set).collect(),
            inputs: json
                .inputs
                .iter()
                .map(|s| action(s))
                .collect::<Result<_, _>>()?,
            stack_symbols: symbols(json.stack_symbols)?.into_iter().collect(),
            transitions,
            initial: set(json.initial),
            initial_stack: json.initial_stack.parse()?,
            accepting: json.accepting.into_iter().map(set).collect(),
        };
        pda.validate()?;
        Ok(pda)
    }

    /// Every transition component must be declared.
    pub fn validate(&self) -> Result<(), AutomataError> {
        let has_state = |s: &NameSet| self.states.contains(s);
        if !has_state(&self.initial) {
            return Err(AutomataError::Malformed("initial state not declared".into()));
        }
        if !self.stack_symbols.contains(&self.initial_stack) {
            return Err(AutomataError::Malformed("initial stack symbol not declared".into()));
        }
        for t in &self.transitions {
            let ok = has_state(&t.from)
                && has_state(&t.to)
                && self.inputs.contains(&t.label)
                && self.stack_symbols.contains(&t.top)
                && t.push.iter().all(|s| self.stack_symbols.contains(s));
            if !ok {
                return Err(AutomataError::Malformed(format!("transition `{t}` uses undeclared components")));
            }
        }
        if let Some(a) = self.accepting.iter().find(|a| !has_state(a)) {
            return Err(AutomataError::Malformed(format!(
                "accepting state {} not declared",
                render_set(a)
            )));
        }
        Ok(())
    }

    pub fn initial_config(&self) -> PdaConfig {
        PdaConfig {
            state: self.initial.clone(),
            stack: vec![self.initial_stack.clone()],
        }
    }
}

/// Frame of the reachability analysis: a top name and the set of names beneath it.
type Frame = (String, NameSet);

fn frame_head(f: &Frame) -> (NameSet, StackSymbol) {
    let (top, below) = f;
    let mut d = below.clone();
    d.insert(top.clone());
    let sym = if below.contains(top) {
        StackSymbol::Plain(top.clone())
    } else {
        StackSymbol::Marked(top.clone())
    };
    (d, sym)
}

/// Heads (state, top symbol) reachable from the initial configuration, and
/// whether the empty stack is reachable.
fn reachable_heads(gnf: &GnfSpec, root: &str) -> (BTreeSet<Frame>, bool) {
    let start: Frame = (root.to_string(), NameSet::new());
    let mut tops: BTreeSet<Frame> = BTreeSet::from([start.clone()]);
    // None stands for the bottom of the stack.
    let mut below: BTreeMap<Frame, BTreeSet<Option<Frame>>> = BTreeMap::new();
    below.entry(start).or_default().insert(None);
    let mut inherits: BTreeSet<(Frame, Frame)> = BTreeSet::new();
    let mut empty = false;
    loop {
        let mut changed = false;
        for f in tops.clone() {
            let eq = gnf.get(&f.0).expect("names are defined");
            for s in &eq.summands {
                if s.tail.is_empty() {
                    for g in below.get(&f).cloned().unwrap_or_default() {
                        match g {
                            Some(g) => changed |= tops.insert(g),
                            None => {
                                changed |= !empty;
                                empty = true;
                            }
                        }
                    }
                    continue;
                }
                let mut frames: Vec<Frame> = Vec::with_capacity(s.tail.len());
                let mut acc = f.1.clone();
                for name in s.tail.iter().rev() {
                    frames.push((name.clone(), acc.clone()));
                    acc.insert(name.clone());
                }
                frames.reverse();
                changed |= tops.insert(frames[0].clone());
                for w in frames.windows(2) {
                    changed |= below.entry(w[0].clone()).or_default().insert(Some(w[1].clone()));
                }
                changed |= inherits.insert((f.clone(), frames.last().unwrap().clone()));
            }
        }
        for (from, to) in &inherits {
            let src = below.get(from).cloned().unwrap_or_default();
            let dst = below.entry(to.clone()).or_default();
            for g in src {
                changed |= dst.insert(g);
            }
        }
        if !changed {
            return (tops, empty);
        }
    }
}

fn subsets(names: &[String]) -> Vec<NameSet> {
    (0..1usize << names.len())
        .map(|mask| {
            names
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, n)| n.clone())
                .collect()
        })
        .collect()
}

/// Compile a GNF specification to a PDA whose configuration graph is strongly
/// bisimilar to the process of `root`. With `reachable_only` the transitions
/// are restricted to heads reachable from the initial configuration;
/// otherwise every state `D` and every top whose name is in `D` is covered.
pub fn compile_pda(gnf: &GnfSpec, root: &str, reachable_only: bool) -> Result<Pda, AutomataError> {
    if gnf.get(root).is_none() {
        return Err(AutomataError::UndefinedRoot(root.to_string()));
    }
    let names: Vec<String> = gnf.names().map(String::from).collect();
    let heads: Vec<(NameSet, StackSymbol)> = if reachable_only {
        reachable_heads(gnf, root).0.iter().map(frame_head).collect()
    } else {
        if names.len() > 16 {
            return Err(AutomataError::TooManyNames(names.len()));
        }
        subsets(&names)
            .into_iter()
            .flat_map(|d| {
                d.iter()
                    .flat_map(|n| [StackSymbol::Plain(n.clone()), StackSymbol::Marked(n.clone())])
                    .map(|s| (d.clone(), s))
                    .collect::<Vec<_>>()
            })
            .collect()
    };

    let mut transitions = BTreeSet::new();
    for (d, top) in &heads {
        let eq = gnf.get(top.name()).expect("names are defined");
        for s in &eq.summands {
            transitions.insert(PdaTransition {
                from: d.clone(),
                top: top.clone(),
                label: s.action.clone(),
                push: push_string(d, top, &s.tail),
                to: next_state(d, top, &s.tail),
            });
        }
    }

    let initial: NameSet = [root.to_string()].into();
    let mut states: BTreeSet<NameSet> = if reachable_only {
        let mut st: BTreeSet<NameSet> = heads.iter().map(|(d, _)| d.clone()).collect();
        st.extend(transitions.iter().map(|t| t.to.clone()));
        st
    } else {
        subsets(&names).into_iter().collect()
    };
    states.insert(initial.clone());
    states.insert(NameSet::new());
    // Order: initial first, then by size and content.
    let mut states: Vec<NameSet> = states.into_iter().collect();
    states.sort_by(|a, b| (a != &initial, std::cmp::Reverse(a.len()), a).cmp(&(b != &initial, std::cmp::Reverse(b.len()), b)));

    let accepting = states
        .iter()
        .filter(|d| d.iter().all(|n| gnf.terminates(n)))
        .cloned()
        .collect();
    let mut stack_symbols: BTreeSet<StackSymbol> = BTreeSet::new();
    for t in &transitions {
        stack_symbols.insert(t.top.clone());
        stack_symbols.extend(t.push.iter().cloned());
    }
    let initial_stack = StackSymbol::Marked(root.to_string());
    stack_symbols.insert(initial_stack.clone());
    let inputs = transitions.iter().map(|t| t.label.clone()).collect();
    Ok(Pda {
        states,
        inputs,
        stack_symbols,
        transitions: transitions.into_iter().collect(),
        initial,
        initial_stack,
        accepting,
    })
}

/// A PDA configuration; the top of the stack is its first element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PdaConfig {
    pub state: NameSet,
    pub stack: Vec<StackSymbol>,
}

impl fmt::Display for PdaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stack: Vec<String> = self.stack.iter().map(ToString::to_string).collect();
        write!(f, "{} | {}", render_set(&self.state), stack.join(" "))
    }
}

pub fn pda_step(pda: &Pda, cfg: &PdaConfig) -> Vec<(Action, PdaConfig)> {
    let Some((top, rest)) = cfg.stack.split_first() else {
        return Vec::new();
    };
    pda.transitions
        .iter()
        .filter(|t| t.from == cfg.state && &t.top == top)
        .map(|t| {
            let mut stack = t.push.clone();
            stack.extend_from_slice(rest);
            (
                t.label.clone(),
                PdaConfig {
                    state: t.to.clone(),
                    stack,
                },
            )
        })
        .collect()
}

/// Configuration graph of a PDA.
pub struct PdaSpace<'a> {
    pub pda: &'a Pda,
}

impl StateSpace for PdaSpace<'_> {
    type State = PdaConfig;

    fn successors(&self, state: &PdaConfig) -> Vec<(Action, PdaConfig)> {
        pda_step(self.pda, state)
    }

    fn terminates(&self, state: &PdaConfig) -> bool {
        self.pda.is_accepting(&state.state)
    }

    fn label(&self, state: &PdaConfig) -> String {
        state.to_string()
    }
}

// ---------------------------------------------------------------------------
// Reactive Turing machines

/// Tape symbol; `None` is the blank.
pub type Cell = Option<String>;

pub const BLANK: &str = "_";

fn render_cell(c: &Cell) -> &str {
    c.as_deref().unwrap_or(BLANK)
}

fn parse_cell(s: &str) -> Cell {
    if s == BLANK {
        None
    } else {
        Some(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RtmTransition {
    pub from: String,
    pub read: Cell,
    pub label: Action,
    pub write: Cell,
    pub mv: Move,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rtm {
    pub states: Vec<String>,
    /// Data symbols; the blank is implicit.
    pub alphabet: Vec<String>,
    pub transitions: Vec<RtmTransition>,
    pub initial: String,
    pub finals: BTreeSet<String>,
}

#[derive(Serialize, Deserialize)]
struct RtmJson {
    states: Vec<String>,
    alphabet: Vec<String>,
    transitions: Vec<RtmTransitionJson>,
    initial: String,
    #[serde(rename = "final")]
    finals: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RtmTransitionJson {
    from: String,
    read: String,
    label: String,
    write: String,
    #[serde(rename = "move")]
    mv: Move,
    to: String,
}

impl Rtm {
    pub fn validate(&self) -> Result<(), AutomataError> {
        let state = |s: &String| self.states.contains(s);
        let symbol = |c: &Cell| c.as_ref().is_none_or(|d| self.alphabet.contains(d));
        if !state(&self.initial) {
            return Err(AutomataError::Malformed("initial state not declared".into()));
        }
        if let Some(f) = self.finals.iter().find(|f| !state(f)) {
            return Err(AutomataError::Malformed(format!("final state `{f}` not declared")));
        }
        for t in &self.transitions {
            if !(state(&t.from) && state(&t.to) && symbol(&t.read) && symbol(&t.write)) {
                return Err(AutomataError::Malformed(format!(
                    "transition from `{}` uses undeclared components",
                    t.from
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let json = RtmJson {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| RtmTransitionJson {
                    from: t.from.clone(),
                    read: render_cell(&t.read).into(),
                    label: t.label.to_string(),
                    write: render_cell(&t.write).into(),
                    mv: t.mv,
                    to: t.to.clone(),
                })
                .collect(),
            initial: self.initial.clone(),
            finals: self.finals.iter().cloned().collect(),
        };
        serde_json::to_string_pretty(&json).expect("RTM serializes")
    }

    pub fn from_json(text: &str) -> Result<Rtm, AutomataError> {
        let json: RtmJson =
            serde_json::from_str(text).map_err(|e| AutomataError::Json(e.to_string()))?;
        let transitions = json
            .transitions
            .into_iter()
            .map(|t| {
                Ok(RtmTransition {
                    from: t.from,
                    read: parse_cell(&t.read),
                    label: t
                        .label
                        .parse()
                        .map_err(|_| AutomataError::Malformed(format!("bad label `{}`", t.label)))?,
                    write: parse_cell(&t.write),
                    mv: t.mv,
                    to: t.to,
                })
            })
            .collect::<Result<Vec<_>, AutomataError>>()?;
        let rtm = Rtm {
            states: json.states,
            alphabet: json.alphabet,
            transitions,
            initial: json.initial,
            finals: json.finals.into_iter().collect(),
        };
        rtm.validate()?;
        Ok(rtm)
    }

    pub fn initial_config(&self) -> RtmConfig {
        RtmConfig {
            state: self.initial.clone(),
            tape: Tape::blank(),
        }
    }
}

/// Tape instance: a finite stretch of cells with exactly one under the head.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tape {
    cells: Vec<Cell>,
    head: usize,
}

impl Tape {
    pub fn blank() -> Tape {
        Tape {
            cells: vec![None],
            head: 0,
        }
    }

    pub fn new(cells: Vec<Cell>, head: usize) -> Result<Tape, AutomataError> {
        if head >= cells.len() {
            return Err(AutomataError::Malformed("head outside the tape".into()));
        }
        Ok(Tape { cells, head })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn head(&self) -> usize {
        self.head
    }

    pub fn read(&self) -> &Cell {
        &self.cells[self.head]
    }

    /// Left part, head symbol and right part.
    pub fn split(&self) -> (&[Cell], &Cell, &[Cell]) {
        (
            &self.cells[..self.head],
            &self.cells[self.head],
            &self.cells[self.head + 1..],
        )
    }

    pub fn write(&self, symbol: Cell) -> Tape {
        let mut cells = self.cells.clone();
        cells[self.head] = symbol;
        Tape { cells, head: self.head }
    }

    /// Write at the head, then move; the tape grows with a blank when the head leaves it.
    pub fn write_move(&self, symbol: Cell, mv: Move) -> Tape {
        let mut cells = self.cells.clone();
        cells[self.head] = symbol;
        let head = match mv {
            Move::L if self.head == 0 => {
                cells.insert(0, None);
                0
            }
            Move::L => self.head - 1,
            Move::R => {
                if self.head + 1 == cells.len() {
                    cells.push(None);
                }
                self.head + 1
            }
        };
        Tape { cells, head }
    }

    /// Drop blank cells at both ends, keeping the head cell.
    pub fn trimmed(&self) -> Tape {
        let first = self
            .cells
            .iter()
            .position(Option::is_some)
            .unwrap_or(self.head)
            .min(self.head);
        let last = self
            .cells
            .iter()
            .rposition(Option::is_some)
            .unwrap_or(self.head)
            .max(self.head);
        Tape {
            cells: self.cells[first..=last].to_vec(),
            head: self.head - first,
        }
    }
}

impl fmt::Display for Tape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == self.head {
                    format!("[{}]", render_cell(c))
                } else {
                    render_cell(c).to_string()
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RtmConfig {
    pub state: String,
    pub tape: Tape,
}

impl fmt::Display for RtmConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.state, self.tape)
    }
}

/// Untrimmed successor configurations.
pub fn rtm_step_raw(rtm: &Rtm, cfg: &RtmConfig) -> Vec<(Action, RtmConfig)> {
    rtm.transitions
        .iter()
        .filter(|t| t.from == cfg.state && &t.read == cfg.tape.read())
        .map(|t| {
            (
                t.label.clone(),
                RtmConfig {
                    state: t.to.clone(),
                    tape: cfg.tape.write_move(t.write.clone(), t.mv),
                },
            )
        })
        .collect()
}

/// Successor configurations with trimmed tapes.
pub fn rtm_step(rtm: &Rtm, cfg: &RtmConfig) -> Vec<(Action, RtmConfig)> {
    rtm_step_raw(rtm, cfg)
        .into_iter()
        .map(|(a, c)| {
            (
                a,
                RtmConfig {
                    state: c.state,
                    tape: c.tape.trimmed(),
                },
            )
        })
        .collect()
}

/// Configuration graph of an RTM.
pub struct RtmSpace<'a> {
    pub rtm: &'a Rtm,
    pub trim: bool,
}

impl StateSpace for RtmSpace<'_> {
    type State = RtmConfig;

    fn successors(&self, state: &RtmConfig) -> Vec<(Action, RtmConfig)> {
        if self.trim {
            rtm_step(self.rtm, state)
        } else {
            rtm_step_raw(self.rtm, state)
        }
    }

    fn terminates(&self, state: &RtmConfig) -> bool {
        self.rtm.finals.contains(&state.state)
    }

    fn label(&self, state: &RtmConfig) -> String {
        state.to_string()
    }
}
