//! Equivalence checking on finite, possibly truncated, transition systems.
//!
//! Two systems are compared on their disjoint union. Frontier states have
//! unknown successors, so every check runs twice in spirit: a pessimistic
//! partition (frontier states related only to themselves) that can only prove
//! equivalence, and an optimistic greatest fixpoint (frontier states related
//! to everything) that can only refute it. Whatever neither settles is
//! reported as horizon-limited.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::lts::Lts;
use crate::syntax::Action;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EquivError {
    #[error("k-bisimilarity with k={k} needs both systems explored to depth {required}; a frontier state sits at depth {found}")]
    InsufficientDepth {
        k: usize,
        required: usize,
        found: usize,
    },
    #[error("relation pair ({0}, {1}) references a missing state")]
    BadPair(usize, usize),
    #[error("unknown relation kind `{0}`")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "equivalent")]
    Equivalent,
    #[serde(rename = "inequivalent")]
    Inequivalent,
    #[serde(rename = "horizonLimited")]
    HorizonLimited,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Equivalent => "equivalent",
            Outcome::Inequivalent => "inequivalent",
            Outcome::HorizonLimited => "horizonLimited",
        })
    }
}

/// Hennessy-Milner formula used to explain strong inequivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    Terminates,
    Not(Box<Formula>),
    And(Vec<Formula>),
    Diamond(Action, Box<Formula>),
}

impl Formula {
    pub fn holds(&self, lts: &Lts, state: usize) -> bool {
        match self {
            Formula::True => true,
            Formula::Terminates => lts.states[state].terminating,
            Formula::Not(f) => !f.holds(lts, state),
            Formula::And(fs) => fs.iter().all(|f| f.holds(lts, state)),
            Formula::Diamond(a, f) => lts
                .outgoing(state)
                .any(|t| &t.label == a && f.holds(lts, t.dst)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::Terminates => f.write_str("term"),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::And(gs) => {
                f.write_str("(")?;
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str(")")
            }
            Formula::Diamond(a, g) => write!(f, "<{a}>{g}"),
        }
    }
}

/// One equivalence class restricted to the two systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    None,
    /// Relation given as classes; it relates every left state of a class to every right state of it.
    Classes(Vec<Class>),
    Pairs(Vec<(usize, usize)>),
    Formula(Formula),
    Obligation(String),
}

impl Witness {
    /// Relation as (left id, right id) pairs, if the witness is one.
    pub fn relation_pairs(&self) -> Option<Vec<(usize, usize)>> {
        match self {
            Witness::Classes(cs) => Some(
                cs.iter()
                    .flat_map(|c| {
                        c.left
                            .iter()
                            .flat_map(move |&l| c.right.iter().map(move |&r| (l, r)))
                    })
                    .collect(),
            ),
            Witness::Pairs(p) => Some(p.clone()),
            _ => None,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Witness::None => Value::Null,
            Witness::Classes(cs) => json!({
                "classes": cs.iter().map(|c| json!({"left": c.left, "right": c.right})).collect::<Vec<_>>()
            }),
            Witness::Pairs(p) => json!({ "pairs": p.iter().map(|&(l, r)| [l, r]).collect::<Vec<_>>() }),
            Witness::Formula(f) => json!({ "formula": f.to_string() }),
            Witness::Obligation(o) => json!({ "obligation": o }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivVerdict {
    pub outcome: Outcome,
    pub witness: Witness,
    /// Obligations not checked because they need successors of frontier states.
    pub skipped: usize,
    pub note: Option<String>,
}

impl EquivVerdict {
    fn new(outcome: Outcome, witness: Witness) -> EquivVerdict {
        EquivVerdict {
            outcome,
            witness,
            skipped: 0,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> EquivVerdict {
        self.note = Some(note.into());
        self
    }

    pub fn is_equivalent(&self) -> bool {
        self.outcome == Outcome::Equivalent
    }

    pub fn is_inequivalent(&self) -> bool {
        self.outcome == Outcome::Inequivalent
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({
            "outcome": self.outcome.to_string(),
            "witness": self.witness.to_value(),
        });
        if self.skipped > 0 {
            v["skipped"] = json!(self.skipped);
        }
        if let Some(n) = &self.note {
            v["note"] = json!(n);
        }
        v
    }
}

/// The checks offered by `equivalent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivKind {
    Strong,
    Bounded(usize),
    Branching,
    DpBranching,
    RootedBranching,
    RootedDp,
}

impl fmt::Display for EquivKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivKind::Strong => f.write_str("strong"),
            EquivKind::Bounded(k) => write!(f, "k={k}"),
            EquivKind::Branching => f.write_str("branching"),
            EquivKind::DpBranching => f.write_str("dp-branching"),
            EquivKind::RootedBranching => f.write_str("rooted-branching"),
            EquivKind::RootedDp => f.write_str("rooted-dp"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootBase {
    Branching,
    DpBranching,
}

pub fn equivalent(l1: &Lts, l2: &Lts, kind: EquivKind) -> Result<EquivVerdict, EquivError> {
    Ok(match kind {
        EquivKind::Strong => strong_bisim(l1, l2),
        EquivKind::Bounded(k) => return k_bisim(l1, l2, k),
        EquivKind::Branching => branching_bisim(l1, l2),
        EquivKind::DpBranching => dp_branching_bisim(l1, l2),
        EquivKind::RootedBranching => rooted_check(l1, l2, RootBase::Branching),
        EquivKind::RootedDp => rooted_check(l1, l2, RootBase::DpBranching),
    })
}

// ---------------------------------------------------------------------------
// Joined graph

const TAU: u32 = 0;
const NONE: u32 = u32::MAX;
const TERM_MARK: u32 = u32::MAX;
const DIV_MARK: u32 = u32::MAX - 1;
const FRONT_MARK: u32 = u32::MAX - 2;

struct Graph {
    succ: Vec<Vec<(u32, u32)>>,
    term: Vec<bool>,
    frontier: Vec<bool>,
    names: Vec<String>,
    labels: Vec<Action>,
    offset: usize,
    roots: (usize, usize),
}

impl Graph {
    fn join(l1: &Lts, l2: &Lts) -> Graph {
        let offset = l1.len();
        let n = offset + l2.len();
        let mut label_ids: HashMap<Action, u32> = HashMap::new();
        let mut labels = vec![Action::Tau];
        label_ids.insert(Action::Tau, TAU);
        let mut succ = vec![Vec::new(); n];
        for (shift, lts) in [(0, l1), (offset, l2)] {
            for t in &lts.transitions {
                let id = *label_ids.entry(t.label.clone()).or_insert_with(|| {
                    labels.push(t.label.clone());
                    (labels.len() - 1) as u32
                });
                succ[t.src + shift].push((id, (t.dst + shift) as u32));
            }
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        let states = l1.states.iter().chain(l2.states.iter());
        let (mut term, mut frontier, mut names) = (Vec::new(), Vec::new(), Vec::new());
        for s in states {
            term.push(s.terminating);
            frontier.push(s.frontier);
            names.push(s.label.clone());
        }
        Graph {
            succ,
            term,
            frontier,
            names,
            labels,
            offset,
            roots: (l1.initial, l2.initial + offset),
        }
    }

    fn len(&self) -> usize {
        self.succ.len()
    }

    fn has_frontier(&self) -> bool {
        self.frontier.iter().any(|&f| f)
    }

    fn describe(&self, s: usize) -> String {
        let side = if s < self.offset { "left" } else { "right" };
        let id = if s < self.offset { s } else { s - self.offset };
        format!("{side} state {id} `{}`", self.names[s])
    }

    fn label(&self, a: u32) -> &Action {
        &self.labels[a as usize]
    }

    /// States reachable by zero or more tau steps, and whether a frontier state is among them.
    fn tau_closure(&self, s: usize) -> (Vec<usize>, bool) {
        let mut seen = HashSet::from([s]);
        let mut order = vec![s];
        let mut i = 0;
        let mut frontier = self.frontier[s];
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &(a, v) in &self.succ[u] {
                if a == TAU && seen.insert(v as usize) {
                    frontier |= self.frontier[v as usize];
                    order.push(v as usize);
                }
            }
        }
        (order, frontier)
    }

    /// States reachable by one or more tau steps.
    fn tau_plus(&self, s: usize) -> (Vec<usize>, bool) {
        let mut seen = HashSet::new();
        let mut order = Vec::new();
        let mut frontier = false;
        let mut queue: VecDeque<usize> = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(a, v) in &self.succ[u] {
                if a == TAU && seen.insert(v as usize) {
                    frontier |= self.frontier[v as usize];
                    order.push(v as usize);
                    queue.push_back(v as usize);
                }
            }
        }
        (order, frontier)
    }
}

fn intern<K: Hash + Eq>(map: &mut HashMap<K, u32>, key: K) -> u32 {
    let next = map.len() as u32;
    *map.entry(key).or_insert(next)
}

// ---------------------------------------------------------------------------
// Strong refinement

/// Level partitions: level 0 splits on termination, level i+1 on transitions into level-i blocks.
/// Stops once stable or after `max_rounds` rounds.
fn strong_levels(g: &Graph, frontier_unique: bool, max_rounds: Option<usize>) -> Vec<Vec<u32>> {
    let n = g.len();
    let mut map = HashMap::new();
    let level0: Vec<u32> = (0..n)
        .map(|s| {
            let tag = if frontier_unique && g.frontier[s] { s + 1 } else { 0 };
            intern(&mut map, (g.term[s], tag))
        })
        .collect();
    let mut count = map.len();
    let mut levels = vec![level0];
    loop {
        if max_rounds.is_some_and(|m| levels.len() > m) {
            break;
        }
        let prev = levels.last().unwrap();
        let mut map = HashMap::new();
        let next: Vec<u32> = (0..n)
            .map(|s| {
                let mut sig: Vec<(u32, u32)> =
                    g.succ[s].iter().map(|&(a, t)| (a, prev[t as usize])).collect();
                sig.sort_unstable();
                sig.dedup();
                intern(&mut map, (prev[s], sig))
            })
            .collect();
        let stable = map.len() == count;
        count = map.len();
        levels.push(next);
        if stable {
            break;
        }
    }
    levels
}

/// Formula true in `s` and false in `t`, where the two differ at `level`.
fn distinguish(g: &Graph, levels: &[Vec<u32>], s: usize, t: usize) -> Formula {
    let level = (0..levels.len())
        .find(|&i| levels[i][s] != levels[i][t])
        .expect("states must be distinguished at some level");
    if level == 0 {
        return if g.term[s] {
            Formula::Terminates
        } else {
            Formula::Not(Box::new(Formula::Terminates))
        };
    }
    let prev = &levels[level - 1];
    let unmatched = |x: usize, y: usize| {
        g.succ[x].iter().copied().find(|&(a, x2)| {
            !g.succ[y]
                .iter()
                .any(|&(b, y2)| b == a && prev[y2 as usize] == prev[x2 as usize])
        })
    };
    let build = |x: usize, y: usize, a: u32, x2: u32| {
        let parts: Vec<Formula> = g.succ[y]
            .iter()
            .filter(|&&(b, _)| b == a)
            .map(|&(_, y2)| distinguish(g, levels, x2 as usize, y2 as usize))
            .collect();
        let _ = x;
        let inner = match parts.len() {
            0 => Formula::True,
            1 => parts.into_iter().next().unwrap(),
            _ => Formula::And(parts),
        };
        Formula::Diamond(g.label(a).clone(), Box::new(inner))
    };
    if let Some((a, s2)) = unmatched(s, t) {
        build(s, t, a, s2)
    } else {
        let (a, t2) = unmatched(t, s).expect("differing signatures");
        Formula::Not(Box::new(build(t, s, a, t2)))
    }
}

// ---------------------------------------------------------------------------
// Branching refinement

/// Strongly connected components in reverse topological order (sinks first).
fn tarjan(adj: &[Vec<u32>]) -> Vec<Vec<usize>> {
    const UNVISITED: u32 = u32::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut sccs = Vec::new();
    let mut counter = 0u32;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos] as usize;
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    sccs.push(comp);
                }
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
            }
        }
    }
    sccs
}

fn inert_adjacency(g: &Graph, block: &[u32]) -> Vec<Vec<u32>> {
    (0..g.len())
        .map(|s| {
            g.succ[s]
                .iter()
                .filter(|&&(a, t)| a == TAU && block[t as usize] == block[s])
                .map(|&(_, t)| t)
                .collect()
        })
        .collect()
}

/// Greatest branching bisimulation (with divergence when `dp`) as a block
/// assignment; frontier states stay in singleton blocks.
fn branching_partition(g: &Graph, dp: bool) -> Vec<u32> {
    let n = g.len();
    let mut map = HashMap::new();
    let mut block: Vec<u32> = (0..n)
        .map(|s| intern(&mut map, if g.frontier[s] { s + 1 } else { 0 }))
        .collect();
    let mut count = map.len();
    loop {
        let inert = inert_adjacency(g, &block);
        let sccs = tarjan(&inert);
        let mut comp_of = vec![0usize; n];
        for (ci, comp) in sccs.iter().enumerate() {
            for &s in comp {
                comp_of[s] = ci;
            }
        }
        let mut sigs: Vec<Vec<(u32, u32)>> = Vec::with_capacity(sccs.len());
        let mut divs: Vec<bool> = Vec::with_capacity(sccs.len());
        let mut map = HashMap::new();
        let mut next = vec![0u32; n];
        for (ci, comp) in sccs.iter().enumerate() {
            let mut sig = Vec::new();
            let mut div = comp.len() > 1;
            for &s in comp {
                if g.frontier[s] {
                    sig.push((FRONT_MARK, s as u32));
                }
                if g.term[s] {
                    sig.push((TERM_MARK, 0));
                }
                for &(a, t) in &g.succ[s] {
                    let t = t as usize;
                    if a == TAU && block[t] == block[s] {
                        let ct = comp_of[t];
                        if ct == ci {
                            div = true;
                        } else {
                            sig.extend_from_slice(&sigs[ct]);
                            div |= divs[ct];
                        }
                    } else {
                        sig.push((a, block[t]));
                    }
                }
            }
            if dp && div {
                sig.push((DIV_MARK, 0));
            }
            sig.sort_unstable();
            sig.dedup();
            let id = intern(&mut map, (block[comp[0]], sig.clone()));
            for &s in comp {
                next[s] = id;
            }
            sigs.push(sig);
            divs.push(div);
        }
        block = next;
        let stable = map.len() == count;
        count = map.len();
        if stable {
            return block;
        }
    }
}

fn classes_witness(g: &Graph, block: &[u32]) -> Witness {
    let mut by_block: HashMap<u32, Class> = HashMap::new();
    let mut order = Vec::new();
    for (s, &b) in block.iter().enumerate().take(g.len()) {
        let c = by_block.entry(b).or_insert_with(|| {
            order.push(b);
            Class {
                left: Vec::new(),
                right: Vec::new(),
            }
        });
        if s < g.offset {
            c.left.push(s);
        } else {
            c.right.push(s - g.offset);
        }
    }
    Witness::Classes(
        order
            .into_iter()
            .filter_map(|b| by_block.remove(&b))
            .filter(|c| !c.left.is_empty() && !c.right.is_empty())
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Optimistic game on the quotient

struct Quotient {
    succ: Vec<Vec<(u32, u32)>>,
    term: Vec<bool>,
    frontier: Vec<bool>,
    div: Vec<bool>,
    rep: Vec<usize>,
}

impl Quotient {
    fn build(g: &Graph, block: &[u32], branching: bool) -> Quotient {
        let nb = block.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
        let mut succ = vec![Vec::new(); nb];
        let mut term = vec![false; nb];
        let mut frontier = vec![false; nb];
        let mut rep = vec![usize::MAX; nb];
        for s in 0..g.len() {
            let b = block[s] as usize;
            if rep[b] == usize::MAX {
                rep[b] = s;
            }
            term[b] |= g.term[s];
            frontier[b] |= g.frontier[s];
            for &(a, t) in &g.succ[s] {
                let bt = block[t as usize];
                if branching && a == TAU && bt as usize == b {
                    continue;
                }
                succ[b].push((a, bt));
            }
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        let mut div = vec![false; nb];
        if branching {
            let inert = inert_adjacency(g, block);
            for comp in tarjan(&inert) {
                let cyclic = comp.len() > 1
                    || inert[comp[0]].iter().any(|&t| t as usize == comp[0]);
                if cyclic {
                    div[block[comp[0]] as usize] = true;
                }
            }
        }
        Quotient {
            succ,
            term,
            frontier,
            div,
            rep,
        }
    }

    fn closure(&self, b: u32, plus: bool) -> (Vec<u32>, bool) {
        let mut seen = HashSet::new();
        let mut order = Vec::new();
        let mut frontier = false;
        let mut queue = VecDeque::new();
        if plus {
            queue.push_back(b);
        } else {
            seen.insert(b);
            order.push(b);
            frontier |= self.frontier[b as usize];
            queue.push_back(b);
        }
        while let Some(u) = queue.pop_front() {
            for &(a, v) in &self.succ[u as usize] {
                if a == TAU && seen.insert(v) {
                    frontier |= self.frontier[v as usize];
                    order.push(v);
                    queue.push_back(v);
                }
            }
        }
        (order, frontier)
    }
}

#[derive(Clone, Copy)]
enum ObligationDesc {
    Move { mover: u32, label: u32, target: u32, against: u32 },
    Terminate { mover: u32, against: u32 },
    Diverge { mover: u32, against: u32 },
}

struct Obligation {
    desc: ObligationDesc,
    alts: Vec<[u32; 2]>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum GameKind {
    Strong,
    Branching { dp: bool },
}

const MAX_PAIRS: usize = 4_000_000;

struct Game<'a> {
    g: &'a Graph,
    q: &'a Quotient,
    kind: GameKind,
    ids: HashMap<(u32, u32), u32>,
    keys: Vec<(u32, u32)>,
    obligations: Vec<Vec<Obligation>>,
    alive: Vec<bool>,
    reason: Vec<Option<ObligationDesc>>,
    deps: Vec<Vec<u32>>,
    queue: VecDeque<u32>,
    closures: HashMap<(u32, bool), (Vec<u32>, bool)>,
    frontier_note: Option<String>,
    exhausted: bool,
}

impl<'a> Game<'a> {
    fn new(g: &'a Graph, q: &'a Quotient, kind: GameKind) -> Game<'a> {
        Game {
            g,
            q,
            kind,
            ids: HashMap::new(),
            keys: Vec::new(),
            obligations: Vec::new(),
            alive: Vec::new(),
            reason: Vec::new(),
            deps: Vec::new(),
            queue: VecDeque::new(),
            closures: HashMap::new(),
            frontier_note: None,
            exhausted: false,
        }
    }

    /// Pair id; `NONE` for identical blocks, which are related outright.
    fn pair(&mut self, a: u32, b: u32) -> u32 {
        if a == b {
            return NONE;
        }
        let key = (a.min(b), a.max(b));
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = self.keys.len() as u32;
        self.ids.insert(key, id);
        self.keys.push(key);
        self.obligations.push(Vec::new());
        self.alive.push(true);
        self.reason.push(None);
        self.deps.push(Vec::new());
        self.queue.push_back(id);
        id
    }

    fn closure(&mut self, b: u32, plus: bool) -> (Vec<u32>, bool) {
        if let Some(c) = self.closures.get(&(b, plus)) {
            return c.clone();
        }
        let c = self.q.closure(b, plus);
        self.closures.insert((b, plus), c.clone());
        c
    }

    fn note_frontier(&mut self, x: u32, y: u32) {
        if self.frontier_note.is_none() {
            self.frontier_note = Some(format!(
                "obligation between {} and {} needs successors beyond the exploration horizon",
                self.g.describe(self.q.rep[x as usize]),
                self.g.describe(self.q.rep[y as usize])
            ));
        }
    }

    fn discover(&mut self) {
        while let Some(id) = self.queue.pop_front() {
            if self.keys.len() > MAX_PAIRS {
                self.exhausted = true;
                return;
            }
            let (s, t) = self.keys[id as usize];
            if self.q.frontier[s as usize] || self.q.frontier[t as usize] {
                self.note_frontier(s, t);
                continue;
            }
            let mut obs = Vec::new();
            self.obligations_for(s, t, &mut obs);
            self.obligations_for(t, s, &mut obs);
            let mut satisfied_now = Vec::new();
            for ob in obs {
                if ob.alts.iter().any(|&[x, y]| x == NONE && y == NONE) {
                    continue;
                }
                if ob.alts.is_empty() && self.alive[id as usize] {
                    self.alive[id as usize] = false;
                    self.reason[id as usize] = Some(ob.desc);
                }
                for &[x, y] in &ob.alts {
                    for p in [x, y] {
                        if p != NONE {
                            self.deps[p as usize].push(id);
                        }
                    }
                }
                satisfied_now.push(ob);
            }
            self.obligations[id as usize] = satisfied_now;
        }
    }

    fn obligations_for(&mut self, x: u32, y: u32, out: &mut Vec<Obligation>) {
        let q = self.q;
        match self.kind {
            GameKind::Strong => {
                if q.term[x as usize] != q.term[y as usize] {
                    out.push(Obligation {
                        desc: ObligationDesc::Terminate { mover: x, against: y },
                        alts: Vec::new(),
                    });
                }
                for &(a, x2) in &q.succ[x as usize] {
                    let alts = q.succ[y as usize]
                        .iter()
                        .filter(|&&(b, _)| b == a)
                        .map(|&(_, y2)| [self.pair(x2, y2), NONE])
                        .collect::<Vec<_>>();
                    out.push(Obligation {
                        desc: ObligationDesc::Move { mover: x, label: a, target: x2, against: y },
                        alts,
                    });
                }
            }
            GameKind::Branching { dp } => {
                let (closure, open) = self.closure(y, false);
                if open {
                    self.note_frontier(x, y);
                    return;
                }
                for &(a, x2) in &q.succ[x as usize] {
                    let mut alts = Vec::new();
                    for &y2 in &closure {
                        let here = self.pair(x, y2);
                        if a == TAU {
                            alts.push([here, self.pair(x2, y2)]);
                        }
                        for &(b, y3) in &q.succ[y2 as usize] {
                            if b == a {
                                alts.push([here, self.pair(x2, y3)]);
                            }
                        }
                    }
                    out.push(Obligation {
                        desc: ObligationDesc::Move { mover: x, label: a, target: x2, against: y },
                        alts,
                    });
                }
                if q.term[x as usize] {
                    let alts = closure
                        .iter()
                        .filter(|&&y2| q.term[y2 as usize])
                        .map(|&y2| [self.pair(x, y2), NONE])
                        .collect();
                    out.push(Obligation {
                        desc: ObligationDesc::Terminate { mover: x, against: y },
                        alts,
                    });
                }
                if dp && q.div[x as usize] {
                    let (plus, open) = self.closure(y, true);
                    if open {
                        self.note_frontier(x, y);
                        return;
                    }
                    let mut alts: Vec<[u32; 2]> =
                        plus.iter().map(|&y2| [self.pair(x, y2), NONE]).collect();
                    if q.div[y as usize] {
                        alts.push([self.pair(x, y), NONE]);
                    }
                    out.push(Obligation {
                        desc: ObligationDesc::Diverge { mover: x, against: y },
                        alts,
                    });
                }
            }
        }
    }

    fn holds(&self, p: u32) -> bool {
        p == NONE || self.alive[p as usize]
    }

    fn solve(&mut self) {
        self.discover();
        if self.exhausted {
            return;
        }
        let mut work: Vec<u32> = (0..self.keys.len() as u32)
            .filter(|&p| !self.alive[p as usize])
            .collect();
        while let Some(dead) = work.pop() {
            let deps = std::mem::take(&mut self.deps[dead as usize]);
            for q in deps {
                if !self.alive[q as usize] {
                    continue;
                }
                let failed = self.obligations[q as usize]
                    .iter()
                    .find(|ob| !ob.alts.iter().any(|&[x, y]| self.holds(x) && self.holds(y)))
                    .map(|ob| ob.desc);
                if let Some(desc) = failed {
                    self.alive[q as usize] = false;
                    self.reason[q as usize] = Some(desc);
                    work.push(q);
                }
            }
        }
    }

    fn related(&self, a: u32, b: u32) -> bool {
        if a == b {
            return true;
        }
        match self.ids.get(&(a.min(b), a.max(b))) {
            Some(&p) => self.alive[p as usize],
            None => false,
        }
    }

    fn explain(&self, a: u32, b: u32) -> String {
        let p = self.ids[&(a.min(b), a.max(b))];
        let describe = |blk: u32| self.g.describe(self.q.rep[blk as usize]);
        match self.reason[p as usize] {
            Some(ObligationDesc::Move { mover, label, target, against }) => format!(
                "{} --{}--> {} is not matched by {}",
                describe(mover),
                self.g.label(label),
                describe(target),
                describe(against)
            ),
            Some(ObligationDesc::Terminate { mover, against }) => format!(
                "{} terminates but {} cannot match it",
                describe(mover),
                describe(against)
            ),
            Some(ObligationDesc::Diverge { mover, against }) => format!(
                "{} diverges but {} cannot",
                describe(mover),
                describe(against)
            ),
            None => format!("{} and {} are distinguished", describe(a), describe(b)),
        }
    }
}

fn pair_budget_note() -> String {
    format!("optimistic check abandoned after {MAX_PAIRS} state pairs")
}

fn decide(l1: &Lts, l2: &Lts, kind: GameKind) -> EquivVerdict {
    let g = Graph::join(l1, l2);
    let (r1, r2) = g.roots;
    let (block, levels) = match kind {
        GameKind::Strong => {
            let levels = strong_levels(&g, true, None);
            (levels.last().unwrap().clone(), Some(levels))
        }
        GameKind::Branching { dp } => (branching_partition(&g, dp), None),
    };
    if block[r1] == block[r2] {
        return EquivVerdict::new(Outcome::Equivalent, classes_witness(&g, &block));
    }
    if !g.has_frontier() {
        if let Some(levels) = &levels {
            return EquivVerdict::new(
                Outcome::Inequivalent,
                Witness::Formula(distinguish(&g, levels, r1, r2)),
            );
        }
    }
    let q = Quotient::build(&g, &block, matches!(kind, GameKind::Branching { .. }));
    let mut game = Game::new(&g, &q, kind);
    let (b1, b2) = (block[r1], block[r2]);
    game.pair(b1, b2);
    game.solve();
    if game.exhausted {
        return EquivVerdict::new(Outcome::HorizonLimited, Witness::None).with_note(pair_budget_note());
    }
    if !game.related(b1, b2) {
        return EquivVerdict::new(Outcome::Inequivalent, Witness::Obligation(game.explain(b1, b2)));
    }
    let note = game
        .frontier_note
        .clone()
        .unwrap_or_else(|| "undecided within the explored horizon".into());
    EquivVerdict::new(Outcome::HorizonLimited, Witness::Obligation(note))
}

pub fn strong_bisim(l1: &Lts, l2: &Lts) -> EquivVerdict {
    decide(l1, l2, GameKind::Strong)
}

pub fn branching_bisim(l1: &Lts, l2: &Lts) -> EquivVerdict {
    decide(l1, l2, GameKind::Branching { dp: false })
}

pub fn dp_branching_bisim(l1: &Lts, l2: &Lts) -> EquivVerdict {
    decide(l1, l2, GameKind::Branching { dp: true })
}

/// Rootedness at the initial states on top of the greatest base bisimulation:
/// every initial step is matched by a step with the same label into related
/// states, both ways, and a terminating left root needs a terminating right root.
pub fn rooted_check(l1: &Lts, l2: &Lts, base: RootBase) -> EquivVerdict {
    let g = Graph::join(l1, l2);
    let (r1, r2) = g.roots;
    let dp = base == RootBase::DpBranching;
    let block = branching_partition(&g, dp);

    let root_condition = |related: &dyn Fn(u32, u32) -> bool| -> Result<(), String> {
        if !related(block[r1], block[r2]) {
            return Err("initial states are not related by the base equivalence".into());
        }
        for (x, y) in [(r1, r2), (r2, r1)] {
            for &(a, x2) in &g.succ[x] {
                let matched = g.succ[y]
                    .iter()
                    .any(|&(b, y2)| b == a && related(block[x2 as usize], block[y2 as usize]));
                if !matched {
                    return Err(format!(
                        "initial step {} --{}--> {} has no same-label step from {} into a related state",
                        g.describe(x),
                        g.label(a),
                        g.describe(x2 as usize),
                        g.describe(y)
                    ));
                }
            }
        }
        if g.term[r1] && !g.term[r2] {
            return Err(format!(
                "{} terminates but {} does not",
                g.describe(r1),
                g.describe(r2)
            ));
        }
        Ok(())
    };

    let exact = root_condition(&|a, b| a == b);
    match exact {
        Ok(()) => {
            return EquivVerdict::new(Outcome::Equivalent, classes_witness(&g, &block));
        }
        Err(e) if !g.has_frontier() => {
            return EquivVerdict::new(Outcome::Inequivalent, Witness::Obligation(e));
        }
        Err(_) => {}
    }
    if g.frontier[r1] || g.frontier[r2] {
        return EquivVerdict::new(
            Outcome::HorizonLimited,
            Witness::Obligation("an initial state is a frontier state".into()),
        );
    }
    let q = Quotient::build(&g, &block, true);
    let mut game = Game::new(&g, &q, GameKind::Branching { dp });
    game.pair(block[r1], block[r2]);
    for &(a, x2) in &g.succ[r1] {
        for &(b, y2) in &g.succ[r2] {
            if a == b {
                game.pair(block[x2 as usize], block[y2 as usize]);
            }
        }
    }
    game.solve();
    if game.exhausted {
        return EquivVerdict::new(Outcome::HorizonLimited, Witness::None).with_note(pair_budget_note());
    }
    match root_condition(&|a, b| game.related(a, b)) {
        Err(e) => EquivVerdict::new(Outcome::Inequivalent, Witness::Obligation(e)),
        Ok(()) => {
            let note = game
                .frontier_note
                .clone()
                .unwrap_or_else(|| "undecided within the explored horizon".into());
            EquivVerdict::new(Outcome::HorizonLimited, Witness::Obligation(note))
        }
    }
}

/// Strong bisimilarity up to `k` rounds of the game.
pub fn k_bisim(l1: &Lts, l2: &Lts, k: usize) -> Result<EquivVerdict, EquivError> {
    for lts in [l1, l2] {
        if let Some(s) = lts.states.iter().filter(|s| s.frontier).min_by_key(|s| s.depth) {
            if s.depth < k {
                return Err(EquivError::InsufficientDepth {
                    k,
                    required: k,
                    found: s.depth,
                });
            }
        }
    }
    let g = Graph::join(l1, l2);
    let (r1, r2) = g.roots;
    let levels = strong_levels(&g, false, Some(k));
    let last = levels.last().unwrap();
    let verdict = if last[r1] == last[r2] {
        EquivVerdict::new(Outcome::Equivalent, Witness::None)
    } else {
        EquivVerdict::new(
            Outcome::Inequivalent,
            Witness::Formula(distinguish(&g, &levels, r1, r2)),
        )
    };
    Ok(verdict.with_note(format!("bounded to {k} rounds")))
}

// ---------------------------------------------------------------------------
// Candidate relations

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationKind {
    #[serde(rename = "strong")]
    Strong,
    #[serde(rename = "branching")]
    Branching,
    #[serde(rename = "dpBranching")]
    DpBranching,
    #[serde(rename = "upToBranching")]
    UpToBranching,
}

impl FromStr for RelationKind {
    type Err = EquivError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strong" => Ok(RelationKind::Strong),
            "branching" => Ok(RelationKind::Branching),
            "dpBranching" | "dp-branching" => Ok(RelationKind::DpBranching),
            "upToBranching" | "up-to-branching" => Ok(RelationKind::UpToBranching),
            other => Err(EquivError::UnknownKind(other.into())),
        }
    }
}

/// A relation to verify, as (left id, right id) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCandidate {
    pub kind: RelationKind,
    pub pairs: Vec<(usize, usize)>,
}

enum Check {
    Pass,
    Skip,
    Fail(String),
}

struct RelationChecker<'a> {
    g: &'a Graph,
    pairs: HashSet<(u32, u32)>,
    by_left: HashMap<u32, Vec<u32>>,
    by_right: HashMap<u32, Vec<u32>>,
    /// For up-to checks: blocks of branching bisimilarity and, per right state, the blocks related to it.
    block: Vec<u32>,
    blocks_of_right: HashMap<u32, HashSet<u32>>,
}

impl RelationChecker<'_> {
    fn rel(&self, s: usize, t: usize) -> bool {
        self.pairs.contains(&(s as u32, t as u32))
    }

    fn up_to(&self, x: usize, y: usize) -> bool {
        self.blocks_of_right
            .get(&(y as u32))
            .is_some_and(|bs| bs.contains(&self.block[x]))
    }

    fn verdict_from(found: bool, touches_frontier: bool, what: impl FnOnce() -> String) -> Check {
        if found {
            Check::Pass
        } else if touches_frontier {
            Check::Skip
        } else {
            Check::Fail(what())
        }
    }

    fn strong(&self, s: usize, t: usize, out: &mut Vec<Check>) {
        let g = self.g;
        if g.term[s] != g.term[t] {
            out.push(Check::Fail(format!(
                "{} and {} disagree on termination",
                g.describe(s),
                g.describe(t)
            )));
        }
        for (x, y, left) in [(s, t, true), (t, s, false)] {
            for &(a, x2) in &g.succ[x] {
                let x2 = x2 as usize;
                let cands: Vec<usize> = g.succ[y]
                    .iter()
                    .filter(|&&(b, _)| b == a)
                    .map(|&(_, y2)| y2 as usize)
                    .collect();
                let found = cands
                    .iter()
                    .any(|&y2| if left { self.rel(x2, y2) } else { self.rel(y2, x2) });
                let frontier = !cands.is_empty()
                    && (g.frontier[x2] || cands.iter().any(|&y2| g.frontier[y2]));
                out.push(Self::verdict_from(found, frontier, || {
                    format!(
                        "{} --{}--> {} is not matched by {}",
                        g.describe(x),
                        g.label(a),
                        g.describe(x2),
                        g.describe(y)
                    )
                }));
            }
        }
    }

    fn branching(&self, s: usize, t: usize, dp: bool, out: &mut Vec<Check>) {
        let g = self.g;
        for (x, y, left) in [(s, t, true), (t, s, false)] {
            let rel = |p: usize, q: usize| if left { self.rel(p, q) } else { self.rel(q, p) };
            let (closure, open) = g.tau_closure(y);
            for &(a, x2) in &g.succ[x] {
                let x2 = x2 as usize;
                let mut found = false;
                let mut frontier = open || g.frontier[x2];
                for &y2 in &closure {
                    if !rel(x, y2) {
                        continue;
                    }
                    if a == TAU && rel(x2, y2) {
                        found = true;
                    }
                    for &(b, y3) in &g.succ[y2] {
                        if b == a {
                            frontier |= g.frontier[y3 as usize];
                            found |= rel(x2, y3 as usize);
                        }
                    }
                }
                out.push(Self::verdict_from(found, frontier, || {
                    format!(
                        "{} --{}--> {} is not matched by {}",
                        g.describe(x),
                        g.label(a),
                        g.describe(x2),
                        g.describe(y)
                    )
                }));
            }
            if g.term[x] {
                let found = closure.iter().any(|&y2| g.term[y2] && rel(x, y2));
                out.push(Self::verdict_from(found, open, || {
                    format!(
                        "{} terminates but {} cannot reach a related terminating state",
                        g.describe(x),
                        g.describe(y)
                    )
                }));
            }
            if dp {
                out.push(self.divergence(x, y, left));
            }
        }
    }

    /// Clause 3: an infinite tau run from `x` staying related to `y` must be
    /// answered by `y` moving to a state related to some state of the run.
    fn divergence(&self, x: usize, y: usize, left: bool) -> Check {
        let g = self.g;
        let related_to_y: HashSet<u32> = if left {
            self.by_right.get(&(y as u32)).cloned().unwrap_or_default()
        } else {
            self.by_left.get(&(y as u32)).cloned().unwrap_or_default()
        }
        .into_iter()
        .collect();
        let mut reach = vec![x];
        let mut seen = HashSet::from([x]);
        let mut i = 0;
        let mut touches = false;
        while i < reach.len() {
            let u = reach[i];
            i += 1;
            touches |= g.frontier[u];
            for &(a, v) in &g.succ[u] {
                if a == TAU && related_to_y.contains(&v) && seen.insert(v as usize) {
                    reach.push(v as usize);
                }
            }
        }
        let infinite = |set: &HashSet<usize>| -> HashSet<usize> {
            let mut live = set.clone();
            loop {
                let next: HashSet<usize> = live
                    .iter()
                    .copied()
                    .filter(|&u| {
                        g.succ[u]
                            .iter()
                            .any(|&(a, v)| a == TAU && live.contains(&(v as usize)))
                    })
                    .collect();
                if next.len() == live.len() {
                    return live;
                }
                live = next;
            }
        };
        let inf = infinite(&seen);
        if !inf.contains(&x) {
            return if touches { Check::Skip } else { Check::Pass };
        }
        let (plus, open) = g.tau_plus(y);
        if open {
            return Check::Skip;
        }
        let good = |u: usize| {
            plus.iter()
                .any(|&y2| if left { self.rel(u, y2) } else { self.rel(y2, u) })
        };
        let bad: HashSet<usize> = inf.iter().copied().filter(|&u| !good(u)).collect();
        let bad_inf = infinite(&bad);
        if bad_inf.contains(&x) {
            Check::Fail(format!(
                "{} can diverge while related to {}, which cannot follow",
                g.describe(x),
                g.describe(y)
            ))
        } else {
            Check::Pass
        }
    }

    fn up_to_branching(&self, s: usize, t: usize, out: &mut Vec<Check>) {
        let g = self.g;
        let block = &self.block;
        let (closure_s, open_s) = g.tau_closure(s);
        let inner: Vec<usize> = closure_s
            .iter()
            .copied()
            .filter(|&u| block[u] == block[s])
            .collect();
        // Clause 1.
        for &s2 in &inner {
            for &(a, s1) in &g.succ[s2] {
                let s1 = s1 as usize;
                if a == TAU && block[s1] == block[s2] {
                    continue;
                }
                let found = self.up_to(s2, t)
                    && g.succ[t]
                        .iter()
                        .any(|&(b, t1)| b == a && self.up_to(s1, t1 as usize));
                let frontier = g.frontier[s1]
                    || g.succ[t].iter().any(|&(b, t1)| b == a && g.frontier[t1 as usize]);
                out.push(Self::verdict_from(found, frontier, || {
                    format!(
                        "{} --{}--> {} is not matched up to branching bisimilarity by {}",
                        g.describe(s2),
                        g.label(a),
                        g.describe(s1),
                        g.describe(t)
                    )
                }));
            }
        }
        // Clause 2.
        for &(a, t1) in &g.succ[t] {
            let t1 = t1 as usize;
            let found = inner.iter().any(|&s2| {
                g.succ[s2]
                    .iter()
                    .any(|&(b, s1)| b == a && self.up_to(s1 as usize, t1))
            });
            out.push(Self::verdict_from(found, open_s || g.frontier[t1], || {
                format!(
                    "{} --{}--> {} is not matched up to branching bisimilarity by {}",
                    g.describe(t),
                    g.label(a),
                    g.describe(t1),
                    g.describe(s)
                )
            }));
        }
        // Clauses 3 and 4.
        if g.term[s] {
            let (closure_t, open_t) = g.tau_closure(t);
            let found = closure_t.iter().any(|&t2| g.term[t2] && self.rel(s, t2));
            out.push(Self::verdict_from(found, open_t, || {
                format!("{} terminates but {} cannot follow", g.describe(s), g.describe(t))
            }));
        }
        if g.term[t] {
            let found = closure_s.iter().any(|&s2| g.term[s2] && self.rel(s2, t));
            out.push(Self::verdict_from(found, open_s, || {
                format!("{} terminates but {} cannot follow", g.describe(t), g.describe(s))
            }));
        }
    }
}

/// Verify a candidate relation clause by clause.
pub fn check_relation(
    l1: &Lts,
    l2: &Lts,
    cand: &RelationCandidate,
) -> Result<EquivVerdict, EquivError> {
    let g = Graph::join(l1, l2);
    let mut pairs = HashSet::new();
    let mut by_left: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut by_right: HashMap<u32, Vec<u32>> = HashMap::new();
    for &(l, r) in &cand.pairs {
        if l >= l1.len() || r >= l2.len() {
            return Err(EquivError::BadPair(l, r));
        }
        let (s, t) = (l as u32, (r + g.offset) as u32);
        if pairs.insert((s, t)) {
            by_left.entry(s).or_default().push(t);
            by_right.entry(t).or_default().push(s);
        }
    }
    let (block, blocks_of_right) = if cand.kind == RelationKind::UpToBranching {
        let block = branching_partition(&g, false);
        let mut map: HashMap<u32, HashSet<u32>> = HashMap::new();
        for &(s, t) in &pairs {
            map.entry(t).or_default().insert(block[s as usize]);
        }
        (block, map)
    } else {
        (Vec::new(), HashMap::new())
    };
    let checker = RelationChecker {
        g: &g,
        pairs,
        by_left,
        by_right,
        block,
        blocks_of_right,
    };

    let mut skipped = 0;
    let mut ordered: Vec<(u32, u32)> = checker.pairs.iter().copied().collect();
    ordered.sort_unstable();
    for (s, t) in ordered {
        let (s, t) = (s as usize, t as usize);
        let mut checks = Vec::new();
        if g.frontier[s] || g.frontier[t] {
            skipped += 1;
            continue;
        }
        match cand.kind {
            RelationKind::Strong => checker.strong(s, t, &mut checks),
            RelationKind::Branching => checker.branching(s, t, false, &mut checks),
            RelationKind::DpBranching => checker.branching(s, t, true, &mut checks),
            RelationKind::UpToBranching => checker.up_to_branching(s, t, &mut checks),
        }
        for c in checks {
            match c {
                Check::Pass => {}
                Check::Skip => skipped += 1,
                Check::Fail(msg) => {
                    return Ok(EquivVerdict::new(Outcome::Inequivalent, Witness::Obligation(msg)));
                }
            }
        }
    }
    let outcome = if skipped > 0 {
        Outcome::HorizonLimited
    } else {
        Outcome::Equivalent
    };
    let mut verdict = EquivVerdict::new(outcome, Witness::Pairs(cand.pairs.clone()));
    verdict.skipped = skipped;
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lts::{explore_term, ExploreLimits};
    use crate::semantics::Mode;
    use crate::syntax::parse_spec;

    fn lts(text: &str) -> Lts {
        let (spec, root) = parse_spec(text).unwrap();
        explore_term(&root, &spec, Mode::Revised, ExploreLimits::depth(50)).unwrap()
    }

    #[test]
    fn strong_examples() {
        let a = lts("a.(b.1 + c.1)");
        assert!(strong_bisim(&a, &a.clone()).is_equivalent());
        let (l, r) = (lts("a.(b.1 + 1)"), lts("a.b.1"));
        let v = strong_bisim(&l, &r);
        assert!(v.is_inequivalent());
        match &v.witness {
            Witness::Formula(f) => {
                assert!(f.holds(&l, l.initial));
                assert!(!f.holds(&r, r.initial));
            }
            other => panic!("expected formula, got {other:?}"),
        }
    }

    #[test]
    fn non_distributivity() {
        let l = lts("(a.1 + 1) ; b.1");
        let r = lts("(a.1 ; b.1) + (1 ; b.1)");
        assert!(strong_bisim(&l, &r).is_inequivalent());
    }

    #[test]
    fn k_bisim_examples() {
        let (l, r) = (lts("a.b.1"), lts("a.c.1"));
        assert!(k_bisim(&l, &r, 0).unwrap().is_equivalent());
        assert!(k_bisim(&l, &r, 1).unwrap().is_equivalent());
        assert!(k_bisim(&l, &r, 2).unwrap().is_inequivalent());
    }

    #[test]
    fn k_bisim_needs_depth() {
        let (spec, root) = parse_spec("X = a.X ; X + b.1").unwrap();
        let l = explore_term(&root, &spec, Mode::Revised, ExploreLimits::depth(2)).unwrap();
        assert!(matches!(
            k_bisim(&l, &l, 5),
            Err(EquivError::InsufficientDepth { .. })
        ));
    }

    #[test]
    fn branching_examples() {
        assert!(branching_bisim(&lts("a.1"), &lts("tau.a.1")).is_equivalent());
        assert!(branching_bisim(&lts("tau.1"), &lts("(tau.1)*")).is_equivalent());
        assert!(branching_bisim(&lts("a.1 + b.1"), &lts("a.1")).is_inequivalent());
    }

    #[test]
    fn divergence_examples() {
        assert!(dp_branching_bisim(&lts("tau.1"), &lts("(tau.1)*")).is_inequivalent());
        let l = lts("(a.1)*");
        assert!(dp_branching_bisim(&l, &l).is_equivalent());
    }

    #[test]
    fn rooted_examples() {
        assert!(rooted_check(&lts("tau.1"), &lts("(tau.1)*"), RootBase::Branching).is_equivalent());
        assert!(rooted_check(
            &lts("(tau.1) ; a.1"),
            &lts("(tau.1)* ; a.1"),
            RootBase::Branching
        )
        .is_inequivalent());
        assert!(rooted_check(&lts("a.1"), &lts("tau.a.1"), RootBase::Branching).is_inequivalent());
    }

    #[test]
    fn relation_examples() {
        let (l, r) = (lts("a.1"), lts("b.1"));
        let empty = RelationCandidate {
            kind: RelationKind::Strong,
            pairs: vec![],
        };
        assert!(check_relation(&l, &r, &empty).unwrap().is_equivalent());
        let roots = RelationCandidate {
            kind: RelationKind::Strong,
            pairs: vec![(l.initial, r.initial)],
        };
        let v = check_relation(&l, &r, &roots).unwrap();
        assert!(v.is_inequivalent());
        match v.witness {
            Witness::Obligation(o) => assert!(o.contains("--a-->"), "{o}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn up_to_is_weaker_than_plain() {
        let (l, r) = (lts("a.tau.1"), lts("a.1"));
        let skip_l = l.state_by_label("1").unwrap();
        let skip_r = r.state_by_label("1").unwrap();
        let pairs = vec![(l.initial, r.initial), (skip_l, skip_r)];
        let up_to = RelationCandidate {
            kind: RelationKind::UpToBranching,
            pairs: pairs.clone(),
        };
        assert!(check_relation(&l, &r, &up_to).unwrap().is_equivalent());
        let plain = RelationCandidate {
            kind: RelationKind::Branching,
            pairs,
        };
        assert!(check_relation(&l, &r, &plain).unwrap().is_inequivalent());
    }

    #[test]
    fn equivalent_witness_rechecks() {
        let (l, r) = (lts("a.1 + a.1"), lts("a.1"));
        let v = strong_bisim(&l, &r);
        let pairs = v.witness.relation_pairs().unwrap();
        let cand = RelationCandidate {
            kind: RelationKind::Strong,
            pairs,
        };
        assert!(check_relation(&l, &r, &cand).unwrap().is_equivalent());
    }

    #[test]
    fn truncated_infinite_systems_are_horizon_limited() {
        let (spec, root) = parse_spec("X = a.X ; X + b.1").unwrap();
        let l = explore_term(&root, &spec, Mode::Revised, ExploreLimits::depth(4)).unwrap();
        let (spec2, root2) = parse_spec("Y = a.Y ; Y + b.1").unwrap();
        let r = explore_term(&root2, &spec2, Mode::Revised, ExploreLimits::depth(4)).unwrap();
        assert_eq!(strong_bisim(&l, &r).outcome, Outcome::HorizonLimited);
        let (spec3, root3) = parse_spec("Z = a.Z ; Z + c.1").unwrap();
        let w = explore_term(&root3, &spec3, Mode::Revised, ExploreLimits::depth(4)).unwrap();
        assert_eq!(strong_bisim(&l, &w).outcome, Outcome::Inequivalent);
        assert_eq!(branching_bisim(&l, &w).outcome, Outcome::Inequivalent);
        assert_eq!(branching_bisim(&l, &r).outcome, Outcome::HorizonLimited);
    }
}
