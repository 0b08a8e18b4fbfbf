//! Reference infinite-state processes, generated directly from structural
//! keys, and their encodings as closed compositions in the calculus.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::automata::{Cell, Move, Rtm, Tape};
use crate::lts::{explore, explore_term, ExploreLimits, Lts, StateSpace};
use crate::semantics::{Mode, SemanticsError};
use crate::syntax::{is_identifier, Action, RecursiveSpec, SyntaxError, Term};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodingError {
    #[error("symbol index {0} outside 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("alphabet must be non-empty")]
    EmptyAlphabet,
    #[error("equation `{name}` is not in regular shape: {reason}")]
    Shape { name: String, reason: String },
    #[error("`{0}` cannot be used as a name or datum")]
    BadIdentifier(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Datum used for the blank tape symbol and for popping an empty stack.
pub const BLANK: &str = "blank";

// ---------------------------------------------------------------------------
// Numbering of symbol sequences

/// Bijective base-`n` numeral of a sequence of symbol indices (1-based, head first).
pub fn encode_nat(sigma: &[usize], n: usize) -> Result<u64, EncodingError> {
    sigma.iter().rev().try_fold(0u64, |acc, &k| {
        if k == 0 || k > n {
            return Err(EncodingError::IndexOutOfRange(k, n));
        }
        Ok(k as u64 + n as u64 * acc)
    })
}

/// Inverse of `encode_nat`.
pub fn decode_nat(mut m: u64, n: usize) -> Vec<usize> {
    let n = n as u64;
    let mut out = Vec::new();
    while m > 0 {
        let k = (m - 1) % n + 1;
        out.push(k as usize);
        m = (m - k) / n;
    }
    out
}

// ---------------------------------------------------------------------------
// Reference processes

/// Infinite reference specifications, unfolded straight from their indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReferenceProcess {
    /// Always-terminating half counter over actions `a` (up/down), `b` (switch) and `c` (zero).
    HalfCounter { a: Action, b: Action, c: Action },
    /// Stack over the given data with channels `push` and `pop`.
    Stack {
        alphabet: Vec<String>,
        push: String,
        pop: String,
    },
    /// Tape over the given data (blank implicit) with channels r, w, L, R.
    Tape { alphabet: Vec<String> },
}

impl ReferenceProcess {
    pub fn half_counter() -> ReferenceProcess {
        ReferenceProcess::HalfCounter {
            a: Action::plain("a"),
            b: Action::plain("b"),
            c: Action::plain("c"),
        }
    }

    pub fn stack(alphabet: &[&str]) -> ReferenceProcess {
        ReferenceProcess::Stack {
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            push: "push".into(),
            pop: "pop".into(),
        }
    }

    pub fn tape(alphabet: &[&str]) -> ReferenceProcess {
        ReferenceProcess::Tape {
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// State of the reference half counter: `C(n)` counts up, `B(n)` counts down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CounterState {
    C(u64),
    B(u64),
}

impl fmt::Display for CounterState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CounterState::C(n) => write!(f, "C{n}"),
            CounterState::B(n) => write!(f, "B{n}"),
        }
    }
}

pub struct CounterSpace {
    pub a: Action,
    pub b: Action,
    pub c: Action,
}

impl StateSpace for CounterSpace {
    type State = CounterState;

    fn successors(&self, s: &CounterState) -> Vec<(Action, CounterState)> {
        match *s {
            CounterState::C(n) => vec![
                (self.a.clone(), CounterState::C(n + 1)),
                (self.b.clone(), CounterState::B(n)),
            ],
            CounterState::B(0) => vec![(self.c.clone(), CounterState::C(0))],
            CounterState::B(n) => vec![(self.a.clone(), CounterState::B(n - 1))],
        }
    }

    fn terminates(&self, _: &CounterState) -> bool {
        true
    }

    fn label(&self, s: &CounterState) -> String {
        s.to_string()
    }
}

/// Reference stack; states are contents, top first.
pub struct StackSpace {
    pub alphabet: Vec<String>,
    pub push: String,
    pub pop: String,
}

impl StateSpace for StackSpace {
    type State = Vec<String>;

    fn successors(&self, s: &Vec<String>) -> Vec<(Action, Vec<String>)> {
        let mut out: Vec<(Action, Vec<String>)> = self
            .alphabet
            .iter()
            .map(|d| {
                let mut next = vec![d.clone()];
                next.extend(s.iter().cloned());
                (Action::receive(&self.push, d), next)
            })
            .collect();
        match s.split_first() {
            Some((top, rest)) => out.push((Action::send(&self.pop, top), rest.to_vec())),
            None => out.push((Action::send(&self.pop, BLANK), Vec::new())),
        }
        out
    }

    fn terminates(&self, _: &Vec<String>) -> bool {
        true
    }

    fn label(&self, s: &Vec<String>) -> String {
        if s.is_empty() {
            "S_eps".into()
        } else {
            format!("S_{}", s.join("_"))
        }
    }
}

fn datum(c: &Cell) -> &str {
    c.as_deref().unwrap_or(BLANK)
}

/// Reference tape; states are trimmed tape instances.
pub struct TapeSpace {
    pub alphabet: Vec<String>,
}

impl TapeSpace {
    fn symbols(&self) -> impl Iterator<Item = Cell> + '_ {
        self.alphabet.iter().map(|d| Some(d.clone())).chain(std::iter::once(None))
    }
}

impl StateSpace for TapeSpace {
    type State = Tape;

    fn successors(&self, t: &Tape) -> Vec<(Action, Tape)> {
        let mut out = vec![(Action::send("r", datum(t.read())), t.clone())];
        for e in self.symbols() {
            out.push((Action::receive("w", datum(&e)), t.write(e).trimmed()));
        }
        out.push((Action::receive("L", "m"), t.write_move(t.read().clone(), Move::L).trimmed()));
        out.push((Action::receive("R", "m"), t.write_move(t.read().clone(), Move::R).trimmed()));
        out
    }

    fn terminates(&self, _: &Tape) -> bool {
        true
    }

    fn label(&self, t: &Tape) -> String {
        format!("T {t}")
    }
}

/// Bounded LTS of a reference process.
pub fn ref_lts(proc: &ReferenceProcess, limits: ExploreLimits) -> Lts {
    match proc {
        ReferenceProcess::HalfCounter { a, b, c } => explore(
            &CounterSpace {
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
            },
            CounterState::C(0),
            limits,
        ),
        ReferenceProcess::Stack { alphabet, push, pop } => explore(
            &StackSpace {
                alphabet: alphabet.clone(),
                push: push.clone(),
                pop: pop.clone(),
            },
            Vec::new(),
            limits,
        ),
        ReferenceProcess::Tape { alphabet } => explore(
            &TapeSpace {
                alphabet: alphabet.clone(),
            },
            Tape::blank(),
            limits,
        ),
    }
}

// ---------------------------------------------------------------------------
// Calculus encodings

/// A closed composition together with the equations its names refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedSystem {
    pub spec: RecursiveSpec,
    pub term: Term,
    /// Channels hidden by the outermost composition.
    pub channels: Vec<String>,
}

impl EncodedSystem {
    pub fn explore(&self, mode: Mode, limits: ExploreLimits) -> Result<Lts, SemanticsError> {
        explore_term(&self.term, &self.spec, mode, limits)
    }
}

/// `a.1 + 1`
fn opt(a: Action) -> Term {
    Term::alt(Term::act(a), Term::Skip)
}

/// Counter term `(((a + 1) # (b + 1)) ; (c + 1))*`.
pub fn hc_term_with(a: Action, b: Action, c: Action) -> Term {
    Term::star(Term::seq(Term::nest(opt(a), opt(b)), opt(c)))
}

pub fn hc_term() -> Term {
    hc_term_with(Action::plain("a"), Action::plain("b"), Action::plain("c"))
}

/// `((a + 1)^n ; (c + 1)) ; HC`, the counter after switching down at value `n`.
pub fn counting_down_term(n: usize) -> Term {
    let a = opt(Action::plain("a"));
    Term::seq(Term::seq(Term::power(&a, n), opt(Action::plain("c"))), hc_term())
}

fn check_ident(s: &str) -> Result<(), EncodingError> {
    if is_identifier(s) {
        Ok(())
    } else {
        Err(EncodingError::BadIdentifier(s.to_string()))
    }
}

/// Builder for guarded regular control specs where every state may terminate.
struct Control {
    equations: Vec<(String, Term)>,
}

impl Control {
    fn new() -> Control {
        Control { equations: Vec::new() }
    }

    /// `name = a1.n1 + ... + 1`
    fn state(&mut self, name: String, moves: Vec<(Action, String)>) {
        let mut terms: Vec<Term> = moves
            .into_iter()
            .map(|(a, n)| Term::prefix(a, Term::name(n)))
            .collect();
        terms.push(Term::Skip);
        self.equations.push((name, Term::sum(terms)));
    }

    /// A chain of `count` receptions of `a` on `channel` from `name`, ending in `target`.
    fn chain(&mut self, name: impl Fn(usize) -> String, count: usize, a: &Action, target: String) {
        for i in (1..=count).rev() {
            let next = if i == 1 { target.clone() } else { name(i - 1) };
            self.state(name(i), vec![(a.clone(), next)]);
        }
    }
}

const COUNTER_CHANNELS: [&str; 6] = ["a1", "a2", "b1", "b2", "c1", "c2"];

/// Control equations of a stack over `alphabet`, all names prefixed with `p`.
/// Counter 1 holds the numeral of the contents while idle; counter 2 is scratch.
fn stack_control(alphabet: &[String], push: &str, pop: &str, p: &str) -> Vec<(String, Term)> {
    let n = alphabet.len();
    let recv = |ch: &str, d: &str| Action::receive(ch, d);
    let (a1, a2) = (recv("a1", "a"), recv("a2", "a"));
    let (b1, b2) = (recv("b1", "b"), recv("b2", "b"));
    let (c1, c2) = (recv("c1", "c"), recv("c2", "c"));
    let x = |k: usize| format!("{p}X{k}");
    let xe = format!("{p}XE");
    let b1_to = |k: usize| format!("{p}B1_{k}");
    let mut c = Control::new();

    let pushes = |target: &dyn Fn(usize) -> String| -> Vec<(Action, String)> {
        (1..=n)
            .map(|j| (Action::receive(push, &alphabet[j - 1]), target(j)))
            .collect()
    };

    let mut moves = pushes(&|j| format!("{p}Inc{j}_{j}"));
    moves.push((Action::send(pop, BLANK), xe.clone()));
    c.state(xe.clone(), moves);
    for k in 1..=n {
        let mut moves = pushes(&|j| format!("{p}Sh{j}"));
        moves.push((Action::send(pop, &alphabet[k - 1]), format!("{p}Pop{k}_{k}")));
        c.state(x(k), moves);
    }
    for j in 1..=n {
        c.chain(|i| format!("{p}Inc{j}_{i}"), j, &a1, b1_to(j));
        c.state(b1_to(j), vec![(b1.clone(), x(j))]);
        // Move counter 1 to counter 2, add j, then multiply back by n.
        c.state(
            format!("{p}Sh{j}"),
            vec![(a1.clone(), format!("{p}ShB{j}")), (c1.clone(), format!("{p}ShC{j}"))],
        );
        c.state(format!("{p}ShB{j}"), vec![(a2.clone(), format!("{p}Sh{j}"))]);
        c.state(format!("{p}ShC{j}"), vec![(b2.clone(), format!("{p}Add{j}_{j}"))]);
        c.chain(|i| format!("{p}Add{j}_{i}"), j, &a1, format!("{p}NSh{j}"));
        c.state(
            format!("{p}NSh{j}"),
            vec![(a2.clone(), format!("{p}NShA{j}_{n}")), (c2.clone(), b1_to(j))],
        );
        c.chain(|i| format!("{p}NShA{j}_{i}"), n, &a1, format!("{p}NSh{j}"));
    }
    for k in 1..=n {
        c.chain(|i| format!("{p}Pop{k}_{i}"), k, &a1, format!("{p}Div0"));
    }
    // Divide counter 1 by n into counter 2.
    c.state(
        format!("{p}Div0"),
        vec![(a1.clone(), format!("{p}Div1")), (c1.clone(), format!("{p}DivEnd"))],
    );
    for i in 1..n {
        c.state(format!("{p}Div{i}"), vec![(a1.clone(), format!("{p}Div{}", i + 1))]);
    }
    c.state(format!("{p}Div{n}"), vec![(a2.clone(), format!("{p}Div0"))]);
    c.state(format!("{p}DivEnd"), vec![(b2.clone(), format!("{p}TestE"))]);
    // Move counter 2 back to counter 1, tracking the numeral's head digit.
    c.state(
        format!("{p}TestE"),
        vec![(a2.clone(), format!("{p}Mv1")), (c2.clone(), xe.clone())],
    );
    for i in 1..=n {
        c.state(
            format!("{p}Test{i}"),
            vec![(a2.clone(), format!("{p}Mv{}", i % n + 1)), (c2.clone(), b1_to(i))],
        );
        c.state(format!("{p}Mv{i}"), vec![(a1.clone(), format!("{p}Test{i}"))]);
    }
    c.equations
}

fn counter(j: usize) -> Term {
    hc_term_with(
        Action::send(format!("a{j}"), "a"),
        Action::send(format!("b{j}"), "b"),
        Action::send(format!("c{j}"), "c"),
    )
}

/// `[control || [P1 || P2]]` hiding the counter channels.
fn stack_term(control: Term) -> Term {
    Term::par(
        COUNTER_CHANNELS,
        control,
        Term::par(Vec::<String>::new(), counter(1), counter(2)),
    )
}

fn stack_parts(
    alphabet: &[String],
    push: &str,
    pop: &str,
    prefix: &str,
) -> Result<(Vec<(String, Term)>, Term), EncodingError> {
    if alphabet.is_empty() {
        return Err(EncodingError::EmptyAlphabet);
    }
    for d in alphabet {
        check_ident(d)?;
    }
    let eqs = stack_control(alphabet, push, pop, prefix);
    Ok((eqs, stack_term(Term::name(format!("{prefix}XE")))))
}

/// How control processes are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ControlForm {
    /// Guarded regular recursive equations.
    #[default]
    Recursive,
    /// Recursion-free term obtained through `regular_encoding`.
    Flattened,
}

/// Stack from a finite control and two counters over channels a1..c2.
pub fn stack_encoding(alphabet: &[String]) -> Result<EncodedSystem, EncodingError> {
    stack_encoding_with(alphabet, ControlForm::Recursive)
}

pub fn stack_encoding_with(
    alphabet: &[String],
    form: ControlForm,
) -> Result<EncodedSystem, EncodingError> {
    let (eqs, term) = stack_parts(alphabet, "push", "pop", "")?;
    let spec = RecursiveSpec::new(eqs)?;
    let system = EncodedSystem {
        spec,
        term,
        channels: COUNTER_CHANNELS.iter().map(|s| s.to_string()).collect(),
    };
    match form {
        ControlForm::Recursive => Ok(system),
        ControlForm::Flattened => {
            let control = regular_encoding_on(&system.spec, "XE", "reg")?;
            Ok(EncodedSystem {
                spec: RecursiveSpec::empty(),
                term: stack_term(control.term),
                channels: system.channels,
            })
        }
    }
}

fn tape_symbols(alphabet: &[String]) -> Vec<String> {
    alphabet
        .iter()
        .cloned()
        .chain(std::iter::once(BLANK.to_string()))
        .collect()
}

const TAPE_CHANNELS: [&str; 4] = ["push1", "pop1", "push2", "pop2"];

fn tape_parts(alphabet: &[String]) -> Result<(Vec<(String, Term)>, Term), EncodingError> {
    let symbols = tape_symbols(alphabet);
    let (mut eqs, left) = stack_parts(&symbols, "push1", "pop1", "L_")?;
    let (right_eqs, right) = stack_parts(&symbols, "push2", "pop2", "R_")?;
    eqs.extend(right_eqs);
    let mut c = Control::new();
    let t = |d: &str| format!("T_{d}");
    for d in &symbols {
        let mut moves = vec![(Action::send("r", d), t(d))];
        moves.extend(symbols.iter().map(|e| (Action::receive("w", e), t(e))));
        moves.push((Action::receive("L", "m"), format!("Left_{d}")));
        moves.push((Action::receive("R", "m"), format!("Right_{d}")));
        c.state(t(d), moves);
        c.state(
            format!("Left_{d}"),
            symbols
                .iter()
                .map(|e| (Action::receive("pop1", e), format!("LeftP_{d}_{e}")))
                .collect(),
        );
        c.state(
            format!("Right_{d}"),
            symbols
                .iter()
                .map(|e| (Action::receive("pop2", e), format!("RightP_{d}_{e}")))
                .collect(),
        );
        for e in &symbols {
            c.state(format!("LeftP_{d}_{e}"), vec![(Action::send("push2", d), t(e))]);
            c.state(format!("RightP_{d}_{e}"), vec![(Action::send("push1", d), t(e))]);
        }
    }
    eqs.extend(c.equations);
    let term = Term::par(
        TAPE_CHANNELS,
        Term::name(t(BLANK)),
        Term::par(Vec::<String>::new(), left, right),
    );
    Ok((eqs, term))
}

/// Tape from a control holding the head symbol and two stacks for either side.
pub fn tape_encoding(alphabet: &[String]) -> Result<EncodedSystem, EncodingError> {
    let (eqs, term) = tape_parts(alphabet)?;
    Ok(EncodedSystem {
        spec: RecursiveSpec::new(eqs)?,
        term,
        channels: TAPE_CHANNELS.iter().map(|s| s.to_string()).collect(),
    })
}

/// Finite control of an RTM talking to an encoded tape over r, w, L, R.
pub fn rtm_encoding(rtm: &Rtm) -> Result<EncodedSystem, EncodingError> {
    for s in &rtm.states {
        check_ident(s)?;
    }
    let (mut eqs, tape) = tape_parts(&rtm.alphabet)?;
    let symbols = tape_symbols(&rtm.alphabet);
    let cell = |d: &str| -> Cell { (d != BLANK).then(|| d.to_string()) };
    let cname = |s: &str, d: &str| format!("C_{s}_{d}");
    for s in &rtm.states {
        for d in &symbols {
            let mut terms: Vec<Term> = rtm
                .transitions
                .iter()
                .filter(|t| &t.from == s && t.read == cell(d))
                .map(|t| {
                    let reads = Term::sum(
                        symbols
                            .iter()
                            .map(|f| Term::prefix(Action::receive("r", f), Term::name(cname(&t.to, f)))),
                    );
                    let mv = match t.mv {
                        Move::L => "L",
                        Move::R => "R",
                    };
                    Term::prefix(
                        t.label.clone(),
                        Term::prefix(
                            Action::send("w", datum(&t.write)),
                            Term::prefix(Action::send(mv, "m"), reads),
                        ),
                    )
                })
                .collect();
            if rtm.finals.contains(s) {
                terms.push(Term::Skip);
            }
            eqs.push((cname(s, d), Term::sum(terms)));
        }
    }
    let channels = ["r", "w", "L", "R"];
    Ok(EncodedSystem {
        spec: RecursiveSpec::new(eqs)?,
        term: Term::par(channels, Term::name(cname(&rtm.initial, BLANK)), tape),
        channels: channels.iter().map(|s| s.to_string()).collect(),
    })
}

/// One equation `P_i = sum_j alpha_ij . P_j + beta_i` read from a spec.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct RegularEquation {
    /// (actions, may skip, target index)
    alphas: Vec<(Vec<Action>, bool, usize)>,
    betas: Vec<Action>,
    beta_skip: bool,
}

fn action_sum(t: &Term) -> Option<(Vec<Action>, bool)> {
    let mut acts = Vec::new();
    let mut skip = false;
    for s in t.summands() {
        match s {
            Term::Skip => skip = true,
            Term::Deadlock => {}
            Term::Prefix(a, body) if **body == Term::Skip => acts.push(a.clone()),
            _ => return None,
        }
    }
    Some((acts, skip))
}

fn read_regular(spec: &RecursiveSpec, order: &[String]) -> Result<Vec<RegularEquation>, EncodingError> {
    let index = |n: &str| order.iter().position(|m| m == n);
    order
        .iter()
        .map(|name| {
            let body = spec.get(name).expect("ordered names are defined");
            let shape = |reason: &str| EncodingError::Shape {
                name: name.clone(),
                reason: reason.to_string(),
            };
            let mut eq = RegularEquation::default();
            for s in body.summands() {
                match s {
                    Term::Skip => eq.beta_skip = true,
                    Term::Deadlock => {}
                    Term::Prefix(a, b) => match b.as_ref() {
                        Term::Skip => eq.betas.push(a.clone()),
                        Term::Name(n) => eq.alphas.push((vec![a.clone()], false, index(n).unwrap())),
                        _ => return Err(shape("prefix body must be 1 or a name")),
                    },
                    Term::Seq(l, r) => {
                        let Term::Name(n) = r.as_ref() else {
                            return Err(shape("sequence must end in a name"));
                        };
                        let (acts, skip) =
                            action_sum(l).ok_or_else(|| shape("expected a sum of actions before `;`"))?;
                        if acts.is_empty() {
                            return Err(shape("unguarded summand"));
                        }
                        eq.alphas.push((acts, skip, index(n).unwrap()));
                    }
                    _ => return Err(shape("unsupported summand")),
                }
            }
            Ok(eq)
        })
        .collect()
}

/// Encode a regular process as a recursion-free term
/// `[G_start ; M || N]` communicating over a fresh channel `c` with tokens t0..t(n+1).
/// A `1` summand of `beta_i` becomes a `1` summand of `G_i`.
///
/// Every intermediate state of the encoding can terminate, so the result
/// matches the process only when each of its equations has a `1` summand.
pub fn regular_encoding(reg: &RecursiveSpec, start: &str) -> Result<EncodedSystem, EncodingError> {
    regular_encoding_on(reg, start, "c")
}

fn regular_encoding_on(
    reg: &RecursiveSpec,
    start: &str,
    channel: &str,
) -> Result<EncodedSystem, EncodingError> {
    if !reg.contains(start) {
        return Err(SyntaxError::UndefinedName(start.to_string()).into());
    }
    let mut order: Vec<String> = vec![start.to_string()];
    order.extend(reg.names().filter(|n| *n != start).map(String::from));
    let eqs = read_regular(reg, &order)?;
    let n = eqs.len();
    let token = |j: usize| format!("t{j}");
    let send = |j: usize| opt(Action::send(channel, token(j)));
    let recv = |j: usize| opt(Action::receive(channel, token(j)));
    let sum_of = |acts: &[Action], skip: bool| {
        let mut terms: Vec<Term> = acts.iter().cloned().map(Term::act).collect();
        if skip {
            terms.push(Term::Skip);
        }
        Term::sum(terms)
    };

    let g: Vec<Term> = eqs
        .iter()
        .map(|eq| {
            let mut terms: Vec<Term> = eq
                .alphas
                .iter()
                .map(|(acts, skip, j)| Term::seq(sum_of(acts, *skip), send(j + 1)))
                .collect();
            if !eq.betas.is_empty() {
                terms.push(Term::seq(sum_of(&eq.betas, false), send(0)));
            }
            if eq.beta_skip {
                terms.push(Term::Skip);
            }
            Term::sum(terms)
        })
        .collect();
    let mut q_terms: Vec<Term> = (1..=n).map(|j| Term::seq(recv(j), g[j - 1].clone())).collect();
    q_terms.push(Term::seq(send(n + 1), recv(n + 1)));
    let q = Term::sum(q_terms);
    let o = Term::sum((1..=n + 1).map(|j| Term::seq(recv(j), send(j))));
    let m = Term::nest(q, recv(0));
    let big_n = Term::nest(o, Term::seq(recv(0), send(0)));
    Ok(EncodedSystem {
        spec: RecursiveSpec::empty(),
        term: Term::par([channel], Term::seq(g[0].clone(), m), big_n),
        channels: vec![channel.to_string()],
    })
}

/// The data tokens a regular encoding of `reg` uses.
pub fn regular_tokens(reg: &RecursiveSpec) -> BTreeSet<String> {
    (0..=reg.len() + 1).map(|j| format!("t{j}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::{branching_bisim, dp_branching_bisim, Outcome};
    use crate::semantics::Engine;
    use crate::syntax::{check_guardedness, parse_spec, render_term};

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn numerals() {
        assert_eq!(encode_nat(&[], 3).unwrap(), 0);
        assert_eq!(encode_nat(&[2], 3).unwrap(), 2);
        assert_eq!(encode_nat(&[1, 2], 3).unwrap(), 7);
        assert!(encode_nat(&[4], 3).is_err());
        assert_eq!(decode_nat(7, 3), vec![1, 2]);
    }

    #[test]
    fn reference_counter() {
        let l = ref_lts(&ReferenceProcess::half_counter(), ExploreLimits::depth(2));
        let c0 = l.state_by_label("C0").unwrap();
        let b0 = l.state_by_label("B0").unwrap();
        let succ: Vec<String> = l.outgoing(c0).map(|t| format!("{} {}", t.label, l.states[t.dst].label)).collect();
        assert_eq!(succ, ["a C1", "b B0"]);
        let succ: Vec<String> = l.outgoing(b0).map(|t| format!("{} {}", t.label, l.states[t.dst].label)).collect();
        assert_eq!(succ, ["c C0"]);
        assert!(l.states.iter().all(|s| s.terminating));
    }

    #[test]
    fn reference_stack_and_tape() {
        let l = ref_lts(&ReferenceProcess::stack(&["d1", BLANK]), ExploreLimits::depth(1));
        let succ: Vec<String> = l.outgoing(l.initial).map(|t| format!("{} {}", t.label, l.states[t.dst].label)).collect();
        assert_eq!(succ, ["push?d1 S_d1", "push?blank S_blank", "pop!blank S_eps"]);
        let t = ref_lts(&ReferenceProcess::tape(&["d1"]), ExploreLimits::depth(1));
        assert!(t.outgoing(t.initial).any(|tr| tr.label.to_string() == "r!blank" && tr.dst == t.initial));
    }

    #[test]
    fn counter_term() {
        let hc = hc_term();
        assert_eq!(render_term(&hc), "(((a.1 + 1) # (b.1 + 1)) ; (c.1 + 1))*");
        let engine = Engine::new(&RecursiveSpec::empty(), Mode::Revised).unwrap();
        assert!(engine.terminates(&hc));
        let steps = engine.step(&hc);
        let a = steps.iter().find(|t| t.label == Action::plain("a")).unwrap();
        let factors: Vec<String> = a.target.seq_factors().iter().map(|f| render_term(f)).collect();
        assert_eq!(
            factors,
            ["(a.1 + 1) # (b.1 + 1)", "a.1 + 1", "c.1 + 1", render_term(&hc).as_str()]
        );
    }

    #[test]
    fn stack_control_shape() {
        let sys = stack_encoding(&strs(&["d1", "d2"])).unwrap();
        assert!(check_guardedness(&sys.spec).guarded);
        let tests = sys.spec.names().filter(|n| n.starts_with("Test")).count();
        assert_eq!(tests, 3);
        let l = sys.explore(Mode::Revised, ExploreLimits::depth(1)).unwrap();
        let labels: Vec<String> = l.outgoing(l.initial).map(|t| t.label.to_string()).collect();
        assert_eq!(labels, ["pop!blank", "push?d1", "push?d2"]);
    }

    #[test]
    fn stack_push_settles_in_x1() {
        let sys = stack_encoding(&strs(&["d1", "d2"])).unwrap();
        let engine = Engine::new(&sys.spec, Mode::Revised).unwrap();
        let mut state = engine
            .step(&sys.term)
            .into_iter()
            .find(|t| t.label.to_string() == "push?d1")
            .unwrap()
            .target;
        loop {
            let steps = engine.step(&state);
            if steps.iter().any(|t| !t.label.is_tau()) {
                break;
            }
            assert_eq!(steps.len(), 1);
            state = steps[0].target.clone();
        }
        let Term::Par(_, control, counters) = &state else { panic!() };
        assert_eq!(**control, Term::name("X1"));
        let Term::Par(_, p1, _) = counters.as_ref() else { panic!() };
        assert_eq!(
            p1.seq_factors().iter().map(|f| render_term(f)).collect::<Vec<_>>()[..2],
            ["a1!a.1 + 1", "c1!c.1 + 1"]
        );
    }

    #[test]
    fn stack_encoding_small_window() {
        let alphabet = ["d1", BLANK];
        let reference = ref_lts(&ReferenceProcess::stack(&alphabet), ExploreLimits::depth(3));
        let sys = stack_encoding(&strs(&alphabet)).unwrap();
        let enc = sys.explore(Mode::Revised, ExploreLimits::new(60, 20_000)).unwrap();
        let v = branching_bisim(&reference, &enc);
        assert_ne!(v.outcome, Outcome::Inequivalent, "{v:?}");
    }

    #[test]
    fn flattened_stack_control_steps_like_recursive() {
        let sys = stack_encoding_with(&strs(&["d1"]), ControlForm::Flattened).unwrap();
        assert!(sys.spec.is_empty());
        let l = sys.explore(Mode::Revised, ExploreLimits::depth(2)).unwrap();
        let labels: Vec<String> = l.outgoing(l.initial).map(|t| t.label.to_string()).collect();
        assert_eq!(labels, ["pop!blank", "push?d1"]);
    }

    #[test]
    fn tape_control() {
        let sys = tape_encoding(&strs(&["d1"])).unwrap();
        assert!(check_guardedness(&sys.spec).guarded);
        let l = sys.explore(Mode::Revised, ExploreLimits::depth(1)).unwrap();
        let labels: Vec<String> = l.outgoing(l.initial).map(|t| t.label.to_string()).collect();
        assert_eq!(labels, ["L?m", "R?m", "r!blank", "w?blank", "w?d1"]);
        assert!(l.states[l.initial].terminating);
    }

    #[test]
    fn regular_encoding_loop() {
        let (spec, _) = parse_spec("P1 = a.P1 + 1").unwrap();
        let sys = regular_encoding(&spec, "P1").unwrap();
        let reference = explore_term(&Term::name("P1"), &spec, Mode::Revised, ExploreLimits::depth(5)).unwrap();
        let enc = sys.explore(Mode::Revised, ExploreLimits::depth(12)).unwrap();
        let v = dp_branching_bisim(&reference, &enc);
        assert_ne!(v.outcome, Outcome::Inequivalent, "{v:?}");
    }

    #[test]
    fn regular_encoding_tokens() {
        let (spec, _) = parse_spec("P1 = a.P2\nP2 = b.P1").unwrap();
        let sys = regular_encoding(&spec, "P1").unwrap();
        assert_eq!(regular_tokens(&spec), ["t0", "t1", "t2", "t3"].map(String::from).into());
        let Term::Par(_, left, _) = &sys.term else { panic!() };
        let Term::Seq(g1, _) = left.as_ref() else { panic!() };
        assert_eq!(g1.summands().len(), 1);
    }

    #[test]
    fn regular_shape_errors() {
        let (spec, _) = parse_spec("P = a.b.P").unwrap();
        assert!(matches!(regular_encoding(&spec, "P"), Err(EncodingError::Shape { .. })));
    }
}
