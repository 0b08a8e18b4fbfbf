//! Terms, specifications, the concrete syntax and its parser.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undefined name: {0}")]
    UndefinedName(String),
    #[error("duplicate defining equation for {0}")]
    DuplicateEquation(String),
    #[error("not in Greibach normal form: equation {name}: {reason}")]
    NotGnf { name: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Send,
    Receive,
}

impl Polarity {
    pub fn dual(self) -> Polarity {
        match self {
            Polarity::Send => Polarity::Receive,
            Polarity::Receive => Polarity::Send,
        }
    }
}

/// An action label: `tau`, a plain name, or a data exchange `c?d` / `c!d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Tau,
    Plain(String),
    Comm {
        channel: String,
        polarity: Polarity,
        datum: String,
    },
}

impl Action {
    pub fn plain(name: impl Into<String>) -> Action {
        Action::Plain(name.into())
    }

    pub fn send(channel: impl Into<String>, datum: impl Into<String>) -> Action {
        Action::Comm {
            channel: channel.into(),
            polarity: Polarity::Send,
            datum: datum.into(),
        }
    }

    pub fn receive(channel: impl Into<String>, datum: impl Into<String>) -> Action {
        Action::Comm {
            channel: channel.into(),
            polarity: Polarity::Receive,
            datum: datum.into(),
        }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Action::Tau)
    }

    /// Channel of a data exchange, if any.
    pub fn channel(&self) -> Option<&str> {
        match self {
            Action::Comm { channel, .. } => Some(channel),
            _ => None,
        }
    }

    /// True if `self` and `other` synchronise: same channel and datum, opposite polarity.
    pub fn complements(&self, other: &Action) -> bool {
        match (self, other) {
            (
                Action::Comm {
                    channel: c1,
                    polarity: p1,
                    datum: d1,
                },
                Action::Comm {
                    channel: c2,
                    polarity: p2,
                    datum: d2,
                },
            ) => c1 == c2 && d1 == d2 && *p1 == p2.dual(),
            _ => false,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Tau => f.write_str("tau"),
            Action::Plain(a) => f.write_str(a),
            Action::Comm {
                channel,
                polarity: Polarity::Send,
                datum,
            } => write!(f, "{channel}!{datum}"),
            Action::Comm {
                channel,
                polarity: Polarity::Receive,
                datum,
            } => write!(f, "{channel}?{datum}"),
        }
    }
}

impl FromStr for Action {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s)?;
        let a = p.action()?;
        p.expect_end()?;
        Ok(a)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub type Channels = Arc<BTreeSet<String>>;

/// Process term. One sequential constructor serves both semantics.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Deadlock,
    Skip,
    Prefix(Action, Arc<Term>),
    Alt(Arc<Term>, Arc<Term>),
    Seq(Arc<Term>, Arc<Term>),
    Par(Channels, Arc<Term>, Arc<Term>),
    Name(String),
    Star(Arc<Term>),
    Nest(Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn prefix(action: Action, body: Term) -> Term {
        Term::Prefix(action, Arc::new(body))
    }

    pub fn alt(left: Term, right: Term) -> Term {
        Term::Alt(Arc::new(left), Arc::new(right))
    }

    pub fn seq(left: Term, right: Term) -> Term {
        Term::Seq(Arc::new(left), Arc::new(right))
    }

    pub fn par<I, S>(channels: I, left: Term, right: Term) -> Term
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set = channels.into_iter().map(Into::into).collect();
        Term::Par(Arc::new(set), Arc::new(left), Arc::new(right))
    }

    pub fn name(name: impl Into<String>) -> Term {
        Term::Name(name.into())
    }

    pub fn star(body: Term) -> Term {
        Term::Star(Arc::new(body))
    }

    pub fn nest(left: Term, right: Term) -> Term {
        Term::Nest(Arc::new(left), Arc::new(right))
    }

    /// `a.1`
    pub fn act(action: Action) -> Term {
        Term::prefix(action, Term::Skip)
    }

    /// Left-nested alternative over `terms`; the empty sum is `0`.
    pub fn sum<I: IntoIterator<Item = Term>>(terms: I) -> Term {
        terms
            .into_iter()
            .reduce(Term::alt)
            .unwrap_or(Term::Deadlock)
    }

    /// Left-nested sequential composition over `terms`; the empty product is `1`.
    pub fn seq_all<I: IntoIterator<Item = Term>>(terms: I) -> Term {
        terms.into_iter().reduce(Term::seq).unwrap_or(Term::Skip)
    }

    /// `P^0 = 1`, `P^(n+1) = P ; P^n`.
    pub fn power(base: &Term, n: usize) -> Term {
        (0..n).fold(Term::Skip, |acc, _| Term::seq(base.clone(), acc))
    }

    /// Names occurring anywhere in the term.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Deadlock | Term::Skip => {}
            Term::Name(n) => {
                out.insert(n.clone());
            }
            Term::Prefix(_, b) | Term::Star(b) => b.collect_names(out),
            Term::Alt(l, r) | Term::Seq(l, r) | Term::Par(_, l, r) | Term::Nest(l, r) => {
                l.collect_names(out);
                r.collect_names(out);
            }
        }
    }

    /// Number of constructors in the tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Deadlock | Term::Skip | Term::Name(_) => 1,
            Term::Prefix(_, b) | Term::Star(b) => 1 + b.size(),
            Term::Alt(l, r) | Term::Seq(l, r) | Term::Par(_, l, r) | Term::Nest(l, r) => {
                1 + l.size() + r.size()
            }
        }
    }

    /// Apply `f` to every action label, rebuilding the tree.
    pub fn map_actions(&self, f: &impl Fn(&Action) -> Action) -> Term {
        match self {
            Term::Deadlock | Term::Skip | Term::Name(_) => self.clone(),
            Term::Prefix(a, b) => Term::prefix(f(a), b.map_actions(f)),
            Term::Alt(l, r) => Term::alt(l.map_actions(f), r.map_actions(f)),
            Term::Seq(l, r) => Term::seq(l.map_actions(f), r.map_actions(f)),
            Term::Par(c, l, r) => Term::Par(
                c.clone(),
                Arc::new(l.map_actions(f)),
                Arc::new(r.map_actions(f)),
            ),
            Term::Star(b) => Term::star(b.map_actions(f)),
            Term::Nest(l, r) => Term::nest(l.map_actions(f), r.map_actions(f)),
        }
    }

    /// Rename process names, rebuilding the tree.
    pub fn map_names(&self, f: &impl Fn(&str) -> String) -> Term {
        match self {
            Term::Deadlock | Term::Skip => self.clone(),
            Term::Name(n) => Term::Name(f(n)),
            Term::Prefix(a, b) => Term::prefix(a.clone(), b.map_names(f)),
            Term::Alt(l, r) => Term::alt(l.map_names(f), r.map_names(f)),
            Term::Seq(l, r) => Term::seq(l.map_names(f), r.map_names(f)),
            Term::Par(c, l, r) => {
                Term::Par(c.clone(), Arc::new(l.map_names(f)), Arc::new(r.map_names(f)))
            }
            Term::Star(b) => Term::star(b.map_names(f)),
            Term::Nest(l, r) => Term::nest(l.map_names(f), r.map_names(f)),
        }
    }

    /// Flatten nested sequential composition into its factors, left to right.
    pub fn seq_factors(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'t>(t: &'t Term, out: &mut Vec<&'t Term>) {
            match t {
                Term::Seq(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }

    /// Flatten nested alternatives into summands, left to right.
    pub fn summands(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'t>(t: &'t Term, out: &mut Vec<&'t Term>) {
            match t {
                Term::Alt(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}

/// Finite set of defining equations, kept in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RecursiveSpec {
    equations: IndexMap<String, Arc<Term>>,
    guarded: bool,
}

impl RecursiveSpec {
    pub fn empty() -> RecursiveSpec {
        RecursiveSpec {
            equations: IndexMap::new(),
            guarded: true,
        }
    }

    /// Build a spec, checking uniqueness of equations and that every used name is defined.
    pub fn new<I, S>(equations: I) -> Result<RecursiveSpec, SyntaxError>
    where
        I: IntoIterator<Item = (S, Term)>,
        S: Into<String>,
    {
        let mut map = IndexMap::new();
        for (name, body) in equations {
            let name = name.into();
            if map.contains_key(&name) {
                return Err(SyntaxError::DuplicateEquation(name));
            }
            map.insert(name, Arc::new(body));
        }
        for body in map.values() {
            for used in body.names() {
                if !map.contains_key(&used) {
                    return Err(SyntaxError::UndefinedName(used));
                }
            }
        }
        let mut spec = RecursiveSpec {
            equations: map,
            guarded: false,
        };
        spec.guarded = check_guardedness(&spec).guarded;
        Ok(spec)
    }

    pub fn get(&self, name: &str) -> Option<&Arc<Term>> {
        self.equations.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.equations.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.equations.keys().map(String::as_str)
    }

    pub fn equations(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.equations.iter().map(|(k, v)| (k.as_str(), v.as_ref()))
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_guarded(&self) -> bool {
        self.guarded
    }

    /// Union of two specs; fails on a name defined in both.
    pub fn merge(&self, other: &RecursiveSpec) -> Result<RecursiveSpec, SyntaxError> {
        RecursiveSpec::new(
            self.equations()
                .chain(other.equations())
                .map(|(n, t)| (n.to_string(), t.clone())),
        )
    }

    /// Check that every name in `term` is defined here.
    pub fn check_term(&self, term: &Term) -> Result<(), SyntaxError> {
        match term.names().into_iter().find(|n| !self.contains(n)) {
            Some(n) => Err(SyntaxError::UndefinedName(n)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for RecursiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, body) in self.equations() {
            writeln!(f, "{name} = {}", render_term(body))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardednessReport {
    pub guarded: bool,
    /// Equations whose right-hand side has an unguarded name occurrence.
    pub offending_names: Vec<String>,
}

/// True if `t` cannot terminate before performing a visible action.
fn needs_action(t: &Term) -> bool {
    match t {
        Term::Deadlock => true,
        Term::Prefix(Action::Tau, b) => needs_action(b),
        Term::Prefix(..) => true,
        Term::Alt(l, r) => needs_action(l) && needs_action(r),
        Term::Seq(l, r) => needs_action(l) || needs_action(r),
        Term::Skip | Term::Name(_) | Term::Star(_) | Term::Nest(..) | Term::Par(..) => false,
    }
}

/// Every name occurrence must sit under a non-tau action prefix. In `P ; Q`
/// the occurrences in `Q` are also guarded when `P` cannot terminate without
/// a visible action, as in `a.X ; Y`.
pub fn check_guardedness(spec: &RecursiveSpec) -> GuardednessReport {
    fn unguarded(t: &Term) -> bool {
        match t {
            Term::Deadlock | Term::Skip => false,
            Term::Name(_) => true,
            Term::Prefix(Action::Tau, b) => unguarded(b),
            Term::Prefix(_, _) => false,
            Term::Star(b) => unguarded(b),
            Term::Seq(l, r) => unguarded(l) || (!needs_action(l) && unguarded(r)),
            Term::Alt(l, r) | Term::Par(_, l, r) | Term::Nest(l, r) => {
                unguarded(l) || unguarded(r)
            }
        }
    }
    let offending_names: Vec<String> = spec
        .equations()
        .filter(|(_, body)| unguarded(body))
        .map(|(n, _)| n.to_string())
        .collect();
    GuardednessReport {
        guarded: offending_names.is_empty(),
        offending_names,
    }
}

// ---------------------------------------------------------------------------
// Rendering

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    SeqLeft,
    Factor,
    NestLeft,
    Atom,
}

pub fn render_term(term: &Term) -> String {
    let mut out = String::new();
    render_into(term, Ctx::Top, &mut out);
    out
}

fn is_atomic(t: &Term) -> bool {
    matches!(
        t,
        Term::Deadlock | Term::Skip | Term::Name(_) | Term::Par(..)
    )
}

fn render_into(t: &Term, ctx: Ctx, out: &mut String) {
    let paren = match t {
        Term::Alt(..) => ctx != Ctx::Top,
        Term::Seq(..) => !matches!(ctx, Ctx::Top | Ctx::SeqLeft),
        Term::Nest(..) => ctx != Ctx::Top,
        Term::Prefix(..) => matches!(ctx, Ctx::NestLeft | Ctx::Atom),
        Term::Star(..) => ctx == Ctx::Atom,
        _ => false,
    };
    if paren {
        out.push('(');
    }
    match t {
        Term::Deadlock => out.push('0'),
        Term::Skip => out.push('1'),
        Term::Name(n) => out.push_str(n),
        Term::Prefix(a, b) => {
            out.push_str(&a.to_string());
            out.push('.');
            render_into(b, Ctx::Factor, out);
        }
        Term::Alt(l, r) => {
            render_into(l, Ctx::Top, out);
            out.push_str(" + ");
            render_into(r, Ctx::SeqLeft, out);
        }
        Term::Seq(l, r) => {
            render_into(l, Ctx::SeqLeft, out);
            out.push_str(" ; ");
            render_into(r, Ctx::Factor, out);
        }
        Term::Nest(l, r) => {
            render_into(l, Ctx::NestLeft, out);
            out.push_str(" # ");
            render_into(r, Ctx::Factor, out);
        }
        Term::Star(b) => {
            if is_atomic(b) {
                render_into(b, Ctx::Atom, out);
            } else {
                out.push('(');
                render_into(b, Ctx::Top, out);
                out.push(')');
            }
            out.push('*');
        }
        Term::Par(c, l, r) => {
            out.push('[');
            render_into(l, Ctx::Top, out);
            out.push_str(" || ");
            render_into(r, Ctx::Top, out);
            out.push_str("]{");
            let names: Vec<&str> = c.iter().map(String::as_str).collect();
            out.push_str(&names.join(","));
            out.push('}');
        }
    }
    if paren {
        out.push(')');
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Dot,
    Plus,
    Semi,
    Star,
    Hash,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bars,
    LBrace,
    RBrace,
    Comma,
    Question,
    Bang,
    Eq,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "identifier `{s}`"),
            Tok::Zero => "`0`",
            Tok::One => "`1`",
            Tok::Dot => "`.`",
            Tok::Plus => "`+`",
            Tok::Semi => "`;`",
            Tok::Star => "`*`",
            Tok::Hash => "`#`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrack => "`[`",
            Tok::RBrack => "`]`",
            Tok::Bars => "`||`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Question => "`?`",
            Tok::Bang => "`!`",
            Tok::Eq => "`=`",
            Tok::Newline => "end of line",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok| {
            toks.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            })
        };
        match c {
            '\n' => {
                push(Tok::Newline);
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '.' => push(Tok::Dot),
            '+' => push(Tok::Plus),
            ';' => push(Tok::Semi),
            '*' => push(Tok::Star),
            '#' => push(Tok::Hash),
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            '[' => push(Tok::LBrack),
            ']' => push(Tok::RBrack),
            '{' => push(Tok::LBrace),
            '}' => push(Tok::RBrace),
            ',' => push(Tok::Comma),
            '?' => push(Tok::Question),
            '!' => push(Tok::Bang),
            '=' => push(Tok::Eq),
            '|' if chars.get(i + 1) == Some(&'|') => {
                push(Tok::Bars);
                i += 2;
                col += 2;
                continue;
            }
            '0' | '1' if !chars.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric()) => {
                push(if c == '0' { Tok::Zero } else { Tok::One })
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                push(Tok::Ident(word));
                continue;
            }
            other => {
                return Err(SyntaxError::Parse {
                    line,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
        col += 1;
    }
    toks.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(toks)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        let s = &self.toks[self.pos];
        SyntaxError::Parse {
            line: s.line,
            column: s.column,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn expect_end(&mut self) -> Result<(), SyntaxError> {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of input")),
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn action(&mut self) -> Result<Action, SyntaxError> {
        let head = self.ident()?;
        if head == "tau" {
            return Ok(Action::Tau);
        }
        match self.peek() {
            Tok::Question => {
                self.bump();
                Ok(Action::receive(head, self.ident()?))
            }
            Tok::Bang => {
                self.bump();
                Ok(Action::send(head, self.ident()?))
            }
            _ => Ok(Action::Plain(head)),
        }
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.seq()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            t = Term::alt(t, self.seq()?);
        }
        Ok(t)
    }

    fn seq(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.factor()?;
        while *self.peek() == Tok::Semi {
            self.bump();
            t = Term::seq(t, self.factor()?);
        }
        Ok(t)
    }

    fn starts_action(&self) -> bool {
        match (self.peek(), self.peek_at(1)) {
            (Tok::Ident(_), Tok::Dot | Tok::Question | Tok::Bang) => true,
            (Tok::Ident(s), _) => s == "tau",
            _ => false,
        }
    }

    fn factor(&mut self) -> Result<Term, SyntaxError> {
        if self.starts_action() {
            let a = self.action()?;
            self.expect(Tok::Dot)?;
            return Ok(Term::prefix(a, self.factor()?));
        }
        let mut t = self.atom()?;
        if *self.peek() == Tok::Star {
            self.bump();
            t = Term::star(t);
        }
        if *self.peek() == Tok::Hash {
            self.bump();
            t = Term::nest(t, self.factor()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Term::Deadlock)
            }
            Tok::One => {
                self.bump();
                Ok(Term::Skip)
            }
            Tok::Ident(n) => {
                self.bump();
                Ok(Term::Name(n))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::LBrack => {
                self.bump();
                let l = self.term()?;
                self.expect(Tok::Bars)?;
                let r = self.term()?;
                self.expect(Tok::RBrack)?;
                self.expect(Tok::LBrace)?;
                let mut channels = BTreeSet::new();
                if *self.peek() != Tok::RBrace {
                    channels.insert(self.ident()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        channels.insert(self.ident()?);
                    }
                }
                self.expect(Tok::RBrace)?;
                Ok(Term::Par(Arc::new(channels), Arc::new(l), Arc::new(r)))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    fn end_of_line(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of line")),
        }
    }
}

/// Parse a specification.
///
/// Lines of the form `Name = term` are defining equations. At most one other
/// line may hold a bare term, which becomes the root; without one the root is
/// the first defined name.
pub fn parse_spec(text: &str) -> Result<(RecursiveSpec, Term), SyntaxError> {
    let mut p = Parser::new(text)?;
    let mut equations: Vec<(String, Term)> = Vec::new();
    let mut seen = HashSet::new();
    let mut root: Option<Term> = None;
    loop {
        p.skip_newlines();
        if *p.peek() == Tok::Eof {
            break;
        }
        let is_equation = matches!(p.peek(), Tok::Ident(_)) && *p.peek_at(1) == Tok::Eq;
        if is_equation {
            let name = p.ident()?;
            if name == "tau" {
                return Err(p.error("`tau` cannot be defined"));
            }
            p.expect(Tok::Eq)?;
            let body = p.term()?;
            if !seen.insert(name.clone()) {
                return Err(SyntaxError::DuplicateEquation(name));
            }
            equations.push((name, body));
        } else {
            if root.is_some() {
                return Err(p.error("more than one root term"));
            }
            root = Some(p.term()?);
        }
        p.end_of_line()?;
    }
    let root = match root {
        Some(t) => t,
        None => match equations.first() {
            Some((n, _)) => Term::Name(n.clone()),
            None => return Err(p.error("empty specification")),
        },
    };
    let spec = RecursiveSpec::new(equations)?;
    spec.check_term(&root)?;
    Ok((spec, root))
}

/// Parse a single term whose names must be defined in `spec`.
pub fn parse_term(text: &str, spec: &RecursiveSpec) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text)?;
    p.skip_newlines();
    let t = p.term()?;
    p.expect_end()?;
    spec.check_term(&t)?;
    Ok(t)
}

// ---------------------------------------------------------------------------
// Greibach normal form view

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GnfSummand {
    pub action: Action,
    pub tail: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GnfEquation {
    pub name: String,
    pub summands: Vec<GnfSummand>,
    pub may_terminate: bool,
}

/// Structured view of a specification whose equations are sums of
/// action-prefixed name sequences, optionally with a `1` summand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GnfSpec {
    pub equations: Vec<GnfEquation>,
}

impl GnfSpec {
    pub fn get(&self, name: &str) -> Option<&GnfEquation> {
        self.equations.iter().find(|e| e.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.equations.iter().map(|e| e.name.as_str())
    }

    /// Back to a recursive spec of shape `a.(X;Y) + b.1 + 1`.
    pub fn to_spec(&self) -> RecursiveSpec {
        let eqs = self.equations.iter().map(|eq| {
            let mut terms: Vec<Term> = eq
                .summands
                .iter()
                .map(|s| {
                    let tail = Term::seq_all(s.tail.iter().map(Term::name));
                    Term::prefix(s.action.clone(), tail)
                })
                .collect();
            if eq.may_terminate {
                terms.push(Term::Skip);
            }
            (eq.name.clone(), Term::sum(terms))
        });
        RecursiveSpec::new(eqs).expect("GNF view only references its own names")
    }

    /// True if the name may terminate, i.e. has a `1` summand.
    pub fn terminates(&self, name: &str) -> bool {
        self.get(name).is_some_and(|e| e.may_terminate)
    }
}

fn name_sequence(t: &Term) -> Option<Vec<String>> {
    let mut out = Vec::new();
    for f in t.seq_factors() {
        match f {
            Term::Name(n) => out.push(n.clone()),
            Term::Skip => {}
            _ => return None,
        }
    }
    Some(out)
}

/// Read a spec as a GNF specification without converting anything.
/// Accepts both `a.(X;Y)` and `a.X;Y` spellings of a summand.
pub fn to_gnf_view(spec: &RecursiveSpec, root: &str) -> Result<GnfSpec, SyntaxError> {
    if !spec.contains(root) {
        return Err(SyntaxError::UndefinedName(root.to_string()));
    }
    let mut equations = Vec::new();
    for (name, body) in spec.equations() {
        let fail = |reason: String| SyntaxError::NotGnf {
            name: name.to_string(),
            reason,
        };
        let mut eq = GnfEquation {
            name: name.to_string(),
            summands: Vec::new(),
            may_terminate: false,
        };
        for s in body.summands() {
            match s {
                Term::Skip => eq.may_terminate = true,
                Term::Deadlock => {}
                _ => {
                    let factors = s.seq_factors();
                    let (action, inner) = match factors[0] {
                        Term::Prefix(a, b) => (a.clone(), b),
                        other => {
                            return Err(fail(format!(
                                "summand `{}` does not start with an action prefix",
                                render_term(other)
                            )))
                        }
                    };
                    let mut tail = name_sequence(inner).ok_or_else(|| {
                        fail(format!(
                            "tail `{}` is not a name sequence",
                            render_term(inner)
                        ))
                    })?;
                    for f in &factors[1..] {
                        match f {
                            Term::Name(n) => tail.push(n.clone()),
                            Term::Skip => {}
                            other => {
                                return Err(fail(format!(
                                    "tail `{}` is not a name sequence",
                                    render_term(other)
                                )))
                            }
                        }
                    }
                    eq.summands.push(GnfSummand { action, tail });
                }
            }
        }
        equations.push(eq);
    }
    Ok(GnfSpec { equations })
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: &str = "X = a.X ; Y + b.1\nY = c.1 + 1";

    #[test]
    fn parses_running_example() {
        let (spec, root) = parse_spec(RUNNING).unwrap();
        assert_eq!(spec.len(), 2);
        assert_eq!(root, Term::name("X"));
        assert!(spec.is_guarded());
    }

    #[test]
    fn bare_deadlock_root() {
        let (spec, root) = parse_spec("0").unwrap();
        assert!(spec.is_empty());
        assert_eq!(root, Term::Deadlock);
    }

    #[test]
    fn undefined_name_rejected() {
        assert_eq!(
            parse_spec("X = a.Z").unwrap_err(),
            SyntaxError::UndefinedName("Z".into())
        );
    }

    #[test]
    fn duplicate_equation_rejected() {
        assert_eq!(
            parse_spec("X = a.1\nX = b.1").unwrap_err(),
            SyntaxError::DuplicateEquation("X".into())
        );
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_spec("X = a.1 +\n").unwrap_err() {
            SyntaxError::Parse { line, column, .. } => {
                assert_eq!(line, 1);
                assert_eq!(column, 10);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn render_examples() {
        assert_eq!(render_term(&Term::Deadlock), "0");
        let a = Action::plain("a");
        assert_eq!(render_term(&Term::act(a.clone())), "a.1");
        let t = Term::seq(
            Term::alt(Term::act(a), Term::Skip),
            Term::act(Action::plain("b")),
        );
        assert_eq!(render_term(&t), "(a.1 + 1) ; b.1");
    }

    #[test]
    fn prefix_binds_one_factor() {
        let (spec, _) = parse_spec(RUNNING).unwrap();
        let body = spec.get("X").unwrap();
        let expected = Term::alt(
            Term::seq(
                Term::prefix(Action::plain("a"), Term::name("X")),
                Term::name("Y"),
            ),
            Term::act(Action::plain("b")),
        );
        assert_eq!(**body, expected);
    }

    #[test]
    fn parallel_and_comm_actions() {
        let (_, root) = parse_spec("[c!d.1 || c?d.1]{c}").unwrap();
        assert_eq!(
            root,
            Term::par(
                ["c"],
                Term::act(Action::send("c", "d")),
                Term::act(Action::receive("c", "d"))
            )
        );
        assert_eq!(render_term(&root), "[c!d.1 || c?d.1]{c}");
    }

    #[test]
    fn nest_and_star_round_trip() {
        let text = "(((a.1 + 1) # (b.1 + 1)) ; (c.1 + 1))*";
        let (_, root) = parse_spec(text).unwrap();
        assert!(matches!(root, Term::Star(_)));
        assert_eq!(render_term(&root), text);
    }

    #[test]
    fn guardedness_examples() {
        let (spec, _) = parse_spec(RUNNING).unwrap();
        assert!(check_guardedness(&spec).guarded);

        let (spec, _) = parse_spec("X = X ; Y + 1\nY = a.1").unwrap();
        assert!(!spec.is_guarded());
        let report = check_guardedness(&spec);
        assert!(!report.guarded);
        assert_eq!(report.offending_names, vec!["X".to_string()]);

        let (spec, _) = parse_spec("X = tau.X").unwrap();
        assert!(!check_guardedness(&spec).guarded);
    }

    #[test]
    fn gnf_view_of_running_example() {
        let (spec, _) = parse_spec(RUNNING).unwrap();
        let gnf = to_gnf_view(&spec, "X").unwrap();
        let x = gnf.get("X").unwrap();
        assert_eq!(
            x.summands,
            vec![
                GnfSummand {
                    action: Action::plain("a"),
                    tail: vec!["X".into(), "Y".into()]
                },
                GnfSummand {
                    action: Action::plain("b"),
                    tail: vec![]
                },
            ]
        );
        assert!(!x.may_terminate);
        let y = gnf.get("Y").unwrap();
        assert_eq!(y.summands.len(), 1);
        assert!(y.may_terminate);
    }

    #[test]
    fn gnf_view_of_skip() {
        let (spec, _) = parse_spec("X = 1").unwrap();
        let gnf = to_gnf_view(&spec, "X").unwrap();
        assert!(gnf.get("X").unwrap().summands.is_empty());
        assert!(gnf.get("X").unwrap().may_terminate);
    }

    #[test]
    fn gnf_view_rejects_nested_prefix() {
        let (spec, _) = parse_spec("X = a.(b.1)").unwrap();
        assert!(matches!(
            to_gnf_view(&spec, "X"),
            Err(SyntaxError::NotGnf { .. })
        ));
    }

    #[test]
    fn action_from_str() {
        assert_eq!("tau".parse::<Action>().unwrap(), Action::Tau);
        assert_eq!("c!d".parse::<Action>().unwrap(), Action::send("c", "d"));
        assert_eq!("c?d".parse::<Action>().unwrap(), Action::receive("c", "d"));
        assert_eq!("a".parse::<Action>().unwrap(), Action::plain("a"));
    }
}
