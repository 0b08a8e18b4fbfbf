//! Batch command-line front end.
//!
//! Exit status: 0 success or equivalent, 1 inequivalent or invalid input,
//! 2 usage error, 3 undecided within the explored horizon.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::automata::{compile_pda, AutomataError, Pda, PdaSpace, Rtm, RtmSpace};
use crate::equiv::{self, EquivError, EquivKind, EquivVerdict, Outcome, Witness};
use crate::experiments;
use crate::lts::{ExportFormat, LtsError};
use crate::semantics::SemanticsError;
use crate::syntax::{check_guardedness, to_gnf_view, SyntaxError};
use crate::{explore, explore_term, parse_spec, ExploreLimits, Lts, Mode, RecursiveSpec, Term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_HORIZON: i32 = 3;

const DEFAULT_DEPTH: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "seqproc", about = "Sequential process calculus workbench", disable_version_flag = true)]
struct Cli {
    /// Emit every report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a spec (or validate a PDA, RTM or LTS JSON file) and report guardedness.
    Check { file: PathBuf },
    /// Explore the state space of a spec, PDA or RTM and export it.
    Lts {
        file: PathBuf,
        #[command(flatten)]
        explore: ExploreArgs,
        #[arg(long, default_value = "json")]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two systems.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Strong)]
        kind: KindArg,
        /// Rounds for `--kind k`.
        #[arg(long, value_parser = positive)]
        k: Option<usize>,
        #[command(flatten)]
        explore: ExploreArgs,
    },
    /// Compile a GNF spec into a pushdown automaton.
    CompilePda {
        file: PathBuf,
        /// Root name; defaults to the spec's root.
        #[arg(long)]
        root: Option<String>,
        /// Keep only states reachable from the initial one (default).
        #[arg(long, conflicts_with = "full")]
        reachable_only: bool,
        /// Build every subset state.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in experiment; without a name, print the manifest.
    Demo { name: Option<String> },
    Version,
}

#[derive(Debug, Args)]
struct ExploreArgs {
    #[arg(long, default_value = "revised")]
    mode: Mode,
    /// Exploration depth [default: 10, or k for --kind k]
    #[arg(long, value_parser = positive)]
    depth: Option<usize>,
    #[arg(long, value_parser = positive, default_value_t = ExploreLimits::DEFAULT_MAX_STATES)]
    max_states: usize,
}

impl ExploreArgs {
    fn limits(&self, default_depth: usize) -> ExploreLimits {
        ExploreLimits::new(self.depth.unwrap_or(default_depth), self.max_states)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Strong,
    K,
    Branching,
    DpBranching,
    RootedBranching,
    RootedDp,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Semantics(#[from] SemanticsError),
    #[error("{0}")]
    Equiv(#[from] EquivError),
    #[error("{0}")]
    Automata(#[from] AutomataError),
    #[error("{0}")]
    Experiment(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn input(path: &Path, message: impl ToString) -> CliError {
        CliError::Input {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        }
    }
}

/// A loaded input file, recognised by content rather than extension.
enum Input {
    Spec { spec: RecursiveSpec, root: Term },
    Pda(Pda),
    Rtm(Rtm),
    Lts(Lts),
}

impl Input {
    fn load(path: &Path) -> Result<Input, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if !text.trim_start().starts_with('{') {
            let (spec, root) = parse_spec(&text).map_err(|e: SyntaxError| CliError::input(path, e))?;
            return Ok(Input::Spec { spec, root });
        }
        let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::input(path, format!("malformed JSON: {e}")))?;
        let has = |key: &str| doc.get(key).is_some();
        if has("initialStack") {
            Pda::from_json(&text).map(Input::Pda).map_err(|e| CliError::input(path, e))
        } else if has("alphabet") && has("final") {
            Rtm::from_json(&text).map(Input::Rtm).map_err(|e| CliError::input(path, e))
        } else if has("states") && has("transitions") && has("initial") {
            Lts::from_json(&text).map(Input::Lts).map_err(|e: LtsError| CliError::input(path, e))
        } else {
            Err(CliError::input(path, "JSON document is not a PDA, RTM or LTS"))
        }
    }

    fn explore(&self, mode: Mode, limits: ExploreLimits) -> Result<Lts, CliError> {
        Ok(match self {
            Input::Spec { spec, root } => explore_term(root, spec, mode, limits)?,
            Input::Pda(pda) => explore(&PdaSpace { pda }, pda.initial_config(), limits),
            Input::Rtm(rtm) => explore(&RtmSpace { rtm, trim: true }, rtm.initial_config(), limits),
            Input::Lts(lts) => lts.clone(),
        })
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
}

impl Io<'_> {
    /// Print `text` normally, or `value` under `--json`.
    fn report(&mut self, text: &str, value: Value) {
        if self.json {
            let _ = writeln!(self.out, "{}", serde_json::to_string_pretty(&value).unwrap_or_default());
        } else {
            let _ = writeln!(self.out, "{text}");
        }
    }
}

/// Run one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let mut io = Io {
        out,
        err,
        json: cli.json,
    };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "{e}");
            if io.json {
                io.report("", json!({ "error": e.to_string() }));
            }
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> Result<i32, CliError> {
    match command {
        Command::Check { file } => check(&file, io),
        Command::Lts {
            file,
            explore,
            format,
            out,
        } => lts(&file, &explore, format, out.as_deref(), io),
        Command::Equiv {
            left,
            right,
            kind,
            k,
            explore,
        } => equiv_cmd(&left, &right, kind, k, &explore, io),
        Command::CompilePda {
            file,
            root,
            reachable_only: _,
            full,
            out,
        } => compile(&file, root, full, out.as_deref(), io),
        Command::Demo { name } => demo(name.as_deref(), io),
        Command::Version => {
            let v = env!("CARGO_PKG_VERSION");
            io.report(&format!("seqproc {v}"), json!({ "version": v }));
            Ok(EXIT_OK)
        }
    }
}

fn check(file: &Path, io: &mut Io) -> Result<i32, CliError> {
    let input = Input::load(file)?;
    let (text, value) = match &input {
        Input::Spec { spec, root } => {
            let report = check_guardedness(spec);
            if !report.guarded {
                let diagnostic = SemanticsError::Unguarded(report.offending_names.clone()).to_string();
                let _ = writeln!(io.err, "{}: {diagnostic}", file.display());
                if io.json {
                    io.report(
                        "",
                        json!({"file": file, "kind": "spec", "guarded": false, "offending": report.offending_names, "diagnostic": diagnostic}),
                    );
                }
                return Ok(EXIT_FAILURE);
            }
            let gnf = match root {
                Term::Name(n) => to_gnf_view(spec, n).is_ok(),
                _ => false,
            };
            (
                format!(
                    "{}: guarded spec, {} equations, root {root}{}",
                    file.display(),
                    spec.len(),
                    if gnf { ", GNF" } else { "" }
                ),
                json!({"file": file, "kind": "spec", "guarded": true, "equations": spec.len(), "root": root.to_string(), "gnf": gnf}),
            )
        }
        Input::Pda(pda) => {
            pda.validate()?;
            (
                format!(
                    "{}: valid PDA, {} states, {} transitions",
                    file.display(),
                    pda.states.len(),
                    pda.transitions.len()
                ),
                json!({"file": file, "kind": "pda", "states": pda.states.len(), "transitions": pda.transitions.len()}),
            )
        }
        Input::Rtm(rtm) => {
            rtm.validate()?;
            (
                format!(
                    "{}: valid RTM, {} states, {} transitions",
                    file.display(),
                    rtm.states.len(),
                    rtm.transitions.len()
                ),
                json!({"file": file, "kind": "rtm", "states": rtm.states.len(), "transitions": rtm.transitions.len()}),
            )
        }
        Input::Lts(lts) => (
            format!(
                "{}: valid LTS, {} states, {} transitions",
                file.display(),
                lts.len(),
                lts.transitions.len()
            ),
            json!({"file": file, "kind": "lts", "states": lts.len(), "transitions": lts.transitions.len()}),
        ),
    };
    io.report(&text, value);
    Ok(EXIT_OK)
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn lts(
    file: &Path,
    args: &ExploreArgs,
    format: ExportFormat,
    out: Option<&Path>,
    io: &mut Io,
) -> Result<i32, CliError> {
    let input = Input::load(file)?;
    let lts = input.explore(args.mode, args.limits(DEFAULT_DEPTH))?;
    let bytes = lts.export(format);
    let frontier = lts.states.iter().filter(|s| s.frontier).count();
    match out {
        Some(path) => {
            write_output(path, &bytes)?;
            io.report(
                &format!(
                    "wrote {} states, {} transitions ({frontier} frontier) to {}",
                    lts.len(),
                    lts.transitions.len(),
                    path.display()
                ),
                json!({"out": path, "states": lts.len(), "transitions": lts.transitions.len(), "frontier": frontier, "truncated": lts.truncated}),
            );
        }
        None => {
            let _ = io.out.write_all(&bytes);
        }
    }
    Ok(EXIT_OK)
}

fn min_frontier_depth(lts: &Lts) -> Option<usize> {
    lts.states.iter().filter(|s| s.frontier).map(|s| s.depth).min()
}

/// Strong bisimilarity; on truncated systems, the bounded game up to the
/// shallowest frontier state, which is exact for that many rounds.
fn strong_or_bounded(l: &Lts, r: &Lts) -> Result<EquivVerdict, EquivError> {
    match min_frontier_depth(l).into_iter().chain(min_frontier_depth(r)).min() {
        None => Ok(equiv::strong_bisim(l, r)),
        Some(k) => equiv::k_bisim(l, r, k),
    }
}

fn outcome_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Equivalent => EXIT_OK,
        Outcome::Inequivalent => EXIT_FAILURE,
        Outcome::HorizonLimited => EXIT_HORIZON,
    }
}

fn equiv_cmd(
    left: &Path,
    right: &Path,
    kind: KindArg,
    k: Option<usize>,
    args: &ExploreArgs,
    io: &mut Io,
) -> Result<i32, CliError> {
    let kind = match (kind, k) {
        (KindArg::K, None) => return Err(CliError::Usage("--kind k needs --k N".into())),
        (KindArg::K, Some(k)) => EquivKind::Bounded(k),
        (KindArg::Strong, _) => EquivKind::Strong,
        (KindArg::Branching, _) => EquivKind::Branching,
        (KindArg::DpBranching, _) => EquivKind::DpBranching,
        (KindArg::RootedBranching, _) => EquivKind::RootedBranching,
        (KindArg::RootedDp, _) => EquivKind::RootedDp,
    };
    let default_depth = match kind {
        EquivKind::Bounded(k) => k,
        _ => DEFAULT_DEPTH,
    };
    let limits = args.limits(default_depth);
    let l = Input::load(left)?.explore(args.mode, limits)?;
    let r = Input::load(right)?.explore(args.mode, limits)?;
    let verdict = match kind {
        EquivKind::Strong => strong_or_bounded(&l, &r)?,
        other => equiv::equivalent(&l, &r, other)?,
    };

    let mut text = vec![verdict.outcome.to_string()];
    text.push(format!("kind: {kind}, mode: {}", args.mode));
    text.push(format!("states: {} / {}", l.len(), r.len()));
    if let Some(note) = &verdict.note {
        text.push(format!("note: {note}"));
    }
    match &verdict.witness {
        Witness::Formula(f) => text.push(format!("distinguishing formula: {f}")),
        Witness::Obligation(o) => text.push(format!("obligation: {o}")),
        _ => {}
    }
    if verdict.skipped > 0 {
        text.push(format!("skipped obligations: {}", verdict.skipped));
    }
    io.report(
        &text.join("\n"),
        json!({
            "kind": kind.to_string(),
            "mode": args.mode.to_string(),
            "left": {"file": left, "states": l.len(), "frontier": l.has_frontier()},
            "right": {"file": right, "states": r.len(), "frontier": r.has_frontier()},
            "verdict": verdict.to_value(),
        }),
    );
    Ok(outcome_code(verdict.outcome))
}

fn compile(
    file: &Path,
    root: Option<String>,
    full: bool,
    out: Option<&Path>,
    io: &mut Io,
) -> Result<i32, CliError> {
    let Input::Spec { spec, root: spec_root } = Input::load(file)? else {
        return Err(CliError::input(file, "expected a specification"));
    };
    let root = match (root, spec_root) {
        (Some(r), _) => r,
        (None, Term::Name(n)) => n,
        (None, t) => {
            return Err(CliError::input(file, format!("root term {t} is not a name; pass --root")))
        }
    };
    if !check_guardedness(&spec).guarded {
        return Err(SemanticsError::Unguarded(check_guardedness(&spec).offending_names).into());
    }
    let gnf = to_gnf_view(&spec, &root).map_err(|e| CliError::input(file, e))?;
    let pda = compile_pda(&gnf, &root, !full)?;
    let text = pda.to_json();
    match out {
        Some(path) => {
            write_output(path, format!("{text}\n").as_bytes())?;
            io.report(
                &format!(
                    "wrote PDA with {} states, {} transitions to {}",
                    pda.states.len(),
                    pda.transitions.len(),
                    path.display()
                ),
                json!({"out": path, "states": pda.states.len(), "transitions": pda.transitions.len()}),
            );
        }
        None => {
            let _ = writeln!(io.out, "{text}");
        }
    }
    Ok(EXIT_OK)
}

fn demo(name: Option<&str>, io: &mut Io) -> Result<i32, CliError> {
    let Some(name) = name else {
        let manifest = experiments::manifest();
        let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&manifest).unwrap_or_default());
        return Ok(EXIT_OK);
    };
    let experiment = experiments::find(name).ok_or_else(|| {
        let names: Vec<&str> = experiments::EXPERIMENTS.iter().map(|e| e.name).collect();
        CliError::Usage(format!("unknown demo `{name}`; available: {}", names.join(", ")))
    })?;
    let report = experiment.run().map_err(CliError::Experiment)?;
    let status = if report.holds { "holds" } else { "FAILS" };
    let mut text = vec![format!("{}: {status}", experiment.name)];
    text.extend(report.lines.iter().map(|l| format!("  {l}")));
    io.report(
        &text.join("\n"),
        json!({"name": experiment.name, "holds": report.holds, "data": report.data}),
    );
    Ok(if report.holds { EXIT_OK } else { EXIT_FAILURE })
}
