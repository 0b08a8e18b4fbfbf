//! Workbench for a sequential process calculus with standard and revised
//! sequential composition: SOS engine, state-space exploration, bisimulation
//! checking, a GNF-to-PDA compiler, reactive Turing machines and encodings.

pub mod automata;
pub mod cli;
pub mod encodings;
pub mod equiv;
pub mod experiments;
pub mod lts;
pub mod semantics;
pub mod syntax;

pub use lts::{explore, explore_term, explore_window, ExploreLimits, Lts, StateSpace};
pub use semantics::{Engine, Mode, Transition};
pub use syntax::{parse_spec, render_term, Action, RecursiveSpec, Term};
