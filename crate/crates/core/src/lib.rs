//! Finite automata recognizing greedy representations of multiples of `m`
//! in linear numeration systems.
//!
//! The crate is organised bottom-up:
//!
//! - [`numeration`]: exact term generation, greedy representations and
//!   residue periodicity of a linear numeration system.
//! - [`automata`]: a small kernel for partial DFAs and NFAs over digit
//!   alphabets (trim, minimize, reverse, determinize, product, SCCs, DOT).
//! - [`numlang`]: the automaton of the numeration language itself (presets,
//!   Bertrand/Parry builder) and checks of its structural hypotheses.
//! - [`divisibility`]: Hankel analysis modulo `m`, the two constructions of
//!   the divisibility automaton, and the verification harness that compares
//!   the predicted state count with the constructed one.
//! - [`catalog`]: system definition files and preset lookup.

pub mod automata;
pub mod catalog;
pub mod divisibility;
mod error;
pub mod numeration;
pub mod numlang;
pub mod oracle;

pub use automata::{Dfa, Nfa, SccDecomposition, StateId};
pub use error::{Error, Result};
pub use numeration::{Digit, NumerationSystem, ResiduePeriod, Word};
