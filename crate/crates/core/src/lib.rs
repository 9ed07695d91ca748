//! Abstract numeration systems on regular languages.
//!
//! A numeration system `S = (L, Σ, <)` identifies the natural numbers with the
//! words of an infinite regular language `L`, enumerated in shortlex order
//! (shorter words first, ties broken by the alphabet order). Feeding those
//! representations to a deterministic automaton with output produces an
//! *S-automatic sequence*. This crate provides:
//!
//! * [`automaton`]: ordered alphabets, partial DFAs and DFAOs, products,
//!   minimization, DFAO reduction and language equivalence;
//! * [`numeration`]: exact rank/unrank (`val`/`rep`) and lazy shortlex
//!   enumeration backed by arbitrary-precision word counts;
//! * [`automatic`]: S-automatic sequences, fibers, kernels and the two
//!   reconstructions of a DFAO (from fibers, from a term oracle);
//! * [`substitution`]: morphisms, fixed points, the state-sequence morphism
//!   and the substitution generating any S-automatic sequence;
//! * [`complexity`]: factor complexity profiles and growth checks;
//! * [`catalog`]: ready-made systems and machines used throughout the tests.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod alphabet;
pub mod automatic;
pub mod automaton;
pub mod catalog;
pub mod complexity;
mod error;
pub mod numeration;
mod refine;
pub mod substitution;

pub use alphabet::{Letter, OrderedAlphabet, Word};

pub use automatic::{AutomaticSequence, Kernel, KernelClass};
pub use automaton::{Dfa, Dfao, Output, ProductAutomaton, StateId, TransitionTable};
pub use error::{Error, Result};
pub use numeration::{NumerationSystem, Rank};
pub use substitution::{Morphism, Substitution};

/// Spelling of the empty word in all textual I/O.
pub const EPSILON_TOKEN: &str = "@eps";
/// Placeholder output of states whose output does not matter.
pub const BOTTOM_TOKEN: &str = "⊥";
/// Prefix reserved for letters minted by the constructions of this crate.
pub const FRESH_PREFIX: &str = "%";
