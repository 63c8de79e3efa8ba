//! A toolkit for classical state machines: recognizers (DFAs and NFAs),
//! Moore machines, and the relations between them.
//!
//! The crate covers three layers:
//!
//! - **Language constructions** ([`lang`], [`regex`]): subset-construction
//!   determinization, completion, Hopcroft minimization, language
//!   equivalence with shortest counterexamples, and conversions between
//!   rational expressions and machines.
//! - **Behavioural equivalences** ([`equiv`], [`encode`]): output-respecting
//!   simulation, Ginzburg-style covering and covering equivalence, strong
//!   bisimulation via partition refinement, and bisimulation quotients.
//!   Recognizers are observed through their accept bit; the
//!   enabled-actions encoding turns any transition system into a Moore
//!   machine whose outputs say which buttons are unlocked in each state.
//! - **Composition** ([`compose`]): the general product of Moore machines
//!   with per-component connection functions, and button-press experiment
//!   semantics — both directly and through a reified experimenter machine.
//!
//! Machines parse from and serialize to a small text format, and render
//! to DOT ([`mod@format`]).
//!
//! ```
//! use fsmkit::format;
//! use fsmkit::lang::{language_equivalent, LanguageVerdict};
//! use fsmkit::equiv::{bisimilar, ObservedSystem};
//!
//! let doc = format::parse(
//!     "machine A {
//!        alphabet: a, b, c;
//!        states: A0, A1, A2, A3;
//!        initial: A0;
//!        accepting: A2;
//!        A0 - a -> A1;
//!        A1 - b -> A2;
//!        A1 - c -> A3;
//!      }
//!      machine B {
//!        alphabet: a, b, c;
//!        states: B0, B1, B1x, B2, B3;
//!        initial: B0;
//!        accepting: B2;
//!        B0 - a -> B1;
//!        B0 - a -> B1x;
//!        B1 - b -> B2;
//!        B1x - c -> B3;
//!      }",
//! )?;
//! let a = doc.get("A").unwrap().as_recognizer().unwrap();
//! let b = doc.get("B").unwrap().as_recognizer().unwrap();
//!
//! // Same language, yet not bisimilar: the machines differ behaviourally.
//! assert!(matches!(language_equivalent(a, b)?, LanguageVerdict::Equivalent));
//! let verdict = bisimilar(&ObservedSystem::from(a), &ObservedSystem::from(b))?;
//! assert!(!verdict.is_bisimilar());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! With the default `parallel` feature, the simulation fixpoint, the
//! bisimulation refinement rounds and the product frontier expansion use
//! rayon on large inputs; results are identical to the sequential paths,
//! which `--no-default-features` selects unconditionally.

pub mod compose;
pub mod encode;
pub mod equiv;
pub mod error;
pub mod format;
pub mod gen;
pub mod iso;
pub mod lang;
pub mod machine;
pub mod name;
pub mod regex;

mod index;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, ParseError};
pub use machine::{
    MooreMachine, OutputKind, OutputValue, Recognizer, Transition, TransitionSystem,
};
pub use name::{StateId, Symbol, Word};
