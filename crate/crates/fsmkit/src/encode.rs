//! Encodings of transition systems and recognizers as Moore machines.
//!
//! The enabled-actions encoding attaches to each state the set of action
//! symbols it can perform — the unlocked buttons of that state. The
//! accept-bit encoding attaches the Boolean accepting flag. Both preserve
//! the transition relation verbatim, nondeterminism included.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::machine::{MooreMachine, OutputValue, Recognizer, TransitionSystem};
use crate::name::{StateId, Symbol};

/// The labels of the transitions leaving `s`: exactly the actions enabled
/// in that state. Errors when `s` is not a state of `ts`.
pub fn enabled_actions(ts: &TransitionSystem, s: &StateId) -> Result<BTreeSet<Symbol>, Error> {
    if !ts.states().contains(s) {
        return Err(Error::UnknownState { state: s.to_string() });
    }
    Ok(ts.transitions().filter(|t| &t.from == s).map(|t| t.label.clone()).collect())
}

/// Attaches the enabled-actions output map to a transition system.
pub fn lts_to_moore(ts: &TransitionSystem) -> MooreMachine {
    let outputs = ts.states().iter().map(|s| {
        let enabled = enabled_actions(ts, s).expect("state comes from the system itself");
        (s.clone(), OutputValue::Symbols(enabled))
    });
    let outputs: Vec<_> = outputs.collect();
    MooreMachine::new(ts.clone(), outputs).expect("outputs are total by construction")
}

/// Attaches the accept-bit output map to a recognizer.
pub fn recognizer_to_moore(r: &Recognizer) -> MooreMachine {
    let outputs: Vec<_> = r
        .ts()
        .states()
        .iter()
        .map(|s| (s.clone(), OutputValue::Flag(r.is_accepting(s))))
        .collect();
    MooreMachine::new(r.ts().clone(), outputs).expect("outputs are total by construction")
}
