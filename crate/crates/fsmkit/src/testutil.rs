//! Shared fixtures for unit tests.

use crate::machine::{Recognizer, TransitionSystem};
use crate::name::{StateId, Symbol, Word};

pub(crate) fn sym(name: &str) -> Symbol {
    Symbol::new(name).unwrap()
}

pub(crate) fn state(name: &str) -> StateId {
    StateId::new(name).unwrap()
}

pub(crate) fn word(text: &str) -> Word {
    Word::new(text.chars().map(|c| sym(&c.to_string())))
}

fn recognizer(
    alphabet: &[&str],
    states: &[&str],
    initial: &str,
    transitions: &[(&str, &str, &str)],
    accepting: &[&str],
) -> Recognizer {
    let ts = TransitionSystem::new(
        alphabet.iter().map(|s| sym(s)),
        states.iter().map(|s| state(s)),
        state(initial),
        transitions.iter().map(|(f, x, t)| (state(f), sym(x), state(t))),
    )
    .unwrap();
    Recognizer::new(ts, accepting.iter().map(|s| state(s))).unwrap()
}

/// The deterministic recognizer A: one `a`-branch that then offers both
/// `b` and `c`, accepting after `ab`.
pub(crate) fn paper_a() -> Recognizer {
    recognizer(
        &["a", "b", "c"],
        &["A0", "A1", "A2", "A3"],
        "A0",
        &[("A0", "a", "A1"), ("A1", "b", "A2"), ("A1", "c", "A3")],
        &["A2"],
    )
}

/// The nondeterministic recognizer B: two `a`-branches, one offering only
/// `b` and one offering only `c`, accepting after `ab`. Same language as A.
pub(crate) fn paper_b() -> Recognizer {
    recognizer(
        &["a", "b", "c"],
        &["B0", "B1", "B1x", "B2", "B3"],
        "B0",
        &[
            ("B0", "a", "B1"),
            ("B0", "a", "B1x"),
            ("B1", "b", "B2"),
            ("B1x", "c", "B3"),
        ],
        &["B2"],
    )
}

/// Covering-equivalent to [`sim_eq_2`] but not bisimilar to it: the extra
/// dead `a`-branch is simulated away yet splits the bisimulation.
pub(crate) fn sim_eq_1() -> Recognizer {
    recognizer(
        &["a", "b"],
        &["s0", "s1", "s2", "s3"],
        "s0",
        &[("s0", "a", "s1"), ("s1", "b", "s2"), ("s0", "a", "s3")],
        &[],
    )
}

pub(crate) fn sim_eq_2() -> Recognizer {
    recognizer(
        &["a", "b"],
        &["t0", "t1", "t2"],
        "t0",
        &[("t0", "a", "t1"), ("t1", "b", "t2")],
        &[],
    )
}
