//! The machine data model: labelled transition systems, recognizers and
//! Moore machines.
//!
//! A [`TransitionSystem`] is the shared substrate: a finite alphabet, a
//! finite state set, a designated initial state and a transition
//! *relation* (so nondeterminism is representable directly). A
//! [`Recognizer`] adds an accepting-state set; a [`MooreMachine`] adds a
//! total per-state output map.
//!
//! All values are immutable after construction and all operations are
//! pure, so everything here is safe to share across threads.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::Error;
use crate::name::{StateId, Symbol, Word};

/// One element of the transition relation: `from` steps to `to` on `label`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: StateId,
    pub label: Symbol,
    pub to: StateId,
}

/// A finite labelled transition system with a designated initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    alphabet: BTreeSet<Symbol>,
    states: BTreeSet<StateId>,
    initial: StateId,
    transitions: BTreeSet<Transition>,
}

impl TransitionSystem {
    /// Builds a transition system, checking that the initial state is
    /// declared, that every transition endpoint is a declared state and
    /// that every label is in the alphabet.
    pub fn new(
        alphabet: impl IntoIterator<Item = Symbol>,
        states: impl IntoIterator<Item = StateId>,
        initial: StateId,
        transitions: impl IntoIterator<Item = (StateId, Symbol, StateId)>,
    ) -> Result<Self, Error> {
        let alphabet: BTreeSet<Symbol> = alphabet.into_iter().collect();
        let states: BTreeSet<StateId> = states.into_iter().collect();
        if !states.contains(&initial) {
            return Err(Error::UnknownState { state: initial.to_string() });
        }
        let mut set = BTreeSet::new();
        for (from, label, to) in transitions {
            if !states.contains(&from) {
                return Err(Error::UnknownState { state: from.to_string() });
            }
            if !states.contains(&to) {
                return Err(Error::UnknownState { state: to.to_string() });
            }
            if !alphabet.contains(&label) {
                return Err(Error::UnknownSymbol { symbol: label.to_string() });
            }
            set.insert(Transition { from, label, to });
        }
        Ok(TransitionSystem { alphabet, states, initial, transitions: set })
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn initial(&self) -> &StateId {
        &self.initial
    }

    pub fn transitions(&self) -> impl Iterator<Item = &Transition> {
        self.transitions.iter()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn has_transition(&self, from: &StateId, label: &Symbol, to: &StateId) -> bool {
        self.transitions.contains(&Transition {
            from: from.clone(),
            label: label.clone(),
            to: to.clone(),
        })
    }

    /// The states reachable from `from` in one `label`-step.
    pub fn successors<'a>(
        &'a self,
        from: &'a StateId,
        label: &'a Symbol,
    ) -> impl Iterator<Item = &'a StateId> {
        self.transitions
            .iter()
            .filter(move |t| &t.from == from && &t.label == label)
            .map(|t| &t.to)
    }

    /// The smallest state set containing the initial state and closed
    /// under the transition relation.
    pub fn reachable(&self) -> BTreeSet<StateId> {
        let mut seen: BTreeSet<StateId> = BTreeSet::new();
        seen.insert(self.initial.clone());
        let mut queue: VecDeque<StateId> = VecDeque::new();
        queue.push_back(self.initial.clone());
        while let Some(state) = queue.pop_front() {
            for t in self.transitions.iter().filter(|t| t.from == state) {
                if seen.insert(t.to.clone()) {
                    queue.push_back(t.to.clone());
                }
            }
        }
        seen
    }

    /// True when no state has two distinct successors on the same symbol.
    pub fn is_deterministic(&self) -> bool {
        self.first_nondeterminism().is_none()
    }

    /// Returns a witness `(state, symbol)` pair with two successors, if any.
    pub(crate) fn first_nondeterminism(&self) -> Option<(StateId, Symbol)> {
        let mut prev: Option<&Transition> = None;
        for t in &self.transitions {
            if let Some(p) = prev {
                if p.from == t.from && p.label == t.label {
                    return Some((t.from.clone(), t.label.clone()));
                }
            }
            prev = Some(t);
        }
        None
    }

    /// True when the transition relation is a total function on
    /// states × alphabet (which implies determinism).
    pub fn is_complete(&self) -> bool {
        if !self.is_deterministic() {
            return false;
        }
        self.transitions.len() == self.states.len() * self.alphabet.len()
    }
}

/// A recognizer: a transition system plus a set of accepting states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recognizer {
    ts: TransitionSystem,
    accepting: BTreeSet<StateId>,
}

impl Recognizer {
    /// Builds a recognizer, checking `accepting ⊆ states`.
    pub fn new(
        ts: TransitionSystem,
        accepting: impl IntoIterator<Item = StateId>,
    ) -> Result<Self, Error> {
        let accepting: BTreeSet<StateId> = accepting.into_iter().collect();
        for s in &accepting {
            if !ts.states().contains(s) {
                return Err(Error::UnknownState { state: s.to_string() });
            }
        }
        Ok(Recognizer { ts, accepting })
    }

    pub fn ts(&self) -> &TransitionSystem {
        &self.ts
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn is_accepting(&self, s: &StateId) -> bool {
        self.accepting.contains(s)
    }

    /// True iff some run of `word` from the initial state ends in an
    /// accepting state. Errors when the word uses a symbol outside the
    /// alphabet.
    pub fn accepts(&self, word: &Word) -> Result<bool, Error> {
        let mut current: BTreeSet<&StateId> = BTreeSet::new();
        current.insert(self.ts.initial());
        for symbol in word {
            if !self.ts.alphabet().contains(symbol) {
                return Err(Error::AlphabetMismatch {
                    detail: format!("word symbol `{symbol}` is not in the alphabet"),
                });
            }
            let mut next: BTreeSet<&StateId> = BTreeSet::new();
            for state in current {
                next.extend(self.ts.successors(state, symbol));
            }
            current = next;
            if current.is_empty() {
                return Ok(false);
            }
        }
        Ok(current.iter().any(|s| self.accepting.contains(*s)))
    }
}

/// The kind of value a Moore machine outputs, one kind per machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputKind {
    /// A Boolean, e.g. the accept bit of a recognizer.
    Flag,
    /// A finite set of symbols, e.g. the enabled actions of a state.
    Symbols,
    /// An opaque token, e.g. the rendered output tuple of a product.
    Token,
}

impl OutputKind {
    pub fn name(self) -> &'static str {
        match self {
            OutputKind::Flag => "flag",
            OutputKind::Symbols => "symbol-set",
            OutputKind::Token => "token",
        }
    }
}

/// A single output value. Values of different kinds never compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputValue {
    Flag(bool),
    Symbols(BTreeSet<Symbol>),
    Token(String),
}

impl OutputValue {
    pub fn kind(&self) -> OutputKind {
        match self {
            OutputValue::Flag(_) => OutputKind::Flag,
            OutputValue::Symbols(_) => OutputKind::Symbols,
            OutputValue::Token(_) => OutputKind::Token,
        }
    }
}

impl fmt::Display for OutputValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputValue::Flag(b) => write!(f, "{b}"),
            OutputValue::Symbols(set) => {
                let names: Vec<&str> = set.iter().map(|s| s.as_str()).collect();
                write!(f, "{{{}}}", names.join(","))
            }
            OutputValue::Token(t) => f.write_str(t),
        }
    }
}

/// A Moore machine: a transition system plus a total output map. The
/// transition relation may be nondeterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreMachine {
    ts: TransitionSystem,
    kind: OutputKind,
    outputs: BTreeMap<StateId, OutputValue>,
}

impl MooreMachine {
    /// Builds a Moore machine, checking that the output map is total on
    /// the states, mentions no others, and uses a single output kind.
    pub fn new(
        ts: TransitionSystem,
        outputs: impl IntoIterator<Item = (StateId, OutputValue)>,
    ) -> Result<Self, Error> {
        let outputs: BTreeMap<StateId, OutputValue> = outputs.into_iter().collect();
        for s in outputs.keys() {
            if !ts.states().contains(s) {
                return Err(Error::UnknownState { state: s.to_string() });
            }
        }
        for s in ts.states() {
            if !outputs.contains_key(s) {
                return Err(Error::MissingOutput { state: s.to_string() });
            }
        }
        let mut kinds = outputs.values().map(OutputValue::kind);
        let kind = kinds.next().expect("a machine has at least its initial state");
        if kinds.any(|k| k != kind) {
            return Err(Error::MixedOutputKinds);
        }
        Ok(MooreMachine { ts, kind, outputs })
    }

    pub fn ts(&self) -> &TransitionSystem {
        &self.ts
    }

    pub fn kind(&self) -> OutputKind {
        self.kind
    }

    pub fn output(&self, s: &StateId) -> Option<&OutputValue> {
        self.outputs.get(s)
    }

    pub fn outputs(&self) -> &BTreeMap<StateId, OutputValue> {
        &self.outputs
    }
}
