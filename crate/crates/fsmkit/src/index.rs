//! A compact index-based view of a transition system, used internally by
//! the algorithms. States and symbols are numbered in name order, so every
//! construction that walks a `Dense` view in index order is deterministic.

use std::collections::BTreeMap;

use crate::machine::TransitionSystem;
use crate::name::{StateId, Symbol};

pub(crate) struct Dense {
    pub states: Vec<StateId>,
    pub symbols: Vec<Symbol>,
    pub initial: usize,
    /// `succ[s][x]` is the sorted list of x-successors of state s.
    pub succ: Vec<Vec<Vec<usize>>>,
    state_index: BTreeMap<StateId, usize>,
    symbol_index: BTreeMap<Symbol, usize>,
}

impl Dense {
    pub fn new(ts: &TransitionSystem) -> Self {
        let states: Vec<StateId> = ts.states().iter().cloned().collect();
        let symbols: Vec<Symbol> = ts.alphabet().iter().cloned().collect();
        let state_index: BTreeMap<StateId, usize> =
            states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let symbol_index: BTreeMap<Symbol, usize> =
            symbols.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut succ = vec![vec![Vec::new(); symbols.len()]; states.len()];
        for t in ts.transitions() {
            let from = state_index[&t.from];
            let label = symbol_index[&t.label];
            let to = state_index[&t.to];
            succ[from][label].push(to);
        }
        // BTreeSet iteration already yields (from, label, to) in order, so
        // each successor list is sorted and duplicate-free.
        let initial = state_index[ts.initial()];
        Dense { states, symbols, initial, succ, state_index, symbol_index }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn state_of(&self, id: &StateId) -> Option<usize> {
        self.state_index.get(id).copied()
    }

    pub fn symbol_of(&self, s: &Symbol) -> Option<usize> {
        self.symbol_index.get(s).copied()
    }
}
