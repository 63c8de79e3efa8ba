//! The general product of Moore machines and the button-press experiment
//! semantics built on top of it.
//!
//! A [`ProductSpec`] wires components together through per-component
//! connection functions: on each global input, every component is told —
//! as a function of the global input and the current output tuple — which
//! local action to take, or to idle. A directed component that cannot
//! perform its action blocks the whole global transition, which is what
//! makes deadlocks observable in the product.

mod experiment;

pub use experiment::{experiment, make_experimenter, ExperimentOutcome};

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Error;
use crate::index::Dense;
use crate::machine::{MooreMachine, OutputKind, OutputValue};
use crate::name::{StateId, Symbol, Word};

/// What a connection function tells one component to do on a global input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    /// Stay in the current state.
    Idle,
    /// Perform the given local action.
    Apply(Symbol),
}

/// A connection function: sees the global input and the current tuple of
/// component outputs, returns the component's directive.
pub type Connection = Arc<dyn Fn(&Symbol, &[OutputValue]) -> Directive + Send + Sync>;

/// A general product: components, a global alphabet, and one connection
/// function per component.
pub struct ProductSpec {
    components: Vec<MooreMachine>,
    global_alphabet: BTreeSet<Symbol>,
    connections: Vec<Connection>,
}

impl ProductSpec {
    pub fn new(
        components: Vec<MooreMachine>,
        global_alphabet: BTreeSet<Symbol>,
        connections: Vec<Connection>,
    ) -> Result<Self, Error> {
        if components.is_empty() {
            return Err(Error::InvalidProduct { detail: "at least one component is required".into() });
        }
        if components.len() != connections.len() {
            return Err(Error::InvalidProduct {
                detail: format!(
                    "{} components but {} connections",
                    components.len(),
                    connections.len()
                ),
            });
        }
        Ok(ProductSpec { components, global_alphabet, connections })
    }

    /// A single component wired straight through: the global alphabet is
    /// the component's and every global input is applied unchanged.
    pub fn identity(component: MooreMachine) -> Self {
        let global = component.ts().alphabet().clone();
        let pass: Connection = Arc::new(|g, _| Directive::Apply(g.clone()));
        ProductSpec { components: vec![component], global_alphabet: global, connections: vec![pass] }
    }

    /// Wires a process to the experimenter for `presses`. The global
    /// alphabet is the single symbol `press`; on every press both
    /// components are directed to the button the experimenter currently
    /// wants, and both idle once the press word is exhausted.
    pub fn experimenter(process: MooreMachine, presses: &Word) -> Result<Self, Error> {
        if process.kind() != OutputKind::Symbols {
            return Err(Error::OutputKindMismatch {
                left: process.kind().name(),
                right: OutputKind::Symbols.name(),
            });
        }
        let tester = make_experimenter(presses, process.ts().alphabet())?;
        let global: BTreeSet<Symbol> =
            [Symbol::new("press").expect("static name")].into_iter().collect();
        let follow_wanted = || -> Connection {
            Arc::new(|_, outputs: &[OutputValue]| match &outputs[1] {
                OutputValue::Symbols(wanted) if wanted.len() == 1 => {
                    Directive::Apply(wanted.first().expect("nonempty").clone())
                }
                _ => Directive::Idle,
            })
        };
        Ok(ProductSpec {
            components: vec![process, tester],
            global_alphabet: global,
            connections: vec![follow_wanted(), follow_wanted()],
        })
    }

    /// Label-synchronized wiring: the global alphabet is the union of the
    /// component alphabets; on global input g, every component whose
    /// alphabet contains g steps on g and the rest idle. A sharing
    /// component that cannot step blocks the transition.
    pub fn synchronized(components: Vec<MooreMachine>) -> Result<Self, Error> {
        if components.is_empty() {
            return Err(Error::InvalidProduct { detail: "at least one component is required".into() });
        }
        let global: BTreeSet<Symbol> =
            components.iter().flat_map(|c| c.ts().alphabet().iter().cloned()).collect();
        let connections: Vec<Connection> = components
            .iter()
            .map(|c| {
                let local = c.ts().alphabet().clone();
                let conn: Connection = Arc::new(move |g, _| {
                    if local.contains(g) {
                        Directive::Apply(g.clone())
                    } else {
                        Directive::Idle
                    }
                });
                conn
            })
            .collect();
        Ok(ProductSpec { components, global_alphabet: global, connections })
    }

    pub fn components(&self) -> &[MooreMachine] {
        &self.components
    }

    pub fn global_alphabet(&self) -> &BTreeSet<Symbol> {
        &self.global_alphabet
    }
}

/// Frontiers at least this large are expanded in parallel.
#[cfg(feature = "parallel")]
const PAR_FRONTIER_MIN: usize = 64;

/// A product state: one component-state index per component.
type Tuple = Vec<usize>;
/// Per global symbol, the successor tuples it leads to.
type Moves = Vec<(usize, Vec<Tuple>)>;

/// Builds the general product: states are the tuples reachable from the
/// tuple of initial states, a tuple outputs the rendered tuple of
/// component outputs (an opaque token), and a global transition exists
/// exactly when every directed component can perform its directive —
/// nondeterministic component choices multiply. Tuple states are named
/// `(s|t|…)`, so the construction order cannot influence the result.
pub fn general_product(spec: &ProductSpec) -> Result<MooreMachine, Error> {
    let dense: Vec<Dense> = spec.components.iter().map(|c| Dense::new(c.ts())).collect();
    let outputs_by_state: Vec<Vec<&OutputValue>> = spec
        .components
        .iter()
        .zip(&dense)
        .map(|(c, d)| d.states.iter().map(|s| c.output(s).expect("total outputs")).collect())
        .collect();
    let globals: Vec<Symbol> = spec.global_alphabet.iter().cloned().collect();

    let initial: Tuple = dense.iter().map(|d| d.initial).collect();
    let mut visited: BTreeSet<Tuple> = BTreeSet::new();
    visited.insert(initial.clone());
    let mut frontier: Vec<Tuple> = vec![initial.clone()];
    let mut edges: BTreeSet<(Tuple, usize, Tuple)> = BTreeSet::new();

    let expand = |tuple: &Tuple| -> Result<Moves, Error> {
        let outs: Vec<OutputValue> = tuple
            .iter()
            .enumerate()
            .map(|(i, &s)| outputs_by_state[i][s].clone())
            .collect();
        let mut moves = Vec::new();
        'globals: for (g_idx, g) in globals.iter().enumerate() {
            // Per component: the list of possible next states, or a block.
            let mut choices: Vec<Vec<usize>> = Vec::with_capacity(tuple.len());
            for (i, &s) in tuple.iter().enumerate() {
                match (spec.connections[i])(g, &outs) {
                    Directive::Idle => choices.push(vec![s]),
                    Directive::Apply(x) => {
                        let x_idx = dense[i].symbol_of(&x).ok_or_else(|| Error::ConnectionRange {
                            component: i,
                            symbol: x.to_string(),
                        })?;
                        let succ = &dense[i].succ[s][x_idx];
                        if succ.is_empty() {
                            continue 'globals; // blocked: the global step is absent
                        }
                        choices.push(succ.clone());
                    }
                }
            }
            moves.push((g_idx, cartesian(&choices)));
        }
        Ok(moves)
    };

    while !frontier.is_empty() {
        let expanded: Vec<(Tuple, Moves)> = {
            #[cfg(feature = "parallel")]
            {
                if frontier.len() >= PAR_FRONTIER_MIN {
                    frontier
                        .par_iter()
                        .map(|t| Ok((t.clone(), expand(t)?)))
                        .collect::<Result<Vec<_>, Error>>()?
                } else {
                    frontier
                        .iter()
                        .map(|t| Ok((t.clone(), expand(t)?)))
                        .collect::<Result<Vec<_>, Error>>()?
                }
            }
            #[cfg(not(feature = "parallel"))]
            {
                frontier
                    .iter()
                    .map(|t| Ok((t.clone(), expand(t)?)))
                    .collect::<Result<Vec<_>, Error>>()?
            }
        };

        let mut next: Vec<Tuple> = Vec::new();
        for (tuple, moves) in expanded {
            for (g_idx, targets) in moves {
                for target in targets {
                    if visited.insert(target.clone()) {
                        next.push(target.clone());
                    }
                    edges.insert((tuple.clone(), g_idx, target));
                }
            }
        }
        next.sort();
        frontier = next;
    }

    let tuple_name = |tuple: &[usize]| -> StateId {
        let parts: Vec<&str> =
            tuple.iter().enumerate().map(|(i, &s)| dense[i].states[s].as_str()).collect();
        StateId::synthetic(format!("({})", parts.join("|")))
    };
    let names: BTreeMap<&Tuple, StateId> =
        visited.iter().map(|t| (t, tuple_name(t))).collect();

    let ts = crate::machine::TransitionSystem::new(
        globals.iter().cloned(),
        names.values().cloned(),
        names[&initial].clone(),
        edges.iter().map(|(from, g, to)| {
            (names[from].clone(), globals[*g].clone(), names[to].clone())
        }),
    )
    .expect("product is well-formed");
    let outputs: Vec<(StateId, OutputValue)> = visited
        .iter()
        .map(|tuple| {
            let rendered: Vec<String> = tuple
                .iter()
                .enumerate()
                .map(|(i, &s)| outputs_by_state[i][s].to_string())
                .collect();
            (names[tuple].clone(), OutputValue::Token(format!("({})", rendered.join("|"))))
        })
        .collect();
    Ok(MooreMachine::new(ts, outputs).expect("tuple outputs are total"))
}

/// All combinations of one choice per component, in lexicographic order.
fn cartesian(choices: &[Vec<usize>]) -> Vec<Tuple> {
    let mut out: Vec<Tuple> = vec![Vec::new()];
    for options in choices {
        let mut grown = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for &opt in options {
                let mut next = prefix.clone();
                next.push(opt);
                grown.push(next);
            }
        }
        out = grown;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::lts_to_moore;
    use crate::iso::isomorphism_moore;
    use crate::machine::TransitionSystem;
    use crate::testutil::{paper_a, paper_b, state, sym, word};

    /// Rewraps a machine's outputs as singleton tuple tokens, which is
    /// what the product does to a single component.
    fn tokenized(m: &MooreMachine) -> MooreMachine {
        let outputs: Vec<_> = m
            .outputs()
            .iter()
            .map(|(s, v)| (s.clone(), OutputValue::Token(format!("({v})"))))
            .collect();
        MooreMachine::new(m.ts().clone(), outputs).unwrap()
    }

    #[test]
    fn identity_wiring_reproduces_the_component() {
        for r in [paper_a(), paper_b()] {
            let component = lts_to_moore(r.ts());
            let product = general_product(&ProductSpec::identity(component.clone())).unwrap();
            assert!(isomorphism_moore(&tokenized(&component), &product).is_some());
        }
    }

    #[test]
    fn experimenter_product_contains_the_blocked_tuple() {
        let process = lts_to_moore(paper_b().ts());
        let spec = ProductSpec::experimenter(process, &word("ab")).unwrap();
        let product = general_product(&spec).unwrap();

        // The tuple that took the wrong a-branch is reachable and has no
        // outgoing press: the experimenter wants b but B1x only offers c.
        let blocked = state_named(&product, "(B1x|e1)");
        let press = sym("press");
        assert_eq!(product.ts().successors(&blocked, &press).count(), 0);

        // The successful branch runs to completion and then self-loops.
        let done = state_named(&product, "(B2|e2)");
        let succ: Vec<_> = product.ts().successors(&done, &press).cloned().collect();
        assert_eq!(succ, std::slice::from_ref(&done));
    }

    fn state_named(m: &MooreMachine, name: &str) -> StateId {
        m.ts()
            .states()
            .iter()
            .find(|s| s.as_str() == name)
            .unwrap_or_else(|| panic!("missing state {name}"))
            .clone()
    }

    #[test]
    fn state_count_is_bounded_by_the_tuple_space() {
        let a = lts_to_moore(paper_a().ts());
        let b = lts_to_moore(paper_b().ts());
        let bound = a.ts().states().len() * b.ts().states().len();
        let spec = ProductSpec::synchronized(vec![a, b]).unwrap();
        let product = general_product(&spec).unwrap();
        assert!(product.ts().states().len() <= bound);
    }

    #[test]
    fn synchronized_wiring_blocks_on_any_sharing_component() {
        // Both components share the whole alphabet; they can only step
        // together, so the product follows the intersection of behaviours.
        let a = lts_to_moore(paper_a().ts());
        let b = lts_to_moore(paper_b().ts());
        let spec = ProductSpec::synchronized(vec![a, b]).unwrap();
        let product = general_product(&spec).unwrap();
        // After pressing a the pair (A1, B1) can still do b, but c is
        // blocked for (A1, B1) since B1 has no c.
        let t = state_named(&product, "(A1|B1)");
        assert_eq!(product.ts().successors(&t, &sym("b")).count(), 1);
        assert_eq!(product.ts().successors(&t, &sym("c")).count(), 0);
    }

    #[test]
    fn connection_range_errors_are_reported() {
        let component = lts_to_moore(paper_a().ts());
        let rogue: Connection = Arc::new(|_, _| Directive::Apply(sym("zz")));
        let spec = ProductSpec::new(
            vec![component],
            [sym("go")].into_iter().collect(),
            vec![rogue],
        )
        .unwrap();
        assert!(matches!(
            general_product(&spec),
            Err(Error::ConnectionRange { component: 0, .. })
        ));
    }

    #[test]
    fn product_spec_validation() {
        assert!(matches!(
            ProductSpec::new(vec![], BTreeSet::new(), vec![]),
            Err(Error::InvalidProduct { .. })
        ));
        let component = lts_to_moore(paper_a().ts());
        assert!(matches!(
            ProductSpec::new(vec![component], BTreeSet::new(), vec![]),
            Err(Error::InvalidProduct { .. })
        ));
    }

    #[test]
    fn experimenter_wiring_needs_set_valued_outputs() {
        let flags = crate::encode::recognizer_to_moore(&paper_a());
        assert!(matches!(
            ProductSpec::experimenter(flags, &word("ab")),
            Err(Error::OutputKindMismatch { .. })
        ));
    }

    #[test]
    fn nondeterminism_multiplies_choices() {
        let ts = TransitionSystem::new(
            [sym("a")],
            [state("u"), state("v"), state("w")],
            state("u"),
            [(state("u"), sym("a"), state("v")), (state("u"), sym("a"), state("w"))],
        )
        .unwrap();
        let m = lts_to_moore(&ts);
        let spec = ProductSpec::synchronized(vec![m.clone(), m]).unwrap();
        let product = general_product(&spec).unwrap();
        let initial = product.ts().initial().clone();
        assert_eq!(product.ts().successors(&initial, &sym("a")).count(), 4);
    }
}
