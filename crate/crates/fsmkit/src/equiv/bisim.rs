//! Strong bisimulation via partition refinement, and the bisimulation
//! quotient.
//!
//! The refinement is signature-based: starting from the output classes,
//! every round recolors each state by its current block together with the
//! set of (symbol, successor block) pairs it can reach, until the block
//! count stops growing. Each round's signatures are independent per
//! state, which is the data-parallel kernel used under the `parallel`
//! feature; block numbering comes from sorting the signatures, so both
//! paths produce identical partitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Error;
use crate::index::Dense;
use crate::machine::MooreMachine;
use crate::name::{set_name, StateId};

use super::{check_comparable, ObservedSystem};

/// Systems at least this large are refined with parallel signature rounds.
#[cfg(feature = "parallel")]
const PAR_STATES_MIN: usize = 1 << 10;

/// Which of the two compared systems a state belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

/// A stable partition of the disjoint union of two systems' states: block
/// mates share an output value, and block mates can match each other's
/// moves into a common block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisimulationPartition {
    blocks: Vec<BTreeSet<(Side, StateId)>>,
}

impl BisimulationPartition {
    pub fn blocks(&self) -> &[BTreeSet<(Side, StateId)>] {
        &self.blocks
    }

    /// The index of the block holding the given state, if any.
    pub fn block_of(&self, side: Side, state: &StateId) -> Option<usize> {
        let key = (side, state.clone());
        self.blocks.iter().position(|b| b.contains(&key))
    }
}

/// The verdict of a bisimilarity check. Both variants carry the stable
/// partition: it is the witness when the initial states share a block and
/// the refutation certificate when they do not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BisimVerdict {
    Bisimilar(BisimulationPartition),
    NotBisimilar(BisimulationPartition),
}

impl BisimVerdict {
    pub fn is_bisimilar(&self) -> bool {
        matches!(self, BisimVerdict::Bisimilar(_))
    }

    pub fn partition(&self) -> &BisimulationPartition {
        match self {
            BisimVerdict::Bisimilar(p) | BisimVerdict::NotBisimilar(p) => p,
        }
    }
}

/// Decides strong bisimilarity of two systems by refining the disjoint
/// union, starting from the output classes. The systems are bisimilar iff
/// their initial states end in the same block.
pub fn bisimilar(a: &ObservedSystem, b: &ObservedSystem) -> Result<BisimVerdict, Error> {
    check_comparable(a, b)?;
    let da = Dense::new(a.ts());
    let db = Dense::new(b.ts());
    let na = da.state_count();
    let k = da.symbol_count();

    // Disjoint union: left states first, then right states shifted by na.
    let mut succ: Vec<Vec<Vec<usize>>> = da.succ.clone();
    succ.extend(db.succ.iter().map(|rows| {
        rows.iter()
            .map(|targets| targets.iter().map(|&t| t + na).collect())
            .collect()
    }));

    let mut palette: BTreeMap<_, usize> = BTreeMap::new();
    let mut color_of = |value: &crate::machine::OutputValue| {
        let next = palette.len();
        *palette.entry(value.clone()).or_insert(next)
    };
    let mut colors: Vec<usize> = Vec::with_capacity(na + db.state_count());
    for s in &da.states {
        colors.push(color_of(a.output(s)));
    }
    for t in &db.states {
        colors.push(color_of(b.output(t)));
    }

    let colors = refine(&succ, k, colors);

    let mut members: BTreeMap<usize, BTreeSet<(Side, StateId)>> = BTreeMap::new();
    for (i, &c) in colors.iter().enumerate() {
        let entry = if i < na {
            (Side::Left, da.states[i].clone())
        } else {
            (Side::Right, db.states[i - na].clone())
        };
        members.entry(c).or_default().insert(entry);
    }
    let mut blocks: Vec<BTreeSet<(Side, StateId)>> = members.into_values().collect();
    blocks.sort_by(|x, y| x.first().cmp(&y.first()));
    let partition = BisimulationPartition { blocks };

    if colors[da.initial] == colors[na + db.initial] {
        Ok(BisimVerdict::Bisimilar(partition))
    } else {
        Ok(BisimVerdict::NotBisimilar(partition))
    }
}

/// One signature round: each state's key is its current color plus, per
/// symbol, the set of successor colors.
fn signatures(succ: &[Vec<Vec<usize>>], k: usize, colors: &[usize]) -> Vec<(usize, Vec<Vec<usize>>)> {
    let sig_of = |s: usize| {
        let mut sig: Vec<Vec<usize>> = Vec::with_capacity(k);
        for targets in &succ[s] {
            let mut cs: Vec<usize> = targets.iter().map(|&t| colors[t]).collect();
            cs.sort_unstable();
            cs.dedup();
            sig.push(cs);
        }
        (colors[s], sig)
    };

    #[cfg(feature = "parallel")]
    {
        if succ.len() >= PAR_STATES_MIN {
            return (0..succ.len()).into_par_iter().map(sig_of).collect();
        }
    }
    (0..succ.len()).map(sig_of).collect()
}

/// Refines the coloring until the block count is stable. Returns the
/// final coloring with blocks numbered by sorted signature, which makes
/// the result independent of sweep order.
fn refine(succ: &[Vec<Vec<usize>>], k: usize, init: Vec<usize>) -> Vec<usize> {
    let mut colors = init;
    let mut count = colors.iter().collect::<BTreeSet<_>>().len();
    loop {
        let keys = signatures(succ, k, &colors);
        let mut sorted: Vec<&(usize, Vec<Vec<usize>>)> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        let renumber: BTreeMap<&(usize, Vec<Vec<usize>>), usize> =
            sorted.iter().enumerate().map(|(i, key)| (*key, i)).collect();
        let next: Vec<usize> = keys.iter().map(|key| renumber[key]).collect();
        let next_count = renumber.len();
        if next_count == count {
            return next;
        }
        colors = next;
        count = next_count;
    }
}

/// The bisimulation quotient: states are the blocks of the stable
/// partition of `m` against itself, transitions lift blockwise, and each
/// block outputs its members' common value. The result is bisimilar to
/// `m` and is named by the canonical sorted-brace scheme.
pub fn quotient(m: &ObservedSystem) -> ObservedSystem {
    let d = Dense::new(m.ts());
    let mut palette: BTreeMap<_, usize> = BTreeMap::new();
    let mut init: Vec<usize> = Vec::with_capacity(d.state_count());
    for s in &d.states {
        let next = palette.len();
        init.push(*palette.entry(m.output(s).clone()).or_insert(next));
    }
    let colors = refine(&d.succ, d.symbol_count(), init);

    let block_count = colors.iter().copied().max().unwrap_or(0) + 1;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); block_count];
    for (s, &c) in colors.iter().enumerate() {
        members[c].push(s);
    }
    let names: Vec<StateId> = members
        .iter()
        .map(|m| set_name(m.iter().map(|&s| &d.states[s])))
        .collect();

    let mut transitions: BTreeSet<(StateId, crate::name::Symbol, StateId)> = BTreeSet::new();
    for t in m.ts().transitions() {
        let from = colors[d.state_of(&t.from).expect("state in system")];
        let to = colors[d.state_of(&t.to).expect("state in system")];
        transitions.insert((names[from].clone(), t.label.clone(), names[to].clone()));
    }

    let ts = crate::machine::TransitionSystem::new(
        m.ts().alphabet().iter().cloned(),
        names.iter().cloned(),
        names[colors[d.initial]].clone(),
        transitions,
    )
    .expect("quotient is well-formed");
    let outputs: Vec<_> = members
        .iter()
        .enumerate()
        .map(|(b, m_states)| (names[b].clone(), m.output(&d.states[m_states[0]]).clone()))
        .collect();
    let machine = MooreMachine::new(ts, outputs).expect("block outputs are total");
    ObservedSystem::from(machine)
}
