//! Isomorphism checking for machines.
//!
//! Machine equality in tests means isomorphism: a bijection between state
//! sets that preserves the initial state, the transition relation and the
//! state decoration (acceptance or output). Construction algorithms
//! rename states, so semantic comparisons go through here rather than
//! through structural equality.

use std::collections::BTreeMap;

use crate::index::Dense;
use crate::machine::{MooreMachine, Recognizer, TransitionSystem};
use crate::name::StateId;

/// An isomorphism witness: the state bijection from `a` to `b`.
pub type StateMapping = BTreeMap<StateId, StateId>;

/// Isomorphism of bare transition systems (no decoration).
pub fn isomorphism_ts(a: &TransitionSystem, b: &TransitionSystem) -> Option<StateMapping> {
    find(a, b, |_| 0, |_| 0)
}

/// Isomorphism of recognizers: the bijection must map accepting states to
/// accepting states.
pub fn isomorphism_recognizer(a: &Recognizer, b: &Recognizer) -> Option<StateMapping> {
    find(
        a.ts(),
        b.ts(),
        |s| usize::from(a.is_accepting(s)),
        |s| usize::from(b.is_accepting(s)),
    )
}

/// Isomorphism of Moore machines: the bijection must preserve outputs
/// exactly (which implies equal output kinds).
pub fn isomorphism_moore(a: &MooreMachine, b: &MooreMachine) -> Option<StateMapping> {
    if a.kind() != b.kind() {
        return None;
    }
    // Number the distinct output values of both machines together so that
    // equal values get equal colors across the two systems.
    let mut palette: BTreeMap<_, usize> = BTreeMap::new();
    for v in a.outputs().values().chain(b.outputs().values()) {
        let next = palette.len();
        palette.entry(v.clone()).or_insert(next);
    }
    find(
        a.ts(),
        b.ts(),
        |s| palette[a.output(s).expect("total outputs")],
        |s| palette[b.output(s).expect("total outputs")],
    )
}

fn find(
    a: &TransitionSystem,
    b: &TransitionSystem,
    color_a: impl Fn(&StateId) -> usize,
    color_b: impl Fn(&StateId) -> usize,
) -> Option<StateMapping> {
    if a.alphabet() != b.alphabet() {
        return None;
    }
    if a.states().len() != b.states().len() || a.transition_count() != b.transition_count() {
        return None;
    }
    let da = Dense::new(a);
    let db = Dense::new(b);
    let base_a: Vec<usize> = da.states.iter().map(color_a).collect();
    let base_b: Vec<usize> = db.states.iter().map(color_b).collect();
    let ca = refine(&da, base_a);
    let cb = refine(&db, base_b);

    // Color histograms must match, otherwise no bijection can exist.
    let mut hist_a = BTreeMap::new();
    for &c in &ca {
        *hist_a.entry(c).or_insert(0usize) += 1;
    }
    let mut hist_b = BTreeMap::new();
    for &c in &cb {
        *hist_b.entry(c).or_insert(0usize) += 1;
    }
    if hist_a != hist_b || ca[da.initial] != cb[db.initial] {
        return None;
    }

    // Backtracking search over candidate partners of equal color, pinning
    // the initial states to each other first.
    let n = da.state_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&s| (s != da.initial, hist_a[&ca[s]], s));
    let search = Search { da: &da, db: &db, ca, cb, order };
    let mut map: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    if search.assign(0, &mut map, &mut used) {
        let mapping = map
            .iter()
            .enumerate()
            .map(|(s, t)| (da.states[s].clone(), db.states[t.unwrap()].clone()))
            .collect();
        Some(mapping)
    } else {
        None
    }
}

/// Color refinement: repeatedly extend each state's color with the
/// multiset of successor colors per symbol, until the partition is stable.
fn refine(d: &Dense, mut colors: Vec<usize>) -> Vec<usize> {
    loop {
        let mut keys: Vec<(usize, Vec<Vec<usize>>)> = Vec::with_capacity(d.state_count());
        for s in 0..d.state_count() {
            let mut sig: Vec<Vec<usize>> = Vec::with_capacity(d.symbol_count());
            for x in 0..d.symbol_count() {
                let mut cs: Vec<usize> = d.succ[s][x].iter().map(|&t| colors[t]).collect();
                cs.sort_unstable();
                sig.push(cs);
            }
            keys.push((colors[s], sig));
        }
        let mut sorted: Vec<&(usize, Vec<Vec<usize>>)> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        let renumber: BTreeMap<&(usize, Vec<Vec<usize>>), usize> =
            sorted.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let next: Vec<usize> = keys.iter().map(|k| renumber[k]).collect();
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

struct Search<'a> {
    da: &'a Dense,
    db: &'a Dense,
    ca: Vec<usize>,
    cb: Vec<usize>,
    order: Vec<usize>,
}

impl Search<'_> {
    fn assign(&self, pos: usize, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>) -> bool {
        if pos == self.order.len() {
            return check_edges(self.da, self.db, map);
        }
        let s = self.order[pos];
        for t in 0..self.db.state_count() {
            if used[t] || self.cb[t] != self.ca[s] {
                continue;
            }
            if s == self.da.initial && t != self.db.initial {
                continue;
            }
            if consistent(self.da, self.db, map, s, t) {
                map[s] = Some(t);
                used[t] = true;
                if self.assign(pos + 1, map, used) {
                    return true;
                }
                map[s] = None;
                used[t] = false;
            }
        }
        false
    }
}

/// Checks the edges between `s` and already-mapped states in both
/// directions, so contradictions are caught before the map is complete.
fn consistent(da: &Dense, db: &Dense, map: &[Option<usize>], s: usize, t: usize) -> bool {
    for x in 0..da.symbol_count() {
        for &s2 in &da.succ[s][x] {
            let t2 = if s2 == s { Some(t) } else { map[s2] };
            if let Some(t2) = t2 {
                if !db.succ[t][x].contains(&t2) {
                    return false;
                }
            }
        }
        if db.succ[t][x].len() != da.succ[s][x].len() {
            return false;
        }
        for (u, mu) in map.iter().enumerate() {
            if let Some(v) = mu {
                if da.succ[u][x].contains(&s) != db.succ[*v][x].contains(&t) {
                    return false;
                }
            }
        }
    }
    true
}

fn check_edges(da: &Dense, db: &Dense, map: &[Option<usize>]) -> bool {
    for s in 0..da.state_count() {
        let t = map[s].unwrap();
        for x in 0..da.symbol_count() {
            let mut mapped: Vec<usize> = da.succ[s][x].iter().map(|&s2| map[s2].unwrap()).collect();
            mapped.sort_unstable();
            if mapped != db.succ[t][x] {
                return false;
            }
        }
    }
    true
}
