//! Language-level constructions on recognizers: subset-construction
//! determinization, completion with a sink state, Hopcroft minimization
//! and language equivalence with shortest counterexamples.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::Error;
use crate::index::Dense;
use crate::machine::{Recognizer, TransitionSystem};
use crate::name::{set_name, StateId, Symbol, Word};

/// Subset construction. The result is deterministic, contains only
/// reachable subset states, accepts exactly the words `r` accepts, and
/// names its states canonically (`{B1,B1x}`). Missing transitions stay
/// missing: no empty-set sink is added.
pub fn determinize(r: &Recognizer) -> Recognizer {
    let d = Dense::new(r.ts());
    let accepting: Vec<bool> =
        d.states.iter().map(|s| r.is_accepting(s)).collect();

    let start: Vec<usize> = vec![d.initial];
    let mut names: BTreeMap<Vec<usize>, StateId> = BTreeMap::new();
    names.insert(start.clone(), subset_name(&d, &start));
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    queue.push_back(start.clone());
    let mut transitions: Vec<(StateId, Symbol, StateId)> = Vec::new();
    let mut accepting_sets: BTreeSet<StateId> = BTreeSet::new();

    while let Some(subset) = queue.pop_front() {
        let name = names[&subset].clone();
        if subset.iter().any(|&s| accepting[s]) {
            accepting_sets.insert(name.clone());
        }
        for x in 0..d.symbol_count() {
            let mut next: BTreeSet<usize> = BTreeSet::new();
            for &s in &subset {
                next.extend(d.succ[s][x].iter().copied());
            }
            if next.is_empty() {
                continue;
            }
            let next: Vec<usize> = next.into_iter().collect();
            let target = names.entry(next.clone()).or_insert_with(|| {
                queue.push_back(next.clone());
                subset_name(&d, &next)
            });
            transitions.push((name.clone(), d.symbols[x].clone(), target.clone()));
        }
    }

    let ts = TransitionSystem::new(
        r.ts().alphabet().iter().cloned(),
        names.values().cloned(),
        names[&start].clone(),
        transitions,
    )
    .expect("subset construction yields a well-formed system");
    Recognizer::new(ts, accepting_sets).expect("accepting subsets are states")
}

fn subset_name(d: &Dense, subset: &[usize]) -> StateId {
    set_name(subset.iter().map(|&s| &d.states[s]))
}

/// Completes a deterministic recognizer: if any (state, symbol) pair has
/// no transition, a fresh non-accepting sink absorbs them all and loops to
/// itself. An already-complete machine is returned unchanged. Errors on
/// nondeterministic input.
pub fn complete(r: &Recognizer) -> Result<Recognizer, Error> {
    if let Some((state, symbol)) = r.ts().first_nondeterminism() {
        return Err(Error::DeterminismRequired {
            state: state.to_string(),
            symbol: symbol.to_string(),
        });
    }
    if r.ts().is_complete() {
        return Ok(r.clone());
    }

    let mut sink_name = String::from("__sink");
    while r.ts().states().iter().any(|s| s.as_str() == sink_name) {
        sink_name.push('\'');
    }
    let sink = StateId::synthetic(&sink_name);

    let mut states: Vec<StateId> = r.ts().states().iter().cloned().collect();
    states.push(sink.clone());
    let mut transitions: Vec<(StateId, Symbol, StateId)> = r
        .ts()
        .transitions()
        .map(|t| (t.from.clone(), t.label.clone(), t.to.clone()))
        .collect();
    for s in r.ts().states() {
        for x in r.ts().alphabet() {
            if r.ts().successors(s, x).next().is_none() {
                transitions.push((s.clone(), x.clone(), sink.clone()));
            }
        }
    }
    for x in r.ts().alphabet() {
        transitions.push((sink.clone(), x.clone(), sink.clone()));
    }

    let ts = TransitionSystem::new(
        r.ts().alphabet().iter().cloned(),
        states,
        r.ts().initial().clone(),
        transitions,
    )
    .expect("completion preserves well-formedness");
    Ok(Recognizer::new(ts, r.accepting().iter().cloned()).expect("accepting set unchanged"))
}

/// Restricts a recognizer to its reachable part.
fn trim(r: &Recognizer) -> Recognizer {
    let reach = r.ts().reachable();
    if reach.len() == r.ts().states().len() {
        return r.clone();
    }
    let ts = TransitionSystem::new(
        r.ts().alphabet().iter().cloned(),
        reach.iter().cloned(),
        r.ts().initial().clone(),
        r.ts()
            .transitions()
            .filter(|t| reach.contains(&t.from))
            .map(|t| (t.from.clone(), t.label.clone(), t.to.clone())),
    )
    .expect("reachable part is well-formed");
    Recognizer::new(ts, r.accepting().iter().filter(|s| reach.contains(*s)).cloned())
        .expect("accepting subset of reachable states")
}

/// Minimizes a deterministic recognizer to the minimal complete DFA for
/// its language, via Hopcroft's partition refinement. The input is first
/// trimmed to its reachable part and completed. Quotient states are named
/// canonically by their sorted member blocks. Errors on nondeterministic
/// input.
pub fn minimize(r: &Recognizer) -> Result<Recognizer, Error> {
    let complete_dfa = complete(&trim(r))?;
    let d = Dense::new(complete_dfa.ts());
    let n = d.state_count();
    let k = d.symbol_count();
    let accepting: Vec<bool> = d.states.iter().map(|s| complete_dfa.is_accepting(s)).collect();

    // Edge case: with an empty alphabet the completed machine is a single
    // reachable state and is already minimal up to naming.
    let block_of = if k == 0 {
        vec![0usize; n]
    } else {
        hopcroft(&d, &accepting)
    };

    let block_count = block_of.iter().copied().max().unwrap_or(0) + 1;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); block_count];
    for (s, &b) in block_of.iter().enumerate() {
        members[b].push(s);
    }

    let block_names: Vec<StateId> = members
        .iter()
        .map(|m| set_name(m.iter().map(|&s| &d.states[s])))
        .collect();

    let mut transitions: Vec<(StateId, Symbol, StateId)> = Vec::new();
    for (b, m) in members.iter().enumerate() {
        let rep = m[0];
        for x in 0..k {
            let target = block_of[d.succ[rep][x][0]];
            transitions.push((
                block_names[b].clone(),
                d.symbols[x].clone(),
                block_names[target].clone(),
            ));
        }
    }

    let ts = TransitionSystem::new(
        complete_dfa.ts().alphabet().iter().cloned(),
        block_names.iter().cloned(),
        block_names[block_of[d.initial]].clone(),
        transitions,
    )
    .expect("quotient is well-formed");
    let accepting_blocks = members
        .iter()
        .enumerate()
        .filter(|(_, m)| accepting[m[0]])
        .map(|(b, _)| block_names[b].clone());
    Ok(Recognizer::new(ts, accepting_blocks).expect("accepting blocks are states"))
}

/// Hopcroft's algorithm on a complete DFA given as a dense view. Returns
/// the block id of every state; ids are dense but otherwise arbitrary.
fn hopcroft(d: &Dense, accepting: &[bool]) -> Vec<usize> {
    let n = d.state_count();
    let k = d.symbol_count();

    // Predecessor lists per symbol.
    let mut preds: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; k];
    for s in 0..n {
        for (x, succ) in d.succ[s].iter().enumerate() {
            preds[x][succ[0]].push(s);
        }
    }

    let mut block_of: Vec<usize> = vec![usize::MAX; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    {
        let f: Vec<usize> = (0..n).filter(|&s| accepting[s]).collect();
        let nf: Vec<usize> = (0..n).filter(|&s| !accepting[s]).collect();
        for part in [f, nf] {
            if part.is_empty() {
                continue;
            }
            let id = blocks.len();
            for &s in &part {
                block_of[s] = id;
            }
            blocks.push(part);
        }
    }

    let mut worklist: VecDeque<(usize, usize)> = VecDeque::new();
    let mut queued: BTreeSet<(usize, usize)> = BTreeSet::new();
    for b in 0..blocks.len() {
        for x in 0..k {
            worklist.push_back((b, x));
            queued.insert((b, x));
        }
    }

    while let Some((a, x)) = worklist.pop_front() {
        queued.remove(&(a, x));
        let splitter: Vec<usize> = blocks[a].clone();
        let mut in_pre = vec![false; n];
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        for &t in &splitter {
            for &s in &preds[x][t] {
                in_pre[s] = true;
                touched.insert(block_of[s]);
            }
        }
        for y in touched {
            let (inside, outside): (Vec<usize>, Vec<usize>) =
                blocks[y].iter().partition(|&&s| in_pre[s]);
            if inside.is_empty() || outside.is_empty() {
                continue;
            }
            let new_id = blocks.len();
            let (keep, moved) = (inside, outside);
            for &s in &moved {
                block_of[s] = new_id;
            }
            blocks[y] = keep;
            blocks.push(moved);
            for x2 in 0..k {
                if queued.contains(&(y, x2)) {
                    worklist.push_back((new_id, x2));
                    queued.insert((new_id, x2));
                } else {
                    let smaller = if blocks[y].len() <= blocks[new_id].len() { y } else { new_id };
                    worklist.push_back((smaller, x2));
                    queued.insert((smaller, x2));
                }
            }
        }
    }

    // Renumber blocks by their smallest member so the output is canonical.
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&b| blocks[b][0]);
    let mut renumber = vec![0usize; blocks.len()];
    for (i, &b) in order.iter().enumerate() {
        renumber[b] = i;
    }
    block_of.iter().map(|&b| renumber[b]).collect()
}

/// The verdict of a language-equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LanguageVerdict {
    Equivalent,
    /// The machines differ; `counterexample` is a shortest word accepted
    /// by exactly one of them (ties broken lexicographically).
    Inequivalent { counterexample: Word },
}

impl LanguageVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, LanguageVerdict::Equivalent)
    }
}

/// Decides whether two recognizers accept the same language, via a
/// synchronized breadth-first walk of their completed determinizations.
/// On inequivalence the returned counterexample is shortest, with ties
/// broken by lexicographic order of symbol names. Errors when the
/// alphabets differ.
pub fn language_equivalent(r1: &Recognizer, r2: &Recognizer) -> Result<LanguageVerdict, Error> {
    if r1.ts().alphabet() != r2.ts().alphabet() {
        return Err(Error::AlphabetMismatch {
            detail: "language equivalence requires equal alphabets".into(),
        });
    }
    let d1 = complete(&determinize(r1)).expect("determinization is deterministic");
    let d2 = complete(&determinize(r2)).expect("determinization is deterministic");
    let v1 = Dense::new(d1.ts());
    let v2 = Dense::new(d2.ts());
    let acc1: Vec<bool> = v1.states.iter().map(|s| d1.is_accepting(s)).collect();
    let acc2: Vec<bool> = v2.states.iter().map(|s| d2.is_accepting(s)).collect();

    let n2 = v2.state_count();
    let pair = |s1: usize, s2: usize| s1 * n2 + s2;
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; v1.state_count() * n2];
    let mut visited = vec![false; v1.state_count() * n2];
    let start = pair(v1.initial, v2.initial);
    visited[start] = true;
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    queue.push_back((v1.initial, v2.initial));

    while let Some((s1, s2)) = queue.pop_front() {
        if acc1[s1] != acc2[s2] {
            // Walk the parent chain back to the start pair.
            let mut symbols: Vec<usize> = Vec::new();
            let mut here = pair(s1, s2);
            while let Some((prev, x)) = parent[here] {
                symbols.push(x);
                here = prev;
            }
            symbols.reverse();
            let word = Word::new(symbols.into_iter().map(|x| v1.symbols[x].clone()));
            return Ok(LanguageVerdict::Inequivalent { counterexample: word });
        }
        for x in 0..v1.symbol_count() {
            // Both machines are complete and deterministic here.
            let t1 = v1.succ[s1][x][0];
            let x2 = v2.symbol_of(&v1.symbols[x]).expect("equal alphabets");
            let t2 = v2.succ[s2][x2][0];
            let p = pair(t1, t2);
            if !visited[p] {
                visited[p] = true;
                parent[p] = Some((pair(s1, s2), x));
                queue.push_back((t1, t2));
            }
        }
    }
    Ok(LanguageVerdict::Equivalent)
}
