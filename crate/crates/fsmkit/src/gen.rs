//! Generation of random machines and enumeration of words, used by the
//! property tests, the acceptance suite and the benchmarks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::encode::lts_to_moore;
use crate::format::{MachineDef, MachineDocument};
use crate::machine::{MooreMachine, OutputValue, Recognizer, TransitionSystem};
use crate::name::{StateId, Symbol, Word};

/// The first `count` lowercase letters as symbols (at most 26).
pub fn alphabet(count: usize) -> BTreeSet<Symbol> {
    assert!(count <= 26, "at most 26 generated symbols");
    (0..count)
        .map(|i| Symbol::new(((b'a' + i as u8) as char).to_string()).expect("letter"))
        .collect()
}

fn state_names(count: usize) -> Vec<StateId> {
    (0..count).map(|i| StateId::new(format!("s{i}")).expect("generated name")).collect()
}

/// A random transition system over a given alphabet with `1..=max_states`
/// states; transition density varies from sparse to saturated and
/// nondeterminism is common.
pub fn transition_system_over(
    rng: &mut impl Rng,
    max_states: usize,
    sigma: &BTreeSet<Symbol>,
) -> TransitionSystem {
    let n = rng.gen_range(1..=max_states);
    let states = state_names(n);
    let symbols: Vec<Symbol> = sigma.iter().cloned().collect();
    let mut transitions = Vec::new();
    for from in &states {
        for symbol in &symbols {
            // 0, 1 or 2 successors, weighted toward 1.
            let fanout = *[0, 0, 1, 1, 1, 2].choose(rng).expect("nonempty");
            for _ in 0..fanout {
                let to = states[rng.gen_range(0..n)].clone();
                transitions.push((from.clone(), symbol.clone(), to));
            }
        }
    }
    TransitionSystem::new(symbols, states, StateId::new("s0").expect("generated name"), transitions)
        .expect("generated system is well-formed")
}

/// As [`transition_system_over`], with a random alphabet of
/// `1..=max_symbols` symbols.
pub fn transition_system(
    rng: &mut impl Rng,
    max_states: usize,
    max_symbols: usize,
) -> TransitionSystem {
    let k = rng.gen_range(1..=max_symbols);
    transition_system_over(rng, max_states, &alphabet(k))
}

/// A random recognizer over a given alphabet, each state accepting with
/// probability 0.4.
pub fn recognizer_over(
    rng: &mut impl Rng,
    max_states: usize,
    sigma: &BTreeSet<Symbol>,
) -> Recognizer {
    let ts = transition_system_over(rng, max_states, sigma);
    let accepting: Vec<StateId> =
        ts.states().iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
    Recognizer::new(ts, accepting).expect("accepting states come from the system")
}

/// As [`recognizer_over`], with a random alphabet of `1..=max_symbols`
/// symbols.
pub fn recognizer(rng: &mut impl Rng, max_states: usize, max_symbols: usize) -> Recognizer {
    let k = rng.gen_range(1..=max_symbols);
    recognizer_over(rng, max_states, &alphabet(k))
}

/// A random complete, deterministic, reachable recognizer over a given
/// alphabet: a total transition function restricted to its reachable part.
pub fn dfa_over(rng: &mut impl Rng, max_states: usize, sigma: &BTreeSet<Symbol>) -> Recognizer {
    let n = rng.gen_range(1..=max_states);
    let states = state_names(n);
    let symbols: Vec<Symbol> = sigma.iter().cloned().collect();
    let mut transitions = Vec::new();
    for from in &states {
        for symbol in &symbols {
            let to = states[rng.gen_range(0..n)].clone();
            transitions.push((from.clone(), symbol.clone(), to));
        }
    }
    let ts = TransitionSystem::new(
        symbols,
        states.clone(),
        StateId::new("s0").expect("generated name"),
        transitions,
    )
    .expect("generated system is well-formed");
    let accepting: Vec<StateId> = states.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
    let full = Recognizer::new(ts, accepting).expect("accepting states come from the system");

    // Trimming a complete machine keeps it complete.
    let reach = full.ts().reachable();
    let ts = TransitionSystem::new(
        full.ts().alphabet().iter().cloned(),
        reach.iter().cloned(),
        full.ts().initial().clone(),
        full.ts()
            .transitions()
            .filter(|t| reach.contains(&t.from))
            .map(|t| (t.from.clone(), t.label.clone(), t.to.clone())),
    )
    .expect("reachable part is well-formed");
    Recognizer::new(ts, full.accepting().iter().filter(|s| reach.contains(*s)).cloned())
        .expect("accepting subset of reachable states")
}

/// As [`dfa_over`], with a random alphabet of `1..=max_symbols` symbols.
pub fn dfa(rng: &mut impl Rng, max_states: usize, max_symbols: usize) -> Recognizer {
    let k = rng.gen_range(1..=max_symbols);
    dfa_over(rng, max_states, &alphabet(k))
}

/// A random enabled-actions Moore machine.
pub fn moore(rng: &mut impl Rng, max_states: usize, max_symbols: usize) -> MooreMachine {
    lts_to_moore(&transition_system(rng, max_states, max_symbols))
}

/// A structurally identical copy with every state renamed. The copy is
/// bisimilar to the original by construction.
pub fn renamed_copy(r: &Recognizer, prefix: &str) -> Recognizer {
    let rename = |s: &StateId| StateId::new(format!("{prefix}{s}")).expect("renamed state");
    let ts = TransitionSystem::new(
        r.ts().alphabet().iter().cloned(),
        r.ts().states().iter().map(&rename),
        rename(r.ts().initial()),
        r.ts().transitions().map(|t| (rename(&t.from), t.label.clone(), rename(&t.to))),
    )
    .expect("renaming preserves well-formedness");
    Recognizer::new(ts, r.accepting().iter().map(rename)).expect("renamed accepting states")
}

/// Duplicates one random state (same outputs, same moves, and every
/// in-edge redirected to both copies). The result is bisimilar to the
/// original but not isomorphic to it.
pub fn with_duplicated_state(rng: &mut impl Rng, r: &Recognizer) -> Recognizer {
    let states: Vec<StateId> = r.ts().states().iter().cloned().collect();
    let chosen = states[rng.gen_range(0..states.len())].clone();
    let mut copy_name = format!("{chosen}_dup");
    while r.ts().states().iter().any(|s| s.as_str() == copy_name) {
        copy_name.push('\'');
    }
    let copy = StateId::new(&copy_name).expect("generated name");

    let mut all_states = states.clone();
    all_states.push(copy.clone());
    let mut transitions: Vec<(StateId, Symbol, StateId)> = Vec::new();
    for t in r.ts().transitions() {
        transitions.push((t.from.clone(), t.label.clone(), t.to.clone()));
        if t.from == chosen {
            transitions.push((copy.clone(), t.label.clone(), t.to.clone()));
        }
        if t.to == chosen {
            transitions.push((t.from.clone(), t.label.clone(), copy.clone()));
        }
        if t.from == chosen && t.to == chosen {
            transitions.push((copy.clone(), t.label.clone(), copy.clone()));
        }
    }
    let ts = TransitionSystem::new(
        r.ts().alphabet().iter().cloned(),
        all_states,
        r.ts().initial().clone(),
        transitions,
    )
    .expect("duplication preserves well-formedness");
    let mut accepting: Vec<StateId> = r.accepting().iter().cloned().collect();
    if r.is_accepting(&chosen) {
        accepting.push(copy);
    }
    Recognizer::new(ts, accepting).expect("accepting states exist")
}

/// A random document of recognizers and Moore machines (all three output
/// kinds), with names the format can express.
pub fn document(rng: &mut impl Rng, max_machines: usize) -> MachineDocument {
    let count = rng.gen_range(1..=max_machines);
    let entries: Vec<(String, MachineDef)> = (0..count)
        .map(|i| {
            let def = match rng.gen_range(0..4) {
                0 => MachineDef::Recognizer(recognizer(rng, 5, 3)),
                1 => MachineDef::Moore(moore(rng, 5, 3)),
                2 => {
                    let ts = transition_system(rng, 5, 3);
                    let outputs: Vec<(StateId, OutputValue)> = ts
                        .states()
                        .iter()
                        .map(|s| (s.clone(), OutputValue::Flag(rng.gen_bool(0.5))))
                        .collect();
                    MachineDef::Moore(
                        MooreMachine::new(ts, outputs).expect("outputs are total"),
                    )
                }
                _ => {
                    let ts = transition_system(rng, 5, 3);
                    let palette = ["go", "stop|go", "({x}|true)", "plain", "\"quoted\"", "back\\slash"];
                    let outputs: Vec<(StateId, OutputValue)> = ts
                        .states()
                        .iter()
                        .map(|s| {
                            let token = *palette.choose(rng).expect("nonempty");
                            (s.clone(), OutputValue::Token(token.to_string()))
                        })
                        .collect();
                    MachineDef::Moore(
                        MooreMachine::new(ts, outputs).expect("outputs are total"),
                    )
                }
            };
            (format!("M{i}"), def)
        })
        .collect();
    MachineDocument::new(entries).expect("generated names are unique")
}

/// A random word over the alphabet with length `0..=max_len`.
pub fn word(rng: &mut impl Rng, alphabet: &BTreeSet<Symbol>, max_len: usize) -> Word {
    let symbols: Vec<&Symbol> = alphabet.iter().collect();
    let len = rng.gen_range(0..=max_len);
    Word::new((0..len).map(|_| (*symbols[rng.gen_range(0..symbols.len())]).clone()))
}

/// Every word over the alphabet of length at most `max_len`, in
/// length-then-lexicographic order. The empty word comes first.
pub fn words_up_to(alphabet: &BTreeSet<Symbol>, max_len: usize) -> Vec<Word> {
    let symbols: Vec<&Symbol> = alphabet.iter().collect();
    let mut out: Vec<Word> = vec![Word::empty()];
    let mut layer: Vec<Word> = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * symbols.len());
        for w in &layer {
            for s in &symbols {
                let mut w2 = w.clone();
                w2.push((*s).clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_machines_are_well_formed() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let r = recognizer(&mut rng, 5, 3);
            assert!(!r.ts().states().is_empty());
            let d = dfa(&mut rng, 5, 3);
            assert!(d.ts().is_complete());
            assert_eq!(d.ts().reachable().len(), d.ts().states().len());
        }
    }

    #[test]
    fn word_enumeration_counts() {
        let sigma = alphabet(3);
        assert_eq!(words_up_to(&sigma, 3).len(), 1 + 3 + 9 + 27);
        let sigma1 = alphabet(1);
        assert_eq!(words_up_to(&sigma1, 2).len(), 3);
    }

    #[test]
    fn duplication_keeps_acceptance() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let r = recognizer(&mut rng, 4, 2);
            let dup = with_duplicated_state(&mut rng, &r);
            for w in words_up_to(r.ts().alphabet(), 4) {
                assert_eq!(r.accepts(&w).unwrap(), dup.accepts(&w).unwrap());
            }
        }
    }
}
