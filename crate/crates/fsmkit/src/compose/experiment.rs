//! Button-press experiments: an experimenter presses a fixed word of
//! buttons against a process, one press at a time. A press works exactly
//! when the process has a transition on that button; nondeterministic
//! processes may both succeed and get stuck on the same word.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::Error;
use crate::index::Dense;
use crate::machine::{MooreMachine, OutputKind, OutputValue, TransitionSystem};
use crate::name::{StateId, Symbol, Word};

/// How one resolution of the experiment ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExperimentOutcome {
    /// Every press was performed.
    Success,
    /// The run got stuck after this many successful presses.
    Blocked(usize),
}

impl fmt::Display for ExperimentOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExperimentOutcome::Success => f.write_str("Success"),
            ExperimentOutcome::Blocked(k) => write!(f, "Blocked({k})"),
        }
    }
}

/// Runs the experiment over every nondeterministic resolution: from each
/// reached state, pressing the next button succeeds iff the state has a
/// transition on it, and every successor continues independently. Returns
/// the deduplicated set of outcomes. The process must carry set-valued
/// outputs; presses must lie in its alphabet.
pub fn experiment(
    process: &MooreMachine,
    presses: &Word,
) -> Result<BTreeSet<ExperimentOutcome>, Error> {
    if process.kind() != OutputKind::Symbols {
        return Err(Error::OutputKindMismatch {
            left: process.kind().name(),
            right: OutputKind::Symbols.name(),
        });
    }
    let d = Dense::new(process.ts());
    let press_indices: Vec<usize> = presses
        .symbols()
        .iter()
        .map(|s| {
            d.symbol_of(s).ok_or_else(|| Error::AlphabetMismatch {
                detail: format!("press `{s}` is not in the process alphabet"),
            })
        })
        .collect::<Result<_, _>>()?;

    let mut outcomes = BTreeSet::new();
    let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    visited.insert((d.initial, 0));
    queue.push_back((d.initial, 0));
    while let Some((state, done)) = queue.pop_front() {
        if done == press_indices.len() {
            outcomes.insert(ExperimentOutcome::Success);
            continue;
        }
        let successors = &d.succ[state][press_indices[done]];
        if successors.is_empty() {
            outcomes.insert(ExperimentOutcome::Blocked(done));
            continue;
        }
        for &t in successors {
            if visited.insert((t, done + 1)) {
                queue.push_back((t, done + 1));
            }
        }
    }
    Ok(outcomes)
}

/// Builds the experimenter for a press word: a linear machine
/// e0 → e1 → … → ek stepping through the presses, whose output at each
/// state is the button it wants next (and the empty set once done).
pub fn make_experimenter(
    presses: &Word,
    alphabet: &BTreeSet<Symbol>,
) -> Result<MooreMachine, Error> {
    for s in presses {
        if !alphabet.contains(s) {
            return Err(Error::AlphabetMismatch {
                detail: format!("press `{s}` is not in the alphabet"),
            });
        }
    }
    let k = presses.len();
    let name = |i: usize| StateId::synthetic(format!("e{i}"));
    let states: Vec<StateId> = (0..=k).map(name).collect();
    let transitions = presses
        .symbols()
        .iter()
        .enumerate()
        .map(|(i, s)| (name(i), s.clone(), name(i + 1)));
    let ts = TransitionSystem::new(alphabet.iter().cloned(), states, name(0), transitions)
        .expect("linear machine is well-formed");
    let outputs: Vec<(StateId, OutputValue)> = (0..=k)
        .map(|i| {
            let wanted: BTreeSet<Symbol> = if i < k {
                [presses.symbols()[i].clone()].into_iter().collect()
            } else {
                BTreeSet::new()
            };
            (name(i), OutputValue::Symbols(wanted))
        })
        .collect();
    Ok(MooreMachine::new(ts, outputs).expect("outputs are total"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{lts_to_moore, recognizer_to_moore};
    use crate::testutil::{paper_a, paper_b, sym, word};

    fn outcomes(which: &[ExperimentOutcome]) -> BTreeSet<ExperimentOutcome> {
        which.iter().copied().collect()
    }

    #[test]
    fn deterministic_process_succeeds() {
        let a = lts_to_moore(paper_a().ts());
        assert_eq!(
            experiment(&a, &word("ab")).unwrap(),
            outcomes(&[ExperimentOutcome::Success])
        );
    }

    #[test]
    fn nondeterministic_process_may_block() {
        let b = lts_to_moore(paper_b().ts());
        assert_eq!(
            experiment(&b, &word("ab")).unwrap(),
            outcomes(&[ExperimentOutcome::Success, ExperimentOutcome::Blocked(1)])
        );
    }

    #[test]
    fn empty_experiment_always_succeeds() {
        for r in [paper_a(), paper_b()] {
            let m = lts_to_moore(r.ts());
            assert_eq!(
                experiment(&m, &Word::empty()).unwrap(),
                outcomes(&[ExperimentOutcome::Success])
            );
        }
    }

    #[test]
    fn success_is_prefix_monotone() {
        let b = lts_to_moore(paper_b().ts());
        let presses = word("ab");
        for cut in 0..=presses.len() {
            let prefix = Word::new(presses.symbols()[..cut].iter().cloned());
            let got = experiment(&b, &prefix).unwrap();
            assert!(got.contains(&ExperimentOutcome::Success), "prefix {prefix} must succeed");
        }
    }

    #[test]
    fn deterministic_outcomes_are_singletons() {
        let a = lts_to_moore(paper_a().ts());
        for text in ["", "a", "ab", "ac", "b", "abc", "aba"] {
            let got = experiment(&a, &word(text)).unwrap();
            assert_eq!(got.len(), 1, "outcomes for {text:?}: {got:?}");
        }
    }

    #[test]
    fn requires_set_valued_outputs() {
        let flags = recognizer_to_moore(&paper_a());
        assert!(matches!(
            experiment(&flags, &word("ab")),
            Err(Error::OutputKindMismatch { .. })
        ));
    }

    #[test]
    fn rejects_foreign_presses() {
        let a = lts_to_moore(paper_a().ts());
        assert!(matches!(
            experiment(&a, &word("az")),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn experimenter_shape() {
        let alphabet = paper_a().ts().alphabet().clone();
        let m = make_experimenter(&word("ab"), &alphabet).unwrap();
        assert_eq!(m.ts().states().len(), 3);
        let wants = |s: &str| m.output(&state_of(&m, s)).cloned().unwrap();
        assert_eq!(wants("e0"), OutputValue::Symbols([sym("a")].into_iter().collect()));
        assert_eq!(wants("e1"), OutputValue::Symbols([sym("b")].into_iter().collect()));
        assert_eq!(wants("e2"), OutputValue::Symbols(BTreeSet::new()));

        let empty = make_experimenter(&Word::empty(), &alphabet).unwrap();
        assert_eq!(empty.ts().states().len(), 1);
        assert_eq!(empty.output(&state_of(&empty, "e0")), Some(&OutputValue::Symbols(BTreeSet::new())));
    }

    fn state_of(m: &MooreMachine, name: &str) -> StateId {
        m.ts().states().iter().find(|s| s.as_str() == name).unwrap().clone()
    }

    #[test]
    fn experimenter_rejects_foreign_presses() {
        let alphabet = paper_a().ts().alphabet().clone();
        assert!(matches!(
            make_experimenter(&word("az"), &alphabet),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn outcome_ordering_puts_success_first() {
        let mut set = BTreeSet::new();
        set.insert(ExperimentOutcome::Blocked(2));
        set.insert(ExperimentOutcome::Success);
        set.insert(ExperimentOutcome::Blocked(0));
        let ordered: Vec<String> = set.iter().map(|o| o.to_string()).collect();
        assert_eq!(ordered, ["Success", "Blocked(0)", "Blocked(2)"]);
    }

    #[test]
    fn blocked_counts_stay_below_word_length() {
        let b = lts_to_moore(paper_b().ts());
        for text in ["a", "ab", "ac", "abc", "aab"] {
            let presses = word(text);
            for outcome in experiment(&b, &presses).unwrap() {
                if let ExperimentOutcome::Blocked(k) = outcome {
                    assert!(k < presses.len());
                }
            }
        }
    }

}
