//! Output-respecting simulation, computed as a greatest fixpoint, and the
//! covering preorder built on top of it.
//!
//! The fixpoint starts from all output-equal state pairs and repeatedly
//! deletes pairs that violate step-closure until nothing changes. Each
//! sweep checks every pair independently, so with the `parallel` feature
//! large pair matrices are swept with rayon; the fixpoint is unique, so
//! both paths return identical relations.

use std::collections::{BTreeSet, VecDeque};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Error;
use crate::index::Dense;
use crate::name::StateId;

use super::{check_comparable, ObservedSystem};

/// Pair matrices at least this large are swept in parallel.
#[cfg(feature = "parallel")]
const PAR_PAIRS_MIN: usize = 1 << 14;

/// A simulation relation between the states of two systems: every related
/// pair has equal outputs, and every step of the left state is matched by
/// a step of the right state into a related pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationWitness {
    relation: BTreeSet<(StateId, StateId)>,
}

impl SimulationWitness {
    pub fn relation(&self) -> &BTreeSet<(StateId, StateId)> {
        &self.relation
    }

    pub fn contains(&self, left: &StateId, right: &StateId) -> bool {
        self.relation.contains(&(left.clone(), right.clone()))
    }

    pub fn len(&self) -> usize {
        self.relation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relation.is_empty()
    }
}

/// The largest output-respecting simulation of `a` by `b`: the greatest
/// relation R such that (s, t) ∈ R implies output(s) = output(t) and every
/// move s -x-> s′ is matched by some t -x-> t′ with (s′, t′) ∈ R.
pub fn greatest_simulation(
    a: &ObservedSystem,
    b: &ObservedSystem,
) -> Result<SimulationWitness, Error> {
    check_comparable(a, b)?;
    let da = Dense::new(a.ts());
    let db = Dense::new(b.ts());
    let na = da.state_count();
    let nb = db.state_count();

    let mut sim = vec![false; na * nb];
    for s in 0..na {
        let out_s = a.output(&da.states[s]);
        for t in 0..nb {
            sim[s * nb + t] = out_s == b.output(&db.states[t]);
        }
    }

    run_fixpoint(&mut sim, &da, &db);

    let relation = sim
        .iter()
        .enumerate()
        .filter(|(_, &keep)| keep)
        .map(|(p, _)| (da.states[p / nb].clone(), db.states[p % nb].clone()))
        .collect();
    Ok(SimulationWitness { relation })
}

/// True when (s, t) has a left move that the right state cannot match
/// inside the current relation.
fn violated(sim: &[bool], da: &Dense, db: &Dense, s: usize, t: usize) -> bool {
    let nb = db.state_count();
    for x in 0..da.symbol_count() {
        for &s2 in &da.succ[s][x] {
            if !db.succ[t][x].iter().any(|&t2| sim[s2 * nb + t2]) {
                return true;
            }
        }
    }
    false
}

#[cfg(feature = "parallel")]
fn run_fixpoint(sim: &mut Vec<bool>, da: &Dense, db: &Dense) {
    if sim.len() < PAR_PAIRS_MIN {
        return run_fixpoint_seq(sim, da, db);
    }
    let nb = db.state_count();
    let mut next = vec![false; sim.len()];
    loop {
        let changed: usize = next
            .par_chunks_mut(nb)
            .enumerate()
            .map(|(s, row)| {
                let mut changed = 0;
                for (t, slot) in row.iter_mut().enumerate() {
                    let keep = sim[s * nb + t] && !violated(sim, da, db, s, t);
                    changed += usize::from(keep != sim[s * nb + t]);
                    *slot = keep;
                }
                changed
            })
            .sum();
        std::mem::swap(sim, &mut next);
        if changed == 0 {
            return;
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn run_fixpoint(sim: &mut Vec<bool>, da: &Dense, db: &Dense) {
    run_fixpoint_seq(sim, da, db)
}

fn run_fixpoint_seq(sim: &mut [bool], da: &Dense, db: &Dense) {
    let nb = db.state_count();
    let mut changed = true;
    while changed {
        changed = false;
        for p in 0..sim.len() {
            if sim[p] && violated(sim, da, db, p / nb, p % nb) {
                sim[p] = false;
                changed = true;
            }
        }
    }
}

/// The verdict of a covering check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverVerdict {
    /// The coverer simulates the covered machine from the initial states.
    Covers { witness: SimulationWitness },
    /// `stuck_state` is a reachable state of the covered machine with no
    /// simulating partner (the covered initial state when only the rooted
    /// pair fails).
    DoesNotCover { stuck_state: StateId },
}

impl CoverVerdict {
    pub fn is_covers(&self) -> bool {
        matches!(self, CoverVerdict::Covers { .. })
    }
}

/// Does `coverer` cover `covered`? Holds iff the pair of initial states
/// lies in the greatest simulation of `covered` by `coverer`; step-closure
/// then gives every reachable covered state a partner.
pub fn covers(coverer: &ObservedSystem, covered: &ObservedSystem) -> Result<CoverVerdict, Error> {
    let witness = greatest_simulation(covered, coverer)?;
    if witness.contains(covered.ts().initial(), coverer.ts().initial()) {
        return Ok(CoverVerdict::Covers { witness });
    }
    let simulated: BTreeSet<&StateId> = witness.relation().iter().map(|(s, _)| s).collect();
    let stuck = breadth_first(covered)
        .into_iter()
        .find(|s| !simulated.contains(s))
        .unwrap_or_else(|| covered.ts().initial().clone());
    Ok(CoverVerdict::DoesNotCover { stuck_state: stuck })
}

/// Reachable states of a system in breadth-first order, exploring symbols
/// and successors in name order.
fn breadth_first(sys: &ObservedSystem) -> Vec<StateId> {
    let d = Dense::new(sys.ts());
    let mut seen = vec![false; d.state_count()];
    seen[d.initial] = true;
    let mut order = vec![d.initial];
    let mut queue = VecDeque::new();
    queue.push_back(d.initial);
    while let Some(s) = queue.pop_front() {
        for x in 0..d.symbol_count() {
            for &t in &d.succ[s][x] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
    }
    order.into_iter().map(|s| d.states[s].clone()).collect()
}

/// Mutual covering: `a` covers `b` and `b` covers `a`.
pub fn covering_equivalent(a: &ObservedSystem, b: &ObservedSystem) -> Result<bool, Error> {
    Ok(covers(a, b)?.is_covers() && covers(b, a)?.is_covers())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{paper_a, paper_b, sim_eq_1, sim_eq_2, state};

    fn obs(r: &crate::machine::Recognizer) -> ObservedSystem {
        ObservedSystem::from_recognizer(r)
    }

    /// Re-checks the witness invariants directly against the definitions,
    /// independent of the fixpoint implementation.
    pub(crate) fn assert_witness_valid(a: &ObservedSystem, b: &ObservedSystem, w: &SimulationWitness) {
        for (s, t) in w.relation() {
            assert_eq!(a.output(s), b.output(t), "outputs differ on ({s}, {t})");
            for tr in a.ts().transitions().filter(|tr| &tr.from == s) {
                let matched = b
                    .ts()
                    .successors(t, &tr.label)
                    .any(|t2| w.contains(&tr.to, t2));
                assert!(matched, "({s}, {t}) unmatched on `{}`", tr.label);
            }
        }
    }

    #[test]
    fn fixture_simulations_match_the_verdicts() {
        let a = obs(&paper_a());
        let b = obs(&paper_b());

        let b_by_a = greatest_simulation(&b, &a).unwrap();
        assert_witness_valid(&b, &a, &b_by_a);
        for (s, t) in [("B0", "A0"), ("B1", "A1"), ("B1x", "A1"), ("B2", "A2"), ("B3", "A3")] {
            assert!(b_by_a.contains(&state(s), &state(t)), "expected ({s}, {t})");
        }

        let a_by_b = greatest_simulation(&a, &b).unwrap();
        assert_witness_valid(&a, &b, &a_by_b);
        assert!(!a_by_b.contains(&state("A0"), &state("B0")));
    }

    #[test]
    fn simulation_contains_identity() {
        for r in [paper_a(), paper_b(), sim_eq_1(), sim_eq_2()] {
            let sys = obs(&r);
            let w = greatest_simulation(&sys, &sys).unwrap();
            for s in sys.ts().states() {
                assert!(w.contains(s, s), "identity pair missing for {s}");
            }
        }
    }

    #[test]
    fn covering_verdicts_on_fixtures() {
        let a = obs(&paper_a());
        let b = obs(&paper_b());

        // A covers B.
        assert!(covers(&a, &b).unwrap().is_covers());

        // B does not cover A, and the stuck state is A0 or A1.
        match covers(&b, &a).unwrap() {
            CoverVerdict::DoesNotCover { stuck_state } => {
                assert!(
                    stuck_state == state("A0") || stuck_state == state("A1"),
                    "unexpected stuck state {stuck_state}"
                );
            }
            CoverVerdict::Covers { .. } => panic!("B must not cover A"),
        }

        assert!(!covering_equivalent(&a, &b).unwrap());
    }

    #[test]
    fn every_machine_covers_itself() {
        for r in [paper_a(), paper_b(), sim_eq_1(), sim_eq_2()] {
            let sys = obs(&r);
            assert!(covers(&sys, &sys).unwrap().is_covers());
            assert!(covering_equivalent(&sys, &sys).unwrap());
        }
    }

    #[test]
    fn covering_holds_on_the_pruned_pair() {
        let one = obs(&sim_eq_1());
        let two = obs(&sim_eq_2());
        assert!(covering_equivalent(&one, &two).unwrap());
    }

    #[test]
    fn covering_gives_every_reachable_state_a_partner() {
        let a = obs(&paper_a());
        let b = obs(&paper_b());
        match covers(&a, &b).unwrap() {
            CoverVerdict::Covers { witness } => {
                let simulated: BTreeSet<&StateId> =
                    witness.relation().iter().map(|(s, _)| s).collect();
                for s in b.ts().reachable() {
                    assert!(simulated.contains(&s), "reachable state {s} has no partner");
                }
            }
            CoverVerdict::DoesNotCover { .. } => panic!("A covers B"),
        }
    }

    #[test]
    fn comparisons_require_matching_kinds() {
        let a = obs(&paper_a());
        let enabled = ObservedSystem::from_lts(paper_b().ts());
        assert!(matches!(
            greatest_simulation(&a, &enabled),
            Err(Error::OutputKindMismatch { .. })
        ));
    }

    /// The parallel sweep recomputes against the previous matrix while
    /// the sequential one deletes in place; both must land on the same
    /// (unique) greatest fixpoint. Exercised above the parallel
    /// threshold so the rayon path actually runs.
    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_sweeps_agree() {
        use rand::rngs::StdRng;
        use rand::SeedableRng;

        let mut rng = StdRng::seed_from_u64(9001);
        let sigma = crate::gen::alphabet(3);
        let make = |rng: &mut StdRng| loop {
            let ts = crate::gen::transition_system_over(rng, 160, &sigma);
            if ts.states().len() * ts.states().len() >= PAR_PAIRS_MIN {
                return ObservedSystem::from_lts(&ts);
            }
        };
        let a = make(&mut rng);
        let b = make(&mut rng);

        let via_public = greatest_simulation(&a, &b).unwrap();

        let da = Dense::new(a.ts());
        let db = Dense::new(b.ts());
        let nb = db.state_count();
        let mut sim = vec![false; da.state_count() * nb];
        for s in 0..da.state_count() {
            let out_s = a.output(&da.states[s]);
            for t in 0..nb {
                sim[s * nb + t] = out_s == b.output(&db.states[t]);
            }
        }
        run_fixpoint_seq(&mut sim, &da, &db);
        let seq_pairs: usize = sim.iter().filter(|&&keep| keep).count();
        assert_eq!(via_public.len(), seq_pairs);
        for (p, &keep) in sim.iter().enumerate() {
            let pair_held = via_public.contains(&da.states[p / nb], &db.states[p % nb]);
            assert_eq!(keep, pair_held);
        }
    }
}
