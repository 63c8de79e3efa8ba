//! The behavioural equivalence hierarchy: output-respecting simulation,
//! covering and covering equivalence, and strong bisimulation.
//!
//! All comparisons run on [`ObservedSystem`]s — a uniform view of a
//! recognizer (observed through its accept bit) or a Moore machine
//! (observed through its output map). Systems of different output kinds
//! are never comparable.

mod bisim;
mod simulation;

pub use bisim::{bisimilar, quotient, BisimVerdict, BisimulationPartition, Side};
pub use simulation::{covering_equivalent, covers, greatest_simulation, CoverVerdict, SimulationWitness};

use crate::encode::{lts_to_moore, recognizer_to_moore};
use crate::error::Error;
use crate::machine::{MooreMachine, OutputKind, OutputValue, Recognizer, TransitionSystem};
use crate::name::StateId;

/// A machine observed through its per-state output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservedSystem {
    machine: MooreMachine,
}

impl ObservedSystem {
    /// Observes a recognizer through its accept bit.
    pub fn from_recognizer(r: &Recognizer) -> Self {
        ObservedSystem { machine: recognizer_to_moore(r) }
    }

    /// Observes a Moore machine through its output map.
    pub fn from_moore(m: &MooreMachine) -> Self {
        ObservedSystem { machine: m.clone() }
    }

    /// Observes a bare transition system through its enabled actions.
    pub fn from_lts(ts: &TransitionSystem) -> Self {
        ObservedSystem { machine: lts_to_moore(ts) }
    }

    pub fn ts(&self) -> &TransitionSystem {
        self.machine.ts()
    }

    pub fn kind(&self) -> OutputKind {
        self.machine.kind()
    }

    pub fn output(&self, s: &StateId) -> &OutputValue {
        self.machine.output(s).expect("outputs are total")
    }

    pub fn as_moore(&self) -> &MooreMachine {
        &self.machine
    }

    pub fn into_moore(self) -> MooreMachine {
        self.machine
    }
}

impl From<&Recognizer> for ObservedSystem {
    fn from(r: &Recognizer) -> Self {
        ObservedSystem::from_recognizer(r)
    }
}

impl From<&MooreMachine> for ObservedSystem {
    fn from(m: &MooreMachine) -> Self {
        ObservedSystem::from_moore(m)
    }
}

impl From<MooreMachine> for ObservedSystem {
    fn from(machine: MooreMachine) -> Self {
        ObservedSystem { machine }
    }
}

/// Comparisons require equal alphabets and equal output kinds.
fn check_comparable(a: &ObservedSystem, b: &ObservedSystem) -> Result<(), Error> {
    if a.ts().alphabet() != b.ts().alphabet() {
        return Err(Error::AlphabetMismatch {
            detail: "behavioural comparison requires equal alphabets".into(),
        });
    }
    if a.kind() != b.kind() {
        return Err(Error::OutputKindMismatch {
            left: a.kind().name(),
            right: b.kind().name(),
        });
    }
    Ok(())
}
