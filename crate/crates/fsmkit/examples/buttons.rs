//! Two recognizers with the same language but different behaviour, told
//! through every layer of the crate: language equivalence, covering,
//! bisimilarity, button-press experiments, and the general product.
//!
//! Run with `cargo run -p fsmkit --example buttons`.

use fsmkit::compose::{experiment, general_product, ProductSpec};
use fsmkit::encode::lts_to_moore;
use fsmkit::equiv::{bisimilar, covers, CoverVerdict, ObservedSystem};
use fsmkit::format::{self, MachineDef, MachineDocument};
use fsmkit::lang::language_equivalent;
use fsmkit::{Symbol, Word};

const DOCUMENT: &str = "
# A decides between b and c after the a-step; B decides up front.
machine A {
  alphabet: a, b, c;
  states: A0, A1, A2, A3;
  initial: A0;
  accepting: A2;
  A0 - a -> A1;
  A1 - b -> A2;
  A1 - c -> A3;
}

machine B {
  alphabet: a, b, c;
  states: B0, B1, B1x, B2, B3;
  initial: B0;
  accepting: B2;
  B0 - a -> B1;
  B0 - a -> B1x;
  B1 - b -> B2;
  B1x - c -> B3;
}
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = format::parse(DOCUMENT)?;
    let a = doc.get("A").unwrap().as_recognizer().unwrap();
    let b = doc.get("B").unwrap().as_recognizer().unwrap();

    // As language recognizers the two machines are interchangeable.
    println!("language_equivalent(A, B) = {:?}", language_equivalent(a, b)?);

    // As behaviours they are not: A can match everything B does, but no
    // state of B offers both of A1's buttons.
    let oa = ObservedSystem::from_recognizer(a);
    let ob = ObservedSystem::from_recognizer(b);
    println!("A covers B: {}", covers(&oa, &ob)?.is_covers());
    match covers(&ob, &oa)? {
        CoverVerdict::Covers { .. } => println!("B covers A: true"),
        CoverVerdict::DoesNotCover { stuck_state } => {
            println!("B covers A: false (stuck at {stuck_state})");
        }
    }
    println!("bisimilar(A, B): {}", bisimilar(&oa, &ob)?.is_bisimilar());

    // The experiment makes the difference tangible: press a, then b.
    let presses = Word::new([Symbol::new("a")?, Symbol::new("b")?]);
    for (name, machine) in [("A", a), ("B", b)] {
        let outcomes = experiment(&lts_to_moore(machine.ts()), &presses)?;
        let rendered: Vec<String> = outcomes.iter().map(|o| o.to_string()).collect();
        println!("experiment({name}, ab) = {{{}}}", rendered.join(", "));
    }

    // The same experiment as a machine product: the blocked run shows up
    // as a reachable tuple with no outgoing press.
    let spec = ProductSpec::experimenter(lts_to_moore(b.ts()), &presses)?;
    let product = general_product(&spec)?;
    let doc = MachineDocument::new([("product".to_string(), MachineDef::Moore(product))])?;
    println!("\n{}", format::serialize(&doc));
    Ok(())
}
