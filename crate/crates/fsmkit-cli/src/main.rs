//! `fsm` — command-line front end for the fsmkit machine toolkit.
//!
//! Machines live in `.fsm` documents; `FILE#NAME` selects one machine,
//! and the `#NAME` part may be dropped when the file holds exactly one.
//! Verdict-style commands signal their verdict through the exit code:
//! 0 for the positive verdict, 1 for the negative one, 2 for usage or
//! input errors, and 3 for a mixed experiment outcome.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fsmkit::compose::{experiment, general_product, ExperimentOutcome, ProductSpec};
use fsmkit::encode::{lts_to_moore, recognizer_to_moore};
use fsmkit::equiv::{bisimilar, covers, CoverVerdict, ObservedSystem, Side};
use fsmkit::format::{self, MachineDef, MachineDocument};
use fsmkit::lang::{complete, determinize, language_equivalent, minimize, LanguageVerdict};
use fsmkit::machine::{MooreMachine, OutputKind, Recognizer};
use fsmkit::regex::{nfa_to_regex, regex_to_nfa, Regex};
use fsmkit::{Symbol, Word};

#[derive(Parser)]
#[command(name = "fsm", version, about = "Inspect, convert, compare and compose state machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a machine in canonical form
    Show {
        /// Machine reference, FILE or FILE#NAME
        machine: String,
    },
    /// Print a machine as a DOT digraph
    Dot { machine: String },
    /// Exit 0 if the machine accepts the word, 1 if it rejects it
    Accepts {
        machine: String,
        /// Single-character symbols concatenated (`ab`), or comma-separated
        /// for multi-character symbols (`go,stop`); empty for the empty word
        word: String,
    },
    /// Determinize a recognizer (subset construction)
    Determinize { machine: String },
    /// Minimize a deterministic recognizer
    Minimize { machine: String },
    /// Complete a deterministic recognizer with a sink state
    Complete { machine: String },
    /// Encode a machine as a Moore machine
    #[command(name = "encode-moore")]
    EncodeMoore {
        machine: String,
        /// `enabled` attaches enabled-action sets, `accept` the accept bit
        #[arg(long, value_enum)]
        output: OutputChoice,
    },
    /// Compare two machines; exit 0 when equivalent, 1 when not
    Equiv {
        #[arg(long, value_enum)]
        kind: EquivKind,
        left: String,
        right: String,
    },
    /// Does the first machine cover the second? Exit 0 if so, 1 if not
    Covers { coverer: String, covered: String },
    /// Press a word of buttons against a process, exploring every
    /// nondeterministic resolution; exit 0 if every run succeeds, 1 if
    /// every run blocks, 3 on a mix
    Experiment { machine: String, word: String },
    /// Compose the machines of a file with a fixed wiring and print the
    /// general product
    Product {
        file: PathBuf,
        /// `experimenter:WORD` wires machine 1 to the experimenter for
        /// WORD; `sync` steps every machine sharing the global label
        #[arg(long)]
        wiring: String,
    },
    /// Build an NFA from a rational expression
    #[command(name = "regex2nfa")]
    Regex2Nfa {
        /// Expression: literals, `|`, `*`, parentheses, `<name>` for
        /// multi-character symbols, `ε`/`%e`, `∅`/`%0`
        expr: String,
        /// Comma-separated alphabet, e.g. `a,b,c`
        #[arg(long)]
        alphabet: String,
    },
    /// Print a rational expression for a recognizer's language
    #[command(name = "nfa2regex")]
    Nfa2Regex { machine: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputChoice {
    Enabled,
    Accept,
}

#[derive(Clone, Copy, ValueEnum)]
enum EquivKind {
    Language,
    Covering,
    Bisim,
}

struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<fsmkit::Error> for CliError {
    fn from(e: fsmkit::Error) -> Self {
        CliError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fsm: {e}");
            ExitCode::from(2)
        }
    }
}

/// A machine selected from a document, with its display name.
struct Selected {
    name: String,
    def: MachineDef,
}

fn load_document(path: &str) -> Result<MachineDocument, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read `{path}`: {e}")))?;
    format::parse(&text).map_err(|e| CliError(format!("{path}: {e}")))
}

fn load(reference: &str) -> Result<Selected, CliError> {
    let (path, name) = match reference.split_once('#') {
        Some((path, name)) => (path, Some(name)),
        None => (reference, None),
    };
    let doc = load_document(path)?;
    match name {
        Some(name) => match doc.get(name) {
            Some(def) => Ok(Selected { name: name.to_string(), def: def.clone() }),
            None => Err(CliError(format!("no machine named `{name}` in `{path}`"))),
        },
        None => match doc.single() {
            Some((name, def)) => Ok(Selected { name: name.to_string(), def: def.clone() }),
            None => Err(CliError(format!(
                "`{path}` holds {} machines; select one with `{path}#NAME`",
                doc.len()
            ))),
        },
    }
}

fn parse_word(text: &str) -> Result<Word, CliError> {
    if text.is_empty() {
        return Ok(Word::empty());
    }
    let parts: Vec<String> = if text.contains(',') {
        let mut parts: Vec<&str> = text.split(',').collect();
        if parts.last() == Some(&"") {
            parts.pop(); // trailing comma: a single multi-character symbol
        }
        parts.iter().map(|p| p.to_string()).collect()
    } else {
        text.chars().map(|c| c.to_string()).collect()
    };
    parts
        .into_iter()
        .map(|p| Symbol::new(&p).map_err(|e| CliError(e.to_string())))
        .collect::<Result<Vec<_>, _>>()
        .map(Word::new)
}

fn require_recognizer<'a>(sel: &'a Selected, op: &str) -> Result<&'a Recognizer, CliError> {
    sel.def
        .as_recognizer()
        .ok_or_else(|| CliError(format!("`{}` is a Moore machine; {op} needs a recognizer", sel.name)))
}

/// The accept-bit view for recognizers, the output map for Moore machines.
fn observed(sel: &Selected) -> ObservedSystem {
    match &sel.def {
        MachineDef::Recognizer(r) => ObservedSystem::from_recognizer(r),
        MachineDef::Moore(m) => ObservedSystem::from_moore(m),
    }
}

/// The enabled-actions view for recognizers, set-valued Moore machines
/// unchanged; other output kinds are not usable as processes.
fn as_process(sel: &Selected) -> Result<MooreMachine, CliError> {
    match &sel.def {
        MachineDef::Recognizer(r) => Ok(lts_to_moore(r.ts())),
        MachineDef::Moore(m) if m.kind() == OutputKind::Symbols => Ok(m.clone()),
        MachineDef::Moore(m) => Err(CliError(format!(
            "`{}` has {} outputs; a process needs symbol-set outputs",
            sel.name,
            m.kind().name()
        ))),
    }
}

fn print_machine(name: &str, def: &MachineDef) {
    print!("{}", format::serialize_machine(name, def));
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Show { machine } => {
            let sel = load(&machine)?;
            print_machine(&sel.name, &sel.def);
            Ok(0)
        }
        Command::Dot { machine } => {
            let sel = load(&machine)?;
            print!("{}", format::to_dot(&sel.name, &sel.def));
            Ok(0)
        }
        Command::Accepts { machine, word } => {
            let sel = load(&machine)?;
            let r = require_recognizer(&sel, "accepts")?;
            let w = parse_word(&word)?;
            if r.accepts(&w)? {
                println!("accept");
                Ok(0)
            } else {
                println!("reject");
                Ok(1)
            }
        }
        Command::Determinize { machine } => {
            let sel = load(&machine)?;
            let r = require_recognizer(&sel, "determinize")?;
            print_machine(&sel.name, &MachineDef::Recognizer(determinize(r)));
            Ok(0)
        }
        Command::Minimize { machine } => {
            let sel = load(&machine)?;
            let r = require_recognizer(&sel, "minimize")?;
            print_machine(&sel.name, &MachineDef::Recognizer(minimize(r)?));
            Ok(0)
        }
        Command::Complete { machine } => {
            let sel = load(&machine)?;
            let r = require_recognizer(&sel, "complete")?;
            print_machine(&sel.name, &MachineDef::Recognizer(complete(r)?));
            Ok(0)
        }
        Command::EncodeMoore { machine, output } => {
            let sel = load(&machine)?;
            let moore = match output {
                OutputChoice::Enabled => lts_to_moore(sel.def.ts()),
                OutputChoice::Accept => {
                    recognizer_to_moore(require_recognizer(&sel, "encode-moore --output accept")?)
                }
            };
            print_machine(&sel.name, &MachineDef::Moore(moore));
            Ok(0)
        }
        Command::Equiv { kind, left, right } => {
            let l = load(&left)?;
            let r = load(&right)?;
            match kind {
                EquivKind::Language => {
                    let lr = require_recognizer(&l, "equiv --kind language")?;
                    let rr = require_recognizer(&r, "equiv --kind language")?;
                    match language_equivalent(lr, rr)? {
                        LanguageVerdict::Equivalent => {
                            println!("equivalent");
                            Ok(0)
                        }
                        LanguageVerdict::Inequivalent { counterexample } => {
                            println!("inequivalent: counterexample {counterexample}");
                            Ok(1)
                        }
                    }
                }
                EquivKind::Covering => {
                    let a = observed(&l);
                    let b = observed(&r);
                    let forward = covers(&a, &b)?; // does `left` cover `right`
                    let backward = covers(&b, &a)?;
                    if forward.is_covers() && backward.is_covers() {
                        println!("covering-equivalent");
                        return Ok(0);
                    }
                    println!("not covering-equivalent");
                    if let CoverVerdict::DoesNotCover { stuck_state } = &forward {
                        println!("{} does not cover {} (stuck state: {})", l.name, r.name, stuck_state);
                    }
                    if let CoverVerdict::DoesNotCover { stuck_state } = &backward {
                        println!("{} does not cover {} (stuck state: {})", r.name, l.name, stuck_state);
                    }
                    Ok(1)
                }
                EquivKind::Bisim => {
                    let a = observed(&l);
                    let b = observed(&r);
                    let verdict = bisimilar(&a, &b)?;
                    let p = verdict.partition();
                    let left_block = p
                        .block_of(Side::Left, a.ts().initial())
                        .expect("initial state belongs to a block");
                    let right_block = p
                        .block_of(Side::Right, b.ts().initial())
                        .expect("initial state belongs to a block");
                    if verdict.is_bisimilar() {
                        println!("bisimilar");
                        println!("initial blocks: left={left_block}, right={right_block}");
                        Ok(0)
                    } else {
                        println!("not bisimilar");
                        println!("initial blocks: left={left_block}, right={right_block}");
                        Ok(1)
                    }
                }
            }
        }
        Command::Covers { coverer, covered } => {
            let b = load(&coverer)?;
            let a = load(&covered)?;
            match covers(&observed(&b), &observed(&a))? {
                CoverVerdict::Covers { .. } => {
                    println!("covers");
                    Ok(0)
                }
                CoverVerdict::DoesNotCover { stuck_state } => {
                    println!("does not cover (stuck state: {stuck_state})");
                    Ok(1)
                }
            }
        }
        Command::Experiment { machine, word } => {
            let sel = load(&machine)?;
            let process = as_process(&sel)?;
            let presses = parse_word(&word)?;
            let outcomes = experiment(&process, &presses)?;
            for outcome in &outcomes {
                println!("{outcome}");
            }
            let success = outcomes.contains(&ExperimentOutcome::Success);
            let blocked = outcomes.iter().any(|o| matches!(o, ExperimentOutcome::Blocked(_)));
            Ok(match (success, blocked) {
                (true, false) => 0,
                (true, true) => 3,
                (false, _) => 1,
            })
        }
        Command::Product { file, wiring } => {
            let path = file.to_string_lossy().into_owned();
            let doc = load_document(&path)?;
            let spec = match wiring.as_str() {
                "sync" => {
                    let components: Vec<MooreMachine> = doc
                        .machines()
                        .map(|(name, def)| {
                            as_process(&Selected { name: name.to_string(), def: def.clone() })
                        })
                        .collect::<Result<_, _>>()?;
                    ProductSpec::synchronized(components)?
                }
                other => match other.strip_prefix("experimenter:") {
                    Some(word) => {
                        let (name, def) = doc
                            .machines()
                            .next()
                            .expect("parsed documents hold at least one machine");
                        let process =
                            as_process(&Selected { name: name.to_string(), def: def.clone() })?;
                        let presses = parse_word(word)?;
                        ProductSpec::experimenter(process, &presses)?
                    }
                    None => {
                        return Err(CliError(format!(
                            "unknown wiring `{other}`; use `sync` or `experimenter:WORD`"
                        )))
                    }
                },
            };
            let product = general_product(&spec)?;
            print_machine("product", &MachineDef::Moore(product));
            Ok(0)
        }
        Command::Regex2Nfa { expr, alphabet } => {
            let symbols: BTreeSet<Symbol> = alphabet
                .split(',')
                .filter(|p| !p.is_empty())
                .map(|p| Symbol::new(p).map_err(|e| CliError(e.to_string())))
                .collect::<Result<_, _>>()?;
            if symbols.is_empty() {
                return Err(CliError("--alphabet must name at least one symbol".into()));
            }
            let parsed = Regex::parse(&expr).map_err(|e| CliError(e.to_string()))?;
            let nfa = regex_to_nfa(&parsed, &symbols)?;
            print_machine("nfa", &MachineDef::Recognizer(nfa));
            Ok(0)
        }
        Command::Nfa2Regex { machine } => {
            let sel = load(&machine)?;
            let r = require_recognizer(&sel, "nfa2regex")?;
            println!("{}", nfa_to_regex(r));
            Ok(0)
        }
    }
}
