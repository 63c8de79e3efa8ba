//! The textual machine format and DOT export.
//!
//! A `.fsm` document holds one or more named machines:
//!
//! ```text
//! # a recognizer
//! machine A {
//!   alphabet: a, b, c;
//!   states: A0, A1, A2, A3;
//!   initial: A0;
//!   accepting: A2;
//!   A0 - a -> A1;
//!   A1 - b -> A2;
//!   A1 - c -> A3;
//! }
//! ```
//!
//! A machine declares either accepting states (a recognizer) or outputs
//! (a Moore machine); outputs are symbol sets (`output s = {a, b};`),
//! Booleans (`output s = true;`) or quoted opaque tokens
//! (`output s = "(…)";`, as produced by machine products). Serialization
//! is canonical — declarations in a fixed order, names sorted — so equal
//! machines print byte-equally. Construction-generated names that fall
//! outside the format's lexical rules are deterministically renamed on
//! output; the round trip is then isomorphic rather than name-identical.

mod parse;

pub use parse::parse;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::machine::{MooreMachine, OutputValue, Recognizer, TransitionSystem};
use crate::name::{StateId, Symbol};

/// One named machine definition: a recognizer or a Moore machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MachineDef {
    Recognizer(Recognizer),
    Moore(MooreMachine),
}

impl MachineDef {
    pub fn ts(&self) -> &TransitionSystem {
        match self {
            MachineDef::Recognizer(r) => r.ts(),
            MachineDef::Moore(m) => m.ts(),
        }
    }

    pub fn as_recognizer(&self) -> Option<&Recognizer> {
        match self {
            MachineDef::Recognizer(r) => Some(r),
            MachineDef::Moore(_) => None,
        }
    }

    pub fn as_moore(&self) -> Option<&MooreMachine> {
        match self {
            MachineDef::Moore(m) => Some(m),
            MachineDef::Recognizer(_) => None,
        }
    }
}

/// An ordered list of named machines with unique names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineDocument {
    entries: Vec<(String, MachineDef)>,
}

impl MachineDocument {
    pub fn new(entries: impl IntoIterator<Item = (String, MachineDef)>) -> Result<Self, Error> {
        let entries: Vec<(String, MachineDef)> = entries.into_iter().collect();
        let mut seen = BTreeSet::new();
        for (name, _) in &entries {
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateMachine { name: name.clone() });
            }
        }
        Ok(MachineDocument { entries })
    }

    pub fn machines(&self) -> impl Iterator<Item = (&str, &MachineDef)> {
        self.entries.iter().map(|(n, d)| (n.as_str(), d))
    }

    pub fn get(&self, name: &str) -> Option<&MachineDef> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    /// The unique machine of a single-machine document.
    pub fn single(&self) -> Option<(&str, &MachineDef)> {
        match self.entries.as_slice() {
            [(name, def)] => Some((name.as_str(), def)),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// True when a name is expressible in the format: ASCII alphanumerics,
/// `_` and `'` only.
fn lexable(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Deterministic renaming of names that the format cannot express:
/// offending characters become `_`, collisions get numeric suffixes.
/// Returns `None` when every name is already expressible.
fn sanitize_set<'a>(names: impl IntoIterator<Item = &'a str>) -> Option<BTreeMap<String, String>> {
    let names: Vec<&str> = names.into_iter().collect();
    if names.iter().all(|n| lexable(n)) {
        return None;
    }
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut map = BTreeMap::new();
    let mut ordered = names;
    ordered.sort_unstable();
    for name in ordered {
        let base: String = if lexable(name) {
            name.to_string()
        } else {
            name.chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '\'' { c } else { '_' })
                .collect()
        };
        let mut candidate = base.clone();
        let mut n = 2;
        while !used.insert(candidate.clone()) {
            candidate = format!("{base}_{n}");
            n += 1;
        }
        map.insert(name.to_string(), candidate);
    }
    Some(map)
}

fn rename_def(def: &MachineDef) -> MachineDef {
    let ts = def.ts();
    let state_map = sanitize_set(ts.states().iter().map(|s| s.as_str()));
    let symbol_map = sanitize_set(ts.alphabet().iter().map(|s| s.as_str()));
    if state_map.is_none() && symbol_map.is_none() {
        return def.clone();
    }
    let map_state = |s: &StateId| -> StateId {
        match &state_map {
            Some(m) => StateId::new(&m[s.as_str()]).expect("sanitized names are lexable"),
            None => s.clone(),
        }
    };
    let map_symbol = |x: &Symbol| -> Symbol {
        match &symbol_map {
            Some(m) => Symbol::new(&m[x.as_str()]).expect("sanitized names are lexable"),
            None => x.clone(),
        }
    };
    let new_ts = TransitionSystem::new(
        ts.alphabet().iter().map(&map_symbol),
        ts.states().iter().map(&map_state),
        map_state(ts.initial()),
        ts.transitions().map(|t| (map_state(&t.from), map_symbol(&t.label), map_state(&t.to))),
    )
    .expect("renaming preserves well-formedness");
    match def {
        MachineDef::Recognizer(r) => MachineDef::Recognizer(
            Recognizer::new(new_ts, r.accepting().iter().map(&map_state))
                .expect("renaming preserves the accepting set"),
        ),
        MachineDef::Moore(m) => {
            let outputs: Vec<(StateId, OutputValue)> = m
                .outputs()
                .iter()
                .map(|(s, v)| {
                    let v = match v {
                        OutputValue::Symbols(set) => {
                            OutputValue::Symbols(set.iter().map(&map_symbol).collect())
                        }
                        other => other.clone(),
                    };
                    (map_state(s), v)
                })
                .collect();
            MachineDef::Moore(MooreMachine::new(new_ts, outputs).expect("outputs stay total"))
        }
    }
}

fn name_list(names: &BTreeSet<impl AsRef<str> + Ord>) -> String {
    let parts: Vec<&str> = names.iter().map(|n| n.as_ref()).collect();
    if parts.is_empty() {
        String::new()
    } else {
        format!(" {}", parts.join(", "))
    }
}

fn quote_token(token: &str) -> String {
    let mut out = String::with_capacity(token.len() + 2);
    out.push('"');
    for c in token.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Serializes one named machine in canonical form.
pub fn serialize_machine(name: &str, def: &MachineDef) -> String {
    let def = rename_def(def);
    let printed_name = match sanitize_set([name]) {
        Some(map) => map[name].clone(),
        None => name.to_string(),
    };
    let ts = def.ts();
    let mut out = String::new();
    out.push_str(&format!("machine {printed_name} {{\n"));
    out.push_str(&format!("  alphabet:{};\n", name_list(ts.alphabet())));
    out.push_str(&format!("  states:{};\n", name_list(ts.states())));
    out.push_str(&format!("  initial: {};\n", ts.initial()));
    match &def {
        MachineDef::Recognizer(r) => {
            out.push_str(&format!("  accepting:{};\n", name_list(r.accepting())));
        }
        MachineDef::Moore(m) => {
            for (state, value) in m.outputs() {
                let rendered = match value {
                    OutputValue::Flag(b) => b.to_string(),
                    OutputValue::Symbols(set) => format!("{{{}}}", {
                        let parts: Vec<&str> = set.iter().map(|s| s.as_str()).collect();
                        parts.join(", ")
                    }),
                    OutputValue::Token(t) => quote_token(t),
                };
                out.push_str(&format!("  output {state} = {rendered};\n"));
            }
        }
    }
    for t in ts.transitions() {
        out.push_str(&format!("  {} - {} -> {};\n", t.from, t.label, t.to));
    }
    out.push_str("}\n");
    out
}

/// Serializes a document in canonical form: machines in document order,
/// separated by a blank line. Equal documents print byte-equally.
pub fn serialize(doc: &MachineDocument) -> String {
    let blocks: Vec<String> =
        doc.machines().map(|(name, def)| serialize_machine(name, def)).collect();
    blocks.join("\n")
}

fn dot_escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders a machine as a DOT digraph: one node per state (double circles
/// for accepting states, outputs in the label for Moore machines), one
/// labelled edge per transition, and an arrow from a synthetic invisible
/// node to the initial state.
pub fn to_dot(name: &str, def: &MachineDef) -> String {
    let ts = def.ts();
    let mut init_marker = String::from("__init");
    while ts.states().iter().any(|s| s.as_str() == init_marker) {
        init_marker.push('\'');
    }
    let mut out = String::new();
    out.push_str(&format!("digraph \"{}\" {{\n", dot_escape(name)));
    out.push_str("  rankdir=LR;\n");
    out.push_str(&format!("  \"{}\" [shape=point, style=invis];\n", dot_escape(&init_marker)));
    for s in ts.states() {
        let line = match def {
            MachineDef::Recognizer(r) => {
                let shape = if r.is_accepting(s) { "doublecircle" } else { "circle" };
                format!("  \"{}\" [shape={shape}];\n", dot_escape(s.as_str()))
            }
            MachineDef::Moore(m) => {
                let output = m.output(s).expect("total outputs");
                format!(
                    "  \"{}\" [shape=circle, label=\"{}\\n{}\"];\n",
                    dot_escape(s.as_str()),
                    dot_escape(s.as_str()),
                    dot_escape(&output.to_string()),
                )
            }
        };
        out.push_str(&line);
    }
    out.push_str(&format!(
        "  \"{}\" -> \"{}\";\n",
        dot_escape(&init_marker),
        dot_escape(ts.initial().as_str())
    ));
    for t in ts.transitions() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            dot_escape(t.from.as_str()),
            dot_escape(t.to.as_str()),
            dot_escape(t.label.as_str()),
        ));
    }
    out.push_str("}\n");
    out
}
