//! Parser for the machine format. Whitespace-insensitive, `#` starts a
//! line comment, and every error carries the 1-based line and column of
//! the offending token.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::ParseError;
use crate::machine::{MooreMachine, OutputValue, Recognizer, TransitionSystem};
use crate::name::{StateId, Symbol};

use super::{MachineDef, MachineDocument};

type Pos = (usize, usize);
type Located = (String, Pos);

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Str(String),
    LBrace,
    RBrace,
    Semi,
    Colon,
    Comma,
    Eq,
    Dash,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("`{n}`"),
            Tok::Str(_) => "a quoted token".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Dash => "`-`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let here = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            _ if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '{' | '}' | ';' | ':' | ',' | '=' => {
                chars.next();
                col += 1;
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ';' => Tok::Semi,
                    ':' => Tok::Colon,
                    ',' => Tok::Comma,
                    _ => Tok::Eq,
                };
                toks.push((tok, here));
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    toks.push((Tok::Arrow, here));
                } else {
                    toks.push((Tok::Dash, here));
                }
            }
            '"' => {
                chars.next();
                col += 1;
                let mut value = String::new();
                loop {
                    match chars.next() {
                        None => {
                            return Err(ParseError::new(line, col, "unterminated string"));
                        }
                        Some('\n') => {
                            return Err(ParseError::new(line, col, "unterminated string"));
                        }
                        Some('"') => {
                            col += 1;
                            break;
                        }
                        Some('\\') => {
                            col += 1;
                            match chars.next() {
                                Some('"') => {
                                    value.push('"');
                                    col += 1;
                                }
                                Some('\\') => {
                                    value.push('\\');
                                    col += 1;
                                }
                                other => {
                                    return Err(ParseError::new(
                                        line,
                                        col,
                                        format!(
                                            "invalid escape {:?}",
                                            other.map(String::from).unwrap_or_default()
                                        ),
                                    ));
                                }
                            }
                        }
                        Some(c) => {
                            value.push(c);
                            col += 1;
                        }
                    }
                }
                toks.push((Tok::Str(value), here));
            }
            _ if c.is_ascii_alphanumeric() || c == '_' || c == '\'' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        name.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Name(name), here));
            }
            other => {
                return Err(ParseError::new(line, col, format!("unexpected character `{other}`")));
            }
        }
    }
    toks.push((Tok::Eof, (line, col)));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
}

#[derive(Clone, Debug)]
enum RawOutput {
    Flag(bool),
    Set(Vec<Located>),
    Token(String),
}

#[derive(Default)]
struct RawMachine {
    alphabet: Vec<Located>,
    saw_alphabet: bool,
    states: Vec<Located>,
    saw_states: bool,
    initial: Option<Located>,
    accepting: Vec<Located>,
    saw_accepting: bool,
    outputs: Vec<(String, Pos, RawOutput)>,
    transitions: Vec<(Located, Located, Located)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn peek2(&self) -> &Tok {
        let j = (self.i + 1).min(self.toks.len() - 1);
        &self.toks[j].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let item = self.toks[self.i].clone();
        if self.i < self.toks.len() - 1 {
            self.i += 1;
        }
        item
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.pos();
        ParseError::new(line, col, message)
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, ParseError> {
        if self.peek() == &tok {
            Ok(self.next().1)
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    fn expect_name(&mut self) -> Result<Located, ParseError> {
        match self.next() {
            (Tok::Name(n), pos) => Ok((n, pos)),
            (other, pos) => {
                Err(ParseError::new(pos.0, pos.1, format!("expected a name, found {}", other.describe())))
            }
        }
    }

    /// Parses `NAME ("," NAME)* ";"`, allowing the empty list.
    fn name_list(&mut self) -> Result<Vec<Located>, ParseError> {
        let mut names = Vec::new();
        if self.peek() == &Tok::Semi {
            self.next();
            return Ok(names);
        }
        loop {
            names.push(self.expect_name()?);
            match self.next() {
                (Tok::Comma, _) => continue,
                (Tok::Semi, _) => return Ok(names),
                (other, pos) => {
                    return Err(ParseError::new(
                        pos.0,
                        pos.1,
                        format!("expected `,` or `;`, found {}", other.describe()),
                    ))
                }
            }
        }
    }

    fn machine(&mut self) -> Result<(String, Pos, MachineDef), ParseError> {
        let kw_pos = match self.next() {
            (Tok::Name(n), pos) if n == "machine" => pos,
            (other, pos) => {
                return Err(ParseError::new(
                    pos.0,
                    pos.1,
                    format!("expected `machine`, found {}", other.describe()),
                ))
            }
        };
        let (name, name_pos) = self.expect_name()?;
        self.expect(Tok::LBrace)?;

        let mut raw = RawMachine::default();
        loop {
            match self.peek() {
                Tok::RBrace => {
                    self.next();
                    break;
                }
                Tok::Eof => return Err(self.error_here("expected `}`")),
                Tok::Name(n) => {
                    let keyword = n.clone();
                    match (keyword.as_str(), self.peek2()) {
                        ("alphabet", Tok::Colon) => {
                            self.next();
                            self.next();
                            raw.saw_alphabet = true;
                            raw.alphabet.extend(self.name_list()?);
                        }
                        ("states", Tok::Colon) => {
                            self.next();
                            self.next();
                            raw.saw_states = true;
                            raw.states.extend(self.name_list()?);
                        }
                        ("initial", Tok::Colon) => {
                            let (_, pos) = self.next();
                            self.next();
                            let (init, init_pos) = self.expect_name()?;
                            self.expect(Tok::Semi)?;
                            if raw.initial.is_some() {
                                return Err(ParseError::new(
                                    pos.0,
                                    pos.1,
                                    "duplicate `initial` declaration",
                                ));
                            }
                            raw.initial = Some((init, init_pos));
                        }
                        ("accepting", Tok::Colon) => {
                            let (_, pos) = self.next();
                            self.next();
                            if !raw.outputs.is_empty() {
                                return Err(ParseError::new(
                                    pos.0,
                                    pos.1,
                                    "machine mixes `accepting` and `output` declarations",
                                ));
                            }
                            raw.saw_accepting = true;
                            raw.accepting.extend(self.name_list()?);
                        }
                        ("output", Tok::Name(_)) => {
                            let (_, pos) = self.next();
                            if raw.saw_accepting {
                                return Err(ParseError::new(
                                    pos.0,
                                    pos.1,
                                    "machine mixes `accepting` and `output` declarations",
                                ));
                            }
                            let (state, state_pos) = self.expect_name()?;
                            self.expect(Tok::Eq)?;
                            let value = self.output_value()?;
                            self.expect(Tok::Semi)?;
                            raw.outputs.push((state, state_pos, value));
                        }
                        _ => {
                            let from = self.expect_name()?;
                            self.expect(Tok::Dash)?;
                            let label = self.expect_name()?;
                            self.expect(Tok::Arrow)?;
                            let to = self.expect_name()?;
                            self.expect(Tok::Semi)?;
                            raw.transitions.push((from, label, to));
                        }
                    }
                }
                _ => return Err(self.error_here(format!(
                    "expected a declaration, found {}",
                    self.peek().describe()
                ))),
            }
        }

        let def = build_machine(&raw, kw_pos)?;
        Ok((name, name_pos, def))
    }

    fn output_value(&mut self) -> Result<RawOutput, ParseError> {
        match self.next() {
            (Tok::LBrace, _) => {
                let mut names = Vec::new();
                if self.peek() == &Tok::RBrace {
                    self.next();
                    return Ok(RawOutput::Set(names));
                }
                loop {
                    names.push(self.expect_name()?);
                    match self.next() {
                        (Tok::Comma, _) => continue,
                        (Tok::RBrace, _) => return Ok(RawOutput::Set(names)),
                        (other, pos) => {
                            return Err(ParseError::new(
                                pos.0,
                                pos.1,
                                format!("expected `,` or `}}`, found {}", other.describe()),
                            ))
                        }
                    }
                }
            }
            (Tok::Name(n), pos) => match n.as_str() {
                "true" => Ok(RawOutput::Flag(true)),
                "false" => Ok(RawOutput::Flag(false)),
                other => Err(ParseError::new(
                    pos.0,
                    pos.1,
                    format!("expected `true`, `false`, `{{` or a quoted token, found `{other}`"),
                )),
            },
            (Tok::Str(s), _) => Ok(RawOutput::Token(s)),
            (other, pos) => Err(ParseError::new(
                pos.0,
                pos.1,
                format!("expected an output value, found {}", other.describe()),
            )),
        }
    }
}

fn build_machine(raw: &RawMachine, header: Pos) -> Result<MachineDef, ParseError> {
    let header_err = |msg: &str| ParseError::new(header.0, header.1, msg);
    if !raw.saw_alphabet {
        return Err(header_err("missing required declaration: alphabet"));
    }
    if !raw.saw_states {
        return Err(header_err("missing required declaration: states"));
    }
    let Some((initial, initial_pos)) = &raw.initial else {
        return Err(header_err("missing required declaration: initial"));
    };
    if !raw.saw_accepting && raw.outputs.is_empty() {
        return Err(header_err(
            "machine must declare either accepting states or outputs",
        ));
    }

    let alphabet: BTreeSet<&str> = raw.alphabet.iter().map(|(n, _)| n.as_str()).collect();
    let states: BTreeSet<&str> = raw.states.iter().map(|(n, _)| n.as_str()).collect();
    let check_state = |name: &str, pos: &Pos| -> Result<StateId, ParseError> {
        if states.contains(name) {
            Ok(StateId::new(name).expect("lexer admits only lexable names"))
        } else {
            Err(ParseError::new(pos.0, pos.1, format!("unknown state `{name}`")))
        }
    };
    let check_symbol = |name: &str, pos: &Pos| -> Result<Symbol, ParseError> {
        if alphabet.contains(name) {
            Ok(Symbol::new(name).expect("lexer admits only lexable names"))
        } else {
            Err(ParseError::new(pos.0, pos.1, format!("unknown symbol `{name}`")))
        }
    };

    let initial = check_state(initial, initial_pos)?;
    let mut transitions = Vec::new();
    for ((from, fp), (label, lp), (to, tp)) in &raw.transitions {
        transitions.push((
            check_state(from, fp)?,
            check_symbol(label, lp)?,
            check_state(to, tp)?,
        ));
    }
    let ts = TransitionSystem::new(
        raw.alphabet.iter().map(|(n, _)| Symbol::new(n).expect("lexable")),
        raw.states.iter().map(|(n, _)| StateId::new(n).expect("lexable")),
        initial,
        transitions,
    )
    .expect("validated before construction");

    if raw.saw_accepting {
        let mut accepting = Vec::new();
        for (name, pos) in &raw.accepting {
            accepting.push(check_state(name, pos)?);
        }
        let r = Recognizer::new(ts, accepting).expect("validated before construction");
        return Ok(MachineDef::Recognizer(r));
    }

    let mut outputs: BTreeMap<StateId, OutputValue> = BTreeMap::new();
    let mut kind: Option<(&'static str, Pos)> = None;
    for (state, pos, value) in &raw.outputs {
        let state = check_state(state, pos)?;
        let value = match value {
            RawOutput::Flag(b) => OutputValue::Flag(*b),
            RawOutput::Set(names) => {
                let mut set = BTreeSet::new();
                for (name, npos) in names {
                    set.insert(check_symbol(name, npos)?);
                }
                OutputValue::Symbols(set)
            }
            RawOutput::Token(t) => OutputValue::Token(t.clone()),
        };
        let this_kind = value.kind().name();
        match kind {
            None => kind = Some((this_kind, *pos)),
            Some((k, _)) if k != this_kind => {
                return Err(ParseError::new(
                    pos.0,
                    pos.1,
                    format!("output kind `{this_kind}` conflicts with earlier `{k}` outputs"),
                ));
            }
            _ => {}
        }
        if outputs.insert(state.clone(), value).is_some() {
            return Err(ParseError::new(
                pos.0,
                pos.1,
                format!("duplicate output for state `{state}`"),
            ));
        }
    }
    for s in ts.states() {
        if !outputs.contains_key(s) {
            return Err(header_err(&format!("missing output for state `{s}`")));
        }
    }
    let m = MooreMachine::new(ts, outputs).expect("validated before construction");
    Ok(MachineDef::Moore(m))
}

/// Parses a document of one or more machines.
pub fn parse(text: &str) -> Result<MachineDocument, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, i: 0 };
    let mut entries: Vec<(String, MachineDef)> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    loop {
        if parser.peek() == &Tok::Eof {
            if entries.is_empty() {
                return Err(parser.error_here("expected at least one `machine`"));
            }
            break;
        }
        let (name, name_pos, def) = parser.machine()?;
        if !seen.insert(name.clone()) {
            return Err(ParseError::new(
                name_pos.0,
                name_pos.1,
                format!("duplicate machine name `{name}`"),
            ));
        }
        entries.push((name, def));
    }
    Ok(MachineDocument::new(entries).expect("duplicates checked above"))
}
