//! Rational expressions and their conversions to and from recognizers.
//!
//! [`regex_to_nfa`] runs the Thompson construction and eliminates the
//! internal epsilon moves before returning, so the public machine types
//! stay epsilon-free. [`nfa_to_regex`] runs state elimination with a
//! deterministic elimination order (states sorted by name).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, ParseError};
use crate::index::Dense;
use crate::machine::{Recognizer, TransitionSystem};
use crate::name::{StateId, Symbol};

/// Abstract syntax of rational expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    /// The empty language.
    Empty,
    /// The language containing only the empty word.
    Epsilon,
    Lit(Symbol),
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    /// Union with the obvious simplifications (`∅` is the unit, `e|e = e`).
    pub fn union(a: Regex, b: Regex) -> Regex {
        match (a, b) {
            (Regex::Empty, x) | (x, Regex::Empty) => x,
            (x, y) if x == y => x,
            (x, y) => Regex::Union(Box::new(x), Box::new(y)),
        }
    }

    /// Concatenation with the obvious simplifications (`∅` annihilates,
    /// `ε` is the unit).
    pub fn concat(a: Regex, b: Regex) -> Regex {
        match (a, b) {
            (Regex::Empty, _) | (_, Regex::Empty) => Regex::Empty,
            (Regex::Epsilon, x) | (x, Regex::Epsilon) => x,
            (x, y) => Regex::Concat(Box::new(x), Box::new(y)),
        }
    }

    /// Kleene star with the obvious simplifications (`∅* = ε* = ε`,
    /// `e** = e*`).
    pub fn star(a: Regex) -> Regex {
        match a {
            Regex::Empty | Regex::Epsilon => Regex::Epsilon,
            Regex::Star(x) => Regex::Star(x),
            x => Regex::Star(Box::new(x)),
        }
    }

    /// The symbols appearing as literals.
    pub fn literals(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_literals(&mut out);
        out
    }

    fn collect_literals(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Regex::Empty | Regex::Epsilon => {}
            Regex::Lit(s) => {
                out.insert(s.clone());
            }
            Regex::Concat(l, r) | Regex::Union(l, r) => {
                l.collect_literals(out);
                r.collect_literals(out);
            }
            Regex::Star(e) => e.collect_literals(out),
        }
    }

    /// Parses the textual form produced by [`Display`](fmt::Display):
    /// single-character literals, `<name>` for multi-character symbols,
    /// `|` for union, juxtaposition for concatenation, `*` for star,
    /// parentheses for grouping, `ε` (or `%e`) for the empty word and
    /// `∅` (or `%0`) for the empty language.
    pub fn parse(text: &str) -> Result<Regex, ParseError> {
        Parser::new(text).parse()
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl Regex {
    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        match self {
            Regex::Empty => f.write_str("∅"),
            Regex::Epsilon => f.write_str("ε"),
            Regex::Lit(s) => {
                if s.as_str().chars().count() == 1 {
                    f.write_str(s.as_str())
                } else {
                    write!(f, "<{}>", s.as_str())
                }
            }
            Regex::Star(e) => {
                if min > 2 {
                    f.write_str("(")?;
                }
                e.write_prec(f, 3)?;
                f.write_str("*")?;
                if min > 2 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Regex::Concat(l, r) => {
                if min > 1 {
                    f.write_str("(")?;
                }
                l.write_prec(f, 2)?;
                r.write_prec(f, 2)?;
                if min > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            Regex::Union(l, r) => {
                if min > 0 {
                    f.write_str("(")?;
                }
                l.write_prec(f, 1)?;
                f.write_str("|")?;
                r.write_prec(f, 1)?;
                if min > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser { chars: text.chars().collect(), pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(1, self.pos + 1, message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn parse(mut self) -> Result<Regex, ParseError> {
        let e = self.union()?;
        self.skip_ws();
        if let Some(c) = self.peek() {
            return Err(self.error(format!("unexpected `{c}`")));
        }
        Ok(e)
    }

    fn union(&mut self) -> Result<Regex, ParseError> {
        let mut e = self.concat()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('|') {
                self.pos += 1;
                let rhs = self.concat()?;
                e = Regex::Union(Box::new(e), Box::new(rhs));
            } else {
                return Ok(e);
            }
        }
    }

    fn concat(&mut self) -> Result<Regex, ParseError> {
        let mut e = self.star()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c != '|' && c != ')' => {
                    let rhs = self.star()?;
                    e = Regex::Concat(Box::new(e), Box::new(rhs));
                }
                _ => return Ok(e),
            }
        }
    }

    fn star(&mut self) -> Result<Regex, ParseError> {
        let mut e = self.atom()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                e = Regex::Star(Box::new(e));
            } else {
                return Ok(e);
            }
        }
    }

    fn atom(&mut self) -> Result<Regex, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of expression")),
            Some('(') => {
                self.pos += 1;
                let e = self.union()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('ε') => {
                self.pos += 1;
                Ok(Regex::Epsilon)
            }
            Some('∅') => {
                self.pos += 1;
                Ok(Regex::Empty)
            }
            Some('%') => {
                self.pos += 1;
                match self.peek() {
                    Some('e') => {
                        self.pos += 1;
                        Ok(Regex::Epsilon)
                    }
                    Some('0') => {
                        self.pos += 1;
                        Ok(Regex::Empty)
                    }
                    _ => Err(self.error("expected `%e` or `%0`")),
                }
            }
            Some('<') => {
                self.pos += 1;
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c != '>') {
                    self.pos += 1;
                }
                if self.peek() != Some('>') {
                    return Err(self.error("unterminated `<name>`"));
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                let sym = Symbol::new(&name)
                    .map_err(|e| ParseError::new(1, start + 1, e.to_string()))?;
                Ok(Regex::Lit(sym))
            }
            Some(c) if c.is_ascii_alphanumeric() || c == '\'' || c == '_' => {
                self.pos += 1;
                let sym = Symbol::new(c.to_string()).expect("single name character");
                Ok(Regex::Lit(sym))
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }
}

/// Thompson construction followed by epsilon elimination. The resulting
/// recognizer has states `q0..qn` (numbered in discovery order), the given
/// alphabet, and accepts exactly the language the expression denotes.
/// Errors when a literal lies outside the alphabet.
pub fn regex_to_nfa(e: &Regex, alphabet: &BTreeSet<Symbol>) -> Result<Recognizer, Error> {
    for lit in e.literals() {
        if !alphabet.contains(&lit) {
            return Err(Error::AlphabetMismatch {
                detail: format!("regex literal `{lit}` is not in the alphabet"),
            });
        }
    }

    let symbols: Vec<Symbol> = alphabet.iter().cloned().collect();
    let index: BTreeMap<&Symbol, usize> =
        symbols.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut builder = Thompson { eps: Vec::new(), steps: Vec::new() };
    let (start, accept) = builder.fragment(e, &index);

    // Epsilon closures.
    let n = builder.eps.len();
    let mut closure: Vec<BTreeSet<usize>> = Vec::with_capacity(n);
    for s in 0..n {
        let mut seen = BTreeSet::new();
        seen.insert(s);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &builder.eps[u] {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        closure.push(seen);
    }

    // Derived plain-NFA moves: u -x-> w iff some v in closure(u) has a
    // direct x-step to w. Acceptance looks through the closure as well.
    let mut derived: Vec<Vec<BTreeSet<usize>>> = vec![vec![BTreeSet::new(); symbols.len()]; n];
    for u in 0..n {
        for &v in &closure[u] {
            for &(x, w) in &builder.steps[v] {
                derived[u][x].insert(w);
            }
        }
    }

    // Keep the part reachable from the start, named q0.. in BFS order.
    let mut number: BTreeMap<usize, usize> = BTreeMap::new();
    number.insert(start, 0);
    let mut queue = VecDeque::new();
    queue.push_back(start);
    let mut transitions: Vec<(usize, usize, usize)> = Vec::new();
    while let Some(u) = queue.pop_front() {
        let from = number[&u];
        for (x, targets) in derived[u].iter().enumerate() {
            for &w in targets {
                let next = number.len();
                let to = *number.entry(w).or_insert_with(|| {
                    queue.push_back(w);
                    next
                });
                transitions.push((from, x, to));
            }
        }
    }

    let name = |i: usize| StateId::synthetic(format!("q{i}"));
    let states: Vec<StateId> = (0..number.len()).map(name).collect();
    let accepting: Vec<StateId> = number
        .iter()
        .filter(|(u, _)| closure[**u].contains(&accept))
        .map(|(_, i)| name(*i))
        .collect();
    let ts = TransitionSystem::new(
        symbols.iter().cloned(),
        states,
        name(0),
        transitions.into_iter().map(|(f, x, t)| (name(f), symbols[x].clone(), name(t))),
    )
    .expect("Thompson construction is well-formed");
    Ok(Recognizer::new(ts, accepting).expect("accepting states exist"))
}

struct Thompson {
    eps: Vec<Vec<usize>>,
    steps: Vec<Vec<(usize, usize)>>,
}

impl Thompson {
    fn fresh(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.steps.push(Vec::new());
        self.eps.len() - 1
    }

    fn fragment(&mut self, e: &Regex, index: &BTreeMap<&Symbol, usize>) -> (usize, usize) {
        match e {
            Regex::Empty => {
                let s = self.fresh();
                let a = self.fresh();
                (s, a)
            }
            Regex::Epsilon => {
                let s = self.fresh();
                let a = self.fresh();
                self.eps[s].push(a);
                (s, a)
            }
            Regex::Lit(sym) => {
                let s = self.fresh();
                let a = self.fresh();
                self.steps[s].push((index[sym], a));
                (s, a)
            }
            Regex::Concat(l, r) => {
                let (ls, la) = self.fragment(l, index);
                let (rs, ra) = self.fragment(r, index);
                self.eps[la].push(rs);
                (ls, ra)
            }
            Regex::Union(l, r) => {
                let (ls, la) = self.fragment(l, index);
                let (rs, ra) = self.fragment(r, index);
                let s = self.fresh();
                let a = self.fresh();
                self.eps[s].push(ls);
                self.eps[s].push(rs);
                self.eps[la].push(a);
                self.eps[ra].push(a);
                (s, a)
            }
            Regex::Star(inner) => {
                let (is, ia) = self.fragment(inner, index);
                let s = self.fresh();
                let a = self.fresh();
                self.eps[s].push(is);
                self.eps[s].push(a);
                self.eps[ia].push(is);
                self.eps[ia].push(a);
                (s, a)
            }
        }
    }
}

/// State elimination. The result denotes exactly `L(r)`; the elimination
/// order is states sorted by name, so the output is deterministic.
pub fn nfa_to_regex(r: &Recognizer) -> Regex {
    let d = Dense::new(r.ts());
    let n = d.state_count();
    let source = n;
    let sink = n + 1;

    let mut edges: BTreeMap<(usize, usize), Regex> = BTreeMap::new();
    let connect = |edges: &mut BTreeMap<(usize, usize), Regex>, u: usize, v: usize, e: Regex| {
        let slot = edges.remove(&(u, v)).unwrap_or(Regex::Empty);
        let merged = Regex::union(slot, e);
        if merged != Regex::Empty {
            edges.insert((u, v), merged);
        }
    };

    connect(&mut edges, source, d.initial, Regex::Epsilon);
    for (i, s) in d.states.iter().enumerate() {
        if r.is_accepting(s) {
            connect(&mut edges, i, sink, Regex::Epsilon);
        }
    }
    for (s, by_symbol) in d.succ.iter().enumerate() {
        for (x, targets) in by_symbol.iter().enumerate() {
            for &t in targets {
                connect(&mut edges, s, t, Regex::Lit(d.symbols[x].clone()));
            }
        }
    }

    // Dense state indices follow name order, so eliminating 0..n is the
    // sorted-by-name order the construction promises.
    for q in 0..n {
        let loop_part = match edges.remove(&(q, q)) {
            Some(e) => Regex::star(e),
            None => Regex::Epsilon,
        };
        let incoming: Vec<(usize, Regex)> = edges
            .iter()
            .filter(|((u, v), _)| *v == q && *u != q)
            .map(|((u, _), e)| (*u, e.clone()))
            .collect();
        let outgoing: Vec<(usize, Regex)> = edges
            .iter()
            .filter(|((u, v), _)| *u == q && *v != q)
            .map(|((_, v), e)| (*v, e.clone()))
            .collect();
        edges.retain(|(u, v), _| *u != q && *v != q);
        for (u, in_e) in &incoming {
            for (v, out_e) in &outgoing {
                let path = Regex::concat(
                    in_e.clone(),
                    Regex::concat(loop_part.clone(), out_e.clone()),
                );
                connect(&mut edges, *u, *v, path);
            }
        }
    }

    edges.remove(&(source, sink)).unwrap_or(Regex::Empty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::language_equivalent;
    use crate::machine::Recognizer;
    use crate::testutil::{paper_a, state, sym, word};

    fn abc() -> BTreeSet<Symbol> {
        [sym("a"), sym("b"), sym("c")].into_iter().collect()
    }

    #[test]
    fn thompson_branching() {
        // a(b|c)
        let e = Regex::concat(
            Regex::Lit(sym("a")),
            Regex::union(Regex::Lit(sym("b")), Regex::Lit(sym("c"))),
        );
        let r = regex_to_nfa(&e, &abc()).unwrap();
        assert!(r.accepts(&word("ab")).unwrap());
        assert!(r.accepts(&word("ac")).unwrap());
        assert!(!r.accepts(&word("a")).unwrap());
        assert!(!r.accepts(&crate::name::Word::empty()).unwrap());
    }

    #[test]
    fn empty_regex_accepts_nothing() {
        let r = regex_to_nfa(&Regex::Empty, &abc()).unwrap();
        for w in ["", "a", "ab", "abc"] {
            assert!(!r.accepts(&word(w)).unwrap());
        }
    }

    #[test]
    fn epsilon_and_star() {
        let r = regex_to_nfa(&Regex::Epsilon, &abc()).unwrap();
        assert!(r.accepts(&crate::name::Word::empty()).unwrap());
        assert!(!r.accepts(&word("a")).unwrap());

        let astar = regex_to_nfa(&Regex::star(Regex::Lit(sym("a"))), &abc()).unwrap();
        assert!(astar.accepts(&crate::name::Word::empty()).unwrap());
        assert!(astar.accepts(&word("aaa")).unwrap());
        assert!(!astar.accepts(&word("ab")).unwrap());
    }

    #[test]
    fn ab_matches_fixture_language() {
        let e = Regex::concat(Regex::Lit(sym("a")), Regex::Lit(sym("b")));
        let r = regex_to_nfa(&e, &abc()).unwrap();
        assert!(language_equivalent(&r, &paper_a()).unwrap().is_equivalent());
    }

    #[test]
    fn literal_outside_alphabet_is_rejected() {
        let e = Regex::Lit(sym("z"));
        assert!(matches!(
            regex_to_nfa(&e, &abc()),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn round_trip_on_fixture() {
        let a = paper_a();
        let e = nfa_to_regex(&a);
        let back = regex_to_nfa(&e, a.ts().alphabet()).unwrap();
        assert!(language_equivalent(&back, &a).unwrap().is_equivalent());
    }

    #[test]
    fn epsilon_only_machine() {
        let ts = TransitionSystem::new(abc(), [state("s0")], state("s0"), []).unwrap();
        let r = Recognizer::new(ts, [state("s0")]).unwrap();
        assert_eq!(nfa_to_regex(&r), Regex::Epsilon);
    }

    #[test]
    fn empty_language_machine() {
        let ts = TransitionSystem::new(abc(), [state("s0")], state("s0"), []).unwrap();
        let r = Recognizer::new(ts, []).unwrap();
        assert_eq!(nfa_to_regex(&r), Regex::Empty);
    }

    #[test]
    fn display_and_parse_round_trip() {
        let cases = [
            Regex::concat(
                Regex::Lit(sym("a")),
                Regex::union(Regex::Lit(sym("b")), Regex::Lit(sym("c"))),
            ),
            Regex::star(Regex::union(Regex::Lit(sym("a")), Regex::Epsilon)),
            Regex::union(Regex::Empty, Regex::Lit(sym("go"))),
            // Concatenation parses left-associated, so the case is built
            // the same way.
            Regex::concat(
                Regex::concat(Regex::star(Regex::Lit(sym("a"))), Regex::Lit(sym("b"))),
                Regex::Lit(sym("a")),
            ),
        ];
        for e in cases {
            let text = e.to_string();
            let parsed = Regex::parse(&text).unwrap_or_else(|err| panic!("{text}: {err}"));
            assert_eq!(parsed, e, "round-tripping {text}");
        }
    }

    #[test]
    fn parser_reports_positions() {
        let err = Regex::parse("a(b").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 4);
        assert!(Regex::parse("").is_err());
        assert!(Regex::parse("a)").is_err());
    }
}
