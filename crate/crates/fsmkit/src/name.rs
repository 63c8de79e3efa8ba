//! Names for states and action symbols, and words over an alphabet.
//!
//! Both [`Symbol`] and [`StateId`] are thin wrappers around an interned
//! string. Equality, ordering and hashing are by name. The public
//! constructors reject names that would be ambiguous in the textual
//! machine format or in generated DOT output; machine constructions
//! (subset states, quotient blocks, product tuples) build richer names
//! through a crate-internal constructor.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// Characters that may not appear in user-supplied names. They are either
/// punctuation of the machine DSL or separators used by canonical
/// construction names.
const RESERVED: &[char] = &[';', '{', '}', '-', '>', '=', ',', '(', ')', '|', '#', '"'];

fn check_name(name: &str) -> Result<(), Error> {
    if name.is_empty() {
        return Err(Error::InvalidName { name: name.into(), reason: "name is empty" });
    }
    for ch in name.chars() {
        if ch.is_whitespace() {
            return Err(Error::InvalidName {
                name: name.into(),
                reason: "name contains whitespace",
            });
        }
        if RESERVED.contains(&ch) {
            return Err(Error::InvalidName {
                name: name.into(),
                reason: "name contains reserved punctuation",
            });
        }
    }
    Ok(())
}

/// An action symbol: an element of a machine alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    /// Creates a symbol, enforcing the lexical rules for names.
    pub fn new(name: impl AsRef<str>) -> Result<Self, Error> {
        let name = name.as_ref();
        check_name(name)?;
        Ok(Symbol(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Symbol {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({})", self.0)
    }
}

/// A state name, unique within one machine.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(Arc<str>);

impl StateId {
    /// Creates a state id, enforcing the lexical rules for names.
    pub fn new(name: impl AsRef<str>) -> Result<Self, Error> {
        let name = name.as_ref();
        check_name(name)?;
        Ok(StateId(Arc::from(name)))
    }

    /// Builds a construction-generated name such as `{B1,B1x}` or `(s|e1)`
    /// without lexical checks. Only machine constructions use this; the
    /// names they build are injective by construction.
    pub(crate) fn synthetic(name: impl AsRef<str>) -> Self {
        StateId(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// Canonical name for a set of states: member names sorted, comma-joined,
/// wrapped in braces — `{B1,B1x}` is the state covering B1 and B1x. The
/// members must come in sorted order.
pub(crate) fn set_name<'a>(members: impl IntoIterator<Item = &'a StateId>) -> StateId {
    let names: Vec<&str> = members.into_iter().map(|s| s.as_str()).collect();
    StateId::synthetic(format!("{{{}}}", names.join(",")))
}

impl AsRef<str> for StateId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateId({})", self.0)
    }
}

/// A finite, possibly empty sequence of symbols.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Self {
        Word(symbols.into_iter().collect())
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, symbol: Symbol) {
        self.0.push(symbol);
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Word {
    /// The empty word prints as `ε`. Words whose symbols are all single
    /// characters print concatenated; otherwise symbols are comma-joined.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        if self.0.iter().all(|s| s.as_str().chars().count() == 1) {
            for s in &self.0 {
                f.write_str(s.as_str())?;
            }
            Ok(())
        } else {
            let joined: Vec<&str> = self.0.iter().map(|s| s.as_str()).collect();
            f.write_str(&joined.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}
