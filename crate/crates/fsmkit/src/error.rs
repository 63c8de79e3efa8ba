//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by machine construction and the operations on machines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A symbol or state name failed the lexical rules.
    #[error("invalid name {name:?}: {reason}")]
    InvalidName { name: String, reason: &'static str },

    /// A state was referenced that the machine does not declare.
    #[error("unknown state `{state}`")]
    UnknownState { state: String },

    /// A symbol was referenced that the alphabet does not contain.
    #[error("unknown symbol `{symbol}`")]
    UnknownSymbol { symbol: String },

    /// Two machines were combined or compared but their alphabets differ,
    /// or a word uses symbols outside the machine's alphabet.
    #[error("alphabet mismatch: {detail}")]
    AlphabetMismatch { detail: String },

    /// An operation that requires a deterministic machine was given a
    /// nondeterministic one.
    #[error("determinism required: state `{state}` has multiple `{symbol}`-successors")]
    DeterminismRequired { state: String, symbol: String },

    /// A Moore machine's output map is not total on its states.
    #[error("missing output for state `{state}`")]
    MissingOutput { state: String },

    /// A Moore machine mixes output values of different kinds.
    #[error("mixed output kinds within one machine")]
    MixedOutputKinds,

    /// Two machines with different output kinds were compared.
    #[error("output kind mismatch: {left} vs {right}")]
    OutputKindMismatch { left: &'static str, right: &'static str },

    /// A connection function returned a symbol outside its component's alphabet.
    #[error("connection for component {component} returned `{symbol}`, which is outside the component alphabet")]
    ConnectionRange { component: usize, symbol: String },

    /// A product specification is structurally invalid.
    #[error("invalid product specification: {detail}")]
    InvalidProduct { detail: String },

    /// A document holds two machines with the same name.
    #[error("duplicate machine name `{name}`")]
    DuplicateMachine { name: String },
}

/// A syntax error with a source position, produced by the machine DSL
/// parser and the regular-expression parser. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}
