use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown symbol at position {0}")]
    UnknownSymbol(usize),
    #[error("terminator `$` occurs inside the text at position {0}")]
    TerminatorMisplaced(usize),
    #[error("text does not end with a unique terminator")]
    MissingTerminator,
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("symbol {0:?} is paired with itself")]
    SelfComplement(char),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("fewer than {0} occurrences")]
    NotEnoughOccurrences(usize),
    #[error("fewer than {0} qualifying values")]
    NotEnoughValues(usize),
    #[error("node has no child number {0}")]
    NoSuchChild(usize),
    #[error("the root has no parent")]
    RootHasNoParent,
    #[error("depth {0} is deeper than the node")]
    DepthOutOfRange(usize),
    #[error("row {0} is not preceded by a parameterized symbol")]
    NotPPreceded(usize),
    #[error("range [{0}, {1}] is out of bounds")]
    RangeOutOfBounds(usize, usize),
    #[error("patterns {0} and {1} have the same prev encoding")]
    DuplicatePattern(usize, usize),
    #[error("pattern {0} is empty")]
    EmptyPattern(usize),
    #[error("dictionary has no patterns")]
    EmptyDictionary,
    #[error("relabeling needs more parameterized symbols than the alphabet has")]
    CounterOverflow,
    #[error("index has no structural component")]
    NoStructuralIndex,
    #[error("malformed index file: {0}")]
    Format(String),
    #[error("index file checksum mismatch")]
    Checksum,
}

pub type Result<T> = std::result::Result<T, Error>;
