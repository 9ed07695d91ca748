use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the constructions of this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("symbol `{0}` appears twice in the alphabet")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` is reserved")]
    ReservedSymbol(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("state {state} is out of range (automaton has {count} states)")]
    InvalidState { state: usize, count: usize },
    #[error("letter {letter} is out of range (alphabet has {size} letters)")]
    InvalidLetter { letter: usize, size: usize },
    #[error("output {output} is out of range (output alphabet has {size} symbols)")]
    InvalidOutput { output: usize, size: usize },
    #[error("automata are defined over different alphabets")]
    AlphabetMismatch,
    #[error("a numeration system needs an infinite language")]
    FiniteLanguage,
    #[error("word is not in the language: {0}")]
    NotInLanguage(NotInLanguage),
    #[error("the machine is undefined or outputs ⊥ on a word of the language")]
    UndefinedOnLanguage,
    #[error("output symbol `{0}` is not in the output alphabet")]
    UnknownOutput(String),
    #[error("fibers `{0}` and `{1}` overlap")]
    FibersOverlap(String, String),
    #[error("fibers do not cover the language")]
    FibersDoNotCover,
    #[error("a fiber is not contained in the language")]
    FiberOutsideLanguage,
    #[error("sequence not recognized within bound: {states} distinct subsequences and still growing")]
    NotRecognizedWithinBound { states: usize },
    #[error("morphism is not prolongable on `{0}`")]
    NotProlongable(String),
    #[error("image of `{0}` is empty")]
    EmptyImage(String),
    #[error("image of `{0}` under the coding has length > 1")]
    NotWeakCoding(String),
    #[error("the substitution generates a finite word")]
    FiniteGeneration,
    #[error("letter map is not total: {0}")]
    MapNotTotal(String),
    #[error("prefix of length {prefix} is shorter than n_max = {n_max}")]
    PrefixTooShort { prefix: usize, n_max: usize },
}

/// Why a word failed a membership check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotInLanguage {
    /// The run has no transition at this (0-based) position.
    DeadAt(usize),
    /// The run ends in a non-final state.
    NonFinalEnd,
}

impl core::fmt::Display for NotInLanguage {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NotInLanguage::DeadAt(pos) => write!(f, "no transition at position {pos}"),
            NotInLanguage::NonFinalEnd => f.write_str("run ends in a non-final state"),
        }
    }
}
