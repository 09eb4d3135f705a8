use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("a context needs exactly one `@`, found several")]
    MultipleHoles,
    #[error("a context needs exactly one `@`, found none")]
    MissingHole,
    #[error("the unit word occurs everywhere and cannot be used as a pattern")]
    UnitPattern,
    #[error("not multilinear: {0}")]
    NonMultilinear(String),
    #[error("invalid monoid oracle: {0}")]
    InvalidOracle(String),
    #[error("the zero polynomial has no leading coefficient")]
    ZeroPolynomial,
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("no value assigned to variable `{0}`")]
    MissingVariable(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("monomial {monomial} is not below the ambiguity {ambiguity}")]
    NotBelow { monomial: String, ambiguity: String },
    #[error("bounds exceeded: {0}")]
    BoundsExceeded(String),
    #[error("rewriting fuel exhausted after {0} steps")]
    FuelExhausted(usize),
    #[error("not a Groebner-Shirshov basis at the working bounds: {0}")]
    NotGs(String),
}

pub type Result<T> = std::result::Result<T, Error>;
