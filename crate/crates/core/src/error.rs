use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u32),
    #[error("degree f = {0} is below 2")]
    InvalidDegree(usize),
    #[error("digit {digit} out of range for p = {p}")]
    DigitOutOfRange { digit: u32, p: u32 },
    #[error("digit vector uses p = {found}, modulus uses p = {expected}")]
    MismatchedPrime { expected: u32, found: u32 },
    #[error("operands live modulo different moduli")]
    ModulusMismatch,
    #[error("multiplication by p^k has no digit rotation law modulo q+1")]
    NoRotationLaw,
    #[error("residue is not divisible by q+1")]
    NotDivisible,

    #[error("h is divisible by q+1")]
    DivisibleByQPlusOne,
    #[error("h is not congruent to gamma + gamma' + (q-1)/(p-1) modulo q-1")]
    DeterminantMismatch,

    #[error("gene word has odd length {0}")]
    OddLength(usize),
    #[error("letter AB at position {0} is not followed by O")]
    ABNotFollowedByO(usize),
    #[error("letter O at position {0} is preceded by A or B")]
    OIllegallyPreceded(usize),
    #[error("every position has X_i = X_(i+f) and no O")]
    ConditionThreeFails,
    #[error("gene is degenerate")]
    DegenerateGene,
    #[error("gene is not viable")]
    NotViable,
    #[error("dominance ties around the whole gene")]
    CircularDominance,
    #[error("invalid fragment: {0}")]
    InvalidFragment(String),
    #[error("cannot parse {0:?}")]
    Parse(String),

    #[error("sampling attempt failed")]
    Failure,
    #[error("p = {0} is not supported by the sampler")]
    UnsupportedPrime(u32),

    #[error("r has the wrong length")]
    InvalidSerreWeight,
    #[error("sequence is not active and compatible: s is not integral")]
    NonIntegralS,
    #[error("not a combinatorial weight of this gene")]
    NotAWeight,
    #[error("position {0} is not a cross")]
    NotACross(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
