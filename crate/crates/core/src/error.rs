use thiserror::Error;

/// Errors raised by the library.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group order exceeds the configured bound of {bound}")]
    OrderBoundExceeded { bound: usize },
    #[error("action matrix is not invertible mod {modulus}")]
    ActionNotInvertible { modulus: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("element {0:?} does not belong to the group")]
    NotInGroup(String),
    #[error("the classes {0} do not generate the group")]
    NotGenerating(String),
    #[error("braid index {index} out of range for r = {r}")]
    IndexOutOfRange { index: usize, r: usize },
    #[error("exponent {m} is not coprime to element order {order}")]
    NotCoprime { m: i64, order: u64 },
    #[error("tuple does not act transitively on {degree} symbols")]
    NotTransitive { degree: usize },
    #[error("Riemann-Hurwitz index sum {0} is odd")]
    OddRiemannHurwitz(u64),
    #[error("non-integer or negative genus: 2(deg + g - 1) = {sum} with degree {degree}")]
    NonIntegerGenus { sum: u64, degree: usize },
    #[error("operation requires r = 4, got r = {0}")]
    RequiresFourBranchPoints(usize),
    #[error("operation requires a reduced equivalence mode")]
    RequiresReducedMode,
    #[error("absolute equivalence requires a permutation group")]
    NotPermutationGroup,
    #[error("normalizer in Sym({0}) requires brute force over more than 9 symbols; supply generators")]
    NormalizerUnavailable(usize),
    #[error("generator images do not define a homomorphism")]
    NotHomomorphism,
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("no extension of the action found: {0}")]
    NoExtension(String),
    #[error("invalid tower specification: {0}")]
    InvalidTower(String),
    #[error("class {label} contains elements of order divisible by {ell}")]
    NotEllPrime { label: String, ell: u64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    /// Whether the failure is a resource budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::OrderBoundExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
