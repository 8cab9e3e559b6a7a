use thiserror::Error;

/// Errors raised by the exact-arithmetic layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("residue field mismatch: q={0} vs q={1}")]
    FieldMismatch(u32, u32),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus does not define a field: {0}")]
    NotAField(String),
    #[error("value is zero")]
    Zero,
    #[error("product with conjugate is not rational")]
    NonRationalModulus,
    #[error("modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: String, found: String },
    #[error("square is not +/- the modulus")]
    NotAFourthRoot,
    #[error("element is zero to precision O(t^{0})")]
    ZeroToPrecision(i64),
    #[error("coefficient t^{index} lies beyond precision O(t^{prec})")]
    BeyondPrecision { index: i64, prec: i64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("period mismatch: {0} vs {1}")]
    PeriodMismatch(usize, usize),
    #[error("pairing is not monomial")]
    NonMonomialPairing,
    #[error("matrix is singular to precision")]
    Singular,
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("not in the group: {0}")]
    NotInGroup(String),
    #[error("insufficient precision: need O(t^{needed}), have O(t^{available})")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("term budget exceeded: {terms} terms > limit {limit}")]
    BudgetExceeded { terms: u128, limit: u128 },
    #[error("no reducibility at 1: {0}")]
    NoReducibility(String),
    #[error("sign decision did not terminate below {0} bits")]
    PrecisionCap(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
