use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("expected a coefficient vector of length {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberTheoryError {
    #[error("factorization of {0} exceeded the configured effort budget")]
    FactorizationTimeout(BigInt),
    #[error("{value} is not a prime congruent to {residue} mod {modulus}")]
    InvalidResidue { value: BigInt, residue: u32, modulus: u32 },
    #[error("cannot factor zero")]
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("membership withheld: {0}")]
    IndeterminateFactorization(NumberTheoryError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{0} is not odd")]
    NotOdd(BigInt),
    #[error("{0} is a 1 mod 8 prime of class PM1; 64p is not a circulant determinant")]
    NotClassPm3(BigInt),
    #[error("no normalized quadruple for {prime} within |coords| <= {bound}")]
    SearchExhausted { prime: BigInt, bound: i64 },
    #[error("{0} is not a member; no witness exists")]
    NotMember(BigInt),
    #[error("constructed vector has determinant {actual}, expected {expected}")]
    VerificationFailed { expected: BigInt, actual: BigInt },
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
    #[error(transparent)]
    Core(#[from] CoreError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search box: {0}")]
    InvalidBox(String),
    #[error("box holds {count} vectors, over the work budget of {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("entries outside [-2, 2] at order 16 need an explicit override")]
    EntriesNeedOverride,
    #[error("sampled cross-check failed for {vector:?}: fast {fast}, bareiss {bareiss}")]
    CrossCheckFailed { vector: Vec<i64>, fast: BigInt, bareiss: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("verification failed: {0}")]
    Rejected(String),
}
