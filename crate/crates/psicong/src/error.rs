use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("coefficient not divisible by 3^{0}")]
    DivideNotExact(u32),
    #[error("equation outside the quadratic-mod-3 shape: {0}")]
    ShapeMismatch(String),
    #[error("series solution not unique mod 3^{e}: free choice at index {index}")]
    NonUnique { index: usize, e: u32 },
    #[error("no series solution mod 3^{e}: constraint at index {index} unsatisfiable")]
    Inconsistent { index: usize, e: u32 },
    #[error("iteration step {beta}: {what}")]
    DivisibilityFailure { beta: u32, what: String },
    #[error("both sign branches match the series solution")]
    BranchAmbiguous,
    #[error("no sign branch matches the series solution")]
    NoBranch,
    #[error("cannot section over base 1+{0}")]
    SectionDenominator(String),
    #[error("unsupported sequence id: {0}")]
    UnsupportedId(String),
    #[error("no printed representation for {id} mod 3^{e}")]
    NoFixture { id: String, e: u32 },
    #[error("kernel polynomial assertion failed: {0}")]
    KernelIntegrality(String),
    #[error("no digit table for power {power} mod 3^{e}")]
    Untabulated { power: u32, e: u32 },
    #[error("no digit rule for {0}")]
    NoDigitRule(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
