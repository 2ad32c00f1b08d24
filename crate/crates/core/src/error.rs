use thiserror::Error;

/// Library-wide error type.
///
/// Variants are grouped into three broad faults (see [`Error::fault`]):
/// malformed external input, violated mathematical preconditions, and
/// exhausted internal budgets. Callers that need an exit code or a retry
/// policy should branch on the fault, not on individual variants.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("frequency {0} is not present in the polynomial")]
    MissingFrequency(u32),

    #[error("conjugate symmetry violated at k = {k} (deviation {deviation:.3e})")]
    ConjugateSymmetry { k: u32, deviation: f64 },

    #[error("de la Vallee Poussin orders must satisfy 0 <= m < n, got m = {m}, n = {n}")]
    BadBlockOrders { m: u32, n: u32 },

    #[error("sample grid of size {n} cannot resolve frequencies up to {maxk} (need at least {} points)", 2 * *maxk as usize + 2)]
    GridTooSmall { n: usize, maxk: u32 },

    #[error("alpha must lie in (0, 1]")]
    AlphaOutOfRange,

    #[error("cannot select {m} indices out of degree {n}")]
    SelectionTooLarge { m: u32, n: u32 },

    #[error("polynomial degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: u32, got: u32 },

    #[error("vector {index} exceeds the unit sup-norm bound (|u|_inf = {norm})")]
    NotNormalized { index: usize, norm: f64 },

    #[error("all amplitudes on the requested index set are zero")]
    ZeroAmplitudes,

    #[error("index {0} is outside the ambient range [1, {1}]")]
    IndexOutOfRange(u32, u32),

    #[error("duplicate index {0}")]
    DuplicateIndex(u32),

    #[error("mismatched ambient ranges: {0} vs {1}")]
    AmbientMismatch(u32, u32),

    #[error("length mismatch: {0}")]
    LengthMismatch(&'static str),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse classification used by binaries to derive exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Unreadable or malformed external input.
    Parse,
    /// A documented mathematical precondition was violated.
    Domain,
    /// An internal budget (memory, big-integer size) was exhausted.
    Budget,
}

impl Error {
    pub fn fault(&self) -> Fault {
        match self {
            Error::Parse(_) => Fault::Parse,
            Error::BudgetExceeded(_) => Fault::Budget,
            _ => Fault::Domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
