use thiserror::Error;

/// Errors raised by state construction, reductions and the experiment pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode list is empty")]
    EmptyModes,

    #[error("duplicate mode label {0}")]
    DuplicateMode(String),

    #[error("unknown mode {0}")]
    UnknownMode(String),

    #[error("occupation pattern has {got} entries, system has {expected} modes")]
    PatternLength { expected: usize, got: usize },

    #[error("occupation {count} on mode {mode} exceeds the cap {cap}")]
    OccupationOutOfRange { mode: usize, count: u32, cap: u32 },

    #[error("states belong to different systems")]
    MismatchedSystems,

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("mode subset must be a non-empty proper subset of the system modes")]
    InvalidSubset,

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: eigenvalue {0:e} below clamp tolerance")]
    NegativeEigenvalue(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("w-matrix symmetry violated: {0}")]
    WrongSymmetry(String),

    #[error("state is not confined to the two-particle sector of four modes")]
    NotTwoParticle,

    #[error("state has support outside the operator basis")]
    OutsideOperatorBasis,

    #[error("measure undefined: {0}")]
    UndefinedMeasure(String),

    #[error("Bell state destroyed (prenormalization norm {0:e})")]
    StateDestroyed(f64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("operation requires bosonic statistics: {0}")]
    RequiresBosons(String),

    #[error("coherent source cutoff {cutoff} violates tail bound (tail {tail:e})")]
    CutoffTooSmall { cutoff: usize, tail: f64 },

    #[error("state file: {0}")]
    StateFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
