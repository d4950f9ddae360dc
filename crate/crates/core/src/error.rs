use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("GHZ index {0} out of range 0..=7")]
    GhzIndexOutOfRange(u8),
    #[error("entangled basis index {0} out of range 0..=3")]
    EntangledIndexOutOfRange(u8),
    #[error("invalid secret coefficients: {0}")]
    InvalidCoefficients(String),
    #[error("state dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("bitstring {bits} out of range for {num_qubits} qubits")]
    InvalidBasisState { num_qubits: usize, bits: usize },
    #[error("unsupported qubit count {0} (expected 2 or 3)")]
    UnsupportedQubitCount(usize),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("amplitude is not finite")]
    NonFiniteAmplitude,
    #[error("negative eigenvalue {0} in diagonal")]
    NegativeEigenvalue(f64),
    #[error("invalid line: a and b are both zero")]
    DegenerateLine,
    #[error("line ({a}, {b}, {c}) is not in canonical form")]
    NonCanonicalLine { a: i64, b: i64, c: i64 },
    #[error("judging matrix needs n >= 2, got {0}")]
    MatrixTooSmall(usize),
    #[error("invalid judging matrix: {0}")]
    InvalidMatrix(String),
    #[error("participant count {n} out of range 2..={max}")]
    ParticipantCountOutOfRange { n: usize, max: usize },
    #[error("coefficient bound {0} too small to generate tables")]
    BoundTooSmall(i64),
    #[error("N = {0} too small (need N >= 2)")]
    ChannelCountTooSmall(u32),
    #[error("table set violates invariants: {0}")]
    TableInvariant(String),
    #[error("malformed table file: {0}")]
    MalformedTableFile(String),
    #[error("table/participant mismatch: {0}")]
    TableMismatch(String),
    #[error("invalid adversary configuration: {0}")]
    InvalidAdversary(String),
    #[error("channel to participant {0} is not targeted by the adversary")]
    UntargetedChannel(usize),
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
