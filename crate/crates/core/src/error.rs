use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("operator targets qubit {0} more than once")]
    DuplicateTarget(usize),

    #[error("operator on {arity} qubit(s) expects {expected} matrix entries, found {found}")]
    OperatorShape {
        arity: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("amplitude array of length {found} is not 2^{n_qubits}")]
    AmplitudeLength { n_qubits: usize, found: usize },

    #[error("post-selected outcome {outcome} on qubit {qubit} has zero probability")]
    ZeroProbabilityBranch { qubit: usize, outcome: u8 },

    #[error("{name} = {value} is outside its admissible range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("invalid code parameters (w = {w}, K = {k}): both must be at least 1")]
    InvalidCode { w: usize, k: usize },

    #[error("expected {expected} logical bits, found {found}")]
    LogicalLength { expected: usize, found: usize },

    #[error("logical amplitudes have norm {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("Pauli approximation has negative identity weight p0 = {p0}")]
    NegativeIdentityWeight { p0: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("error states {first} and {second} overlap by {overlap:e}; the error set is not correctable")]
    NonOrthogonalErrorStates {
        first: String,
        second: String,
        overlap: f64,
    },

    #[error("syndrome {0} has no recovery procedure (uncorrectable event)")]
    UncorrectableSyndrome(String),

    #[error("unsupported code for this operation: {0}")]
    UnsupportedCode(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("truncation bound {bound:e} exceeds tolerance {tolerance:e}")]
    TruncationBound { bound: f64, tolerance: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
