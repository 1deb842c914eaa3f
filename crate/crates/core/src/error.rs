use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("repeated qubit {0} in gate or query")]
    RepeatedQubit(usize),

    #[error("cannot parse Pauli string {input:?}: {reason}")]
    ParsePauli { input: String, reason: String },

    #[error("matrix is not antisymmetric (max deviation {0:e})")]
    NotAntisymmetric(f64),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Clifford does not map computational basis states to basis states")]
    NotAPermutationClifford,

    #[error("qubit {qubit}: Z is not a quadratic Majorana monomial in this encoding")]
    NotCzSwapFamily { qubit: usize },

    #[error("encoding matrix entry (row {row}, column {column}) is not I or Z")]
    MalformedPairing { row: usize, column: usize },

    #[error("no CZ/SWAP circuit reproduces this encoding matrix")]
    Unreachable,

    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),

    #[error("unsupported encoding: {0}")]
    UnsupportedEncoding(String),

    #[error("Majorana subset has odd size {0}")]
    OddSubset(usize),

    #[error("Majorana index {index} out of range for {len} operators")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("operator is not Hermitian")]
    NonHermitian,

    #[error("rotation mixes the ancilla Majorana of the extended frame")]
    AncillaNotFixed,

    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),

    #[error("unsupported query: {0}")]
    Unsupported(String),

    #[error("Pauli needs {needed} Majoranas, above the limit of {limit}")]
    DegreeTooLarge { needed: usize, limit: usize },

    #[error("{n} qubits exceeds the cap of {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("malformed circuit structure: {0}")]
    MalformedStructure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
