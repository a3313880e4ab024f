use thiserror::Error;

/// Errors raised by the simulator, the sequence builders and the experiment
/// harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("target qubit {0} listed more than once")]
    DuplicateTarget(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported register size {0} (1 to 4 qubits)")]
    UnsupportedQubitCount(usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("Kraus operators are not complete (max deviation of sum K^dag K from I is {deviation:.3e})")]
    IncompleteKraus { deviation: f64 },

    #[error("unphysical coherence times: T2 = {t2} us exceeds twice T1 = {t1} us")]
    UnphysicalT2 { t1: f64, t2: f64 },

    #[error("invalid URDD order {0}: need an even number of pulses, at least 4")]
    InvalidPulseCount(usize),

    #[error("invalid repetition count {m}: {reason}")]
    InvalidRepetitions { m: usize, reason: &'static str },

    #[error("phase list has odd length {0}")]
    OddPhaseCount(usize),

    #[error("mapping {label} does not reduce {term} to Z on qubit {readout} (deviation {deviation:.3e})")]
    MappingOracle {
        label: String,
        term: String,
        readout: usize,
        deviation: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
