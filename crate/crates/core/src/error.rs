use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register size {0} outside supported range 1..=12")]
    QubitCount(usize),

    #[error("qubit index {qubit} invalid for a {num_qubits}-qubit register (indices are 1-based)")]
    InvalidQubit { qubit: usize, num_qubits: usize },

    #[error("qubit indices must be distinct")]
    DuplicateQubit,

    #[error("expected {expected} amplitudes, got {got}")]
    AmplitudeCount { expected: usize, got: usize },

    #[error("basis index {index} out of range for {num_qubits} qubits")]
    BasisIndex { index: usize, num_qubits: usize },

    #[error("dimension mismatch: {expected} vs {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state annihilated: squared norm {0:.3e} below threshold 1e-14")]
    Annihilated(f64),

    #[error("measurement outcome must be 0 or 1, got {0}")]
    InvalidOutcome(u8),

    #[error("gamma must lie in (0, 1], got {0}")]
    GammaRange(f64),

    #[error("spectra entry {0} outside [1/2, 1] (tolerance 1e-9)")]
    SpectraRange(f64),

    #[error("polytope dimension must be 3 or 4, got {0}")]
    PolytopeDimension(usize),

    #[error("no fixed facet system for polytope {0}")]
    NoFacetSystem(String),

    #[error("invalid polytope variant {variant:?} for family {family}")]
    InvalidVariant {
        family: String,
        variant: Option<char>,
    },

    #[error("unknown polytope id {0:?}")]
    UnknownPolytope(String),

    #[error("search target must be P4 or W3, got {0}")]
    InvalidSearchTarget(String),

    #[error("evaluation budget {0} below minimum 9")]
    BudgetTooSmall(u64),

    #[error("inverse gamma squared grid value {0} must be >= 1")]
    InvGammaRange(f64),

    #[error("sample count must be at least 1")]
    EmptySampleCount,

    #[error("cannot merge tallies with different register sizes ({0} vs {1})")]
    TallyMismatch(usize, usize),

    #[error("tomography supports at most 4 qubits, got {0}")]
    TomoSize(usize),

    #[error("expected counts per setting must be at least 1")]
    NSetRange,

    #[error("bootstrap needs at least 2 steps, got {0}")]
    BootstrapSteps(usize),

    #[error("dataset is missing measurement setting {0}")]
    MissingSetting(String),

    #[error("dataset contains no counts")]
    EmptyDataset,

    #[error("invalid measurement setting string {0:?}")]
    InvalidSetting(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
