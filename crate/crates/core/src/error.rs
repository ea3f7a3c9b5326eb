use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate-limit series for the envelope did not converge (|Dt/4| = {arg:.3e})")]
    DegenerateLimitUnstable { arg: f64 },

    #[error("no steady state: {0}")]
    NoSteadyState(&'static str),

    #[error("size {requested} exceeds the limit of {limit}")]
    SizeLimitExceeded { requested: usize, limit: usize },

    #[error("coefficient {index} is not realizable (arcsin argument {argument})")]
    InconsistentCoefficients { index: usize, argument: f64 },

    #[error("non-finite input")]
    NaNInput,

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("zero cavity linewidth: the Lorentzian is degenerate")]
    ZeroLinewidth,

    #[error("step too large: {0}")]
    StepTooLarge(String),

    #[error("backend {0} unavailable: {1}")]
    BackendUnavailable(&'static str, &'static str),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}
