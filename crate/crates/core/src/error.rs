use thiserror::Error;

use crate::bell::BellKind;
use crate::state::QubitLabel;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register must hold at least one qubit")]
    EmptyRegister,

    #[error("register of {0} qubits exceeds the cap of {max}", max = crate::MAX_QUBITS)]
    TooManyQubits(usize),

    #[error("qubit label {0} appears more than once")]
    DuplicateLabel(QubitLabel),

    #[error("qubit label {0} is not in the register")]
    UnknownLabel(QubitLabel),

    #[error("label order is not a permutation of the register")]
    NotAPermutation,

    #[error("registers hold different label sets")]
    LabelMismatch,

    #[error("expected {expected} amplitudes, got {got}")]
    AmplitudeCount { expected: usize, got: usize },

    #[error("squared norm {0} is not 1 within tolerance")]
    NotNormalized(f64),

    #[error("amplitude {0} is not finite")]
    NonFinite(usize),

    #[error("bit value {0} is not 0 or 1")]
    InvalidBit(u8),

    #[error("decomposition needs at least two qubits")]
    SingleQubit,

    #[error("outcome {0} has probability below the floor")]
    ImpossibleOutcome(BellKind),

    #[error("invalid classical code {0}")]
    InvalidCode(u8),

    #[error("Bell pair ({0}, {1}) is already in use")]
    PairConsumed(QubitLabel, QubitLabel),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("invalid preset: {0}")]
    InvalidPreset(String),
}
