//! Distributing an arbitrary multi-qubit state to remote parties by
//! entanglement swapping.
//!
//! The sender holds an `N`-qubit state and shares one singlet with a
//! receiver for every qubit to be sent. Each swap step Bell-measures a source
//! qubit together with the sender's half of a singlet, sends two classical
//! bits, and the receiver fixes up its half with a Pauli. After all steps the
//! receivers hold the original state exactly, whatever the outcomes were.
//!
//! Modules:
//!
//! - [`state`]: dense state vectors, tensor products, permutation, fidelity,
//!   Pauli operators.
//! - [`density`]: partial trace and purity.
//! - [`bell`]: Bell basis, projective Bell measurement, decomposition about
//!   one qubit.
//! - [`protocol`]: swap steps, distribution plans, transcripts and the
//!   resource ledger.
//! - [`oracle`]: closed-form branch expansion that checks the measurement
//!   path independently.
//! - [`exec`]: sequential or rayon-backed loops (feature `parallel`).
//!
//! ```
//! use qdist_core::{distribute, presets::Preset, rng::seeded_rng, DistributionPlan};
//!
//! let ghz = Preset::Ghz.build(3).unwrap();
//! let plan = DistributionPlan::round_robin(ghz.labels(), 3);
//! let run = distribute(&ghz, &plan, &mut seeded_rng(7)).unwrap();
//! let fidelity = qdist_core::protocol::recovery_fidelity(&ghz, &plan, &run).unwrap();
//! assert!(fidelity > 1.0 - qdist_core::NORM_TOL);
//! assert_eq!(run.ledger.ebits_consumed, 3);
//! ```

pub mod bell;
pub mod density;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod presets;
pub mod protocol;
pub mod rng;
pub mod state;
mod wire;

/// Tolerance for normalization and fidelity checks.
pub const NORM_TOL: f64 = 1e-9;

/// Outcomes with probability below this are treated as impossible.
pub const PROB_FLOOR: f64 = 1e-12;

/// Cap on live qubits in one register.
pub const MAX_QUBITS: usize = 26;

pub use bell::{
    bell_measure, bell_probabilities, bell_project, decompose, is_product_about, make_bell,
    BellKind, BellOutcome, DecompositionResult, Projection,
};
pub use density::{reduced_density, DensityMatrix};
pub use error::{Error, Result};
pub use exec::Exec;
pub use oracle::{expand_swap, verify_correction_table, CorrectionReport, SwapExpansion};
pub use protocol::{
    correction_for, decode_classical, distribute, distribute_with_outcomes, encode_classical,
    partial_distribution_reduced, swap_step, swap_step_with_outcome, ClassicalBits, Distribution,
    DistributionPlan, Party, ResourceLedger, SwapStep, TranscriptEntry,
};
pub use state::{make_basis_state, PauliOp, QubitLabel, StateVector};
