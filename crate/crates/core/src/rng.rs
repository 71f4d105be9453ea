//! Seeded random sources and random states.
//!
//! Stream splitting: trial `k` of a run seeded with `seed` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `k`. Adding trials
//! never perturbs earlier ones.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::state::{check_labels, QubitLabel, StateVector};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child stream for trial `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Normalized state with i.i.d. standard complex Gaussian amplitudes.
pub fn random_state<R: Rng + ?Sized>(labels: Vec<QubitLabel>, rng: &mut R) -> Result<StateVector> {
    check_labels(&labels)?;
    let amplitudes: Vec<Complex64> = (0..1usize << labels.len())
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    Ok(StateVector::renormalized(labels, amplitudes))
}
