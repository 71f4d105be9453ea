#![allow(dead_code)]

use num_complex::Complex64;
use qdist_core::rng::{random_state, seeded_rng};
use qdist_core::state::label_range;
use qdist_core::{QubitLabel, StateVector};

pub fn l(id: u32) -> QubitLabel {
    QubitLabel(id)
}

pub fn random(n: usize, seed: u64) -> StateVector {
    random_state(label_range(0, n), &mut seeded_rng(seed)).unwrap()
}

pub fn ghz(n: usize) -> StateVector {
    qdist_core::presets::Preset::Ghz.build(n).unwrap()
}

/// Partial trace by direct summation over every pair of full basis indices.
/// Returns the row-major matrix over `keep`, in the order given.
pub fn brute_partial_trace(state: &StateVector, keep: &[QubitLabel]) -> Vec<Complex64> {
    let n = state.num_qubits();
    let labels = state.labels();
    let bit = |index: usize, label: QubitLabel| -> usize {
        let p = labels.iter().position(|&x| x == label).unwrap();
        (index >> (n - 1 - p)) & 1
    };
    let kept_index =
        |index: usize| -> usize { keep.iter().fold(0, |acc, &k| (acc << 1) | bit(index, k)) };
    let traced: Vec<QubitLabel> = labels
        .iter()
        .copied()
        .filter(|x| !keep.contains(x))
        .collect();
    let dim = 1 << keep.len();
    let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
    let amps = state.amplitudes();
    for i in 0..amps.len() {
        for j in 0..amps.len() {
            if traced.iter().all(|&t| bit(i, t) == bit(j, t)) {
                rho[kept_index(i) * dim + kept_index(j)] += amps[i] * amps[j].conj();
            }
        }
    }
    rho
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
