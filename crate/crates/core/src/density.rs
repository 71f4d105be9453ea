//! Reduced density matrices obtained by partial trace of a pure state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::build_amplitudes;
use crate::state::{bit_of, QubitLabel, StateVector};

/// Row-major `2^n × 2^n` density matrix over labelled qubits, MSB-first like
/// [`StateVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<QubitLabel>,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &StateVector) -> DensityMatrix {
        let amps = state.amplitudes();
        let dim = amps.len();
        let entries = build_amplitudes(dim * dim, |k| amps[k / dim] * amps[k % dim].conj());
        DensityMatrix {
            labels: state.labels().to_vec(),
            entries,
        }
    }

    /// `I / 2^n` on the given labels.
    pub fn maximally_mixed(labels: Vec<QubitLabel>) -> DensityMatrix {
        let dim = 1usize << labels.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        DensityMatrix { labels, entries }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// `tr(ρ²)`. For Hermitian ρ this is the sum of squared entry moduli.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.entry(r, c) - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    /// `⟨v|ρ|v⟩`; `v` need not be normalized.
    pub fn expectation(&self, v: &[Complex64]) -> Complex64 {
        let dim = self.dim();
        assert_eq!(v.len(), dim, "vector length must match matrix dimension");
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            let row: Complex64 = (0..dim).map(|c| self.entry(r, c) * v[c]).sum();
            acc += v[r].conj() * row;
        }
        acc
    }

    pub fn permute_to(&self, order: &[QubitLabel]) -> Result<DensityMatrix> {
        let n = self.labels.len();
        if order.len() != n {
            return Err(Error::NotAPermutation);
        }
        let mut source_bit = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for &label in order {
            let p = self
                .labels
                .iter()
                .position(|&l| l == label)
                .ok_or(Error::NotAPermutation)?;
            if seen[p] {
                return Err(Error::NotAPermutation);
            }
            seen[p] = true;
            source_bit.push(bit_of(n, p));
        }
        let map = |j: usize| {
            source_bit.iter().enumerate().fold(0usize, |acc, (k, &sb)| {
                acc | (((j >> bit_of(n, k)) & 1) << sb)
            })
        };
        let dim = self.dim();
        let entries = build_amplitudes(dim * dim, |k| {
            self.entries[map(k / dim) * dim + map(k % dim)]
        });
        Ok(DensityMatrix {
            labels: order.to_vec(),
            entries,
        })
    }

    pub fn relabel_all(&self, map: &[(QubitLabel, QubitLabel)]) -> Result<DensityMatrix> {
        let mut labels = self.labels.clone();
        for &(from, to) in map {
            let p = self
                .labels
                .iter()
                .position(|&l| l == from)
                .ok_or(Error::UnknownLabel(from))?;
            labels[p] = to;
        }
        crate::state::check_labels(&labels)?;
        Ok(DensityMatrix {
            labels,
            entries: self.entries.clone(),
        })
    }

    /// Largest entry-wise difference after aligning `other` to this label
    /// order.
    pub fn max_entry_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.labels.len() != other.labels.len()
            || self.labels.iter().any(|l| !other.labels.contains(l))
        {
            return Err(Error::LabelMismatch);
        }
        let other = other.permute_to(&self.labels)?;
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Partial trace of `state` over every qubit not in `keep`. The result lists
/// its qubits in the order of `keep`.
pub fn reduced_density(state: &StateVector, keep: &[QubitLabel]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyRegister);
    }
    for (k, l) in keep.iter().enumerate() {
        state.position(*l)?;
        if keep[..k].contains(l) {
            return Err(Error::DuplicateLabel(*l));
        }
    }
    let mut order = keep.to_vec();
    order.extend(state.labels().iter().filter(|l| !keep.contains(l)));
    // Kept qubits are now the high bits: amplitudes form a (kept × traced)
    // row-major matrix M, and ρ = M M†.
    let arranged = state.permute_to(&order)?;
    let m = arranged.amplitudes();
    let dim = 1usize << keep.len();
    let env = m.len() / dim;
    let entries = build_amplitudes(dim * dim, |k| {
        let (r, c) = (k / dim, k % dim);
        let (row, col) = (&m[r * env..(r + 1) * env], &m[c * env..(c + 1) * env]);
        row.iter().zip(col).map(|(a, b)| a * b.conj()).sum()
    });
    Ok(DensityMatrix {
        labels: keep.to_vec(),
        entries,
    })
}
