//! Dense state vectors over labelled qubits.
//!
//! Amplitudes are stored MSB-first: `labels[0]` is the most significant bit
//! of the amplitude index. A register of `n` qubits therefore keeps the bit of
//! the qubit at position `p` at bit `n - 1 - p` of the index.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{build_amplitudes, sum_indexed};
use crate::{MAX_QUBITS, NORM_TOL};

/// Opaque qubit identifier. Labels are never recycled within a protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitLabel(pub u32);

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

impl From<u32> for QubitLabel {
    fn from(id: u32) -> Self {
        QubitLabel(id)
    }
}

/// `n` consecutive labels starting at `first`.
pub fn label_range(first: u32, n: usize) -> Vec<QubitLabel> {
    (0..n as u32).map(|k| QubitLabel(first + k)).collect()
}

/// Single-qubit Pauli operators used as corrections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliOp {
    I,
    X,
    Z,
    /// σz·σx: X acts first, then Z.
    ZX,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::I, PauliOp::X, PauliOp::Z, PauliOp::ZX];

    pub fn as_str(self) -> &'static str {
        match self {
            PauliOp::I => "I",
            PauliOp::X => "X",
            PauliOp::Z => "Z",
            PauliOp::ZX => "ZX",
        }
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[inline]
pub(crate) fn bit_of(n: usize, pos: usize) -> usize {
    n - 1 - pos
}

/// Inserts a zero bit at position `bit` of `value`, shifting higher bits up.
#[inline]
pub(crate) fn insert_zero_bit(value: usize, bit: usize) -> usize {
    let low = value & ((1usize << bit) - 1);
    ((value >> bit) << (bit + 1)) | low
}

/// A pure state on an ordered list of labelled qubits.
///
/// Every value handed out by the public API has unit norm within
/// [`NORM_TOL`]. A zero-qubit register (a single scalar amplitude) can appear
/// as the residue of measuring the last two qubits of a register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    labels: Vec<QubitLabel>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Validating constructor.
    pub fn new(labels: Vec<QubitLabel>, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_labels(&labels)?;
        let expected = 1usize << labels.len();
        if amplitudes.len() != expected {
            return Err(Error::AmplitudeCount {
                expected,
                got: amplitudes.len(),
            });
        }
        if let Some(i) = amplitudes
            .iter()
            .position(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        let state = StateVector { labels, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Unchecked constructor for kernels that preserve the invariants.
    pub(crate) fn from_raw(labels: Vec<QubitLabel>, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1usize << labels.len());
        StateVector { labels, amplitudes }
    }

    /// Zero-qubit register carrying a unit-modulus scalar.
    pub(crate) fn scalar(value: Complex64) -> Self {
        StateVector::from_raw(Vec::new(), vec![value])
    }

    /// Normalizes `amplitudes` in place. Only used after measurement collapse.
    pub(crate) fn renormalized(labels: Vec<QubitLabel>, mut amplitudes: Vec<Complex64>) -> Self {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let inv = 1.0 / norm;
        amplitudes.iter_mut().for_each(|a| *a *= inv);
        StateVector::from_raw(labels, amplitudes)
    }

    /// Computational basis state `|b_0 b_1 ...⟩` on the given labels.
    pub fn basis(labels: Vec<QubitLabel>, bits: &[u8]) -> Result<Self> {
        if labels.len() != bits.len() {
            return Err(Error::AmplitudeCount {
                expected: labels.len(),
                got: bits.len(),
            });
        }
        check_labels(&labels)?;
        let mut index = 0usize;
        for &b in bits {
            if b > 1 {
                return Err(Error::InvalidBit(b));
            }
            index = (index << 1) | b as usize;
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << bits.len()];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector::from_raw(labels, amplitudes))
    }

    /// Single qubit `a|0⟩ + b|1⟩`; the coefficients must be normalized.
    pub fn qubit(label: QubitLabel, a: Complex64, b: Complex64) -> Result<Self> {
        StateVector::new(vec![label], vec![a, b])
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn contains(&self, label: QubitLabel) -> bool {
        self.labels.contains(&label)
    }

    pub fn position(&self, label: QubitLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownLabel(label))
    }

    pub fn norm_sqr(&self) -> f64 {
        let amps = &self.amplitudes;
        sum_indexed(amps.len(), |i| amps[i].norm_sqr())
    }

    /// `self ⊗ other`, labels concatenated in that order.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let total = self.num_qubits() + other.num_qubits();
        if total > MAX_QUBITS {
            return Err(Error::TooManyQubits(total));
        }
        if let Some(&l) = other.labels.iter().find(|l| self.labels.contains(l)) {
            return Err(Error::DuplicateLabel(l));
        }
        let shift = other.num_qubits();
        let mask = (1usize << shift) - 1;
        let (lhs, rhs) = (&self.amplitudes, &other.amplitudes);
        let amplitudes = build_amplitudes(1 << total, |k| lhs[k >> shift] * rhs[k & mask]);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Ok(StateVector::from_raw(labels, amplitudes))
    }

    /// The same physical state with its qubits listed in `order`.
    pub fn permute_to(&self, order: &[QubitLabel]) -> Result<StateVector> {
        let n = self.num_qubits();
        if order.len() != n {
            return Err(Error::NotAPermutation);
        }
        let mut source_bit = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for &label in order {
            let p = self.position(label).map_err(|_| Error::NotAPermutation)?;
            if seen[p] {
                return Err(Error::NotAPermutation);
            }
            seen[p] = true;
            source_bit.push(bit_of(n, p));
        }
        if order == self.labels.as_slice() {
            return Ok(self.clone());
        }
        let amps = &self.amplitudes;
        let amplitudes = build_amplitudes(amps.len(), |j| {
            let mut old = 0usize;
            for (k, &sb) in source_bit.iter().enumerate() {
                old |= ((j >> bit_of(n, k)) & 1) << sb;
            }
            amps[old]
        });
        Ok(StateVector::from_raw(order.to_vec(), amplitudes))
    }

    /// Renames `from` to `to`, keeping its position in the register.
    pub fn relabel(&self, from: QubitLabel, to: QubitLabel) -> Result<StateVector> {
        let p = self.position(from)?;
        if from != to && self.contains(to) {
            return Err(Error::DuplicateLabel(to));
        }
        let mut out = self.clone();
        out.labels[p] = to;
        Ok(out)
    }

    /// Applies every `(from, to)` rename in `map` simultaneously.
    pub fn relabel_all(&self, map: &[(QubitLabel, QubitLabel)]) -> Result<StateVector> {
        let mut labels = self.labels.clone();
        for &(from, to) in map {
            let p = self.position(from)?;
            labels[p] = to;
        }
        check_labels(&labels)?;
        Ok(StateVector::from_raw(labels, self.amplitudes.clone()))
    }

    /// `⟨self|other⟩`, with `other` first permuted to `self`'s label order.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        let other = self.aligned(other)?;
        let (a, b) = (&self.amplitudes, &other.amplitudes);
        Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
    }

    /// `|⟨self|other⟩|²`; invariant under global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().min(1.0))
    }

    /// `other` reordered to match this register, or an error if the label
    /// sets differ.
    pub(crate) fn aligned(&self, other: &StateVector) -> Result<StateVector> {
        if self.num_qubits() != other.num_qubits()
            || self.labels.iter().any(|l| !other.contains(*l))
        {
            return Err(Error::LabelMismatch);
        }
        other.permute_to(&self.labels)
    }

    pub fn apply_pauli(&self, qubit: QubitLabel, op: PauliOp) -> Result<StateVector> {
        let n = self.num_qubits();
        let bit = bit_of(n, self.position(qubit)?);
        let amps = &self.amplitudes;
        let flip = matches!(op, PauliOp::X | PauliOp::ZX);
        let phase = matches!(op, PauliOp::Z | PauliOp::ZX);
        if op == PauliOp::I {
            return Ok(self.clone());
        }
        let amplitudes = build_amplitudes(amps.len(), |j| {
            let src = if flip { j ^ (1 << bit) } else { j };
            // Z acts after X, so the sign follows the output bit.
            if phase && (j >> bit) & 1 == 1 {
                -amps[src]
            } else {
                amps[src]
            }
        });
        Ok(StateVector::from_raw(self.labels.clone(), amplitudes))
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> StateVector {
        let p = Complex64::from_polar(1.0, theta);
        StateVector::from_raw(
            self.labels.clone(),
            self.amplitudes.iter().map(|a| a * p).collect(),
        )
    }

    /// Largest entry-wise amplitude difference after aligning label order.
    pub fn max_amplitude_diff(&self, other: &StateVector) -> Result<f64> {
        let other = self.aligned(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// `|b_1 … b_n⟩` on labels `0..n`.
pub fn make_basis_state(bits: &[u8]) -> Result<StateVector> {
    StateVector::basis(label_range(0, bits.len()), bits)
}

pub(crate) fn check_labels(labels: &[QubitLabel]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::EmptyRegister);
    }
    if labels.len() > MAX_QUBITS {
        return Err(Error::TooManyQubits(labels.len()));
    }
    let mut seen = HashSet::with_capacity(labels.len());
    for &l in labels {
        if !seen.insert(l) {
            return Err(Error::DuplicateLabel(l));
        }
    }
    Ok(())
}
