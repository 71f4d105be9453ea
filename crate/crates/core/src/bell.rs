//! Bell basis, projective Bell measurement and single-qubit decomposition.
//!
//! Naming follows the two Bell families:
//!
//! ```text
//! φ± = (|01⟩ ± |10⟩)/√2      PhiPlus / PhiMinus (PhiMinus is the singlet)
//! ϕ± = (|00⟩ ± |11⟩)/√2      VarphiPlus / VarphiMinus
//! ```

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{build_amplitudes, sum_indexed};
use crate::state::{bit_of, insert_zero_bit, QubitLabel, StateVector};
use crate::{NORM_TOL, PROB_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BellKind {
    VarphiPlus,
    VarphiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    /// Fixed order used for sampling and enumeration.
    pub const ALL: [BellKind; 4] = [
        BellKind::VarphiPlus,
        BellKind::VarphiMinus,
        BellKind::PhiPlus,
        BellKind::PhiMinus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BellKind::VarphiPlus => "VARPHI_PLUS",
            BellKind::VarphiMinus => "VARPHI_MINUS",
            BellKind::PhiPlus => "PHI_PLUS",
            BellKind::PhiMinus => "PHI_MINUS",
        }
    }

    /// Amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn amplitudes(self) -> [Complex64; 4] {
        let h = FRAC_1_SQRT_2;
        let z = 0.0;
        let v = match self {
            BellKind::VarphiPlus => [h, z, z, h],
            BellKind::VarphiMinus => [h, z, z, -h],
            BellKind::PhiPlus => [z, h, h, z],
            BellKind::PhiMinus => [z, h, -h, z],
        };
        v.map(|x| Complex64::new(x, 0.0))
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The Bell state `kind` on `(first, second)`, `first` as the high bit.
pub fn make_bell(kind: BellKind, pair: (QubitLabel, QubitLabel)) -> Result<StateVector> {
    if pair.0 == pair.1 {
        return Err(Error::DuplicateLabel(pair.0));
    }
    Ok(StateVector::from_raw(
        vec![pair.0, pair.1],
        kind.amplitudes().to_vec(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellOutcome {
    pub kind: BellKind,
    pub pair: (QubitLabel, QubitLabel),
    pub probability: f64,
}

/// Result of projecting onto one Bell state.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub probability: f64,
    /// Post-measurement state of the remaining qubits, or `None` when the
    /// probability is below [`PROB_FLOOR`].
    pub collapsed: Option<StateVector>,
}

/// Index geometry of a qubit pair inside a register.
struct PairLayout {
    first_bit: usize,
    second_bit: usize,
    low: usize,
    high: usize,
    rest_len: usize,
    rest_labels: Vec<QubitLabel>,
}

impl PairLayout {
    fn new(state: &StateVector, pair: (QubitLabel, QubitLabel)) -> Result<Self> {
        if pair.0 == pair.1 {
            return Err(Error::DuplicateLabel(pair.0));
        }
        let n = state.num_qubits();
        let first_bit = bit_of(n, state.position(pair.0)?);
        let second_bit = bit_of(n, state.position(pair.1)?);
        let rest_labels: Vec<QubitLabel> = state
            .labels()
            .iter()
            .copied()
            .filter(|&l| l != pair.0 && l != pair.1)
            .collect();
        Ok(PairLayout {
            first_bit,
            second_bit,
            low: first_bit.min(second_bit),
            high: first_bit.max(second_bit),
            rest_len: 1 << (n - 2),
            rest_labels,
        })
    }

    /// Full-register index for rest index `r` and pair bits `xy`.
    #[inline]
    fn index(&self, r: usize, xy: usize) -> usize {
        let base = insert_zero_bit(insert_zero_bit(r, self.low), self.high);
        base | ((xy >> 1) << self.first_bit) | ((xy & 1) << self.second_bit)
    }

    /// `⟨kind|_pair ψ⟩` at rest index `r`.
    #[inline]
    fn project_at(&self, amps: &[Complex64], bell: &[Complex64; 4], r: usize) -> Complex64 {
        (0..4)
            .filter(|&xy| bell[xy] != Complex64::new(0.0, 0.0))
            .map(|xy| bell[xy].conj() * amps[self.index(r, xy)])
            .sum()
    }
}

/// Projects `state` onto the Bell state `kind` of `pair`. The measured pair
/// is removed from the collapsed register; the remaining qubits keep their
/// relative order.
pub fn bell_project(
    state: &StateVector,
    pair: (QubitLabel, QubitLabel),
    kind: BellKind,
) -> Result<Projection> {
    let layout = PairLayout::new(state, pair)?;
    let bell = kind.amplitudes();
    let amps = state.amplitudes();
    let projected = build_amplitudes(layout.rest_len, |r| layout.project_at(amps, &bell, r));
    let probability: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
    let collapsed = (probability >= PROB_FLOOR)
        .then(|| StateVector::renormalized(layout.rest_labels, projected));
    Ok(Projection {
        probability,
        collapsed,
    })
}

/// Born-rule probabilities of the four outcomes, in [`BellKind::ALL`] order.
pub fn bell_probabilities(state: &StateVector, pair: (QubitLabel, QubitLabel)) -> Result<[f64; 4]> {
    let layout = PairLayout::new(state, pair)?;
    let amps = state.amplitudes();
    Ok(BellKind::ALL.map(|kind| {
        let bell = kind.amplitudes();
        sum_indexed(layout.rest_len, |r| {
            layout.project_at(amps, &bell, r).norm_sqr()
        })
    }))
}

/// Inverse-CDF choice over `probabilities` in fixed kind order, given a
/// uniform draw `u ∈ [0, 1)`.
pub fn select_outcome(probabilities: &[f64; 4], u: f64) -> BellKind {
    let total: f64 = probabilities.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    let mut last_possible = BellKind::PhiMinus;
    for kind in BellKind::ALL {
        let p = probabilities[kind.index()];
        if p < PROB_FLOOR {
            continue;
        }
        last_possible = kind;
        acc += p;
        if target < acc {
            return kind;
        }
    }
    last_possible
}

/// Samples a Bell measurement of `pair` using one uniform draw from `rng`.
pub fn bell_measure<R: Rng + ?Sized>(
    state: &StateVector,
    pair: (QubitLabel, QubitLabel),
    rng: &mut R,
) -> Result<(BellOutcome, StateVector)> {
    let probabilities = bell_probabilities(state, pair)?;
    let u: f64 = rng.gen();
    let kind = select_outcome(&probabilities, u);
    let projection = bell_project(state, pair, kind)?;
    let collapsed = projection.collapsed.ok_or(Error::ImpossibleOutcome(kind))?;
    Ok((
        BellOutcome {
            kind,
            pair,
            probability: projection.probability,
        },
        collapsed,
    ))
}

/// `|Ψ⟩ = a|0_i⟩|Φ⟩ + b|1_i⟩|Φ′⟩` with `a, b` real and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionResult {
    pub qubit: QubitLabel,
    pub a: Complex64,
    pub b: Complex64,
    /// Absent when `a` vanishes.
    pub phi: Option<StateVector>,
    /// Absent when `b` vanishes.
    pub phi_prime: Option<StateVector>,
}

impl DecompositionResult {
    pub fn is_degenerate(&self) -> bool {
        self.phi.is_none() || self.phi_prime.is_none()
    }

    /// Labels of the residual register, in the input's order without the
    /// decomposed qubit.
    pub fn rest_labels(&self) -> &[QubitLabel] {
        self.phi
            .as_ref()
            .or(self.phi_prime.as_ref())
            .map(|s| s.labels())
            .unwrap_or(&[])
    }

    /// Rebuilds `a|0⟩|Φ⟩ + b|1⟩|Φ′⟩` with the decomposed qubit first.
    pub fn recompose(&self) -> StateVector {
        let rest = self.rest_labels().to_vec();
        let half = 1usize << rest.len();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 2 * half];
        if let Some(phi) = &self.phi {
            for (k, amp) in phi.amplitudes().iter().enumerate() {
                amplitudes[k] = self.a * amp;
            }
        }
        if let Some(phi_prime) = &self.phi_prime {
            for (k, amp) in phi_prime.amplitudes().iter().enumerate() {
                amplitudes[half + k] = self.b * amp;
            }
        }
        let mut labels = vec![self.qubit];
        labels.extend(rest);
        StateVector::from_raw(labels, amplitudes)
    }
}

/// Splits `state` about `qubit`. Unlike [`decompose`] this accepts a
/// single-qubit register, returning zero-qubit residues.
pub(crate) fn split_about(state: &StateVector, qubit: QubitLabel) -> Result<DecompositionResult> {
    let n = state.num_qubits();
    let bit = bit_of(n, state.position(qubit)?);
    let rest: Vec<QubitLabel> = state
        .labels()
        .iter()
        .copied()
        .filter(|&l| l != qubit)
        .collect();
    let amps = state.amplitudes();
    let block = |value: usize| -> Vec<Complex64> {
        (0..1usize << (n - 1))
            .map(|r| amps[insert_zero_bit(r, bit) | (value << bit)])
            .collect()
    };
    let part = |value: usize| {
        let v = block(value);
        let weight: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        let coefficient = Complex64::new(weight.sqrt(), 0.0);
        let residue = (weight >= PROB_FLOOR).then(|| {
            if rest.is_empty() {
                StateVector::scalar(v[0] / weight.sqrt())
            } else {
                StateVector::renormalized(rest.clone(), v)
            }
        });
        (coefficient, residue)
    };
    let (a, phi) = part(0);
    let (b, phi_prime) = part(1);
    Ok(DecompositionResult {
        qubit,
        a,
        b,
        phi,
        phi_prime,
    })
}

/// Decomposes `state` about `qubit`; phases live in the residual states.
pub fn decompose(state: &StateVector, qubit: QubitLabel) -> Result<DecompositionResult> {
    state.position(qubit)?;
    if state.num_qubits() < 2 {
        return Err(Error::SingleQubit);
    }
    split_about(state, qubit)
}

/// Whether the decomposed qubit is unentangled from the rest: either branch
/// vanishes, or the residues differ only by a phase.
pub fn is_product_about(d: &DecompositionResult) -> bool {
    match (&d.phi, &d.phi_prime) {
        (Some(phi), Some(phi_prime)) => phi
            .fidelity(phi_prime)
            .map(|f| f >= 1.0 - NORM_TOL)
            .unwrap_or(false),
        _ => true,
    }
}
