//! Closed-form swap expansion used to cross-check the measurement path.
//!
//! Writing `|Ψ⟩ = a|0_i⟩|Φ⟩ + b|1_i⟩|Φ′⟩` and attaching a singlet on `(μ, ν)`,
//! the joint state splits over the Bell basis of `(i, μ)` as
//!
//! ```text
//! ½ [ ϕ⁺ (a|1⟩Φ − b|0⟩Φ′) + ϕ⁻ (a|1⟩Φ + b|0⟩Φ′)
//!   − φ⁺ (a|0⟩Φ − b|1⟩Φ′) − φ⁻ (a|0⟩Φ + b|1⟩Φ′) ]
//! ```
//!
//! with the bracketed states living on `(ν, rest)`. This module builds those
//! branches directly from the decomposition. It never calls the projector
//! or the protocol engine.

use num_complex::Complex64;
use serde::Serialize;

use crate::bell::{is_product_about, make_bell, split_about, BellKind, DecompositionResult};
use crate::error::{Error, Result};
use crate::protocol::correction_for;
use crate::state::{QubitLabel, StateVector};
use crate::NORM_TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub kind: BellKind,
    pub coefficient: Complex64,
    /// State of `(ν, rest)` left behind by this outcome.
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapExpansion {
    pub source: QubitLabel,
    pub mu: QubitLabel,
    pub nu: QubitLabel,
    /// In [`BellKind::ALL`] order.
    pub branches: Vec<Branch>,
}

impl SwapExpansion {
    pub fn branch(&self, kind: BellKind) -> &Branch {
        &self.branches[kind.index()]
    }

    /// `Σ_k c_k |Bell_k⟩_{i,μ} ⊗ |branch_k⟩_{ν,rest}` over `(i, μ, ν, rest)`.
    pub fn reconstruct(&self) -> Result<StateVector> {
        let mut acc: Option<(Vec<QubitLabel>, Vec<Complex64>)> = None;
        for branch in &self.branches {
            let term = make_bell(branch.kind, (self.source, self.mu))?.tensor(&branch.state)?;
            let (labels, amps) = acc.get_or_insert_with(|| {
                (
                    term.labels().to_vec(),
                    vec![Complex64::new(0.0, 0.0); term.amplitudes().len()],
                )
            });
            debug_assert_eq!(labels.as_slice(), term.labels());
            for (a, t) in amps.iter_mut().zip(term.amplitudes()) {
                *a += branch.coefficient * t;
            }
        }
        let (labels, amps) = acc.expect("four branches");
        StateVector::new(labels, amps)
    }
}

/// `a|x_ν⟩Φ ± b|x̄_ν⟩Φ′` on `(ν, rest)` with `x = nu_for_phi`.
fn branch_state(
    nu: QubitLabel,
    rest: &[QubitLabel],
    d: &DecompositionResult,
    nu_for_phi: usize,
    phi_prime_sign: f64,
) -> StateVector {
    let half = 1usize << rest.len();
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * half];
    if let Some(phi) = &d.phi {
        for (k, amp) in phi.amplitudes().iter().enumerate() {
            amps[nu_for_phi * half + k] += d.a * amp;
        }
    }
    if let Some(phi_prime) = &d.phi_prime {
        let nu_for_phi_prime = 1 - nu_for_phi;
        for (k, amp) in phi_prime.amplitudes().iter().enumerate() {
            amps[nu_for_phi_prime * half + k] += phi_prime_sign * d.b * amp;
        }
    }
    let mut labels = vec![nu];
    labels.extend_from_slice(rest);
    StateVector::from_raw(labels, amps)
}

/// Builds the four-branch expansion of `state ⊗ φ⁻_{μ,ν}` about `i`.
pub fn expand_swap(
    state: &StateVector,
    i: QubitLabel,
    mu: QubitLabel,
    nu: QubitLabel,
) -> Result<SwapExpansion> {
    if state.num_qubits() == 0 {
        return Err(Error::EmptyRegister);
    }
    for l in [mu, nu] {
        if state.contains(l) || l == i {
            return Err(Error::DuplicateLabel(l));
        }
    }
    if mu == nu {
        return Err(Error::DuplicateLabel(mu));
    }
    let d = split_about(state, i)?;
    let rest = d.rest_labels().to_vec();
    // (kind, coefficient, ν value carrying Φ, sign on the Φ′ term)
    let table = [
        (BellKind::VarphiPlus, 0.5, 1, -1.0),
        (BellKind::VarphiMinus, 0.5, 1, 1.0),
        (BellKind::PhiPlus, -0.5, 0, -1.0),
        (BellKind::PhiMinus, -0.5, 0, 1.0),
    ];
    let branches = table
        .iter()
        .map(|&(kind, coefficient, nu_for_phi, sign)| Branch {
            kind,
            coefficient: Complex64::new(coefficient, 0.0),
            state: branch_state(nu, &rest, &d, nu_for_phi, sign),
        })
        .collect();
    Ok(SwapExpansion {
        source: i,
        mu,
        nu,
        branches,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchCheck {
    pub outcome: BellKind,
    pub probability: f64,
    pub fidelity_uncorrected: f64,
    pub fidelity_after_correction: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectionReport {
    pub source: QubitLabel,
    pub mu: QubitLabel,
    pub nu: QubitLabel,
    /// Source qubit is unentangled from the rest, so the step reduces to
    /// plain teleportation.
    pub teleportation: bool,
    pub branches: Vec<BranchCheck>,
    pub passed: bool,
    /// Set when the expansion itself could not be built.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Applies the correction table to every oracle branch and compares with the
/// input relabelled `i → ν`. Failures are recorded in the report.
pub fn verify_correction_table(
    state: &StateVector,
    i: QubitLabel,
    mu: QubitLabel,
    nu: QubitLabel,
) -> CorrectionReport {
    let mut report = CorrectionReport {
        source: i,
        mu,
        nu,
        teleportation: false,
        branches: Vec::new(),
        passed: false,
        error: None,
    };
    let checked = (|| -> Result<(bool, Vec<BranchCheck>)> {
        let expansion = expand_swap(state, i, mu, nu)?;
        let target = state.relabel(i, nu)?;
        let teleportation = state.num_qubits() == 1 || is_product_about(&split_about(state, i)?);
        let mut checks = Vec::with_capacity(4);
        for branch in &expansion.branches {
            let corrected = branch.state.apply_pauli(nu, correction_for(branch.kind))?;
            let fidelity_after_correction = target.fidelity(&corrected)?;
            checks.push(BranchCheck {
                outcome: branch.kind,
                probability: branch.coefficient.norm_sqr(),
                fidelity_uncorrected: target.fidelity(&branch.state)?,
                fidelity_after_correction,
                passed: fidelity_after_correction >= 1.0 - NORM_TOL,
            });
        }
        Ok((teleportation, checks))
    })();
    match checked {
        Ok((teleportation, branches)) => {
            report.teleportation = teleportation;
            report.passed = branches.iter().all(|b| b.passed);
            report.branches = branches;
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}
