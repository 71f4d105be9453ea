//! Distribution of a multi-qubit state by repeated entanglement swapping.
//!
//! One swap step moves the state of a local source qubit `i` onto a remote
//! qubit `ν`: a fresh singlet `(μ, ν)` is tensored in, the sender
//! Bell-measures `(i, μ)`, sends the two-bit outcome, and the receiver applies
//! the matching Pauli to `ν`. The sender then rotates the measured pair back
//! to the singlet. Repeating the step for every source qubit hands the whole
//! state to the receivers.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::Rng;

use crate::bell::{bell_measure, bell_project, make_bell, BellKind};
use crate::density::{reduced_density, DensityMatrix};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::state::{PauliOp, QubitLabel, StateVector};
use crate::MAX_QUBITS;

/// Receiver-side Pauli that undoes the branch left by `outcome`.
pub fn correction_for(outcome: BellKind) -> PauliOp {
    match outcome {
        BellKind::VarphiPlus => PauliOp::ZX,
        BellKind::VarphiMinus => PauliOp::X,
        BellKind::PhiPlus => PauliOp::Z,
        BellKind::PhiMinus => PauliOp::I,
    }
}

/// Sender-side Pauli on `μ` that maps the measured Bell state of `(i, μ)`
/// back to the singlet, up to a global sign.
pub fn singlet_restore_for(outcome: BellKind) -> PauliOp {
    // (I ⊗ σ) maps the singlet onto each Bell state, and each σ here is its
    // own inverse up to sign, so the table coincides with the correction.
    correction_for(outcome)
}

/// Two-bit classical message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassicalBits(u8);

impl ClassicalBits {
    pub fn new(code: u8) -> Result<Self> {
        if code > 0b11 {
            return Err(Error::InvalidCode(code));
        }
        Ok(ClassicalBits(code))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Parses `"00"`, `"01"`, `"10"` or `"11"`.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "00" => Ok(ClassicalBits(0)),
            "01" => Ok(ClassicalBits(1)),
            "10" => Ok(ClassicalBits(2)),
            "11" => Ok(ClassicalBits(3)),
            _ => Err(Error::InvalidCode(u8::MAX)),
        }
    }
}

impl fmt::Display for ClassicalBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02b}", self.0)
    }
}

/// VARPHI_PLUS↔00, VARPHI_MINUS↔01, PHI_PLUS↔10, PHI_MINUS↔11.
pub fn encode_classical(outcome: BellKind) -> ClassicalBits {
    ClassicalBits(outcome.index() as u8)
}

pub fn decode_classical(code: ClassicalBits) -> Result<BellKind> {
    BellKind::ALL
        .get(code.0 as usize)
        .copied()
        .ok_or(Error::InvalidCode(code.0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Party {
    pub name: String,
    pub held_qubits: BTreeSet<QubitLabel>,
}

impl Party {
    pub fn new(name: impl Into<String>) -> Self {
        Party {
            name: name.into(),
            held_qubits: BTreeSet::new(),
        }
    }
}

/// One nonlocal swap: source `i`, sender anchor `μ`, remote `ν`, and the
/// receiving party's name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwapStep {
    pub source: QubitLabel,
    pub alice_anchor: QubitLabel,
    pub remote: QubitLabel,
    pub receiver: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptEntry {
    pub step: SwapStep,
    pub outcome: BellKind,
    pub classical_bits: ClassicalBits,
    pub correction: PauliOp,
    pub singlet_restore: PauliOp,
}

impl TranscriptEntry {
    pub fn new(step: SwapStep, outcome: BellKind) -> Self {
        TranscriptEntry {
            step,
            outcome,
            classical_bits: encode_classical(outcome),
            correction: correction_for(outcome),
            singlet_restore: singlet_restore_for(outcome),
        }
    }
}

/// Per-swap cost in e-bits and c-bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapCost {
    pub ebits: u64,
    pub cbits_forward: u64,
    pub cbits_backward: u64,
}

/// Cost of one swap step in this protocol.
pub const PROTOCOL_SWAP_COST: SwapCost = SwapCost {
    ebits: 1,
    cbits_forward: 2,
    cbits_backward: 0,
};

/// Published lower bound for a general nonlocal swap, kept for comparison.
pub const GENERAL_SWAP_COST: SwapCost = SwapCost {
    ebits: 2,
    cbits_forward: 2,
    cbits_backward: 2,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ResourceLedger {
    pub ebits_consumed: u64,
    pub cbits_sender_to_receiver: u64,
    pub cbits_receiver_to_sender: u64,
    pub swaps: u64,
}

impl ResourceLedger {
    pub fn record_swap(&mut self) {
        self.ebits_consumed += PROTOCOL_SWAP_COST.ebits;
        self.cbits_sender_to_receiver += PROTOCOL_SWAP_COST.cbits_forward;
        self.cbits_receiver_to_sender += PROTOCOL_SWAP_COST.cbits_backward;
        self.swaps += 1;
    }

    /// What the same number of general nonlocal swaps would cost.
    pub fn baseline(&self) -> SwapCost {
        SwapCost {
            ebits: GENERAL_SWAP_COST.ebits * self.swaps,
            cbits_forward: GENERAL_SWAP_COST.cbits_forward * self.swaps,
            cbits_backward: GENERAL_SWAP_COST.cbits_backward * self.swaps,
        }
    }

    /// True when no counter exceeds the baseline and, for a non-empty run,
    /// at least one is strictly smaller.
    pub fn dominated_by_baseline(&self) -> bool {
        let b = self.baseline();
        let le = self.ebits_consumed <= b.ebits
            && self.cbits_sender_to_receiver <= b.cbits_forward
            && self.cbits_receiver_to_sender <= b.cbits_backward;
        let lt = self.ebits_consumed < b.ebits
            || self.cbits_sender_to_receiver < b.cbits_forward
            || self.cbits_receiver_to_sender < b.cbits_backward;
        le && (lt || self.swaps == 0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionPlan {
    pub sender: Party,
    pub receivers: Vec<Party>,
    pub steps: Vec<SwapStep>,
}

impl DistributionPlan {
    pub fn new(sender: Party, receivers: Vec<Party>, steps: Vec<SwapStep>) -> Self {
        DistributionPlan {
            sender,
            receivers,
            steps,
        }
    }

    /// Every qubit of the state goes to a single receiver `bob`.
    pub fn all_to_one(state_labels: &[QubitLabel]) -> Self {
        Self::round_robin(state_labels, 1)
    }

    /// Every qubit of the state is dealt to `parties` receivers in turn.
    pub fn round_robin(state_labels: &[QubitLabel], parties: usize) -> Self {
        Self::round_robin_subset(state_labels, state_labels, parties)
    }

    /// Only `sources` are distributed, dealt to `parties` receivers in turn.
    /// Fresh pair labels start just above the largest state label.
    pub fn round_robin_subset(
        state_labels: &[QubitLabel],
        sources: &[QubitLabel],
        parties: usize,
    ) -> Self {
        let parties = parties.max(1);
        let names: Vec<String> = if parties == 1 {
            vec!["bob".to_string()]
        } else {
            (1..=parties).map(|k| format!("receiver{k}")).collect()
        };
        let mut next = state_labels
            .iter()
            .chain(sources)
            .map(|l| l.0 + 1)
            .max()
            .unwrap_or(0);
        let steps = sources
            .iter()
            .enumerate()
            .map(|(k, &source)| {
                let step = SwapStep {
                    source,
                    alice_anchor: QubitLabel(next),
                    remote: QubitLabel(next + 1),
                    receiver: names[k % parties].clone(),
                };
                next += 2;
                step
            })
            .collect();
        DistributionPlan {
            sender: Party::new("alice"),
            receivers: names.into_iter().map(Party::new).collect(),
            steps,
        }
    }

    /// Source labels in step order.
    pub fn sources(&self) -> Vec<QubitLabel> {
        self.steps.iter().map(|s| s.source).collect()
    }

    /// Remote labels in step order.
    pub fn remotes(&self) -> Vec<QubitLabel> {
        self.steps.iter().map(|s| s.remote).collect()
    }

    /// The same plan with its steps reordered by `order` (indices into the
    /// current step list).
    pub fn reordered(&self, order: &[usize]) -> Self {
        DistributionPlan {
            steps: order.iter().map(|&k| self.steps[k].clone()).collect(),
            ..self.clone()
        }
    }

    /// Checks the plan against the labels of the state it will distribute.
    pub fn validate(&self, state_labels: &[QubitLabel]) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidPlan(msg));
        if self.receivers.len() > state_labels.len() {
            return invalid(format!(
                "{} receivers for {} qubits",
                self.receivers.len(),
                state_labels.len()
            ));
        }
        let mut names = HashSet::new();
        names.insert(self.sender.name.as_str());
        for r in &self.receivers {
            if !names.insert(r.name.as_str()) {
                return invalid(format!("party name {:?} is used twice", r.name));
            }
        }
        let mut sources = HashSet::new();
        let mut pair_labels: HashSet<QubitLabel> = HashSet::new();
        for step in &self.steps {
            if !state_labels.contains(&step.source) {
                return invalid(format!("source {} is not in the state", step.source));
            }
            if !sources.insert(step.source) {
                return invalid(format!("source {} is distributed twice", step.source));
            }
            if step.alice_anchor == step.remote {
                return invalid(format!("pair ({0}, {0}) is not a pair", step.remote));
            }
            for l in [step.alice_anchor, step.remote] {
                if state_labels.contains(&l) {
                    return invalid(format!("pair label {l} collides with the state"));
                }
                if !pair_labels.insert(l) {
                    return Err(Error::PairConsumed(step.alice_anchor, step.remote));
                }
            }
            if !self.receivers.iter().any(|r| r.name == step.receiver) {
                return invalid(format!("unknown receiver {:?}", step.receiver));
            }
        }
        if state_labels.len() + 2 > MAX_QUBITS {
            return Err(Error::TooManyQubits(state_labels.len() + 2));
        }
        Ok(())
    }
}

/// Output of one swap step.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapOutput {
    /// Live register with `ν` at the position `i` used to occupy.
    pub state: StateVector,
    pub entry: TranscriptEntry,
    /// The measured pair `(i, μ)` after the sender's singlet restoration.
    pub measured_pair: StateVector,
}

fn attach_pair(state: &StateVector, step: &SwapStep) -> Result<StateVector> {
    let (i, mu, nu) = (step.source, step.alice_anchor, step.remote);
    state.position(i)?;
    if i == mu || i == nu || mu == nu {
        return Err(Error::DuplicateLabel(if mu == nu { mu } else { i }));
    }
    for l in [mu, nu] {
        if state.contains(l) {
            return Err(Error::PairConsumed(mu, nu));
        }
    }
    state.tensor(&make_bell(BellKind::PhiMinus, (mu, nu))?)
}

fn finish_step(
    original: &StateVector,
    step: &SwapStep,
    outcome: BellKind,
    collapsed: StateVector,
) -> Result<SwapOutput> {
    let entry = TranscriptEntry::new(step.clone(), outcome);
    // Receiver decodes the two bits and applies the matching Pauli.
    let decoded = decode_classical(entry.classical_bits)?;
    let corrected = collapsed.apply_pauli(step.remote, correction_for(decoded))?;
    let order: Vec<QubitLabel> = original
        .labels()
        .iter()
        .map(|&l| if l == step.source { step.remote } else { l })
        .collect();
    let state = corrected.permute_to(&order)?;
    let measured_pair = make_bell(outcome, (step.source, step.alice_anchor))?
        .apply_pauli(step.alice_anchor, entry.singlet_restore)?;
    Ok(SwapOutput {
        state,
        entry,
        measured_pair,
    })
}

/// Runs one nonlocal swap with a sampled Bell measurement.
pub fn swap_step<R: Rng + ?Sized>(
    state: &StateVector,
    step: &SwapStep,
    rng: &mut R,
) -> Result<SwapOutput> {
    let joint = attach_pair(state, step)?;
    let (outcome, collapsed) = bell_measure(&joint, (step.source, step.alice_anchor), rng)?;
    finish_step(state, step, outcome.kind, collapsed)
}

/// Runs one nonlocal swap with the measurement outcome forced to `outcome`.
pub fn swap_step_with_outcome(
    state: &StateVector,
    step: &SwapStep,
    outcome: BellKind,
) -> Result<SwapOutput> {
    let joint = attach_pair(state, step)?;
    let projection = bell_project(&joint, (step.source, step.alice_anchor), outcome)?;
    let collapsed = projection
        .collapsed
        .ok_or(Error::ImpossibleOutcome(outcome))?;
    finish_step(state, step, outcome, collapsed)
}

/// Everything produced by a full protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub final_state: StateVector,
    pub transcript: Vec<TranscriptEntry>,
    pub ledger: ResourceLedger,
    pub sender: Party,
    pub receivers: Vec<Party>,
    pub measured_pairs: Vec<StateVector>,
}

impl Distribution {
    /// Outcome word of the run, one kind per step.
    pub fn outcomes(&self) -> Vec<BellKind> {
        self.transcript.iter().map(|e| e.outcome).collect()
    }
}

fn run_plan<F>(
    initial: &StateVector,
    plan: &DistributionPlan,
    mut step_fn: F,
) -> Result<Distribution>
where
    F: FnMut(usize, &StateVector, &SwapStep) -> Result<SwapOutput>,
{
    plan.validate(initial.labels())?;
    let mut sender = plan.sender.clone();
    sender.held_qubits.extend(initial.labels().iter().copied());
    let mut receivers = plan.receivers.clone();
    let mut state = initial.clone();
    let mut transcript = Vec::with_capacity(plan.steps.len());
    let mut measured_pairs = Vec::with_capacity(plan.steps.len());
    let mut ledger = ResourceLedger::default();

    for (k, step) in plan.steps.iter().enumerate() {
        let out = step_fn(k, &state, step)?;
        // i and μ stay with the sender as the restored singlet; ν goes to
        // the receiver.
        sender.held_qubits.insert(step.alice_anchor);
        receivers
            .iter_mut()
            .find(|r| r.name == step.receiver)
            .expect("validated receiver")
            .held_qubits
            .insert(step.remote);
        ledger.record_swap();
        state = out.state;
        transcript.push(out.entry);
        measured_pairs.push(out.measured_pair);
    }

    Ok(Distribution {
        final_state: state,
        transcript,
        ledger,
        sender,
        receivers,
        measured_pairs,
    })
}

/// Executes every step of `plan` in order, sampling measurement outcomes
/// from `rng`.
pub fn distribute<R: Rng + ?Sized>(
    initial: &StateVector,
    plan: &DistributionPlan,
    rng: &mut R,
) -> Result<Distribution> {
    run_plan(initial, plan, |_, state, step| swap_step(state, step, rng))
}

/// Executes `plan` with the outcome of step `k` forced to `outcomes[k]`.
pub fn distribute_with_outcomes(
    initial: &StateVector,
    plan: &DistributionPlan,
    outcomes: &[BellKind],
) -> Result<Distribution> {
    if outcomes.len() != plan.steps.len() {
        return Err(Error::InvalidPlan(format!(
            "{} outcomes for {} steps",
            outcomes.len(),
            plan.steps.len()
        )));
    }
    run_plan(initial, plan, |k, state, step| {
        swap_step_with_outcome(state, step, outcomes[k])
    })
}

/// `initial` with every source relabelled to its remote qubit, i.e. the
/// state the receivers should end up holding.
pub fn expected_final(initial: &StateVector, plan: &DistributionPlan) -> Result<StateVector> {
    let map: Vec<(QubitLabel, QubitLabel)> =
        plan.steps.iter().map(|s| (s.source, s.remote)).collect();
    initial.relabel_all(&map)
}

/// Fidelity of a run's final state against the relabelled input.
pub fn recovery_fidelity(
    initial: &StateVector,
    plan: &DistributionPlan,
    run: &Distribution,
) -> Result<f64> {
    expected_final(initial, plan)?.fidelity(&run.final_state)
}

/// Outcome word number `index` in base 4, first step most significant.
pub fn outcome_word(index: usize, steps: usize) -> Vec<BellKind> {
    (0..steps)
        .map(|k| BellKind::ALL[(index >> (2 * (steps - 1 - k))) & 3])
        .collect()
}

/// Recovery fidelity for every one of the `4^steps` outcome words, in word
/// order.
pub fn enumerate_outcome_words(
    initial: &StateVector,
    plan: &DistributionPlan,
    exec: Exec,
) -> Result<Vec<(Vec<BellKind>, f64)>> {
    plan.validate(initial.labels())?;
    let expected = expected_final(initial, plan)?;
    let steps = plan.steps.len();
    exec.map(1usize << (2 * steps), |w| {
        let word = outcome_word(w, steps);
        let run = distribute_with_outcomes(initial, plan, &word)?;
        Ok((word, expected.fidelity(&run.final_state)?))
    })
    .into_iter()
    .collect()
}

/// Distributes only the qubits named in `plan` and returns the receivers'
/// reduced state over the remote labels, in step order.
pub fn partial_distribution_reduced<R: Rng + ?Sized>(
    initial: &StateVector,
    plan: &DistributionPlan,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if plan.steps.len() >= initial.num_qubits() {
        return Err(Error::InvalidPlan(
            "plan covers every qubit; use distribute".into(),
        ));
    }
    if plan.steps.is_empty() {
        return Err(Error::InvalidPlan("plan distributes no qubits".into()));
    }
    let run = distribute(initial, plan, rng)?;
    reduced_density(&run.final_state, &plan.remotes())
}
