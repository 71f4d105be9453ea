//! JSON formats for states, plans, transcripts and ledgers.
//!
//! State file:
//! `{ "labels": [int, …], "amplitudes": [[re, im], …] }`, MSB-first.
//!
//! Transcript entry:
//! `{ "step": {"source", "mu", "nu", "receiver"}, "outcome", "cbits", "correction" }`.
//!
//! Ledger:
//! `{ "ebits", "cbits_forward", "cbits_backward", "baseline": {…} }`.
//!
//! Plan file:
//! `{ "sender": str, "receivers": [str, …], "steps": [step, …] }`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bell::BellKind;
use crate::protocol::{
    correction_for, decode_classical, ClassicalBits, DistributionPlan, Party, ResourceLedger,
    SwapCost, SwapStep, TranscriptEntry,
};
use crate::state::{PauliOp, QubitLabel, StateVector};

#[derive(Serialize, Deserialize)]
struct StateFile {
    labels: Vec<u32>,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StateFile {
            labels: self.labels().iter().map(|l| l.0).collect(),
            amplitudes: self.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let file = StateFile::deserialize(deserializer)?;
        StateVector::new(
            file.labels.into_iter().map(QubitLabel).collect(),
            file.amplitudes
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
        .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct StepRecord {
    source: u32,
    mu: u32,
    nu: u32,
    receiver: String,
}

impl From<&SwapStep> for StepRecord {
    fn from(s: &SwapStep) -> Self {
        StepRecord {
            source: s.source.0,
            mu: s.alice_anchor.0,
            nu: s.remote.0,
            receiver: s.receiver.clone(),
        }
    }
}

impl From<StepRecord> for SwapStep {
    fn from(r: StepRecord) -> Self {
        SwapStep {
            source: QubitLabel(r.source),
            alice_anchor: QubitLabel(r.mu),
            remote: QubitLabel(r.nu),
            receiver: r.receiver,
        }
    }
}

impl Serialize for SwapStep {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StepRecord::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SwapStep {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        StepRecord::deserialize(deserializer).map(SwapStep::from)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    step: SwapStep,
    outcome: BellKind,
    cbits: String,
    correction: PauliOp,
}

impl Serialize for TranscriptEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        EntryRecord {
            step: self.step.clone(),
            outcome: self.outcome,
            cbits: self.classical_bits.to_string(),
            correction: self.correction,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TranscriptEntry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = EntryRecord::deserialize(deserializer)?;
        let bits = ClassicalBits::parse(&r.cbits)
            .map_err(|_| D::Error::custom(format!("invalid cbits {:?}", r.cbits)))?;
        let decoded = decode_classical(bits).map_err(D::Error::custom)?;
        if decoded != r.outcome {
            return Err(D::Error::custom(format!(
                "cbits {} encode {decoded}, not {}",
                r.cbits, r.outcome
            )));
        }
        if correction_for(r.outcome) != r.correction {
            return Err(D::Error::custom(format!(
                "correction {} does not match outcome {}",
                r.correction, r.outcome
            )));
        }
        Ok(TranscriptEntry::new(r.step, r.outcome))
    }
}

#[derive(Serialize, Deserialize)]
struct CostRecord {
    ebits: u64,
    cbits_forward: u64,
    cbits_backward: u64,
}

impl From<SwapCost> for CostRecord {
    fn from(c: SwapCost) -> Self {
        CostRecord {
            ebits: c.ebits,
            cbits_forward: c.cbits_forward,
            cbits_backward: c.cbits_backward,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LedgerRecord {
    ebits: u64,
    cbits_forward: u64,
    cbits_backward: u64,
    baseline: CostRecord,
}

impl Serialize for ResourceLedger {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LedgerRecord {
            ebits: self.ebits_consumed,
            cbits_forward: self.cbits_sender_to_receiver,
            cbits_backward: self.cbits_receiver_to_sender,
            baseline: self.baseline().into(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ResourceLedger {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = LedgerRecord::deserialize(deserializer)?;
        Ok(ResourceLedger {
            ebits_consumed: r.ebits,
            cbits_sender_to_receiver: r.cbits_forward,
            cbits_receiver_to_sender: r.cbits_backward,
            swaps: r.ebits,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct PlanRecord {
    sender: String,
    receivers: Vec<String>,
    steps: Vec<SwapStep>,
}

impl Serialize for DistributionPlan {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PlanRecord {
            sender: self.sender.name.clone(),
            receivers: self.receivers.iter().map(|r| r.name.clone()).collect(),
            steps: self.steps.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DistributionPlan {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = PlanRecord::deserialize(deserializer)?;
        Ok(DistributionPlan::new(
            Party::new(r.sender),
            r.receivers.into_iter().map(Party::new).collect(),
            r.steps,
        ))
    }
}
