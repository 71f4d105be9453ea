use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use qdist_core::oracle::{verify_correction_table, CorrectionReport};
use qdist_core::protocol::{enumerate_outcome_words, recovery_fidelity};
use qdist_core::rng::{random_state, seeded_rng};
use qdist_core::state::label_range;
use qdist_core::{
    decompose, distribute, is_product_about, reduced_density, swap_step, BellKind,
    DistributionPlan, Exec, ResourceLedger, StateVector, TranscriptEntry, NORM_TOL,
};
use serde::Serialize;

use crate::config::{GenArgs, RunConfig, StateKind};
use crate::error::CliError;

/// Word counts up to this many steps are enumerated exhaustively.
pub const EXHAUSTIVE_MAX_STEPS: usize = 4;

/// Result of a command: JSON report, pass flag and a one-paragraph summary.
pub struct CommandOutput {
    pub json: String,
    pub passed: bool,
    pub summary: String,
}

#[derive(Debug, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    pub fidelity: f64,
    pub transcript: Vec<TranscriptEntry>,
    pub ledger: ResourceLedger,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub seed: u64,
    pub n: usize,
    pub state: String,
    pub plan: DistributionPlan,
    pub trials: usize,
    pub results: Vec<TrialReport>,
    pub outcome_counts: BTreeMap<BellKind, usize>,
    pub outcome_frequencies: BTreeMap<BellKind, f64>,
    pub min_fidelity: f64,
    pub passed: bool,
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn core_err(e: qdist_core::Error) -> CliError {
    CliError::Input(e.to_string())
}

pub fn cmd_run(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let plan = config.plan_for(&config.state_for_trial(0)?);
    let results = Exec::default()
        .map(config.trials, |t| -> Result<TrialReport, CliError> {
            let (state, mut rng) = config.trial_inputs(t as u64)?;
            let plan = config.plan_for(&state);
            let run = distribute(&state, &plan, &mut rng).map_err(core_err)?;
            Ok(TrialReport {
                trial: t,
                fidelity: recovery_fidelity(&state, &plan, &run).map_err(core_err)?,
                transcript: run.transcript,
                ledger: run.ledger,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let mut outcome_counts: BTreeMap<BellKind, usize> =
        BellKind::ALL.iter().map(|&k| (k, 0)).collect();
    for r in &results {
        for e in &r.transcript {
            *outcome_counts
                .get_mut(&e.outcome)
                .expect("all kinds present") += 1;
        }
    }
    let total: usize = outcome_counts.values().sum();
    let outcome_frequencies = outcome_counts
        .iter()
        .map(|(&k, &c)| {
            (
                k,
                if total == 0 {
                    0.0
                } else {
                    c as f64 / total as f64
                },
            )
        })
        .collect();
    let min_fidelity = results.iter().map(|r| r.fidelity).fold(1.0, f64::min);
    let passed = results.iter().all(|r| r.fidelity >= 1.0 - NORM_TOL);
    let report = RunReport {
        command: "run",
        seed: config.seed,
        n: config.n_qubits,
        state: config.state_name(),
        plan,
        trials: config.trials,
        results,
        outcome_counts,
        outcome_frequencies,
        min_fidelity,
        passed,
    };
    let freqs: Vec<String> = report
        .outcome_frequencies
        .iter()
        .map(|(k, f)| format!("{k}={f:.4}"))
        .collect();
    let summary = format!(
        "run: {} trials of {} on {} qubits, min fidelity {:.12}, outcomes [{}]: {}",
        report.trials,
        report.state,
        report.n,
        min_fidelity,
        freqs.join(" "),
        if passed { "PASS" } else { "FAIL" }
    );
    Ok(CommandOutput {
        json: to_json(&report),
        passed,
        summary,
    })
}

#[derive(Debug, Serialize)]
pub struct WordSummary {
    pub mode: &'static str,
    pub count: usize,
    pub min_fidelity: f64,
    /// Failing words, at most 16.
    pub failures: Vec<Vec<BellKind>>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct TeleportationCheck {
    pub source: u32,
    pub marginal_error: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub seed: u64,
    pub n: usize,
    pub state: String,
    pub plan: DistributionPlan,
    pub oracle: Vec<CorrectionReport>,
    pub branch_words: WordSummary,
    pub teleportation: Vec<TeleportationCheck>,
    pub passed: bool,
}

fn teleportation_check(
    state: &StateVector,
    plan: &DistributionPlan,
    k: usize,
    seed: u64,
) -> Result<Option<TeleportationCheck>, CliError> {
    let step = &plan.steps[k];
    let unentangled = state.num_qubits() == 1
        || is_product_about(&decompose(state, step.source).map_err(core_err)?);
    if !unentangled {
        return Ok(None);
    }
    let out = swap_step(state, step, &mut seeded_rng(seed)).map_err(core_err)?;
    let marginal = reduced_density(&out.state, &[step.remote]).map_err(core_err)?;
    let source = reduced_density(state, &[step.source])
        .and_then(|r| r.relabel_all(&[(step.source, step.remote)]))
        .map_err(core_err)?;
    let marginal_error = marginal.max_entry_diff(&source).map_err(core_err)?;
    Ok(Some(TeleportationCheck {
        source: step.source.0,
        marginal_error,
        passed: marginal_error <= NORM_TOL,
    }))
}

pub fn cmd_verify(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let (state, _) = config.trial_inputs(0)?;
    let plan = config.plan_for(&state);

    let oracle: Vec<CorrectionReport> = plan
        .steps
        .iter()
        .map(|s| verify_correction_table(&state, s.source, s.alice_anchor, s.remote))
        .collect();

    let expected = qdist_core::protocol::expected_final(&state, &plan).map_err(core_err)?;
    let (mode, words): (&'static str, Vec<(Vec<BellKind>, f64)>) = if plan.steps.len()
        <= EXHAUSTIVE_MAX_STEPS
    {
        let words = enumerate_outcome_words(&state, &plan, Exec::default()).map_err(core_err)?;
        ("exhaustive", words)
    } else {
        let words = Exec::default()
            .map(config.trials, |t| -> Result<_, CliError> {
                let (_, mut rng) = config.trial_inputs(t as u64)?;
                let run = distribute(&state, &plan, &mut rng).map_err(core_err)?;
                let f = expected.fidelity(&run.final_state).map_err(core_err)?;
                Ok((run.outcomes(), f))
            })
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        ("sampled", words)
    };
    let failures: Vec<Vec<BellKind>> = words
        .iter()
        .filter(|(_, f)| *f < 1.0 - NORM_TOL)
        .map(|(w, _)| w.clone())
        .collect();
    let branch_words = WordSummary {
        mode,
        count: words.len(),
        min_fidelity: words.iter().map(|(_, f)| *f).fold(1.0, f64::min),
        passed: failures.is_empty(),
        failures: failures.into_iter().take(16).collect(),
    };

    let mut teleportation = Vec::new();
    for k in 0..plan.steps.len() {
        if let Some(check) = teleportation_check(&state, &plan, k, config.seed)? {
            teleportation.push(check);
        }
    }

    let passed = oracle.iter().all(|r| r.passed)
        && branch_words.passed
        && teleportation.iter().all(|t| t.passed);
    let summary = format!(
        "verify: {} on {} qubits, oracle {}/{} steps pass, {} {} branch words (min fidelity {:.12}), {} teleportation steps: {}",
        config.state_name(),
        config.n_qubits,
        oracle.iter().filter(|r| r.passed).count(),
        oracle.len(),
        branch_words.count,
        branch_words.mode,
        branch_words.min_fidelity,
        teleportation.len(),
        if passed { "PASS" } else { "FAIL" }
    );
    let report = VerifyReport {
        command: "verify",
        seed: config.seed,
        n: config.n_qubits,
        state: config.state_name(),
        plan,
        oracle,
        branch_words,
        teleportation,
        passed,
    };
    Ok(CommandOutput {
        json: to_json(&report),
        passed,
        summary,
    })
}

pub fn cmd_gen(args: &GenArgs) -> Result<CommandOutput, CliError> {
    if !(1..=crate::config::MAX_CLI_QUBITS).contains(&args.n) {
        return Err(CliError::Usage(format!(
            "n must be in 1..={}",
            crate::config::MAX_CLI_QUBITS
        )));
    }
    if args.kind == "plan" {
        if !(1..=args.n).contains(&args.parties) {
            return Err(CliError::Usage(format!(
                "--parties must be in 1..={}",
                args.n
            )));
        }
        let plan = DistributionPlan::round_robin(&label_range(0, args.n), args.parties);
        return Ok(CommandOutput {
            json: to_json(&plan),
            passed: true,
            summary: format!(
                "gen: plan for {} qubits over {} receivers",
                args.n, args.parties
            ),
        });
    }
    let state = match args.kind.parse::<StateKind>()? {
        StateKind::Preset(p) => p
            .build(args.n)
            .map_err(|e| CliError::Usage(e.to_string()))?,
        StateKind::RandomHaar => {
            random_state(label_range(0, args.n), &mut seeded_rng(args.seed)).map_err(core_err)?
        }
    };
    Ok(CommandOutput {
        json: serde_json::to_string(&state).expect("state serializes"),
        passed: true,
        summary: format!("gen: {} state on {} qubits", args.kind, args.n),
    })
}

/// Writes `text` to `out`, or stdout when `out` is `None`.
pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| CliError::io(path, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
