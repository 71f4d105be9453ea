use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use qdist_core::presets::Preset;
use qdist_core::rng::{random_state, trial_rng, SeededRng};
use qdist_core::state::label_range;
use qdist_core::{DistributionPlan, StateVector};

use crate::error::CliError;

/// Largest register the CLI will distribute.
pub const MAX_CLI_QUBITS: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "qdist",
    version,
    about = "Distribute multi-qubit states by entanglement swapping"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run seeded distributions and report fidelities, transcripts and ledgers.
    Run(RunArgs),
    /// Check every correction branch with the closed-form oracle.
    Verify(RunArgs),
    /// Write a state file, or a round-robin plan file with kind `plan`.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of state qubits; inferred from --state when omitted.
    #[arg(long)]
    pub n: Option<usize>,
    /// ghz, w, bell, product or random-haar.
    #[arg(long, conflicts_with = "state")]
    pub preset: Option<String>,
    /// State file to distribute.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Plan file.
    #[arg(long, conflicts_with = "parties")]
    pub plan: Option<PathBuf>,
    /// Deal qubits round-robin to this many receivers.
    #[arg(long)]
    pub parties: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// ghz, w, bell, product, random-haar or plan.
    pub kind: String,
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Receivers for `gen plan`.
    #[arg(long, default_value_t = 1)]
    pub parties: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Preset(Preset),
    RandomHaar,
}

impl FromStr for StateKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s == "random-haar" {
            return Ok(StateKind::RandomHaar);
        }
        s.parse::<Preset>()
            .map(StateKind::Preset)
            .map_err(|_| CliError::Usage(format!("unknown state kind {s:?}")))
    }
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::Preset(p) => p.name(),
            StateKind::RandomHaar => "random-haar",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Kind(StateKind),
    File(PathBuf, StateVector),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanSource {
    RoundRobin(usize),
    File(PathBuf, DistributionPlan),
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub n_qubits: usize,
    pub state_source: StateSource,
    pub plan_source: PlanSource,
    pub trials: usize,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self, CliError> {
        if args.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        let state_source = match (&args.state, &args.preset) {
            (Some(path), _) => StateSource::File(path.clone(), read_state(path)?),
            (None, Some(name)) => StateSource::Kind(name.parse()?),
            (None, None) => StateSource::Kind(StateKind::RandomHaar),
        };
        let n_qubits = match (&state_source, args.n) {
            (StateSource::File(_, s), Some(n)) if n != s.num_qubits() => {
                return Err(CliError::Usage(format!(
                    "--n {n} but the state file holds {} qubits",
                    s.num_qubits()
                )))
            }
            (StateSource::File(_, s), _) => s.num_qubits(),
            (StateSource::Kind(_), Some(n)) => n,
            (StateSource::Kind(_), None) => {
                return Err(CliError::Usage("--n is required with --preset".into()))
            }
        };
        if !(1..=MAX_CLI_QUBITS).contains(&n_qubits) {
            return Err(CliError::Usage(format!(
                "--n must be in 1..={MAX_CLI_QUBITS}, got {n_qubits}"
            )));
        }
        if state_source == StateSource::Kind(StateKind::Preset(Preset::Bell)) && n_qubits != 2 {
            return Err(CliError::Usage("preset bell needs --n 2".into()));
        }
        let plan_source = match (&args.plan, args.parties) {
            (Some(path), _) => PlanSource::File(path.clone(), read_json(path)?),
            (None, Some(m)) if m == 0 || m > n_qubits => {
                return Err(CliError::Usage(format!(
                    "--parties must be in 1..={n_qubits}, got {m}"
                )))
            }
            (None, m) => PlanSource::RoundRobin(m.unwrap_or(1)),
        };
        let config = RunConfig {
            seed: args.seed,
            n_qubits,
            state_source,
            plan_source,
            trials: args.trials,
            out: args.out.clone(),
        };
        let probe = config.state_for_trial(0)?;
        config
            .plan_for(&probe)
            .validate(probe.labels())
            .map_err(|e| CliError::Input(e.to_string()))?;
        Ok(config)
    }

    pub fn state_name(&self) -> String {
        match &self.state_source {
            StateSource::Kind(k) => k.name().to_string(),
            StateSource::File(p, _) => p.display().to_string(),
        }
    }

    /// Input state and random stream for trial `trial`. Random states are
    /// drawn first from the trial's own stream, which then drives the
    /// measurements.
    pub fn trial_inputs(&self, trial: u64) -> Result<(StateVector, SeededRng), CliError> {
        let mut rng = trial_rng(self.seed, trial);
        let state = match &self.state_source {
            StateSource::File(_, s) => s.clone(),
            StateSource::Kind(StateKind::Preset(p)) => p
                .build(self.n_qubits)
                .map_err(|e| CliError::Usage(e.to_string()))?,
            StateSource::Kind(StateKind::RandomHaar) => {
                random_state(label_range(0, self.n_qubits), &mut rng)
                    .map_err(|e| CliError::Input(e.to_string()))?
            }
        };
        Ok((state, rng))
    }

    pub fn state_for_trial(&self, trial: u64) -> Result<StateVector, CliError> {
        self.trial_inputs(trial).map(|(s, _)| s)
    }

    pub fn plan_for(&self, state: &StateVector) -> DistributionPlan {
        match &self.plan_source {
            PlanSource::File(_, plan) => plan.clone(),
            PlanSource::RoundRobin(m) => DistributionPlan::round_robin(state.labels(), *m),
        }
    }
}

pub fn read_state(path: &Path) -> Result<StateVector, CliError> {
    let s: StateVector = read_json(path)?;
    if s.num_qubits() > MAX_CLI_QUBITS {
        return Err(CliError::Input(format!(
            "{}: {} qubits exceeds the limit of {MAX_CLI_QUBITS}",
            path.display(),
            s.num_qubits()
        )));
    }
    Ok(s)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
