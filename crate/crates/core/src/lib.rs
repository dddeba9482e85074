//! PSCRD: a Proof of Success and Reward Distribution protocol for
//! multi-bridge cross-chain transfer coordination, plus the fairness and
//! decentralization metrics used to evaluate it and a deterministic
//! simulator for running experiments.
//!
//! The protocol serves each transfer with a randomly selected quorum of
//! bridges sized so the fee pool covers every seat at a minimum rate,
//! accepts the response group holding a strict majority of the quorum,
//! pays the fee to that group proportionally to decayed success points,
//! and attenuates points with age so early entrants cannot dominate.
//!
//! Crate layout:
//! - [`protocol`]: the state machine (quorum sizing/selection, response
//!   grouping, majority consensus, points, rewards, decay, lifecycle);
//! - [`metrics`]: Gini index, Lorenz curve, Nakamoto coefficient;
//! - [`sim`]: seeded hour-stepped scenario runner, parameter sweeps, and
//!   attack experiments;
//! - [`event`]: the append-only audit log emitted by runs;
//! - [`rng`]: the named, seedable random source and stream derivation.

pub mod event;
pub mod metrics;
pub mod protocol;
pub mod rng;
pub mod sim;

pub use event::{Event, EventLog};
pub use metrics::{
    gini_direct, gini_from_lorenz, gini_from_lorenz_raw, lorenz, lorenz_dominates,
    nakamoto, Distribution, LorenzCurve, MetricsError, NakamotoResult,
};
pub use protocol::{
    apply_decay, distribute_rewards, group_responses, majority_group, quorum_size,
    select_quorum, selection_probability, Behavior, BridgeId, BridgeRecord,
    BridgeStatus, Ledger, ProtocolError, QuorumParams, ResponsePayload, TransferRound,
};
pub use rng::{derive_seed, rng_from_seed, sample_poisson, ProtocolRng};
pub use sim::{
    quorum_majority_probability, run_attack, run_scenario, run_sensitivity,
    AdversarySpec, AgeInitMode, AttackRunOutcome, AttackStrategy, AttackSummary,
    GroupSpec, MetricsSnapshot, QuorumConfig, RunResult, RunStats, ScenarioConfig,
    SimError, SweepCell,
};
