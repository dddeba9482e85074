//! Deterministic, seeded, hour-stepped simulation of the protocol:
//! staggered-entry populations, honest and colluding-adversarial behaviors,
//! per-round protocol execution, hourly metrics snapshots, parameter sweeps,
//! and attack experiments.
//!
//! A single run is strictly sequential: the round pipeline
//! (select -> respond -> group -> award -> decay -> distribute) defines the
//! ledger. Sweeps and seed replicates use independent RNG streams derived
//! from the master seed, so assembling their results is order-independent.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::event::{Event, EventLog};
use crate::metrics::{gini_direct, nakamoto, Distribution};
use crate::protocol::{
    apply_decay, distribute_rewards, group_responses, majority_group, quorum_size,
    select_quorum, validate_lambda, Behavior, BridgeId, BridgeStatus, Ledger,
    QuorumParams, ResponsePayload, TransferRound,
};
use crate::rng::{derive_seed, rng_from_seed, sample_poisson, ProtocolRng};

/// One cohort of bridges entering the network together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub size: usize,
    pub join_hour: u64,
}

/// How a bridge's age is initialized at admission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgeInitMode {
    /// Age starts at zero when the bridge joins (the clock is the join
    /// clock).
    #[default]
    FromJoinTime,
    /// Age drawn uniformly from `[0, duration)` at admission, mirroring a
    /// population with pre-existing histories.
    UniformRandom,
}

/// Adversarial response strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackStrategy {
    /// Coalition members submit one identical forged payload every round
    /// they are selected; honest members submit the true payload.
    #[default]
    ColludingEquivocation,
}

/// Adversary configuration for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversarySpec {
    /// Coalition size, fixed for the whole run. Members are drawn uniformly
    /// from the configured population before the run starts.
    pub count: usize,
    #[serde(default)]
    pub strategy: AttackStrategy,
}

/// Reward-pool parameters that size the quorum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuorumConfig {
    pub total_reward: f64,
    pub min_reward: f64,
}

impl Default for QuorumConfig {
    fn default() -> Self {
        // Twenty affordable seats: a plausible scale for a fifty-bridge
        // network, and adjustable to probe robustness.
        Self {
            total_reward: 20.0,
            min_reward: 1.0,
        }
    }
}

fn default_rounds_per_hour() -> u32 {
    1
}

fn default_fee() -> f64 {
    1.0
}

fn default_initial_points_mean() -> f64 {
    5.0
}

fn default_retention_hours() -> u64 {
    8760
}

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Entry cohorts; sizes sum to the population.
    pub groups: Vec<GroupSpec>,
    pub duration_hours: u64,
    /// Transfer rounds executed per simulated hour.
    #[serde(default = "default_rounds_per_hour")]
    pub rounds_per_hour: u32,
    /// Decay factor, strictly inside (0, 1).
    pub lambda: f64,
    /// Grace window: no decay while a bridge's age is within it.
    pub time_window_hours: f64,
    /// Transfer fee distributed each consensus round.
    #[serde(default = "default_fee")]
    pub fee: f64,
    /// Mean of the Poisson draw for initial success points.
    #[serde(default = "default_initial_points_mean")]
    pub initial_points_mean: f64,
    #[serde(default)]
    pub age_init_mode: AgeInitMode,
    #[serde(default)]
    pub quorum: QuorumConfig,
    #[serde(default)]
    pub adversary: Option<AdversarySpec>,
    /// Hours an offline bridge's history is retained before archival.
    #[serde(default = "default_retention_hours")]
    pub retention_hours: u64,
    pub seed: u64,
}

impl ScenarioConfig {
    /// The reference scenario: 50 bridges entering in three staggered
    /// cohorts (20 at 0h, 20 at 40h, 10 at 60h) over 150 hours, decay factor
    /// 0.05, grace window 5h, Poisson(5) initial points, one round per hour.
    pub fn baseline() -> Self {
        Self {
            groups: vec![
                GroupSpec { size: 20, join_hour: 0 },
                GroupSpec { size: 20, join_hour: 40 },
                GroupSpec { size: 10, join_hour: 60 },
            ],
            duration_hours: 150,
            rounds_per_hour: 1,
            lambda: 0.05,
            time_window_hours: 5.0,
            fee: 1.0,
            initial_points_mean: 5.0,
            age_init_mode: AgeInitMode::FromJoinTime,
            quorum: QuorumConfig::default(),
            adversary: None,
            retention_hours: 8760,
            seed: 42,
        }
    }

    /// Total number of bridges across all groups.
    pub fn population(&self) -> usize {
        self.groups.iter().map(|g| g.size).sum()
    }

    /// Checks every config invariant, naming the offending field.
    pub fn validate(&self) -> Result<(), SimError> {
        if self.groups.is_empty() {
            return Err(SimError::Config("groups must not be empty".into()));
        }
        if self.groups.iter().any(|g| g.size == 0) {
            return Err(SimError::Config("every group size must be positive".into()));
        }
        if self.duration_hours == 0 {
            return Err(SimError::Config("duration_hours must be positive".into()));
        }
        for g in &self.groups {
            if g.join_hour >= self.duration_hours {
                return Err(SimError::Config(format!(
                    "group join_hour {} is not before duration_hours {}",
                    g.join_hour, self.duration_hours
                )));
            }
        }
        if self.rounds_per_hour == 0 {
            return Err(SimError::Config("rounds_per_hour must be positive".into()));
        }
        validate_lambda(self.lambda)
            .map_err(|e| SimError::Config(e.to_string()))?;
        if self.time_window_hours.is_nan() || self.time_window_hours < 0.0 {
            return Err(SimError::Config(format!(
                "time_window_hours must be non-negative; got {}",
                self.time_window_hours
            )));
        }
        if self.fee.is_nan() || self.fee <= 0.0 {
            return Err(SimError::Config(format!(
                "fee must be positive; got {}",
                self.fee
            )));
        }
        if self.initial_points_mean.is_nan() || self.initial_points_mean < 0.0 {
            return Err(SimError::Config(format!(
                "initial_points_mean must be non-negative; got {}",
                self.initial_points_mean
            )));
        }
        if self.quorum.min_reward.is_nan() || self.quorum.min_reward <= 0.0 {
            return Err(SimError::Config(format!(
                "quorum.min_reward must be positive; got {}",
                self.quorum.min_reward
            )));
        }
        if self.quorum.total_reward < self.quorum.min_reward {
            return Err(SimError::Config(format!(
                "quorum.total_reward {} is below quorum.min_reward {}",
                self.quorum.total_reward, self.quorum.min_reward
            )));
        }
        if let Some(adv) = &self.adversary {
            if adv.count > self.population() {
                return Err(SimError::Config(format!(
                    "adversary.count {} exceeds the population {}",
                    adv.count,
                    self.population()
                )));
            }
        }
        Ok(())
    }
}

/// Per-hour measurement of the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsSnapshot {
    pub hour: u64,
    /// Id of the last round executed up to this hour.
    pub round_id: u64,
    pub gini_raw: f64,
    pub gini_decayed: f64,
    /// 0 when undefined (no points in the economy yet).
    pub nakamoto_raw: u32,
    pub nakamoto_decayed: u32,
    pub active_bridges: u32,
    /// Size of the last round's majority group; 0 when that round had no
    /// consensus.
    pub majority_size: u32,
    pub attacker_points_raw: f64,
    pub attacker_points_decayed: f64,
    /// Fraction of the total offered fee stream captured by the coalition:
    /// attacker cumulative rewards divided by fee times rounds elapsed.
    /// Rounds without consensus pay nobody, so attacker, honest, and
    /// unclaimed shares sum to one. 0 when no adversary is configured.
    pub attacker_reward_share: f64,
}

/// Aggregate tallies of one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub rounds_executed: u64,
    pub consensus_rounds: u64,
    /// Rounds whose majority carried the coalition's forged payload.
    pub attacker_wins: u64,
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub events: EventLog,
    pub snapshots: Vec<MetricsSnapshot>,
    pub stats: RunStats,
    /// Final ledger state, for per-bridge inspection.
    pub ledger: Ledger,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid scenario config: {0}")]
    Config(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Protocol(#[from] crate::protocol::ProtocolError),
}

/// Runs one scenario to completion.
///
/// Per hour: admit the cohorts joining that hour, execute the configured
/// number of transfer rounds, snapshot metrics over all non-archived
/// bridges, then advance the clock by one hour. Fully deterministic for a
/// given config: the single RNG stream is consumed in a fixed order
/// (coalition draw, then per admission its points and age, then per round
/// the quorum draw).
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunResult, SimError> {
    cfg.validate()?;
    let mut rng = rng_from_seed(cfg.seed);
    let population = cfg.population();

    let coalition = draw_coalition(cfg, population, &mut rng);

    let mut ledger = Ledger::new();
    let mut events = EventLog::new();
    let mut stats = RunStats::default();
    let mut snapshots = Vec::with_capacity(cfg.duration_hours as usize);

    let mut next_id: u32 = 0;
    let mut last_round_id: u64 = 0;
    let mut last_majority_size: u32 = 0;
    let mut attacker_rewards = 0.0f64;

    for hour in 0..cfg.duration_hours {
        // Admissions happen at the start of the hour, before its rounds.
        for group in &cfg.groups {
            if group.join_hour != hour {
                continue;
            }
            for _ in 0..group.size {
                let id = BridgeId(next_id);
                next_id += 1;
                let initial_points = sample_poisson(&mut rng, cfg.initial_points_mean) as f64;
                let initial_age = match cfg.age_init_mode {
                    AgeInitMode::FromJoinTime => 0.0,
                    AgeInitMode::UniformRandom => {
                        rng.gen_range(0.0..cfg.duration_hours as f64)
                    }
                };
                let behavior = if coalition.contains(&id) {
                    Behavior::Adversarial { coalition: 0 }
                } else {
                    Behavior::Honest
                };
                ledger.admit(id, behavior, initial_points, initial_age)?;
                events.push(Event::BridgeJoined {
                    hour,
                    id,
                    initial_points,
                    initial_age,
                    adversarial: behavior.is_adversarial(),
                });
            }
        }

        let active = ledger.active_ids();
        if !active.is_empty() {
            let q = quorum_size(&QuorumParams {
                total_reward: cfg.quorum.total_reward,
                min_reward: cfg.quorum.min_reward,
                population_size: active.len(),
            })?;

            for _ in 0..cfg.rounds_per_hour {
                let round_id = stats.rounds_executed;
                stats.rounds_executed += 1;
                last_round_id = round_id;

                let quorum = select_quorum(&active, q, &mut rng)?;
                events.push(Event::QuorumSelected {
                    hour,
                    round: round_id,
                    members: quorum.iter().copied().collect(),
                });

                let round = build_round(cfg, round_id, &ledger, quorum);
                let groups = group_responses(&round)?;
                let majority = majority_group(&groups, q)
                    .map(|(payload, members)| (payload.clone(), members.clone()));
                let group_sizes: Vec<usize> = groups.values().map(|g| g.len()).collect();

                events.push(Event::ConsensusOutcome {
                    hour,
                    round: round_id,
                    majority: majority
                        .as_ref()
                        .map(|(_, m)| m.iter().copied().collect()),
                    group_sizes,
                });

                match majority {
                    None => {
                        last_majority_size = 0;
                    }
                    Some((payload, members)) => {
                        stats.consensus_rounds += 1;
                        last_majority_size = members.len() as u32;
                        let forged_won = payload.receiver == FORGED_RECEIVER;
                        if forged_won {
                            stats.attacker_wins += 1;
                        }

                        ledger.award_success_points(&members)?;

                        let mut weights = std::collections::BTreeMap::new();
                        for id in &members {
                            let record = ledger.get(*id).expect("majority member registered");
                            weights.insert(
                                *id,
                                apply_decay(record, cfg.lambda, cfg.time_window_hours)?,
                            );
                        }
                        events.push(Event::DecayApplied {
                            hour,
                            round: round_id,
                            weights: weights.iter().map(|(k, v)| (*k, *v)).collect(),
                        });

                        let rewards = distribute_rewards(&members, cfg.fee, &weights)?;
                        ledger.credit_rewards(&rewards)?;
                        for (id, amount) in &rewards {
                            if ledger.get(*id).unwrap().behavior.is_adversarial() {
                                attacker_rewards += amount;
                            }
                        }
                        events.push(Event::RewardsDistributed {
                            hour,
                            round: round_id,
                            rewards: rewards.iter().map(|(k, v)| (*k, *v)).collect(),
                        });
                    }
                }
            }
        }

        ledger.refresh_decay(cfg.lambda, cfg.time_window_hours)?;
        snapshots.push(snapshot(
            cfg,
            hour,
            last_round_id,
            last_majority_size,
            &ledger,
            attacker_rewards,
            &stats,
        ));

        for id in ledger.advance_time(1, cfg.retention_hours) {
            events.push(Event::BridgeArchived { hour, id });
        }
    }

    Ok(RunResult {
        events,
        snapshots,
        stats,
        ledger,
    })
}

const TRUE_RECEIVER: &str = "recipient";
const FORGED_RECEIVER: &str = "diverted";

fn build_round(
    cfg: &ScenarioConfig,
    round_id: u64,
    ledger: &Ledger,
    quorum: BTreeSet<BridgeId>,
) -> TransferRound {
    // One transfer per round; the amount varies by round so payloads from
    // different rounds never collide.
    let amount = 1.0 + round_id as f64;
    let true_payload = ResponsePayload::new("origin", TRUE_RECEIVER, amount);
    let forged_payload = ResponsePayload::new("origin", FORGED_RECEIVER, amount);
    let responses = quorum
        .iter()
        .map(|id| {
            let payload = if ledger.get(*id).unwrap().behavior.is_adversarial() {
                forged_payload.clone()
            } else {
                true_payload.clone()
            };
            (*id, payload)
        })
        .collect();
    TransferRound {
        round_id,
        fee: cfg.fee,
        quorum,
        responses,
        majority: None,
    }
}

fn draw_coalition(
    cfg: &ScenarioConfig,
    population: usize,
    rng: &mut ProtocolRng,
) -> BTreeSet<BridgeId> {
    match &cfg.adversary {
        None => BTreeSet::new(),
        Some(spec) if spec.count == 0 => BTreeSet::new(),
        Some(spec) => {
            let AttackStrategy::ColludingEquivocation = spec.strategy;
            let ids: Vec<BridgeId> = (0..population as u32).map(BridgeId).collect();
            select_quorum(&ids, spec.count, rng)
                .expect("validated: coalition fits the population")
        }
    }
}

fn snapshot(
    cfg: &ScenarioConfig,
    hour: u64,
    round_id: u64,
    majority_size: u32,
    ledger: &Ledger,
    attacker_rewards: f64,
    stats: &RunStats,
) -> MetricsSnapshot {
    let mut raw = Vec::new();
    let mut decayed = Vec::new();
    let mut attacker_points_raw = 0.0;
    let mut attacker_points_decayed = 0.0;
    let mut active = 0u32;
    for b in ledger.bridges() {
        if b.status == BridgeStatus::Archived {
            continue;
        }
        if b.status == BridgeStatus::Active {
            active += 1;
        }
        raw.push(b.raw_success_points);
        decayed.push(b.decayed_success_points);
        if b.behavior.is_adversarial() {
            attacker_points_raw += b.raw_success_points;
            attacker_points_decayed += b.decayed_success_points;
        }
    }
    let (gini_raw, nakamoto_raw) = measure(&raw);
    let (gini_decayed, nakamoto_decayed) = measure(&decayed);
    let fee_budget = cfg.fee * stats.rounds_executed as f64;
    let attacker_reward_share = if fee_budget > 0.0 {
        attacker_rewards / fee_budget
    } else {
        0.0
    };
    MetricsSnapshot {
        hour,
        round_id,
        gini_raw,
        gini_decayed,
        nakamoto_raw,
        nakamoto_decayed,
        active_bridges: active,
        majority_size,
        attacker_points_raw,
        attacker_points_decayed,
        attacker_reward_share,
    }
}

fn measure(values: &[f64]) -> (f64, u32) {
    match Distribution::new(values.to_vec()) {
        Err(_) => (0.0, 0),
        Ok(d) => {
            let g = gini_direct(&d);
            let k = nakamoto(&d).map(|r| r.coefficient as u32).unwrap_or(0);
            (g, k)
        }
    }
}

/// One cell of a sensitivity sweep.
#[derive(Debug, Clone)]
pub struct SweepCell {
    pub lambda: f64,
    pub time_window_hours: f64,
    /// The replicate seed this cell was requested with (the run's actual
    /// stream is derived from it and the cell index).
    pub seed: u64,
    pub result: RunResult,
}

/// Runs the cartesian product of decay factors, grace windows, and seeds,
/// with every other parameter taken from `base`. Each cell runs on an
/// independent RNG stream derived from its seed and grid position.
pub fn run_sensitivity(
    base: &ScenarioConfig,
    lambdas: &[f64],
    windows: &[f64],
    seeds: &[u64],
) -> Result<Vec<SweepCell>, SimError> {
    if lambdas.is_empty() || windows.is_empty() || seeds.is_empty() {
        return Err(SimError::Config(
            "sensitivity grids must not be empty".into(),
        ));
    }
    let mut cells = Vec::with_capacity(lambdas.len() * windows.len() * seeds.len());
    for (li, &lambda) in lambdas.iter().enumerate() {
        for (wi, &window) in windows.iter().enumerate() {
            let cell_index = (li * windows.len() + wi) as u64;
            for &seed in seeds {
                let mut cfg = base.clone();
                cfg.lambda = lambda;
                cfg.time_window_hours = window;
                cfg.seed = derive_seed(seed, cell_index);
                let result = run_scenario(&cfg)?;
                cells.push(SweepCell {
                    lambda,
                    time_window_hours: window,
                    seed,
                    result,
                });
            }
        }
    }
    Ok(cells)
}

/// Final-state measurements of one attack replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackRunOutcome {
    pub seed: u64,
    pub attacker_points_raw: f64,
    pub attacker_points_decayed: f64,
    /// Coalition share of the total offered fee stream.
    pub attacker_reward_share: f64,
    /// Coalition share of the rewards actually distributed, reported for
    /// transparency alongside the budget-based share.
    pub attacker_share_of_distributed: f64,
    /// Fraction of rounds whose majority carried the forged payload.
    pub capture_frequency: f64,
}

/// Seed-averaged summary for one attacker count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackSummary {
    pub attackers: usize,
    /// Exact probability that a fresh quorum contains a strict majority of
    /// attackers, at full population.
    pub exact_capture_probability: f64,
    pub mean_points_raw: f64,
    pub mean_points_decayed: f64,
    /// Seed-averaged decayed-to-raw attacker point ratio.
    pub mean_decayed_to_raw_ratio: f64,
    pub mean_reward_share: f64,
    pub mean_share_of_distributed: f64,
    pub mean_capture_frequency: f64,
    pub runs: Vec<AttackRunOutcome>,
}

/// Runs the attack experiment for each attacker count, seed-averaged over
/// `num_seeds` replicates with streams derived from the base seed.
pub fn run_attack(
    base: &ScenarioConfig,
    attacker_counts: &[usize],
    num_seeds: usize,
) -> Result<Vec<AttackSummary>, SimError> {
    if attacker_counts.is_empty() || num_seeds == 0 {
        return Err(SimError::Config(
            "attack requires attacker counts and at least one seed".into(),
        ));
    }
    let population = base.population();
    let mut summaries = Vec::with_capacity(attacker_counts.len());
    for &count in attacker_counts {
        if count > population {
            return Err(SimError::Config(format!(
                "attacker count {count} exceeds the population {population}"
            )));
        }
        let mut runs = Vec::with_capacity(num_seeds);
        for i in 0..num_seeds {
            let mut cfg = base.clone();
            cfg.adversary = Some(AdversarySpec {
                count,
                strategy: AttackStrategy::ColludingEquivocation,
            });
            cfg.seed = derive_seed(base.seed, i as u64);
            let result = run_scenario(&cfg)?;
            let last = result
                .snapshots
                .last()
                .expect("duration is positive, so snapshots exist");
            let distributed: f64 = result
                .ledger
                .bridges()
                .map(|b| b.cumulative_reward)
                .sum();
            let attacker_rewards: f64 = result
                .ledger
                .bridges()
                .filter(|b| b.behavior.is_adversarial())
                .map(|b| b.cumulative_reward)
                .sum();
            runs.push(AttackRunOutcome {
                seed: cfg.seed,
                attacker_points_raw: last.attacker_points_raw,
                attacker_points_decayed: last.attacker_points_decayed,
                attacker_reward_share: last.attacker_reward_share,
                attacker_share_of_distributed: if distributed > 0.0 {
                    attacker_rewards / distributed
                } else {
                    0.0
                },
                capture_frequency: if result.stats.rounds_executed > 0 {
                    result.stats.attacker_wins as f64 / result.stats.rounds_executed as f64
                } else {
                    0.0
                },
            });
        }
        let n = runs.len() as f64;
        let mean = |f: fn(&AttackRunOutcome) -> f64| runs.iter().map(f).sum::<f64>() / n;
        summaries.push(AttackSummary {
            attackers: count,
            exact_capture_probability: quorum_majority_probability(
                population,
                effective_quorum(base, population)?,
                count,
            )?,
            mean_points_raw: mean(|r| r.attacker_points_raw),
            mean_points_decayed: mean(|r| r.attacker_points_decayed),
            mean_decayed_to_raw_ratio: mean(|r| {
                if r.attacker_points_raw > 0.0 {
                    r.attacker_points_decayed / r.attacker_points_raw
                } else {
                    0.0
                }
            }),
            mean_reward_share: mean(|r| r.attacker_reward_share),
            mean_share_of_distributed: mean(|r| r.attacker_share_of_distributed),
            mean_capture_frequency: mean(|r| r.capture_frequency),
            runs,
        });
    }
    Ok(summaries)
}

fn effective_quorum(cfg: &ScenarioConfig, population: usize) -> Result<usize, SimError> {
    Ok(quorum_size(&QuorumParams {
        total_reward: cfg.quorum.total_reward,
        min_reward: cfg.quorum.min_reward,
        population_size: population,
    })?)
}

/// Exact probability that a uniformly random `quorum`-subset of the
/// population contains strictly more than half attackers.
///
/// Selection is without replacement, so the law is hypergeometric; the sum
/// is computed term by term with multiplicatively evaluated binomial ratios.
pub fn quorum_majority_probability(
    population: usize,
    quorum: usize,
    attackers: usize,
) -> Result<f64, SimError> {
    if quorum == 0 || quorum > population {
        return Err(SimError::InvalidParams(format!(
            "quorum must satisfy 1 <= Q <= N; got Q={quorum}, N={population}"
        )));
    }
    if attackers > population {
        return Err(SimError::InvalidParams(format!(
            "attackers {attackers} exceed the population {population}"
        )));
    }
    let honest = population - attackers;
    let need = quorum / 2 + 1; // smallest count strictly above quorum/2
    let total = ln_choose(population, quorum);
    let mut probability = 0.0;
    for k in need..=quorum.min(attackers) {
        if quorum - k > honest {
            continue;
        }
        let ln_term = ln_choose(attackers, k) + ln_choose(honest, quorum - k) - total;
        probability += ln_term.exp();
    }
    Ok(probability.min(1.0))
}

fn ln_choose(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut acc = 0.0f64;
    for i in 1..=k {
        acc += ((n - k + i) as f64).ln() - (i as f64).ln();
    }
    acc
}
