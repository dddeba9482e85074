//! The PSCRD (Proof of Success and Reward Distribution) protocol state
//! machine: quorum sizing and selection, response grouping, strict-majority
//! consensus, success-point accounting, proportional reward distribution,
//! age-based decay, and the bridge lifecycle (offline / rejoin / archive).
//!
//! All operations are pure functions over explicit values, or methods on an
//! owned [`Ledger`]; nothing here uses interior mutability, so independent
//! rounds and scenarios can run in parallel as long as each owns its ledger
//! and RNG stream.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifies one bridge. Ids are compared numerically; that ordering is the
/// canonical order used everywhere determinism matters (ledger iteration,
/// selection pools, reward maps).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct BridgeId(pub u32);

impl std::fmt::Display for BridgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "b{}", self.0)
    }
}

/// Lifecycle state of a registered bridge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BridgeStatus {
    /// Participates in selection and rewards.
    Active,
    /// Temporarily out of the network; history retained until the retention
    /// window elapses.
    Offline {
        /// Hour at which the bridge went offline.
        since: u64,
    },
    /// Offline longer than the retention window; excluded from selection and
    /// reward computation permanently.
    Archived,
}

/// Behavioral model of a bridge, used by the simulator to produce responses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Behavior {
    /// Always reports the true transfer payload.
    Honest,
    /// Member of a colluding coalition; reports the coalition's forged
    /// payload every round it is selected.
    Adversarial {
        /// Coalition the bridge belongs to.
        coalition: u32,
    },
}

impl Behavior {
    /// Whether this bridge belongs to any adversarial coalition.
    pub fn is_adversarial(&self) -> bool {
        matches!(self, Behavior::Adversarial { .. })
    }
}

/// Full per-bridge record tracked by the ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeRecord {
    pub id: BridgeId,
    /// Simulation hour at which the bridge first entered.
    pub join_time: u64,
    /// Hours since joining (continues to advance while offline).
    pub age: f64,
    /// Cumulative count of majority memberships, plus any initial endowment.
    pub raw_success_points: f64,
    /// Raw points attenuated by the decay rule; recomputed, never stored
    /// back into `raw_success_points`.
    pub decayed_success_points: f64,
    /// Total rewards received, in fee units.
    pub cumulative_reward: f64,
    pub status: BridgeStatus,
    pub behavior: Behavior,
}

/// Parameters that determine the quorum size for one transfer round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuorumParams {
    /// Total reward pool available for the round.
    pub total_reward: f64,
    /// Minimum reward each selected bridge must be able to receive.
    pub min_reward: f64,
    /// Number of bridges eligible for selection.
    pub population_size: usize,
}

/// The transaction detail a bridge reports after relaying a transfer.
/// Two payloads belong to the same response group iff all three fields are
/// bit-identical (the amount is compared by its bit pattern, not numerically).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResponsePayload {
    pub sender: String,
    pub receiver: String,
    pub amount: f64,
}

impl ResponsePayload {
    pub fn new(sender: impl Into<String>, receiver: impl Into<String>, amount: f64) -> Self {
        Self {
            sender: sender.into(),
            receiver: receiver.into(),
            amount,
        }
    }

    fn key(&self) -> (&str, &str, u64) {
        (&self.sender, &self.receiver, self.amount.to_bits())
    }
}

impl PartialEq for ResponsePayload {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for ResponsePayload {}

impl PartialOrd for ResponsePayload {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ResponsePayload {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl std::hash::Hash for ResponsePayload {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

/// One cross-chain transfer attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferRound {
    pub round_id: u64,
    /// Transfer fee to distribute among the majority group.
    pub fee: f64,
    /// Bridges selected to serve the round.
    pub quorum: BTreeSet<BridgeId>,
    /// Responses received; quorum members absent from this map did not
    /// respond and count against consensus.
    pub responses: BTreeMap<BridgeId, ResponsePayload>,
    /// The unique group holding a strict majority of the quorum, if any.
    pub majority: Option<BTreeSet<BridgeId>>,
}

/// Errors produced by protocol operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("quorum of {requested} exceeds the active population of {available}")]
    InsufficientPopulation { requested: usize, available: usize },
    #[error("response from bridge {0} which is outside the quorum")]
    ForeignResponse(BridgeId),
    #[error("bridge {0} is not in the ledger")]
    UnknownBridge(BridgeId),
    #[error("bridge {0} was archived after exceeding the retention window")]
    ArchivedBridge(BridgeId),
    #[error("bridge {0} is not offline")]
    NotOffline(BridgeId),
    #[error("bridge {0} is not active")]
    NotActive(BridgeId),
    #[error("reward distribution requires a non-empty majority")]
    EmptyMajority,
}

/// Computes the quorum size: the number of seats the reward pool can fund at
/// the minimum rate, floored so every seat is affordable, and capped at the
/// eligible population.
pub fn quorum_size(params: &QuorumParams) -> Result<usize, ProtocolError> {
    if !params.min_reward.is_finite() || !params.total_reward.is_finite() {
        return Err(ProtocolError::InvalidParams(
            "quorum rewards must be finite".into(),
        ));
    }
    if params.min_reward <= 0.0 {
        return Err(ProtocolError::InvalidParams(format!(
            "min_reward must be positive; got {}",
            params.min_reward
        )));
    }
    if params.total_reward < params.min_reward {
        return Err(ProtocolError::InvalidParams(format!(
            "total_reward {} is below min_reward {}; the quorum would be empty",
            params.total_reward, params.min_reward
        )));
    }
    if params.population_size == 0 {
        return Err(ProtocolError::InvalidParams(
            "population_size must be positive".into(),
        ));
    }
    let seats = (params.total_reward / params.min_reward).floor() as usize;
    Ok(seats.min(params.population_size).max(1))
}

/// Probability that any given bridge is selected into a quorum of size `q`
/// drawn uniformly from `n` bridges.
pub fn selection_probability(q: usize, n: usize) -> Result<f64, ProtocolError> {
    if q == 0 || n == 0 {
        return Err(ProtocolError::InvalidParams(
            "quorum and population must be positive".into(),
        ));
    }
    if q > n {
        return Err(ProtocolError::InvalidParams(format!(
            "quorum {q} exceeds population {n}"
        )));
    }
    Ok(q as f64 / n as f64)
}

/// Selects a uniformly random `q`-subset of the active bridges, without
/// replacement.
///
/// `active` must be sorted ascending (the canonical id order); the draw is a
/// partial Fisher-Yates shuffle over that ordering, so identical seeds yield
/// identical subsets.
pub fn select_quorum(
    active: &[BridgeId],
    q: usize,
    rng: &mut impl Rng,
) -> Result<BTreeSet<BridgeId>, ProtocolError> {
    if q == 0 {
        return Err(ProtocolError::InvalidParams("quorum must be positive".into()));
    }
    if q > active.len() {
        return Err(ProtocolError::InsufficientPopulation {
            requested: q,
            available: active.len(),
        });
    }
    debug_assert!(active.windows(2).all(|w| w[0] < w[1]), "pool must be sorted");
    let mut pool = active.to_vec();
    for i in 0..q {
        let j = rng.gen_range(i..pool.len());
        pool.swap(i, j);
    }
    Ok(pool[..q].iter().copied().collect())
}

/// Partitions a round's responders by exact payload equality.
///
/// Quorum members that did not respond belong to no group. A response from
/// outside the quorum is an error.
pub fn group_responses(
    round: &TransferRound,
) -> Result<BTreeMap<ResponsePayload, BTreeSet<BridgeId>>, ProtocolError> {
    let mut groups: BTreeMap<ResponsePayload, BTreeSet<BridgeId>> = BTreeMap::new();
    for (id, payload) in &round.responses {
        if !round.quorum.contains(id) {
            return Err(ProtocolError::ForeignResponse(*id));
        }
        groups.entry(payload.clone()).or_default().insert(*id);
    }
    Ok(groups)
}

/// Returns the group holding strictly more than half of the quorum seats.
///
/// The denominator is the quorum size `q`, not the number of responders, so
/// non-responders count against consensus. At most one group can clear the
/// threshold, so no tie-breaking is possible; absence of a majority is a
/// legitimate outcome.
pub fn majority_group(
    groups: &BTreeMap<ResponsePayload, BTreeSet<BridgeId>>,
    q: usize,
) -> Option<(&ResponsePayload, &BTreeSet<BridgeId>)> {
    groups.iter().find(|(_, members)| 2 * members.len() > q)
}

/// Computes the decayed success points of one bridge.
///
/// While the bridge's age is within the grace window the raw points pass
/// through unchanged; beyond it they are attenuated by `1 / (1 + lambda*age)`.
/// The raw points are never mutated: decay is an effective value used for
/// reward weights and decayed metrics.
pub fn apply_decay(record: &BridgeRecord, lambda: f64, t_w: f64) -> Result<f64, ProtocolError> {
    Ok(decay_value(
        record.raw_success_points,
        record.age,
        validate_lambda(lambda)?,
        t_w,
    ))
}

/// Validates the decay factor: the protocol requires it strictly inside
/// (0, 1).
pub fn validate_lambda(lambda: f64) -> Result<f64, ProtocolError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(ProtocolError::InvalidParams(format!(
            "lambda must lie in the open interval (0, 1); got {lambda}"
        )));
    }
    Ok(lambda)
}

pub(crate) fn decay_value(raw: f64, age: f64, lambda: f64, t_w: f64) -> f64 {
    if age > t_w {
        raw / (1.0 + lambda * age)
    } else {
        raw
    }
}

/// Splits the fee among the majority group proportionally to the given
/// weights (decayed success points). If every weight is zero the fee is
/// split equally, preserving conservation and impartiality.
pub fn distribute_rewards(
    majority: &BTreeSet<BridgeId>,
    fee: f64,
    weights: &BTreeMap<BridgeId, f64>,
) -> Result<BTreeMap<BridgeId, f64>, ProtocolError> {
    if majority.is_empty() {
        return Err(ProtocolError::EmptyMajority);
    }
    if fee.is_nan() || fee <= 0.0 {
        return Err(ProtocolError::InvalidParams(format!(
            "fee must be positive; got {fee}"
        )));
    }
    let mut total_weight = 0.0;
    for id in majority {
        let w = *weights
            .get(id)
            .ok_or(ProtocolError::UnknownBridge(*id))?;
        if w < 0.0 {
            return Err(ProtocolError::InvalidParams(format!(
                "weight for bridge {id} is negative"
            )));
        }
        total_weight += w;
    }
    let mut rewards = BTreeMap::new();
    if total_weight == 0.0 {
        let share = fee / majority.len() as f64;
        for id in majority {
            rewards.insert(*id, share);
        }
    } else {
        for id in majority {
            rewards.insert(*id, fee * weights[id] / total_weight);
        }
    }
    Ok(rewards)
}

/// The protocol's bridge registry plus its clock.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    bridges: BTreeMap<BridgeId, BridgeRecord>,
    now: u64,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Current simulation hour.
    pub fn now(&self) -> u64 {
        self.now
    }

    /// Registers a new bridge at the current hour.
    pub fn admit(
        &mut self,
        id: BridgeId,
        behavior: Behavior,
        initial_points: f64,
        initial_age: f64,
    ) -> Result<(), ProtocolError> {
        if self.bridges.contains_key(&id) {
            return Err(ProtocolError::InvalidParams(format!(
                "bridge {id} is already registered"
            )));
        }
        if initial_points < 0.0 || initial_age < 0.0 {
            return Err(ProtocolError::InvalidParams(
                "initial points and age must be non-negative".into(),
            ));
        }
        self.bridges.insert(
            id,
            BridgeRecord {
                id,
                join_time: self.now,
                age: initial_age,
                raw_success_points: initial_points,
                decayed_success_points: initial_points,
                cumulative_reward: 0.0,
                status: BridgeStatus::Active,
                behavior,
            },
        );
        Ok(())
    }

    pub fn get(&self, id: BridgeId) -> Option<&BridgeRecord> {
        self.bridges.get(&id)
    }

    /// All registered bridges, in canonical id order.
    pub fn bridges(&self) -> impl Iterator<Item = &BridgeRecord> {
        self.bridges.values()
    }

    pub fn len(&self) -> usize {
        self.bridges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bridges.is_empty()
    }

    /// Ids of active bridges, sorted ascending; this is the selection pool.
    pub fn active_ids(&self) -> Vec<BridgeId> {
        self.bridges
            .values()
            .filter(|b| b.status == BridgeStatus::Active)
            .map(|b| b.id)
            .collect()
    }

    /// Counts of (active, offline, archived) bridges.
    pub fn status_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for b in self.bridges.values() {
            match b.status {
                BridgeStatus::Active => counts.0 += 1,
                BridgeStatus::Offline { .. } => counts.1 += 1,
                BridgeStatus::Archived => counts.2 += 1,
            }
        }
        counts
    }

    /// Grants one success point to every majority member.
    pub fn award_success_points(
        &mut self,
        majority: &BTreeSet<BridgeId>,
    ) -> Result<(), ProtocolError> {
        for id in majority {
            if !self.bridges.contains_key(id) {
                return Err(ProtocolError::UnknownBridge(*id));
            }
        }
        for id in majority {
            self.bridges.get_mut(id).unwrap().raw_success_points += 1.0;
        }
        Ok(())
    }

    /// Credits distributed rewards to their recipients.
    pub fn credit_rewards(
        &mut self,
        rewards: &BTreeMap<BridgeId, f64>,
    ) -> Result<(), ProtocolError> {
        for id in rewards.keys() {
            if !self.bridges.contains_key(id) {
                return Err(ProtocolError::UnknownBridge(*id));
            }
        }
        for (id, amount) in rewards {
            self.bridges.get_mut(id).unwrap().cumulative_reward += amount;
        }
        Ok(())
    }

    /// Recomputes every non-archived bridge's decayed points from its
    /// current raw points and age.
    pub fn refresh_decay(&mut self, lambda: f64, t_w: f64) -> Result<(), ProtocolError> {
        let lambda = validate_lambda(lambda)?;
        for b in self.bridges.values_mut() {
            if b.status != BridgeStatus::Archived {
                b.decayed_success_points =
                    decay_value(b.raw_success_points, b.age, lambda, t_w);
            }
        }
        Ok(())
    }

    /// Marks an active bridge offline at the current hour.
    pub fn set_offline(&mut self, id: BridgeId) -> Result<(), ProtocolError> {
        let now = self.now;
        let bridge = self
            .bridges
            .get_mut(&id)
            .ok_or(ProtocolError::UnknownBridge(id))?;
        match bridge.status {
            BridgeStatus::Active => {
                bridge.status = BridgeStatus::Offline { since: now };
                Ok(())
            }
            _ => Err(ProtocolError::NotActive(id)),
        }
    }

    /// Reinstates an offline bridge with its history fully intact.
    ///
    /// Points and age continue exactly as they were; only the status flips
    /// back to active. Archived bridges cannot return.
    pub fn rejoin(&mut self, id: BridgeId) -> Result<(), ProtocolError> {
        let bridge = self
            .bridges
            .get_mut(&id)
            .ok_or(ProtocolError::UnknownBridge(id))?;
        match bridge.status {
            BridgeStatus::Offline { .. } => {
                bridge.status = BridgeStatus::Active;
                Ok(())
            }
            BridgeStatus::Archived => Err(ProtocolError::ArchivedBridge(id)),
            BridgeStatus::Active => Err(ProtocolError::NotOffline(id)),
        }
    }

    /// Advances the clock. Every non-archived bridge ages by `hours`
    /// (offline time included); offline bridges whose absence exceeds the
    /// retention window are archived. Returns the newly archived ids.
    pub fn advance_time(&mut self, hours: u64, retention_hours: u64) -> Vec<BridgeId> {
        self.now += hours;
        let now = self.now;
        let mut archived = Vec::new();
        for b in self.bridges.values_mut() {
            match b.status {
                BridgeStatus::Archived => {}
                BridgeStatus::Offline { since } => {
                    b.age += hours as f64;
                    if now - since > retention_hours {
                        b.status = BridgeStatus::Archived;
                        archived.push(b.id);
                    }
                }
                BridgeStatus::Active => {
                    b.age += hours as f64;
                }
            }
        }
        archived
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn params(total: f64, min: f64, n: usize) -> QuorumParams {
        QuorumParams {
            total_reward: total,
            min_reward: min,
            population_size: n,
        }
    }

    fn ids(range: std::ops::Range<u32>) -> Vec<BridgeId> {
        range.map(BridgeId).collect()
    }

    fn id_set(ids: &[u32]) -> BTreeSet<BridgeId> {
        ids.iter().copied().map(BridgeId).collect()
    }

    #[test]
    fn quorum_size_exact_division() {
        assert_eq!(quorum_size(&params(100.0, 5.0, 50)).unwrap(), 20);
    }

    #[test]
    fn quorum_size_single_affordable_seat() {
        assert_eq!(quorum_size(&params(10.0, 10.0, 50)).unwrap(), 1);
    }

    #[test]
    fn quorum_size_floors_fractional_seats() {
        // floor(100 / 3) = 33: the 34th seat would not be affordable.
        assert_eq!(quorum_size(&params(100.0, 3.0, 50)).unwrap(), 33);
    }

    #[test]
    fn quorum_size_caps_at_population() {
        assert_eq!(quorum_size(&params(1000.0, 1.0, 50)).unwrap(), 50);
    }

    #[test]
    fn quorum_size_rejects_empty_pool() {
        assert!(matches!(
            quorum_size(&params(5.0, 10.0, 50)),
            Err(ProtocolError::InvalidParams(_))
        ));
    }

    #[test]
    fn selection_probability_examples() {
        assert_eq!(selection_probability(20, 50).unwrap(), 0.4);
        assert_eq!(selection_probability(50, 50).unwrap(), 1.0);
        assert_eq!(selection_probability(1, 4).unwrap(), 0.25);
        assert!(selection_probability(5, 4).is_err());
    }

    #[test]
    fn select_quorum_full_population() {
        let pool = ids(0..4);
        let mut rng = rng_from_seed(3);
        let q = select_quorum(&pool, 4, &mut rng).unwrap();
        assert_eq!(q, pool.iter().copied().collect());
    }

    #[test]
    fn select_quorum_is_deterministic() {
        let pool = ids(0..50);
        let a = select_quorum(&pool, 20, &mut rng_from_seed(9)).unwrap();
        let b = select_quorum(&pool, 20, &mut rng_from_seed(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn select_quorum_insufficient_population() {
        let pool = ids(0..3);
        assert_eq!(
            select_quorum(&pool, 4, &mut rng_from_seed(0)),
            Err(ProtocolError::InsufficientPopulation {
                requested: 4,
                available: 3
            })
        );
    }

    fn round_with(
        quorum: &[u32],
        responses: &[(u32, ResponsePayload)],
    ) -> TransferRound {
        TransferRound {
            round_id: 0,
            fee: 1.0,
            quorum: id_set(quorum),
            responses: responses
                .iter()
                .map(|(id, p)| (BridgeId(*id), p.clone()))
                .collect(),
            majority: None,
        }
    }

    fn payload(tag: &str) -> ResponsePayload {
        ResponsePayload::new("alice", tag, 10.0)
    }

    #[test]
    fn group_responses_partitions_by_exact_payload() {
        let pa = payload("pa");
        let pb = payload("pb");
        let round = round_with(
            &[1, 2, 3, 4, 5],
            &[
                (1, pa.clone()),
                (2, pa.clone()),
                (3, pa.clone()),
                (4, pb.clone()),
                (5, pb.clone()),
            ],
        );
        let groups = group_responses(&round).unwrap();
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[&pa], id_set(&[1, 2, 3]));
        assert_eq!(groups[&pb], id_set(&[4, 5]));
    }

    #[test]
    fn group_responses_single_group_and_singletons() {
        let pa = payload("pa");
        let round = round_with(
            &[1, 2, 3],
            &[(1, pa.clone()), (2, pa.clone()), (3, pa.clone())],
        );
        let groups = group_responses(&round).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[&pa].len(), 3);

        let distinct = round_with(
            &[1, 2, 3, 4],
            &[
                (1, payload("p1")),
                (2, payload("p2")),
                (3, payload("p3")),
                (4, payload("p4")),
            ],
        );
        let groups = group_responses(&distinct).unwrap();
        assert_eq!(groups.len(), 4);
        assert!(groups.values().all(|g| g.len() == 1));
    }

    #[test]
    fn group_responses_rejects_foreign_bridge() {
        let round = round_with(&[1, 2], &[(1, payload("pa")), (7, payload("pa"))]);
        assert_eq!(
            group_responses(&round),
            Err(ProtocolError::ForeignResponse(BridgeId(7)))
        );
    }

    #[test]
    fn payload_equality_is_bitwise_on_amount() {
        let a = ResponsePayload::new("s", "r", 0.1 + 0.2);
        let b = ResponsePayload::new("s", "r", 0.3);
        // 0.1 + 0.2 != 0.3 in binary floating point; these group separately.
        assert_ne!(a, b);
        assert_eq!(a, a.clone());
    }

    #[test]
    fn majority_strict_threshold() {
        let pa = payload("pa");
        let pb = payload("pb");
        let round = round_with(
            &[1, 2, 3, 4, 5],
            &[
                (1, pa.clone()),
                (2, pa.clone()),
                (3, pa.clone()),
                (4, pb.clone()),
                (5, pb.clone()),
            ],
        );
        let groups = group_responses(&round).unwrap();
        let (winner, members) = majority_group(&groups, 5).unwrap();
        assert_eq!(winner, &pa);
        assert_eq!(members, &id_set(&[1, 2, 3]));
    }

    #[test]
    fn majority_even_split_is_none() {
        let pa = payload("pa");
        let pb = payload("pb");
        let round = round_with(
            &[1, 2, 3, 4],
            &[(1, pa.clone()), (2, pa.clone()), (3, pb.clone()), (4, pb.clone())],
        );
        let groups = group_responses(&round).unwrap();
        assert!(majority_group(&groups, 4).is_none());
    }

    #[test]
    fn majority_counts_non_responders_against_consensus() {
        // 10 identical responses in a quorum of 20: half, not a strict
        // majority of the quorum.
        let pa = payload("pa");
        let responses: Vec<(u32, ResponsePayload)> =
            (1..=10).map(|i| (i, pa.clone())).collect();
        let round = round_with(&(1..=20).collect::<Vec<_>>(), &responses);
        let groups = group_responses(&round).unwrap();
        assert!(majority_group(&groups, 20).is_none());
    }

    fn ledger_with_points(points: &[(u32, f64)]) -> Ledger {
        let mut ledger = Ledger::new();
        for (id, p) in points {
            ledger.admit(BridgeId(*id), Behavior::Honest, *p, 0.0).unwrap();
        }
        ledger
    }

    #[test]
    fn award_increments_majority_only() {
        let mut ledger = ledger_with_points(&[(1, 0.0), (2, 7.0), (3, 4.0)]);
        ledger.award_success_points(&id_set(&[1, 2])).unwrap();
        assert_eq!(ledger.get(BridgeId(1)).unwrap().raw_success_points, 1.0);
        assert_eq!(ledger.get(BridgeId(2)).unwrap().raw_success_points, 8.0);
        assert_eq!(ledger.get(BridgeId(3)).unwrap().raw_success_points, 4.0);
    }

    #[test]
    fn award_empty_majority_is_noop() {
        let mut ledger = ledger_with_points(&[(1, 2.0)]);
        ledger.award_success_points(&BTreeSet::new()).unwrap();
        assert_eq!(ledger.get(BridgeId(1)).unwrap().raw_success_points, 2.0);
    }

    #[test]
    fn award_is_additive_across_rounds() {
        let mut ledger = ledger_with_points(&[(1, 0.0)]);
        for _ in 0..3 {
            ledger.award_success_points(&id_set(&[1])).unwrap();
        }
        assert_eq!(ledger.get(BridgeId(1)).unwrap().raw_success_points, 3.0);
    }

    #[test]
    fn award_unknown_bridge_errors_without_partial_update() {
        let mut ledger = ledger_with_points(&[(1, 0.0)]);
        let err = ledger.award_success_points(&id_set(&[1, 9])).unwrap_err();
        assert_eq!(err, ProtocolError::UnknownBridge(BridgeId(9)));
        assert_eq!(ledger.get(BridgeId(1)).unwrap().raw_success_points, 0.0);
    }

    fn record(points: f64, age: f64) -> BridgeRecord {
        BridgeRecord {
            id: BridgeId(0),
            join_time: 0,
            age,
            raw_success_points: points,
            decayed_success_points: points,
            cumulative_reward: 0.0,
            status: BridgeStatus::Active,
            behavior: Behavior::Honest,
        }
    }

    #[test]
    fn decay_halves_at_unit_product() {
        // 100 / (1 + 0.05 * 20) = 50
        let s = apply_decay(&record(100.0, 20.0), 0.05, 5.0).unwrap();
        assert!((s - 50.0).abs() < 1e-12);
    }

    #[test]
    fn decay_identity_at_age_zero() {
        let s = apply_decay(&record(42.0, 0.0), 0.3, 5.0).unwrap();
        assert_eq!(s, 42.0);
    }

    #[test]
    fn decay_skipped_within_grace_window() {
        let s = apply_decay(&record(10.0, 4.0), 0.05, 5.0).unwrap();
        assert_eq!(s, 10.0);
    }

    #[test]
    fn decay_rejects_lambda_outside_open_interval() {
        for bad in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(apply_decay(&record(1.0, 10.0), bad, 5.0).is_err());
        }
    }

    #[test]
    fn decay_never_mutates_raw_points() {
        let r = record(100.0, 20.0);
        let _ = apply_decay(&r, 0.05, 5.0).unwrap();
        assert_eq!(r.raw_success_points, 100.0);
    }

    fn weights(entries: &[(u32, f64)]) -> BTreeMap<BridgeId, f64> {
        entries.iter().map(|(id, w)| (BridgeId(*id), *w)).collect()
    }

    #[test]
    fn rewards_proportional_to_weights() {
        let r = distribute_rewards(
            &id_set(&[1, 2, 3]),
            10.0,
            &weights(&[(1, 2.0), (2, 3.0), (3, 5.0)]),
        )
        .unwrap();
        assert!((r[&BridgeId(1)] - 2.0).abs() < 1e-12);
        assert!((r[&BridgeId(2)] - 3.0).abs() < 1e-12);
        assert!((r[&BridgeId(3)] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn sole_member_takes_the_fee() {
        let r = distribute_rewards(&id_set(&[1]), 7.0, &weights(&[(1, 4.0)])).unwrap();
        assert_eq!(r[&BridgeId(1)], 7.0);
    }

    #[test]
    fn zero_weights_split_equally() {
        let r = distribute_rewards(
            &id_set(&[1, 2]),
            6.0,
            &weights(&[(1, 0.0), (2, 0.0)]),
        )
        .unwrap();
        assert_eq!(r[&BridgeId(1)], 3.0);
        assert_eq!(r[&BridgeId(2)], 3.0);
    }

    #[test]
    fn rewards_require_majority() {
        assert_eq!(
            distribute_rewards(&BTreeSet::new(), 1.0, &BTreeMap::new()),
            Err(ProtocolError::EmptyMajority)
        );
    }

    #[test]
    fn advance_time_ages_bridges() {
        let mut ledger = ledger_with_points(&[(1, 0.0)]);
        ledger.advance_time(5, 8760);
        assert_eq!(ledger.get(BridgeId(1)).unwrap().age, 5.0);
        ledger.advance_time(10, 8760);
        assert_eq!(ledger.get(BridgeId(1)).unwrap().age, 15.0);
    }

    #[test]
    fn archive_beyond_retention_window() {
        let mut ledger = ledger_with_points(&[(1, 0.0)]);
        ledger.set_offline(BridgeId(1)).unwrap();
        // Exactly at the window: still retained.
        let archived = ledger.advance_time(8760, 8760);
        assert!(archived.is_empty());
        assert!(matches!(
            ledger.get(BridgeId(1)).unwrap().status,
            BridgeStatus::Offline { since: 0 }
        ));
        // One hour past: archived.
        let archived = ledger.advance_time(1, 8760);
        assert_eq!(archived, vec![BridgeId(1)]);
        assert_eq!(ledger.get(BridgeId(1)).unwrap().status, BridgeStatus::Archived);
    }

    #[test]
    fn archived_bridge_stops_aging() {
        let mut ledger = ledger_with_points(&[(1, 0.0)]);
        ledger.set_offline(BridgeId(1)).unwrap();
        ledger.advance_time(8761, 8760);
        let age = ledger.get(BridgeId(1)).unwrap().age;
        ledger.advance_time(100, 8760);
        assert_eq!(ledger.get(BridgeId(1)).unwrap().age, age);
    }

    #[test]
    fn rejoin_preserves_history() {
        let mut ledger = ledger_with_points(&[(1, 12.0)]);
        ledger.advance_time(40, 8760);
        ledger.set_offline(BridgeId(1)).unwrap();
        ledger.advance_time(10, 8760);
        ledger.rejoin(BridgeId(1)).unwrap();
        let b = ledger.get(BridgeId(1)).unwrap();
        assert_eq!(b.status, BridgeStatus::Active);
        assert_eq!(b.raw_success_points, 12.0);
        // The clock keeps running while offline.
        assert_eq!(b.age, 50.0);
    }

    #[test]
    fn rejoin_archived_is_rejected() {
        let mut ledger = ledger_with_points(&[(1, 0.0)]);
        ledger.set_offline(BridgeId(1)).unwrap();
        ledger.advance_time(9000, 8760);
        assert_eq!(
            ledger.rejoin(BridgeId(1)),
            Err(ProtocolError::ArchivedBridge(BridgeId(1)))
        );
    }

    #[test]
    fn rejoin_active_or_unknown_is_rejected() {
        let mut ledger = ledger_with_points(&[(1, 0.0)]);
        assert_eq!(
            ledger.rejoin(BridgeId(1)),
            Err(ProtocolError::NotOffline(BridgeId(1)))
        );
        assert_eq!(
            ledger.rejoin(BridgeId(9)),
            Err(ProtocolError::UnknownBridge(BridgeId(9)))
        );
    }

    #[test]
    fn status_counts_partition_population() {
        let mut ledger = ledger_with_points(&[(1, 0.0), (2, 0.0), (3, 0.0)]);
        ledger.set_offline(BridgeId(2)).unwrap();
        ledger.set_offline(BridgeId(3)).unwrap();
        ledger.advance_time(9000, 8760); // archives 2 and 3
        ledger.admit(BridgeId(4), Behavior::Honest, 0.0, 0.0).unwrap();
        let (active, offline, archived) = ledger.status_counts();
        assert_eq!(active + offline + archived, ledger.len());
        assert_eq!((active, offline, archived), (2, 0, 2));
    }

    #[test]
    fn offline_bridges_leave_selection_pool() {
        let mut ledger = ledger_with_points(&[(1, 0.0), (2, 0.0)]);
        ledger.set_offline(BridgeId(1)).unwrap();
        assert_eq!(ledger.active_ids(), vec![BridgeId(2)]);
    }
}
