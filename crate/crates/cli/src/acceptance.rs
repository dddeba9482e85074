//! The release gate: every headline claim about the protocol, pinned as an
//! executable criterion with its tolerance. The `verify` subcommand and the
//! acceptance test suite both iterate [`registry`], so a criterion cannot
//! exist without being aggregated.
//!
//! Bands are evaluated on means over twenty seed replicates (single
//! trajectories are noisy); per-seed values are retained in the context for
//! inspection.

use std::time::Instant;

use rand::Rng;

use pscrd_core::{
    derive_seed, gini_direct, gini_from_lorenz, lorenz, nakamoto, rng_from_seed,
    run_attack, run_scenario, run_sensitivity, select_quorum, AgeInitMode,
    AttackSummary, BridgeId, Distribution, Event, GroupSpec, QuorumParams, RunResult,
    ScenarioConfig, SimError, SweepCell,
};

use crate::report::csv_string;

/// Number of seed replicates each band is averaged over.
pub const ACCEPTANCE_SEEDS: usize = 20;

/// Decay factors exercised by the sensitivity criterion.
pub const SWEEP_LAMBDAS: [f64; 3] = [0.01, 0.05, 0.1];
/// Grace windows exercised by the sensitivity criterion.
pub const SWEEP_WINDOWS: [f64; 3] = [1.0, 5.0, 10.0];
/// Attacker counts exercised by the security criteria.
pub const ATTACK_COUNTS: [usize; 2] = [5, 26];
/// Quorum pool sizes exercised by the robustness criterion.
pub const ROBUSTNESS_POOLS: [f64; 2] = [10.0, 30.0];

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

/// One registered acceptance criterion.
pub struct Criterion {
    pub id: &'static str,
    pub name: &'static str,
    pub run: fn(&AcceptanceContext) -> CriterionResult,
}

/// Shared experiment results the criteria evaluate against, computed once.
pub struct AcceptanceContext {
    pub baseline: ScenarioConfig,
    pub baseline_runs: Vec<RunResult>,
    pub baseline_secs: f64,
    pub sensitivity: Vec<SweepCell>,
    pub sensitivity_secs: f64,
    /// Attack summaries for [`ATTACK_COUNTS`], run on the flat-cohort
    /// variant of the baseline.
    pub attack: Vec<AttackSummary>,
    /// Baseline re-runs with the quorum pool at each robustness size.
    pub robustness: Vec<(f64, Vec<RunResult>)>,
}

impl AcceptanceContext {
    /// Runs every experiment the criteria need. The config is the family
    /// under test; the stock baseline is used by `verify` unless another
    /// config is supplied.
    pub fn build(baseline: &ScenarioConfig) -> Result<Self, SimError> {
        baseline.validate()?;

        let start = Instant::now();
        let baseline_runs = seeded_runs(baseline, ACCEPTANCE_SEEDS)?;
        let baseline_secs = start.elapsed().as_secs_f64();

        let seeds: Vec<u64> = (0..ACCEPTANCE_SEEDS as u64)
            .map(|i| derive_seed(baseline.seed, i))
            .collect();
        let start = Instant::now();
        let sensitivity =
            run_sensitivity(baseline, &SWEEP_LAMBDAS, &SWEEP_WINDOWS, &seeds)?;
        let sensitivity_secs = start.elapsed().as_secs_f64();

        let attack = run_attack(&attack_base(baseline), &ATTACK_COUNTS, ACCEPTANCE_SEEDS)?;

        let mut robustness = Vec::new();
        for pool in ROBUSTNESS_POOLS {
            let mut cfg = baseline.clone();
            cfg.quorum.total_reward = pool;
            cfg.quorum.min_reward = 1.0;
            robustness.push((pool, seeded_runs(&cfg, ACCEPTANCE_SEEDS)?));
        }

        Ok(Self {
            baseline: baseline.clone(),
            baseline_runs,
            baseline_secs,
            sensitivity,
            sensitivity_secs,
            attack,
            robustness,
        })
    }

    fn mean_final(&self, runs: &[RunResult]) -> (f64, f64) {
        let n = runs.len() as f64;
        let gini = runs
            .iter()
            .map(|r| r.snapshots.last().unwrap().gini_decayed)
            .sum::<f64>()
            / n;
        let nakamoto = runs
            .iter()
            .map(|r| r.snapshots.last().unwrap().nakamoto_decayed as f64)
            .sum::<f64>()
            / n;
        (gini, nakamoto)
    }

    /// Seed-averaged decayed Gini at the given hour of the baseline runs.
    fn mean_gini_at(&self, hour: usize) -> f64 {
        self.baseline_runs
            .iter()
            .map(|r| r.snapshots[hour].gini_decayed)
            .sum::<f64>()
            / self.baseline_runs.len() as f64
    }
}

/// The attack experiments run on a single flat cohort with pre-existing
/// (uniform-random) ages: the security analysis population, which drops the
/// staggered entry so the coalition's exposure is stationary across the
/// whole run.
pub fn attack_base(baseline: &ScenarioConfig) -> ScenarioConfig {
    let mut cfg = baseline.clone();
    cfg.groups = vec![GroupSpec {
        size: baseline.population(),
        join_hour: 0,
    }];
    cfg.age_init_mode = AgeInitMode::UniformRandom;
    cfg.adversary = None;
    cfg
}

fn seeded_runs(cfg: &ScenarioConfig, count: usize) -> Result<Vec<RunResult>, SimError> {
    let mut runs = Vec::with_capacity(count);
    for i in 0..count as u64 {
        let mut replicate = cfg.clone();
        replicate.seed = derive_seed(cfg.seed, i);
        runs.push(run_scenario(&replicate)?);
    }
    Ok(runs)
}

/// Every acceptance criterion, in reporting order.
pub fn registry() -> Vec<Criterion> {
    vec![
        Criterion {
            id: "C1",
            name: "baseline fairness convergence",
            run: c1_baseline_fairness,
        },
        Criterion {
            id: "C2",
            name: "baseline decentralization",
            run: c2_baseline_decentralization,
        },
        Criterion {
            id: "C3",
            name: "entry-shock shape",
            run: c3_entry_shock,
        },
        Criterion {
            id: "C4",
            name: "sensitivity robustness",
            run: c4_sensitivity,
        },
        Criterion {
            id: "C5",
            name: "attack baseline containment",
            run: c5_attack_baseline,
        },
        Criterion {
            id: "C6",
            name: "51% attack containment",
            run: c6_majority_attack,
        },
        Criterion {
            id: "C7",
            name: "decay reduces inequality (theorem as property)",
            run: c7_gini_theorem,
        },
        Criterion {
            id: "C8",
            name: "decay improves decentralization (theorem as property)",
            run: c8_nakamoto_theorem,
        },
        Criterion {
            id: "C9",
            name: "metric oracle agreement",
            run: c9_metric_oracles,
        },
        Criterion {
            id: "C10",
            name: "reward conservation and determinism",
            run: c10_conservation_determinism,
        },
        Criterion {
            id: "C11",
            name: "selection uniformity",
            run: c11_selection_uniformity,
        },
        Criterion {
            id: "C12",
            name: "quorum-parameter robustness",
            run: c12_quorum_robustness,
        },
    ]
}

/// Builds the context and evaluates every registered criterion.
pub fn evaluate_all(
    baseline: &ScenarioConfig,
) -> Result<Vec<CriterionResult>, SimError> {
    let ctx = AcceptanceContext::build(baseline)?;
    Ok(registry().iter().map(|c| (c.run)(&ctx)).collect())
}

fn result(
    id: &'static str,
    name: &'static str,
    passed: bool,
    details: String,
) -> CriterionResult {
    CriterionResult {
        id,
        name,
        passed,
        details,
    }
}

fn c1_baseline_fairness(ctx: &AcceptanceContext) -> CriterionResult {
    let (gini, _) = ctx.mean_final(&ctx.baseline_runs);
    let in_band = (0.05..=0.20).contains(&gini);
    let fast = ctx.baseline_secs < 10.0;
    result(
        "C1",
        "baseline fairness convergence",
        in_band && fast,
        format!(
            "mean final decayed Gini {gini:.4} (band [0.05, 0.20]); {} runs in {:.2}s (budget 10s)",
            ctx.baseline_runs.len(),
            ctx.baseline_secs
        ),
    )
}

fn c2_baseline_decentralization(ctx: &AcceptanceContext) -> CriterionResult {
    let (_, nakamoto) = ctx.mean_final(&ctx.baseline_runs);
    result(
        "C2",
        "baseline decentralization",
        (17.0..=25.0).contains(&nakamoto),
        format!("mean final decayed Nakamoto coefficient {nakamoto:.2} (band [17, 25])"),
    )
}

fn c3_entry_shock(ctx: &AcceptanceContext) -> CriterionResult {
    let hours = ctx.baseline_runs[0].snapshots.len();
    if hours <= 80 {
        return result(
            "C3",
            "entry-shock shape",
            false,
            format!("run is only {hours}h long; the shape check needs hours 39..80"),
        );
    }
    let g39 = ctx.mean_gini_at(39);
    let g41 = ctx.mean_gini_at(41);
    let g55 = ctx.mean_gini_at(55);
    let g59 = ctx.mean_gini_at(59);
    let g61 = ctx.mean_gini_at(61);
    let g80 = ctx.mean_gini_at(80);
    let passed = g41 > g39 && g61 > g59 && g55 < g41 && g80 < g61;
    result(
        "C3",
        "entry-shock shape",
        passed,
        format!(
            "Gini 39h={g39:.4} 41h={g41:.4} 55h={g55:.4} 59h={g59:.4} 61h={g61:.4} 80h={g80:.4}; \
             need 41h>39h, 61h>59h, 55h<41h, 80h<61h"
        ),
    )
}

fn c4_sensitivity(ctx: &AcceptanceContext) -> CriterionResult {
    let mut failures = Vec::new();
    let mut envelope: (f64, f64, f64, f64) = (1.0, 0.0, f64::MAX, 0.0);
    for &lambda in &SWEEP_LAMBDAS {
        for &window in &SWEEP_WINDOWS {
            let finals: Vec<(f64, f64)> = ctx
                .sensitivity
                .iter()
                .filter(|c| c.lambda == lambda && c.time_window_hours == window)
                .map(|c| {
                    let last = c.result.snapshots.last().unwrap();
                    (last.gini_decayed, last.nakamoto_decayed as f64)
                })
                .collect();
            let n = finals.len() as f64;
            let gini = finals.iter().map(|f| f.0).sum::<f64>() / n;
            let nakamoto = finals.iter().map(|f| f.1).sum::<f64>() / n;
            envelope.0 = envelope.0.min(gini);
            envelope.1 = envelope.1.max(gini);
            envelope.2 = envelope.2.min(nakamoto);
            envelope.3 = envelope.3.max(nakamoto);
            if !(0.05..=0.20).contains(&gini) || !(17.0..=25.0).contains(&nakamoto) {
                failures.push(format!(
                    "lambda={lambda} window={window}: gini={gini:.4} nakamoto={nakamoto:.2}"
                ));
            }
        }
    }
    let fast = ctx.sensitivity_secs < 60.0;
    let passed = failures.is_empty() && fast;
    result(
        "C4",
        "sensitivity robustness",
        passed,
        if failures.is_empty() {
            format!(
                "9 cells: gini in [{:.4}, {:.4}], nakamoto in [{:.2}, {:.2}]; {:.2}s (budget 60s)",
                envelope.0, envelope.1, envelope.2, envelope.3, ctx.sensitivity_secs
            )
        } else {
            format!("out-of-band cells: {}", failures.join("; "))
        },
    )
}

fn c5_attack_baseline(ctx: &AcceptanceContext) -> CriterionResult {
    let summary = ctx.attack.iter().find(|s| s.attackers == ATTACK_COUNTS[0]);
    let Some(s) = summary else {
        return result("C5", "attack baseline containment", false, "no 5-attacker summary".into());
    };
    let share_ok = s.mean_reward_share < 0.02;
    let capture_ok = s.mean_capture_frequency < 0.01;
    let cross_check = (s.mean_capture_frequency - s.exact_capture_probability).abs() < 0.01;
    result(
        "C5",
        "attack baseline containment",
        share_ok && capture_ok && cross_check,
        format!(
            "5 attackers: reward share {:.4} (< 0.02), capture frequency {:.4} (< 0.01), \
             exact probability {:.6}",
            s.mean_reward_share, s.mean_capture_frequency, s.exact_capture_probability
        ),
    )
}

fn c6_majority_attack(ctx: &AcceptanceContext) -> CriterionResult {
    let summary = ctx.attack.iter().find(|s| s.attackers == ATTACK_COUNTS[1]);
    let Some(s) = summary else {
        return result("C6", "51% attack containment", false, "no 26-attacker summary".into());
    };
    let share_ok = (0.45..=0.55).contains(&s.mean_reward_share);
    let ratio_ok = s.mean_decayed_to_raw_ratio <= 0.2;
    result(
        "C6",
        "51% attack containment",
        share_ok && ratio_ok,
        format!(
            "26 attackers: reward share {:.4} (band [0.45, 0.55]), decayed/raw point \
             ratio {:.4} (<= 0.2); raw points {:.1}, decayed {:.1}, exact capture \
             probability {:.4}",
            s.mean_reward_share,
            s.mean_decayed_to_raw_ratio,
            s.mean_points_raw,
            s.mean_points_decayed,
            s.exact_capture_probability
        ),
    )
}

/// Draws a population whose ages grow affinely with points: consistent with
/// the monotone-decay assumption, non-uniform, every age past the grace
/// window, and order-preserving under decay (the regime the simulator
/// itself produces, where points accrue roughly linearly with service
/// time).
fn sample_age_monotone_population(
    rng: &mut impl Rng,
    t_w: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = rng.gen_range(2..=60);
    let mut points: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5f64..100.0)).collect();
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let offset = rng.gen_range(0.0..50.0);
    let slope = rng.gen_range(0.1..5.0);
    let ages: Vec<f64> = points
        .iter()
        .map(|p| t_w + 1e-9 + offset + slope * p)
        .collect();
    (points, ages)
}

fn decayed_population(points: &[f64], ages: &[f64], lambda: f64, t_w: f64) -> Vec<f64> {
    points
        .iter()
        .zip(ages)
        .map(|(p, a)| if *a > t_w { p / (1.0 + lambda * a) } else { *p })
        .collect()
}

fn c7_gini_theorem(ctx: &AcceptanceContext) -> CriterionResult {
    let mut rng = rng_from_seed(derive_seed(ctx.baseline.seed, 7_001));
    let lambda = ctx.baseline.lambda;
    let t_w = ctx.baseline.time_window_hours;
    let samples = 1_000;
    let mut holds = 0usize;
    let mut strict = 0usize;
    let mut worst: Option<String> = None;
    for _ in 0..samples {
        let (points, ages) = sample_age_monotone_population(&mut rng, t_w);
        let decayed = decayed_population(&points, &ages, lambda, t_w);
        let g_raw = gini_direct(&Distribution::new(points.clone()).unwrap());
        let g_dec = gini_direct(&Distribution::new(decayed).unwrap());
        if g_dec <= g_raw + 1e-12 {
            holds += 1;
            if g_dec < g_raw - 1e-12 {
                strict += 1;
            }
        } else if worst.is_none() {
            worst = Some(format!("counterexample: {points:?} ages {ages:?}"));
        }
    }
    result(
        "C7",
        "decay reduces inequality (theorem as property)",
        holds == samples,
        format!(
            "G(decayed) <= G(raw)+1e-12 in {holds}/{samples} samples; strict in \
             {strict}/{samples}{}",
            worst.map(|w| format!("; {w}")).unwrap_or_default()
        ),
    )
}

fn c8_nakamoto_theorem(ctx: &AcceptanceContext) -> CriterionResult {
    let mut rng = rng_from_seed(derive_seed(ctx.baseline.seed, 7_002));
    let lambda = ctx.baseline.lambda;
    let t_w = ctx.baseline.time_window_hours;
    let samples = 1_000;
    let mut holds = 0usize;
    let mut strict = 0usize;
    for _ in 0..samples {
        let (points, ages) = sample_age_monotone_population(&mut rng, t_w);
        let decayed = decayed_population(&points, &ages, lambda, t_w);
        let k_raw = nakamoto(&Distribution::new(points).unwrap())
            .unwrap()
            .coefficient;
        let k_dec = nakamoto(&Distribution::new(decayed).unwrap())
            .unwrap()
            .coefficient;
        if k_dec >= k_raw {
            holds += 1;
            if k_dec > k_raw {
                strict += 1;
            }
        }
    }
    result(
        "C8",
        "decay improves decentralization (theorem as property)",
        holds == samples,
        format!(
            "K(decayed) >= K(raw) in {holds}/{samples} samples; strict in {strict}/{samples}"
        ),
    )
}

fn c9_metric_oracles(ctx: &AcceptanceContext) -> CriterionResult {
    let mut rng = rng_from_seed(derive_seed(ctx.baseline.seed, 7_003));
    let instances = 1_000;
    let mut max_pairwise_gap = 0.0f64;
    let mut max_lorenz_gap = 0.0f64;
    let mut nakamoto_mismatches = 0usize;
    for _ in 0..instances {
        let n = rng.gen_range(2..=200);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0f64..1e4)).collect();
        let d = Distribution::new(values.clone()).unwrap();
        let direct = gini_direct(&d);

        // Pairwise mean-absolute-difference oracle.
        let total: f64 = values.iter().sum();
        if total > 0.0 {
            let mut acc = 0.0;
            for a in &values {
                for b in &values {
                    acc += (a - b).abs();
                }
            }
            let oracle = acc / (2.0 * n as f64 * total);
            max_pairwise_gap = max_pairwise_gap.max((direct - oracle).abs());
            max_lorenz_gap = max_lorenz_gap
                .max((gini_from_lorenz(&lorenz(&d).unwrap()) - direct).abs());
        }

        // Brute-force prefix search for the Nakamoto coefficient.
        let m = rng.gen_range(1..=50);
        let small: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0f64..100.0)).collect();
        let total: f64 = small.iter().sum();
        if total > 0.0 {
            let d = Distribution::new(small.clone()).unwrap();
            let k = nakamoto(&d).unwrap().coefficient;
            let mut sorted = small;
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let mut brute = sorted.len();
            for candidate in 1..=sorted.len() {
                if sorted[..candidate].iter().sum::<f64>() >= total / 2.0 {
                    brute = candidate;
                    break;
                }
            }
            if k != brute {
                nakamoto_mismatches += 1;
            }
        }
    }
    let passed =
        max_pairwise_gap < 1e-9 && max_lorenz_gap < 1e-12 && nakamoto_mismatches == 0;
    result(
        "C9",
        "metric oracle agreement",
        passed,
        format!(
            "{instances} instances: max |direct - pairwise| = {max_pairwise_gap:.2e} (< 1e-9), \
             max |direct - lorenz-route| = {max_lorenz_gap:.2e} (< 1e-12), \
             nakamoto mismatches = {nakamoto_mismatches}"
        ),
    )
}

fn c10_conservation_determinism(ctx: &AcceptanceContext) -> CriterionResult {
    let fee = ctx.baseline.fee;
    let mut worst_gap = 0.0f64;
    let mut rounds_checked = 0u64;
    for run in &ctx.baseline_runs {
        for event in run.events.iter() {
            if let Event::RewardsDistributed { rewards, .. } = event {
                let total: f64 = rewards.iter().map(|(_, r)| r).sum();
                worst_gap = worst_gap.max((total - fee).abs());
                rounds_checked += 1;
            }
        }
    }
    let conservation_ok = worst_gap < 1e-9;

    let mut replicate = ctx.baseline.clone();
    replicate.seed = derive_seed(ctx.baseline.seed, 0);
    let first = run_scenario(&replicate).expect("baseline validated");
    let second = run_scenario(&replicate).expect("baseline validated");
    let csv_a = csv_string(&first.snapshots).expect("non-empty run");
    let csv_b = csv_string(&second.snapshots).expect("non-empty run");
    let deterministic = csv_a == csv_b && first.events == second.events;

    result(
        "C10",
        "reward conservation and determinism",
        conservation_ok && deterministic,
        format!(
            "{rounds_checked} consensus rounds, max |sum - fee| = {worst_gap:.2e} (< 1e-9); \
             repeated run CSV byte-identical: {deterministic}"
        ),
    )
}

fn c11_selection_uniformity(ctx: &AcceptanceContext) -> CriterionResult {
    let n = ctx.baseline.population();
    let q = pscrd_core::quorum_size(&QuorumParams {
        total_reward: ctx.baseline.quorum.total_reward,
        min_reward: ctx.baseline.quorum.min_reward,
        population_size: n,
    })
    .expect("baseline validated");
    let trials = 100_000u32;
    let pool: Vec<BridgeId> = (0..n as u32).map(BridgeId).collect();
    let mut rng = rng_from_seed(20_240_001);
    let mut counts = vec![0u32; n];
    for _ in 0..trials {
        for id in select_quorum(&pool, q, &mut rng).expect("q <= n") {
            counts[id.0 as usize] += 1;
        }
    }
    let p = q as f64 / n as f64;
    let tolerance = 3.0 * (p * (1.0 - p) / trials as f64).sqrt();
    let mut max_dev = 0.0f64;
    for c in &counts {
        max_dev = max_dev.max((*c as f64 / trials as f64 - p).abs());
    }
    result(
        "C11",
        "selection uniformity",
        max_dev < tolerance,
        format!(
            "{trials} selections of {q} from {n}: max per-bridge deviation {max_dev:.5} \
             from {p} (3 standard errors = {tolerance:.5})"
        ),
    )
}

fn c12_quorum_robustness(ctx: &AcceptanceContext) -> CriterionResult {
    let mut lines = Vec::new();
    let mut passed = true;
    for (pool, runs) in &ctx.robustness {
        let (gini, nakamoto) = ctx.mean_final(runs);
        let ok = (0.05..=0.20).contains(&gini) && (17.0..=25.0).contains(&nakamoto);
        passed &= ok;
        lines.push(format!("Q={pool}: gini={gini:.4} nakamoto={nakamoto:.2}"));
    }
    result(
        "C12",
        "quorum-parameter robustness",
        passed,
        format!("{} (bands [0.05, 0.20] and [17, 25])", lines.join("; ")),
    )
}
