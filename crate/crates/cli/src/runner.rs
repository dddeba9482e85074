//! Orchestration of CLI experiments: runs scenarios and lays their outputs
//! out on disk as `out/<config-hash>/<seed>/` directories, with sweep and
//! attack summaries at the output root.

use std::path::{Path, PathBuf};

use pscrd_core::{
    derive_seed, run_attack, run_scenario, run_sensitivity, AttackSummary,
    MetricsSnapshot, RunResult, ScenarioConfig,
};
use thiserror::Error;

use crate::chart::{emit_chart, ChartKind, Series};
use crate::manifest::{config_hash, unix_now, RunManifest};
use crate::report::{emit_csv, emit_events, ReportError};

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error(transparent)]
    Sim(#[from] pscrd_core::SimError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Paths produced by one scenario run.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub manifest: PathBuf,
    pub snapshots_csv: PathBuf,
    pub events_log: PathBuf,
    pub gini_chart: PathBuf,
    pub nakamoto_chart: PathBuf,
}

fn create_dir(path: &Path) -> Result<(), RunnerError> {
    std::fs::create_dir_all(path).map_err(|source| RunnerError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), RunnerError> {
    std::fs::write(path, text).map_err(|source| RunnerError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Hours at which later cohorts enter; dashed markers on charts.
fn join_markers(cfg: &ScenarioConfig) -> Vec<u64> {
    cfg.groups
        .iter()
        .map(|g| g.join_hour)
        .filter(|h| *h > 0)
        .collect()
}

fn metric_series(label: &str, snapshots: &[MetricsSnapshot], kind: ChartKind) -> Series {
    Series {
        label: label.to_string(),
        points: snapshots
            .iter()
            .map(|s| {
                let y = match kind {
                    ChartKind::Gini => s.gini_decayed,
                    ChartKind::Nakamoto => s.nakamoto_decayed as f64,
                };
                (s.hour as f64, y)
            })
            .collect(),
    }
}

/// Runs one scenario and writes manifest, CSV, event log, and both charts
/// under `out/<config-hash>/<seed>/`.
pub fn execute_run(cfg: &ScenarioConfig, out: &Path) -> Result<RunArtifacts, RunnerError> {
    let started = unix_now();
    let result = run_scenario(cfg)?;
    let artifacts = write_run_outputs(cfg, &result, out, started)?;
    Ok(artifacts)
}

fn write_run_outputs(
    cfg: &ScenarioConfig,
    result: &RunResult,
    out: &Path,
    started: u64,
) -> Result<RunArtifacts, RunnerError> {
    let dir = out.join(config_hash(cfg)).join(cfg.seed.to_string());
    create_dir(&dir)?;
    let artifacts = RunArtifacts {
        manifest: dir.join("manifest.json"),
        snapshots_csv: dir.join("snapshots.csv"),
        events_log: dir.join("events.log"),
        gini_chart: dir.join("gini.svg"),
        nakamoto_chart: dir.join("nakamoto.svg"),
        dir,
    };
    emit_csv(&result.snapshots, &artifacts.snapshots_csv)?;
    emit_events(&result.events, &artifacts.events_log)?;
    let markers = join_markers(cfg);
    emit_chart(
        &[metric_series("gini (decayed)", &result.snapshots, ChartKind::Gini)],
        ChartKind::Gini,
        &markers,
        &artifacts.gini_chart,
    )?;
    emit_chart(
        &[metric_series(
            "nakamoto (decayed)",
            &result.snapshots,
            ChartKind::Nakamoto,
        )],
        ChartKind::Nakamoto,
        &markers,
        &artifacts.nakamoto_chart,
    )?;
    RunManifest::new(cfg, started, unix_now()).write(&artifacts.manifest)?;
    Ok(artifacts)
}

/// Averages one metric across runs, hour by hour.
pub fn mean_series(runs: &[&[MetricsSnapshot]], kind: ChartKind) -> Vec<(f64, f64)> {
    if runs.is_empty() {
        return Vec::new();
    }
    let hours = runs[0].len();
    let mut points = Vec::with_capacity(hours);
    for h in 0..hours {
        let sum: f64 = runs
            .iter()
            .map(|r| match kind {
                ChartKind::Gini => r[h].gini_decayed,
                ChartKind::Nakamoto => r[h].nakamoto_decayed as f64,
            })
            .sum();
        points.push((runs[0][h].hour as f64, sum / runs.len() as f64));
    }
    points
}

/// Runs the sensitivity sweep, writing per-run directories, per-cell
/// seed-averaged charts, two overlay charts, and a grid index CSV.
pub fn execute_sweep(
    base: &ScenarioConfig,
    lambdas: &[f64],
    windows: &[f64],
    num_seeds: usize,
    out: &Path,
) -> Result<PathBuf, RunnerError> {
    let seeds: Vec<u64> = (0..num_seeds as u64)
        .map(|i| derive_seed(base.seed, i))
        .collect();
    let cells = run_sensitivity(base, lambdas, windows, &seeds)?;
    create_dir(out)?;

    let mut index = String::from(
        "lambda,time_window_hours,seed,config_hash,final_gini_decayed,final_nakamoto_decayed\n",
    );
    let mut overlay_gini = Vec::new();
    let mut overlay_nakamoto = Vec::new();

    for (li, &lambda) in lambdas.iter().enumerate() {
        for (wi, &window) in windows.iter().enumerate() {
            let cell_runs: Vec<&pscrd_core::SweepCell> = cells
                .iter()
                .filter(|c| c.lambda == lambda && c.time_window_hours == window)
                .collect();
            let mut cfg_for_hash = base.clone();
            cfg_for_hash.lambda = lambda;
            cfg_for_hash.time_window_hours = window;
            let hash = config_hash(&cfg_for_hash);

            let snapshot_refs: Vec<&[MetricsSnapshot]> = cell_runs
                .iter()
                .map(|c| c.result.snapshots.as_slice())
                .collect();
            let label = format!("lambda={lambda} window={window}");
            for cell in &cell_runs {
                let mut run_cfg = cfg_for_hash.clone();
                run_cfg.seed = derive_seed(cell.seed, (li * windows.len() + wi) as u64);
                let started = unix_now();
                write_run_outputs(&run_cfg, &cell.result, out, started)?;
                let last = cell.result.snapshots.last().expect("non-empty run");
                index.push_str(&format!(
                    "{lambda},{window},{},{hash},{:.6},{}\n",
                    cell.seed, last.gini_decayed, last.nakamoto_decayed
                ));
            }

            let gini_mean = Series {
                label: label.clone(),
                points: mean_series(&snapshot_refs, ChartKind::Gini),
            };
            let nakamoto_mean = Series {
                label,
                points: mean_series(&snapshot_refs, ChartKind::Nakamoto),
            };
            let markers = join_markers(base);
            emit_chart(
                std::slice::from_ref(&gini_mean),
                ChartKind::Gini,
                &markers,
                &out.join(format!("cell_l{lambda}_w{window}_gini.svg")),
            )?;
            emit_chart(
                std::slice::from_ref(&nakamoto_mean),
                ChartKind::Nakamoto,
                &markers,
                &out.join(format!("cell_l{lambda}_w{window}_nakamoto.svg")),
            )?;
            overlay_gini.push(gini_mean);
            overlay_nakamoto.push(nakamoto_mean);
        }
    }

    emit_chart(
        &overlay_gini,
        ChartKind::Gini,
        &join_markers(base),
        &out.join("sweep_overlay_gini.svg"),
    )?;
    emit_chart(
        &overlay_nakamoto,
        ChartKind::Nakamoto,
        &join_markers(base),
        &out.join("sweep_overlay_nakamoto.svg"),
    )?;

    let index_path = out.join("sweep_index.csv");
    write_text(&index_path, &index)?;
    Ok(index_path)
}

/// Runs the attack experiment, writing a per-replicate CSV and the
/// seed-averaged summary table.
pub fn execute_attack(
    base: &ScenarioConfig,
    attacker_counts: &[usize],
    num_seeds: usize,
    out: &Path,
) -> Result<(PathBuf, Vec<AttackSummary>), RunnerError> {
    let summaries = run_attack(base, attacker_counts, num_seeds)?;
    create_dir(out)?;

    let mut runs_csv = String::from(
        "attackers,seed,attacker_points_raw,attacker_points_decayed,\
         attacker_reward_share,attacker_share_of_distributed,capture_frequency\n",
    );
    let mut summary_csv = String::from(
        "attackers,seeds,mean_attacker_points_raw,mean_attacker_points_decayed,\
         mean_decayed_to_raw_ratio,mean_reward_share,mean_share_of_distributed,\
         mean_capture_frequency,exact_capture_probability\n",
    );
    for summary in &summaries {
        for run in &summary.runs {
            runs_csv.push_str(&format!(
                "{},{},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                summary.attackers,
                run.seed,
                run.attacker_points_raw,
                run.attacker_points_decayed,
                run.attacker_reward_share,
                run.attacker_share_of_distributed,
                run.capture_frequency,
            ));
        }
        summary_csv.push_str(&format!(
            "{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            summary.attackers,
            summary.runs.len(),
            summary.mean_points_raw,
            summary.mean_points_decayed,
            summary.mean_decayed_to_raw_ratio,
            summary.mean_reward_share,
            summary.mean_share_of_distributed,
            summary.mean_capture_frequency,
            summary.exact_capture_probability,
        ));
    }
    write_text(&out.join("attack_runs.csv"), &runs_csv)?;
    let summary_path = out.join("attack_summary.csv");
    write_text(&summary_path, &summary_csv)?;
    Ok((summary_path, summaries))
}
