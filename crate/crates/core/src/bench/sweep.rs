//! Sequential execution of sweep points.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::executor::{run, RecordMode, SimulationConfig};
use crate::rng::stable_hash;

use super::config::{SweepKind, SweepSpec};
use super::report::{self, Summary, TimingRow, STATUS_OK};

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<TimingRow>,
    pub summary: Summary,
    pub failed_rows: usize,
    pub timings_path: PathBuf,
    pub summary_path: PathBuf,
    /// Observable files in (point, rep) order; empty when recording is off.
    pub observable_paths: Vec<PathBuf>,
}

/// Seed of one (point, repetition). Worker-scaling points share seeds so
/// that every point simulates identical chains.
pub fn repetition_seed(spec: &SweepSpec, point: u32, rep: u32) -> u64 {
    let point_key = match spec.kind {
        SweepKind::Single | SweepKind::WorkerScaling => 0,
        _ => u64::from(point) + 1,
    };
    stable_hash(&[spec.base.master_seed, point_key, u64::from(rep)])
}

/// Point whose timings the speed-ups are measured against.
pub fn baseline_point(spec: &SweepSpec) -> Option<u32> {
    match spec.kind {
        SweepKind::WorkerScaling => spec
            .points()
            .iter()
            .position(|c| c.workers == 1)
            .map(|p| p as u32),
        _ => None,
    }
}

fn output_paths(spec: &SweepSpec, point: u32, rep: u32) -> (PathBuf, PathBuf) {
    let single_run = spec.points().len() == 1 && spec.repetitions == 1;
    if single_run {
        (
            spec.out_dir.join("observables.csv"),
            spec.out_dir.join("states.csv"),
        )
    } else {
        let dir = spec.out_dir.join("observables");
        (
            dir.join(format!("point{point}_rep{rep}.csv")),
            dir.join(format!("point{point}_rep{rep}_states.csv")),
        )
    }
}

fn run_point(config: &SimulationConfig, observables: &Path, states: &Path) -> Result<TimingRow> {
    let record = run(config)?;
    if config.record_mode != RecordMode::None {
        if let Some(dir) = observables.parent() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        report::write_observables(observables, &record)?;
    }
    if config.record_mode == RecordMode::FullStates {
        report::write_states(states, &record)?;
    }
    Ok(TimingRow {
        sweep_point: 0,
        rep: 0,
        workers: config.workers,
        replicas: config.replicas,
        side: config.side,
        iters: config.iterations,
        swap_interval: config.swap_interval,
        seed: config.master_seed,
        init_s: record.timings.init_s,
        exec_s: record.timings.exec_s,
        total_s: record.timings.total_s,
        swaps_attempted: record.swaps.attempted,
        swaps_accepted: record.swaps.accepted,
        status: STATUS_OK.into(),
    })
}

/// Runs every (point, repetition), cycling through the points once per
/// repetition, and writes
/// `timings.csv`, `summary.json` and, when recording, observable files.
/// A failing run becomes a row with an error status; the sweep continues.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    spec.validate()?;
    fs::create_dir_all(&spec.out_dir).map_err(|e| Error::io(&spec.out_dir, e))?;

    // Repetition-major execution; rows are reported point-major.
    let points = spec.points();
    let mut rows = Vec::new();
    let mut recorded = Vec::new();
    for rep in 0..spec.repetitions {
        for (point, base) in points.iter().enumerate() {
            let point = point as u32;
            let config = SimulationConfig {
                master_seed: repetition_seed(spec, point, rep),
                ..base.clone()
            };
            let (obs_path, states_path) = output_paths(spec, point, rep);
            let mut row = match run_point(&config, &obs_path, &states_path) {
                Ok(row) => {
                    if config.record_mode != RecordMode::None {
                        recorded.push((point, rep, obs_path));
                    }
                    row
                }
                Err(e) => TimingRow {
                    sweep_point: 0,
                    rep: 0,
                    workers: config.workers,
                    replicas: config.replicas,
                    side: config.side,
                    iters: config.iterations,
                    swap_interval: config.swap_interval,
                    seed: config.master_seed,
                    init_s: 0.0,
                    exec_s: 0.0,
                    total_s: 0.0,
                    swaps_attempted: 0,
                    swaps_accepted: 0,
                    status: format!("error: {e}"),
                },
            };
            row.sweep_point = point;
            row.rep = rep;
            rows.push(row);
        }
    }
    rows.sort_by_key(|r| (r.sweep_point, r.rep));
    recorded.sort_by_key(|&(point, rep, _)| (point, rep));
    let observable_paths = recorded.into_iter().map(|(_, _, path)| path).collect();

    let timings_path = spec.out_dir.join("timings.csv");
    report::write_timings(&timings_path, &rows)?;

    let mut summary = report::summarize(spec.kind.as_str(), spec.repetitions, &rows, baseline_point(spec));
    for p in summary.points.iter_mut() {
        p.axis_value = spec.axis_value(p.sweep_point as usize);
    }
    let summary_path = spec.out_dir.join("summary.json");
    report::write_summary(&summary_path, &summary)?;

    let failed_rows = rows.iter().filter(|r| !r.is_ok()).count();
    Ok(SweepOutcome {
        rows,
        summary,
        failed_rows,
        timings_path,
        summary_path,
        observable_paths,
    })
}
