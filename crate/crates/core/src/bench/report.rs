//! CSV and JSON result files.
//!
//! `timings.csv`:
//! `sweep_point,rep,workers,replicas,L,iters,swap_interval,seed,init_s,exec_s,total_s,swaps_attempted,swaps_accepted,status`
//!
//! `observables.csv`: `replica,temperature,iteration,energy,magnetization`
//!
//! Floats are written in shortest round-trip form, so every row parses back
//! to the exact value that was written.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::mean_std;
use crate::error::{Error, Result};
use crate::executor::RunRecord;

pub const TIMINGS_HEADER: &str = "sweep_point,rep,workers,replicas,L,iters,swap_interval,seed,init_s,exec_s,total_s,swaps_attempted,swaps_accepted,status";
pub const OBSERVABLES_HEADER: &str = "replica,temperature,iteration,energy,magnetization";
pub const STATUS_OK: &str = "ok";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub sweep_point: u32,
    pub rep: u32,
    pub workers: usize,
    pub replicas: usize,
    #[serde(rename = "L")]
    pub side: usize,
    pub iters: u64,
    pub swap_interval: u64,
    pub seed: u64,
    pub init_s: f64,
    pub exec_s: f64,
    pub total_s: f64,
    pub swaps_attempted: u64,
    pub swaps_accepted: u64,
    /// `ok`, or `error: <message>`.
    pub status: String,
}

impl TimingRow {
    pub fn is_ok(&self) -> bool {
        self.status == STATUS_OK
    }
}

pub fn write_timings(path: &Path, rows: &[TimingRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(TIMINGS_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_timings(path: &Path) -> Result<Vec<TimingRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != TIMINGS_HEADER {
        return Err(Error::Analysis(format!(
            "{}: unexpected timings header `{}`",
            path.display(),
            header.join(",")
        )));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableRow {
    pub replica: usize,
    pub temperature: f64,
    pub iteration: u64,
    pub energy: f64,
    pub magnetization: f64,
}

/// Writes every recorded iteration, grouped by replica slot.
pub fn write_observables(path: &Path, record: &RunRecord) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(BufWriter::new(file));
    w.write_record(OBSERVABLES_HEADER.split(','))?;
    for s in &record.series {
        for (t, (&energy, &magnetization)) in s.energy.iter().zip(&s.magnetization).enumerate() {
            w.serialize(ObservableRow {
                replica: s.replica,
                temperature: s.temperature,
                iteration: t as u64,
                energy,
                magnetization,
            })?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_observables(path: &Path) -> Result<Vec<ObservableRow>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Full-state dump: `replica,iteration,spins` with spins as a row-major
/// string of `+` and `-`.
pub fn write_states(path: &Path, record: &RunRecord) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(w, "replica,iteration,spins").map_err(io)?;
    for s in &record.series {
        for (t, spins) in s.states.iter().enumerate() {
            let text: String = spins.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect();
            writeln!(w, "{},{},{}", s.replica, t, text).map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedupRow {
    pub sweep_point: u32,
    pub mean_speedup: f64,
    /// Sample standard deviation of `baseline_mean / row_total` over the
    /// point's successful rows.
    pub stddev: f64,
}

/// Mean total time of a point's successful rows, in row order.
pub fn mean_total(rows: &[TimingRow], point: u32) -> Option<(f64, f64, usize)> {
    let totals: Vec<f64> = rows
        .iter()
        .filter(|r| r.sweep_point == point && r.is_ok())
        .map(|r| r.total_s)
        .collect();
    if totals.is_empty() {
        return None;
    }
    let (mean, std) = mean_std(&totals);
    Some((mean, std, totals.len()))
}

/// Speed-up of every point relative to `baseline`: baseline mean total time
/// divided by the point's mean total time.
pub fn emit_speedup_table(rows: &[TimingRow], baseline: u32) -> Result<Vec<SpeedupRow>> {
    let (base_mean, _, _) = mean_total(rows, baseline).ok_or(Error::MissingBaseline(baseline))?;
    let points: Vec<u32> = rows
        .iter()
        .map(|r| r.sweep_point)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(points
        .into_iter()
        .filter_map(|p| {
            let (mean, _, _) = mean_total(rows, p)?;
            let ratios: Vec<f64> = rows
                .iter()
                .filter(|r| r.sweep_point == p && r.is_ok())
                .map(|r| base_mean / r.total_s)
                .collect();
            Some(SpeedupRow {
                sweep_point: p,
                mean_speedup: base_mean / mean,
                stddev: mean_std(&ratios).1,
            })
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub sweep_point: u32,
    pub axis_value: Option<u64>,
    pub workers: usize,
    pub replicas: usize,
    #[serde(rename = "L")]
    pub side: usize,
    pub iters: u64,
    pub swap_interval: u64,
    pub ok_reps: usize,
    pub failed_reps: usize,
    pub mean_total_s: Option<f64>,
    pub std_total_s: Option<f64>,
    pub mean_init_s: Option<f64>,
    pub mean_exec_s: Option<f64>,
    /// Against the baseline point; present for worker-scaling sweeps.
    pub speedup: Option<f64>,
    pub swap_accept_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub kind: String,
    pub repetitions: u32,
    pub baseline_point: Option<u32>,
    pub points: Vec<PointSummary>,
}

/// Aggregates timing rows per point. `baseline` selects the point that
/// speed-ups are computed against, if any.
pub fn summarize(kind: &str, repetitions: u32, rows: &[TimingRow], baseline: Option<u32>) -> Summary {
    let mut by_point: BTreeMap<u32, Vec<&TimingRow>> = BTreeMap::new();
    for r in rows {
        by_point.entry(r.sweep_point).or_default().push(r);
    }
    let speedups: BTreeMap<u32, f64> = baseline
        .and_then(|b| emit_speedup_table(rows, b).ok())
        .unwrap_or_default()
        .into_iter()
        .map(|s| (s.sweep_point, s.mean_speedup))
        .collect();
    let points = by_point
        .into_iter()
        .map(|(point, group)| {
            let first = group[0];
            let ok: Vec<&TimingRow> = group.iter().copied().filter(|r| r.is_ok()).collect();
            let mean_of = |f: fn(&TimingRow) -> f64| {
                (!ok.is_empty()).then(|| mean_std(&ok.iter().map(|r| f(r)).collect::<Vec<_>>()).0)
            };
            let total = mean_total(rows, point);
            let attempted: u64 = ok.iter().map(|r| r.swaps_attempted).sum();
            let accepted: u64 = ok.iter().map(|r| r.swaps_accepted).sum();
            PointSummary {
                sweep_point: point,
                axis_value: None,
                workers: first.workers,
                replicas: first.replicas,
                side: first.side,
                iters: first.iters,
                swap_interval: first.swap_interval,
                ok_reps: ok.len(),
                failed_reps: group.len() - ok.len(),
                mean_total_s: total.map(|t| t.0),
                std_total_s: total.map(|t| t.1),
                mean_init_s: mean_of(|r| r.init_s),
                mean_exec_s: mean_of(|r| r.exec_s),
                speedup: speedups.get(&point).copied(),
                swap_accept_rate: (attempted > 0).then(|| accepted as f64 / attempted as f64),
            }
        })
        .collect();
    Summary {
        kind: kind.to_string(),
        repetitions,
        baseline_point: baseline,
        points,
    }
}

pub fn write_summary(path: &Path, summary: &Summary) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, summary)?;
    writeln!(w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_summary(path: &Path) -> Result<Summary> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(point: u32, rep: u32, total: f64) -> TimingRow {
        TimingRow {
            sweep_point: point,
            rep,
            workers: 1,
            replicas: 4,
            side: 8,
            iters: 100,
            swap_interval: 0,
            seed: 7,
            init_s: 0.0,
            exec_s: total,
            total_s: total,
            swaps_attempted: 0,
            swaps_accepted: 0,
            status: STATUS_OK.into(),
        }
    }

    #[test]
    fn speedup_identity_and_arithmetic() {
        let rows = vec![row(0, 0, 100.0), row(1, 0, 25.0)];
        let table = emit_speedup_table(&rows, 0).unwrap();
        assert_eq!(table[0].mean_speedup, 1.0);
        assert_eq!(table[1].mean_speedup, 4.0);
        assert!(matches!(emit_speedup_table(&rows, 5), Err(Error::MissingBaseline(5))));
    }

    #[test]
    fn failed_rows_are_ignored_and_baseline_must_succeed() {
        let mut bad = row(0, 0, 1.0);
        bad.status = "error: boom".into();
        let rows = vec![bad, row(1, 0, 2.0)];
        assert!(emit_speedup_table(&rows, 0).is_err());
        let s = summarize("worker_scaling", 1, &rows, Some(0));
        assert_eq!(s.points[0].failed_reps, 1);
        assert_eq!(s.points[0].mean_total_s, None);
        assert_eq!(s.points[1].speedup, None);
    }

    #[test]
    fn summary_uses_exactly_the_point_rows() {
        let rows = vec![row(0, 0, 1.0), row(0, 1, 2.0), row(0, 2, 3.0), row(1, 0, 10.0)];
        let s = summarize("swap_sweep", 3, &rows, None);
        assert_eq!(s.points[0].ok_reps, 3);
        assert_eq!(s.points[0].mean_total_s, Some(2.0));
        assert_eq!(s.points[0].std_total_s, Some(1.0));
        assert_eq!(s.points[0].speedup, None);
    }

    #[test]
    fn empty_timings_keep_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("timings.csv");
        write_timings(&path, &[]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.trim_end(), TIMINGS_HEADER);
        assert!(read_timings(&path).unwrap().is_empty());
    }

    fn arb_row() -> impl Strategy<Value = TimingRow> {
        (
            (any::<u32>(), any::<u32>(), 1usize..4096, 1usize..4096, 2usize..2048),
            (any::<u64>(), any::<u64>(), any::<u64>()),
            (0.0f64..1e5, 0.0f64..1e5, 0.0f64..1e5),
            (any::<u64>(), any::<u64>()),
            prop_oneof![Just(STATUS_OK.to_string()), "error: [a-z ,\"]{0,20}"],
        )
            .prop_map(|((sweep_point, rep, workers, replicas, side), (iters, swap_interval, seed), (init_s, exec_s, total_s), (swaps_attempted, swaps_accepted), status)| {
                TimingRow {
                    sweep_point,
                    rep,
                    workers,
                    replicas,
                    side,
                    iters,
                    swap_interval,
                    seed,
                    init_s,
                    exec_s,
                    total_s,
                    swaps_attempted,
                    swaps_accepted,
                    status,
                }
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn timing_rows_round_trip(rows in proptest::collection::vec(arb_row(), 1..8)) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("timings.csv");
            write_timings(&path, &rows).unwrap();
            prop_assert_eq!(read_timings(&path).unwrap(), rows);
        }
    }
}
