//! Worker-scaling sweep through the benchmark harness. Writes timings.csv and
//! summary.json to the directory given as the first argument.

use pt_ising::bench::{run_sweep, Preset, SweepKind, SweepSpec};
use pt_ising::{RecordMode, SimulationConfig};

fn main() -> pt_ising::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "results/worker_scaling".into());
    let spec = SweepSpec {
        kind: SweepKind::WorkerScaling,
        base: SimulationConfig {
            replicas: 128,
            swap_interval: 0,
            record_mode: RecordMode::None,
            ..Preset::Desk.config()
        },
        axis: vec![1, 2, 4, 8],
        repetitions: 3,
        out_dir: out.into(),
    };
    let outcome = run_sweep(&spec)?;
    for p in &outcome.summary.points {
        println!(
            "W = {}: total {:.4} s (init {:.4}, exec {:.4}), speed-up {:.2}",
            p.workers,
            p.mean_total_s.unwrap_or(f64::NAN),
            p.mean_init_s.unwrap_or(f64::NAN),
            p.mean_exec_s.unwrap_or(f64::NAN),
            p.speedup.unwrap_or(f64::NAN)
        );
    }
    println!("{} and {}", outcome.timings_path.display(), outcome.summary_path.display());
    Ok(())
}
