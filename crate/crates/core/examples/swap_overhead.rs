//! Run time against swap interval for a fixed configuration.

use pt_ising::bench::{run_sweep, Preset, SweepKind, SweepSpec};
use pt_ising::{RecordMode, SimulationConfig};

fn main() -> pt_ising::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "results/swap_sweep".into());
    let spec = SweepSpec {
        kind: SweepKind::SwapSweep,
        base: SimulationConfig {
            replicas: 128,
            workers: 4,
            record_mode: RecordMode::None,
            ..Preset::Desk.config()
        },
        axis: SweepKind::SwapSweep.default_axis(),
        repetitions: 3,
        out_dir: out.into(),
    };
    let outcome = run_sweep(&spec)?;
    let base = outcome.summary.points[0].mean_total_s.unwrap_or(f64::NAN);
    for p in &outcome.summary.points {
        let total = p.mean_total_s.unwrap_or(f64::NAN);
        println!(
            "I = {:5}: total {:.4} s ({:+.1}% vs no swaps), swap acceptance {}",
            p.swap_interval,
            total,
            (total / base - 1.0) * 100.0,
            p.swap_accept_rate.map(|a| format!("{a:.3}")).unwrap_or_else(|| "-".into())
        );
    }
    Ok(())
}
