//! The same seed gives identical chains for any worker count.

use pt_ising::{run, RecordMode, SimulationConfig};

fn main() -> pt_ising::Result<()> {
    let base = SimulationConfig {
        side: 16,
        replicas: 12,
        iterations: 20_000,
        swap_interval: 100,
        record_mode: RecordMode::Observables,
        ..SimulationConfig::default()
    };
    let reference = run(&SimulationConfig { workers: 1, ..base.clone() })?;
    for workers in [2, 4, 8] {
        let other = run(&SimulationConfig { workers, ..base.clone() })?;
        let same = reference
            .series
            .iter()
            .zip(&other.series)
            .all(|(a, b)| a.energy == b.energy && a.magnetization == b.magnetization);
        println!("W = {workers}: identical to W = 1: {same}, accepted swaps {}", other.swaps.accepted);
    }
    Ok(())
}
