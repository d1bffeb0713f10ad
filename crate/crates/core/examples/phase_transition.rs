//! Equilibrium |m| across the temperature ladder for a 32x32 lattice.

use pt_ising::analysis::equilibrium_magnetization;
use pt_ising::{run, RecordMode, SimulationConfig};

fn main() -> pt_ising::Result<()> {
    let config = SimulationConfig {
        side: 32,
        replicas: 16,
        iterations: 200_000,
        swap_interval: 100,
        workers: 4,
        init_up_fraction: 1.0,
        record_mode: RecordMode::Observables,
        ..SimulationConfig::default()
    };
    let record = run(&config)?;
    let m = equilibrium_magnetization(&record, 0.5)?;
    println!(
        "{} swap rounds, acceptance {:.3}, run time {:.2} s",
        record.swaps.rounds,
        record.swaps.accept_rate().unwrap_or(0.0),
        record.timings.total_s
    );
    for (t, m) in record.temperatures.iter().zip(&m) {
        println!("T = {t:.4}  |m| = {m:.3}  {}", "#".repeat((m * 50.0).round() as usize));
    }
    Ok(())
}
