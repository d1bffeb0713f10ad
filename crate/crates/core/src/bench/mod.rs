//! Benchmark harness behind the `pt-ising-bench` binary.

pub mod config;
pub mod report;
pub mod sweep;

use clap::Parser;

pub use config::{parse_config, CliArgs, Preset, RecordFlag, SweepKind, SweepSpec};
pub use report::{emit_speedup_table, mean_total, SpeedupRow, Summary, TimingRow};
pub use sweep::{run_sweep, SweepOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARTIAL_FAILURE: i32 = 2;

/// Entry point of the CLI; returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match CliArgs::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let spec = match parse_config(&args) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match run_sweep(&spec) {
        Ok(outcome) => {
            for p in &outcome.summary.points {
                println!(
                    "point {} (W={}, |R|={}, L={}, I={}): total {:.4} s{}",
                    p.sweep_point,
                    p.workers,
                    p.replicas,
                    p.side,
                    p.swap_interval,
                    p.mean_total_s.unwrap_or(f64::NAN),
                    p.speedup.map(|s| format!(", speed-up {s:.2}x")).unwrap_or_default()
                );
            }
            println!("wrote {}", spec.out_dir.display());
            if outcome.failed_rows > 0 {
                eprintln!("{} of {} runs failed", outcome.failed_rows, outcome.rows.len());
                EXIT_PARTIAL_FAILURE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_PARTIAL_FAILURE
        }
    }
}
