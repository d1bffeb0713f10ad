//! Metropolis-Hastings sampling of the 2D Ising model with parallel
//! tempering, driven by a fixed pool of worker threads.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: spins, energy, single-flip energy deltas, magnetization
//! - [`rng`]: counter-based random streams, one per replica and swap pair
//! - [`mh`]: the Metropolis-Hastings step and the [`Replica`] state
//! - [`tempering`]: temperature ladder, alternating pairings, swap rule
//! - [`executor`]: interval/barrier scheduling across `W` workers
//! - [`analysis`]: magnetization curves, convergence detection, fits and
//!   the exact distribution of tiny lattices
//! - [`bench`]: sweeps, CSV/JSON output and the `pt-ising-bench` CLI
//!
//! Results of [`executor::run`] depend only on the configuration and seed,
//! never on the number of workers.

pub mod analysis;
pub mod bench;
pub mod error;
pub mod executor;
pub mod lattice;
pub mod mh;
pub mod rng;
pub mod tempering;

pub use error::{Error, Result};
pub use executor::{run, RecordMode, RunRecord, SimulationConfig};
pub use lattice::{IsingParams, Site, SpinLattice};
pub use mh::{acceptance_probability, Replica};
pub use rng::RngStream;
pub use tempering::{build_ladder, pairing, swap_probability, TemperatureLadder};
