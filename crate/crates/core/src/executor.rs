//! Multithreaded driver for a parallel-tempering run.
//!
//! Replicas are split into contiguous blocks, one per worker. Each worker
//! advances its block to the next swap boundary, all workers meet at a
//! barrier, the swap pairs of the round are split across workers, and a
//! second barrier releases the next interval. Every random draw comes from a
//! stream keyed by replica or by (round, pair), so the result is identical
//! for any worker count.

use std::ops::Range;
use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Barrier, Mutex, MutexGuard};
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IsingParams, SpinLattice};
use crate::mh::Replica;
use crate::rng::{stable_hash, RngStream};
use crate::tempering::{build_ladder, pairing, try_swap, SwapStreams};

/// Seed domain for the initial lattice layouts, kept apart from the MH and
/// swap streams so that MH stream positions equal twice the step count.
const INIT_DOMAIN: u64 = 0x1a1f_1a1f;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordMode {
    /// Timings and swap statistics only.
    None,
    /// Energy and magnetization after every iteration.
    Observables,
    /// Observables plus a copy of the lattice after every iteration.
    FullStates,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub side: usize,
    pub replicas: usize,
    pub iterations: u64,
    /// MH iterations between swap rounds; 0 disables swaps.
    pub swap_interval: u64,
    pub workers: usize,
    pub master_seed: u64,
    pub params: IsingParams,
    pub init_up_fraction: f64,
    pub record_mode: RecordMode,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            side: 32,
            replicas: 16,
            iterations: 50_000,
            swap_interval: 100,
            workers: 4,
            master_seed: 42,
            params: IsingParams::default(),
            init_up_fraction: 0.5,
            record_mode: RecordMode::Observables,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.side < SpinLattice::MIN_SIDE {
            return Err(Error::config(
                "size",
                format!("must be at least {}, got {}", SpinLattice::MIN_SIDE, self.side),
            ));
        }
        if self.replicas == 0 {
            return Err(Error::config("replicas", "must be at least 1"));
        }
        if self.iterations == 0 {
            return Err(Error::config("iters", "must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::config("workers", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.init_up_fraction) {
            return Err(Error::config(
                "init-up",
                format!("{} is outside [0, 1]", self.init_up_fraction),
            ));
        }
        self.params.validate()
    }

    /// Iteration counts at which swap rounds happen: positive multiples of
    /// the interval strictly below the total.
    pub fn swap_boundaries(&self) -> impl Iterator<Item = u64> {
        let interval = self.swap_interval;
        let total = self.iterations;
        (1..)
            .map(move |k| k * interval)
            .take_while(move |&b| interval > 0 && b < total)
    }

    pub fn swap_round_count(&self) -> u64 {
        self.iterations
            .saturating_sub(1)
            .checked_div(self.swap_interval)
            .unwrap_or(0)
    }
}

/// Contiguous blocks whose sizes differ by at most one; earlier workers get
/// the larger blocks. Workers beyond the replica count get empty ranges.
pub fn assign_replicas(replica_count: usize, workers: usize) -> Vec<Range<usize>> {
    assert!(workers >= 1, "at least one worker is required");
    let base = replica_count / workers;
    let extra = replica_count % workers;
    let mut start = 0;
    (0..workers)
        .map(|w| {
            let len = base + usize::from(w < extra);
            let range = start..start + len;
            start += len;
            range
        })
        .collect()
}

/// Per-iteration record of one temperature slot.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicaSeries {
    pub replica: usize,
    pub temperature: f64,
    /// `energy[t]` is the energy after iteration `t`.
    pub energy: Vec<f64>,
    pub magnetization: Vec<f64>,
    /// Row-major spins after each iteration, in full-state mode only.
    pub states: Vec<Vec<i8>>,
    pub mh_accepted: u64,
    pub final_lattice: SpinLattice,
    pub final_energy: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapStats {
    pub rounds: u64,
    pub attempted: u64,
    pub accepted: u64,
}

impl SwapStats {
    pub fn accept_rate(&self) -> Option<f64> {
        (self.attempted > 0).then(|| self.accepted as f64 / self.attempted as f64)
    }

    fn merge(&mut self, other: SwapStats) {
        self.attempted += other.attempted;
        self.accepted += other.accepted;
    }
}

/// Wall-clock seconds per phase, from a monotonic clock.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub init_s: f64,
    pub exec_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub config: SimulationConfig,
    pub temperatures: Vec<f64>,
    pub series: Vec<ReplicaSeries>,
    pub swaps: SwapStats,
    pub timings: PhaseTimings,
}

struct Slot {
    replica: Replica,
    energy: Vec<f64>,
    magnetization: Vec<f64>,
    states: Vec<Vec<i8>>,
}

impl Slot {
    fn advance_to(&mut self, target: u64, params: &IsingParams, mode: RecordMode) {
        let r = &mut self.replica;
        match mode {
            RecordMode::None => {
                while r.steps() < target {
                    r.step(params);
                }
            }
            RecordMode::Observables => {
                while r.steps() < target {
                    r.step(params);
                    self.energy.push(r.energy());
                    self.magnetization.push(r.magnetization_fraction());
                }
            }
            RecordMode::FullStates => {
                while r.steps() < target {
                    r.step(params);
                    self.energy.push(r.energy());
                    self.magnetization.push(r.magnetization_fraction());
                    self.states.push(r.lattice().spins().to_vec());
                }
            }
        }
    }

    fn into_series(self) -> ReplicaSeries {
        ReplicaSeries {
            replica: self.replica.index(),
            temperature: self.replica.temperature(),
            energy: self.energy,
            magnetization: self.magnetization,
            states: self.states,
            mh_accepted: self.replica.accepted(),
            final_energy: self.replica.energy(),
            final_lattice: self.replica.lattice().clone(),
        }
    }
}

fn init_slot(index: usize, temperature: f64, config: &SimulationConfig) -> Result<Slot> {
    let mut layout_rng = RngStream::new(stable_hash(&[config.master_seed, INIT_DOMAIN]), index as u64);
    let lattice = SpinLattice::random(config.side, config.init_up_fraction, &mut layout_rng)?;
    let replica = Replica::new(
        index,
        temperature,
        lattice,
        &config.params,
        RngStream::new(config.master_seed, index as u64),
    )?;
    let capacity = match config.record_mode {
        RecordMode::None => 0,
        _ => config.iterations as usize,
    };
    let mut slot = Slot {
        replica,
        energy: Vec::with_capacity(capacity),
        magnetization: Vec::with_capacity(capacity),
        states: Vec::new(),
    };
    // iteration 0 belongs to the initialization phase
    slot.advance_to(1, &config.params, config.record_mode);
    Ok(slot)
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "worker panicked".to_string())
}

fn lock(slot: &Mutex<Slot>) -> MutexGuard<'_, Slot> {
    slot.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

struct Shared<'a> {
    config: &'a SimulationConfig,
    slots: &'a [Mutex<Slot>],
    blocks: &'a [Range<usize>],
    barrier: Barrier,
    streams: SwapStreams,
    failure: Mutex<Option<(usize, String)>>,
    failed: AtomicBool,
    barrier_violations: AtomicU64,
}

impl Shared<'_> {
    fn fail(&self, worker: usize, message: String) {
        let mut slot = self.failure.lock().unwrap_or_else(|p| p.into_inner());
        slot.get_or_insert((worker, message));
        self.failed.store(true, Ordering::SeqCst);
    }

    fn guarded(&self, worker: usize, f: impl FnOnce()) {
        if self.failed.load(Ordering::SeqCst) {
            return;
        }
        if let Err(payload) = panic::catch_unwind(AssertUnwindSafe(f)) {
            self.fail(worker, panic_message(payload));
        }
    }

    fn advance_block(&self, worker: usize, target: u64) {
        self.guarded(worker, || {
            for idx in self.blocks[worker].clone() {
                lock(&self.slots[idx]).advance_to(target, &self.config.params, self.config.record_mode);
            }
        });
    }

    /// Worker loop. Every worker passes the same number of barriers, also
    /// after a failure, so no thread is left waiting.
    fn work(&self, worker: usize) -> SwapStats {
        let mut stats = SwapStats::default();
        let workers = self.blocks.len();
        for (round, boundary) in self.config.swap_boundaries().enumerate() {
            let round = round as u64;
            self.advance_block(worker, boundary);
            self.barrier.wait();

            self.guarded(worker, || {
                let swap_round = pairing(round, self.config.replicas);
                let mine = assign_replicas(swap_round.pairs.len(), workers)[worker].clone();
                for &(i, j) in &swap_round.pairs[mine] {
                    let mut a = lock(&self.slots[i]);
                    let mut b = lock(&self.slots[j]);
                    if a.replica.steps() != boundary || b.replica.steps() != boundary {
                        self.barrier_violations.fetch_add(1, Ordering::SeqCst);
                    }
                    let u = self.streams.uniform(round, i);
                    stats.attempted += 1;
                    if try_swap(&mut a.replica, &mut b.replica, u) {
                        stats.accepted += 1;
                    }
                }
            });
            self.barrier.wait();
        }
        self.advance_block(worker, self.config.iterations);
        stats
    }
}

/// Runs a full simulation: initialization (ladder, lattices, iteration 0)
/// followed by the interval/swap execution phase.
pub fn run(config: &SimulationConfig) -> Result<RunRecord> {
    config.validate()?;
    let start = Instant::now();

    let ladder = build_ladder(config.replicas)?;
    let workers = config.workers.min(config.replicas);
    let blocks = assign_replicas(config.replicas, workers);

    let slots: Vec<Slot> = thread::scope(|scope| -> Result<Vec<Slot>> {
        let init_block = |range: Range<usize>| -> Result<Vec<Slot>> {
            range.map(|i| init_slot(i, ladder.get(i), config)).collect()
        };
        let handles: Vec<_> = blocks[1..]
            .iter()
            .map(|range| {
                let range = range.clone();
                scope.spawn(move || init_block(range))
            })
            .collect();
        let mut slots = init_block(blocks[0].clone())?;
        for (w, handle) in handles.into_iter().enumerate() {
            let block = handle.join().map_err(|p| Error::WorkerFailed {
                worker: w + 1,
                message: panic_message(p),
            })??;
            slots.extend(block);
        }
        Ok(slots)
    })?;
    let slots: Vec<Mutex<Slot>> = slots.into_iter().map(Mutex::new).collect();
    let init_done = Instant::now();

    let shared = Shared {
        config,
        slots: &slots,
        blocks: &blocks,
        barrier: Barrier::new(workers),
        streams: SwapStreams::new(config.master_seed, config.replicas),
        failure: Mutex::new(None),
        failed: AtomicBool::new(false),
        barrier_violations: AtomicU64::new(0),
    };
    let mut swaps = SwapStats {
        rounds: config.swap_round_count(),
        ..SwapStats::default()
    };
    thread::scope(|scope| {
        let shared = &shared;
        let handles: Vec<_> = (1..workers)
            .map(|w| scope.spawn(move || shared.work(w)))
            .collect();
        swaps.merge(shared.work(0));
        for h in handles {
            // worker bodies catch their own panics
            swaps.merge(h.join().expect("worker thread panicked outside guarded section"));
        }
    });
    let end = Instant::now();

    if let Some((worker, message)) = shared.failure.into_inner().unwrap_or_else(|p| p.into_inner()) {
        return Err(Error::WorkerFailed { worker, message });
    }
    let violations = shared.barrier_violations.load(Ordering::SeqCst);
    if violations > 0 {
        return Err(Error::WorkerFailed {
            worker: 0,
            message: format!("{violations} replicas entered a swap round at the wrong iteration"),
        });
    }

    let series = slots
        .into_iter()
        .map(|m| m.into_inner().unwrap_or_else(|p| p.into_inner()).into_series())
        .collect();

    Ok(RunRecord {
        config: config.clone(),
        temperatures: ladder.temperatures().to_vec(),
        series,
        swaps,
        timings: PhaseTimings {
            init_s: (init_done - start).as_secs_f64(),
            exec_s: (end - init_done).as_secs_f64(),
            total_s: (end - start).as_secs_f64(),
        },
    })
}
