//! Replica exchange: temperature ladder, alternating pairings and the
//! logistic swap rule.

use crate::error::{Error, Result};
use crate::mh::Replica;
use crate::rng::RngStream;

/// Temperatures `1 + i * 3 / |R|` for `i in 0..|R|`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureLadder {
    temperatures: Vec<f64>,
}

impl TemperatureLadder {
    pub fn new(replica_count: usize) -> Result<Self> {
        if replica_count == 0 {
            return Err(Error::config("replicas", "at least one replica is required"));
        }
        let n = replica_count as f64;
        let temperatures = (0..replica_count)
            .map(|i| 1.0 + (i as f64) * 3.0 / n)
            .collect();
        Ok(TemperatureLadder { temperatures })
    }

    pub fn temperatures(&self) -> &[f64] {
        &self.temperatures
    }

    pub fn len(&self) -> usize {
        self.temperatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.temperatures.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.temperatures[i]
    }
}

pub fn build_ladder(replica_count: usize) -> Result<TemperatureLadder> {
    TemperatureLadder::new(replica_count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// (0,1), (2,3), ...
    Even,
    /// (1,2), (3,4), ...
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapRound {
    pub parity: Parity,
    pub pairs: Vec<(usize, usize)>,
}

/// Pairs for swap round `round_index`. Even rounds start at replica 0, odd
/// rounds at 1; a trailing replica without a partner sits the round out.
pub fn pairing(round_index: u64, replica_count: usize) -> SwapRound {
    let parity = if round_index.is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    };
    let start = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let pairs = (start..replica_count.saturating_sub(1))
        .step_by(2)
        .map(|i| (i, i + 1))
        .collect();
    SwapRound { parity, pairs }
}

/// Logistic in `x = (beta_i - beta_j) * (energy_i - energy_j)`.
/// Saturates to exactly 0 or 1 for extreme arguments.
#[inline]
pub fn swap_probability(beta_i: f64, beta_j: f64, energy_i: f64, energy_j: f64) -> f64 {
    let x = (beta_i - beta_j) * (energy_i - energy_j);
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Random streams for swap decisions, one per pair keyed by the pair's
/// lower replica index. The counter position is the round index, so every
/// (round, pair) decision is a fixed draw regardless of evaluation order.
#[derive(Debug, Clone, Copy)]
pub struct SwapStreams {
    master_seed: u64,
    replica_count: usize,
}

impl SwapStreams {
    pub fn new(master_seed: u64, replica_count: usize) -> Self {
        SwapStreams {
            master_seed,
            replica_count,
        }
    }

    /// Stream id used for the pair whose lower replica is `lower`.
    pub fn stream_id(&self, lower: usize) -> u64 {
        (self.replica_count + lower) as u64
    }

    pub fn uniform(&self, round_index: u64, lower: usize) -> f64 {
        RngStream::at(self.master_seed, self.stream_id(lower), round_index).next_f64()
    }
}

/// Attempts one exchange between two adjacent replicas with pre-drawn
/// uniform `u`. Returns whether the states were exchanged.
pub fn try_swap(a: &mut Replica, b: &mut Replica, u: f64) -> bool {
    let p = swap_probability(a.beta(), b.beta(), a.energy(), b.energy());
    if u < p {
        a.exchange_state(b);
        true
    } else {
        false
    }
}

/// Runs every pair of `round` sequentially over the replica slice.
/// Returns the number of accepted exchanges.
pub fn execute_swap_round(
    replicas: &mut [Replica],
    round: &SwapRound,
    round_index: u64,
    streams: &SwapStreams,
) -> usize {
    let mut accepted = 0;
    for &(i, j) in &round.pairs {
        debug_assert_eq!(j, i + 1);
        let (lo, hi) = replicas.split_at_mut(j);
        let u = streams.uniform(round_index, i);
        if try_swap(&mut lo[i], &mut hi[0], u) {
            accepted += 1;
        }
    }
    accepted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{IsingParams, SpinLattice};

    #[test]
    fn ladder_examples() {
        assert_eq!(build_ladder(3).unwrap().temperatures(), &[1.0, 2.0, 3.0]);
        assert_eq!(build_ladder(1).unwrap().temperatures(), &[1.0]);
        assert_eq!(
            build_ladder(6).unwrap().temperatures(),
            &[1.0, 1.5, 2.0, 2.5, 3.0, 3.5]
        );
        assert!(build_ladder(0).is_err());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(0, 4).pairs, vec![(0, 1), (2, 3)]);
        assert_eq!(pairing(1, 4).pairs, vec![(1, 2)]);
        let r = pairing(7, 5);
        assert_eq!(r.parity, Parity::Odd);
        assert_eq!(r.pairs, vec![(1, 2), (3, 4)]);
        assert!(pairing(0, 1).pairs.is_empty());
        assert!(pairing(1, 2).pairs.is_empty());
        assert_eq!(pairing(2, 5).pairs, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn swap_probability_examples() {
        assert_eq!(swap_probability(1.0, 0.5, -10.0, -10.0), 0.5);
        // (1 - 0.5) * (0 - (-4)) = 2
        let p = swap_probability(1.0, 0.5, 0.0, -4.0);
        assert!((p - 0.880_797_077_977_882_4).abs() < 1e-15);
        assert_eq!(swap_probability(1.0, 0.0, 1e6, 0.0), 1.0);
        assert_eq!(swap_probability(1.0, 0.0, -1e6, 0.0), 0.0);
    }

    fn replicas(n: usize, side: usize, seed: u64) -> Vec<Replica> {
        let ladder = build_ladder(n).unwrap();
        (0..n)
            .map(|i| {
                let lat = SpinLattice::random(side, 0.5, &mut RngStream::new(seed, 500 + i as u64)).unwrap();
                Replica::new(i, ladder.get(i), lat, &IsingParams::default(), RngStream::new(seed, i as u64))
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn empty_round_changes_nothing() {
        let mut reps = replicas(1, 4, 1);
        let before = reps[0].lattice().clone();
        let streams = SwapStreams::new(1, 1);
        assert_eq!(execute_swap_round(&mut reps, &pairing(0, 1), 0, &streams), 0);
        assert_eq!(reps[0].lattice(), &before);
    }

    #[test]
    fn identical_lattices_swap_is_invisible() {
        let p = IsingParams::default();
        let lat = SpinLattice::all_up(4).unwrap();
        let mut a = Replica::new(0, 1.0, lat.clone(), &p, RngStream::new(0, 0)).unwrap();
        let mut b = Replica::new(1, 2.0, lat.clone(), &p, RngStream::new(0, 1)).unwrap();
        assert_eq!(swap_probability(a.beta(), b.beta(), a.energy(), b.energy()), 0.5);
        assert!(try_swap(&mut a, &mut b, 0.25));
        assert_eq!(a.lattice(), &lat);
        assert_eq!(b.lattice(), &lat);
        assert!(!try_swap(&mut a, &mut b, 0.75));
    }

    #[test]
    fn slots_keep_temperatures_and_energies_follow_states() {
        let p = IsingParams::default();
        let mut reps = replicas(6, 5, 3);
        let streams = SwapStreams::new(3, 6);
        for round in 0..50u64 {
            for r in reps.iter_mut() {
                for _ in 0..200 {
                    r.step(&p);
                }
            }
            execute_swap_round(&mut reps, &pairing(round, 6), round, &streams);
            for (i, r) in reps.iter().enumerate() {
                assert_eq!(r.temperature(), 1.0 + i as f64 * 0.5);
                r.audit(&p).unwrap();
            }
        }
    }

    #[test]
    fn swap_draws_are_keyed_by_round_and_pair() {
        let s = SwapStreams::new(42, 8);
        assert_eq!(s.uniform(3, 2), s.uniform(3, 2));
        assert_ne!(s.uniform(3, 2), s.uniform(4, 2));
        assert_ne!(s.uniform(3, 2), s.uniform(3, 4));
        // swap streams never alias replica streams 0..8
        assert_eq!(s.stream_id(0), 8);
    }
}
