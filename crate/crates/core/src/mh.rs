//! Single-spin-flip Metropolis-Hastings kernel.

use crate::error::{Error, Result};
use crate::lattice::{IsingParams, Site, SpinLattice};
use crate::rng::RngStream;

/// `min(1, exp(-beta * delta_energy))`. The partition function cancels in
/// the ratio and is never needed here.
#[inline]
pub fn acceptance_probability(delta_energy: f64, beta: f64) -> f64 {
    if delta_energy <= 0.0 {
        1.0
    } else {
        (-beta * delta_energy).exp()
    }
}

/// One MCMC chain bound to a temperature slot.
///
/// `energy` is a cache of `lattice.total_energy(params)`, maintained
/// incrementally by [`Replica::step`] and carried along when states are
/// exchanged.
#[derive(Debug, Clone)]
pub struct Replica {
    index: usize,
    temperature: f64,
    beta: f64,
    lattice: SpinLattice,
    energy: f64,
    rng: RngStream,
    steps: u64,
    accepted: u64,
}

impl Replica {
    pub fn new(
        index: usize,
        temperature: f64,
        lattice: SpinLattice,
        params: &IsingParams,
        rng: RngStream,
    ) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::config(
                "temperature",
                format!("{temperature} is not a positive finite number"),
            ));
        }
        let energy = lattice.total_energy(params);
        Ok(Replica {
            index,
            temperature,
            beta: 1.0 / temperature,
            lattice,
            energy,
            rng,
            steps: 0,
            accepted: 0,
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn lattice(&self) -> &SpinLattice {
        &self.lattice
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn rng(&self) -> &RngStream {
        &self.rng
    }

    /// MH iterations executed by this replica.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn magnetization_fraction(&self) -> f64 {
        self.lattice.magnetization_fraction()
    }

    /// Draws a uniformly random site; flipping it gives the trial state.
    #[inline]
    pub fn propose(&mut self) -> Site {
        let n = self.lattice.site_count() as u64;
        let idx = self.rng.next_below(n) as usize;
        self.lattice.site_of(idx)
    }

    /// One MH iteration. Always consumes exactly two draws (site, uniform).
    #[inline]
    pub fn step(&mut self, params: &IsingParams) -> bool {
        let site = self.propose();
        let delta = self.lattice.flip_delta(site, params);
        let p = acceptance_probability(delta, self.beta);
        let u = self.rng.next_f64();
        self.steps += 1;
        if u < p {
            self.lattice.flip(site);
            self.energy += delta;
            self.accepted += 1;
            true
        } else {
            false
        }
    }

    /// Checks the cached energy against a full recomputation. Exact for
    /// integer couplings; relative tolerance 1e-12 otherwise.
    pub fn audit(&self, params: &IsingParams) -> Result<()> {
        let recomputed = self.lattice.total_energy(params);
        let scale = recomputed.abs().max(1.0);
        if (recomputed - self.energy).abs() > 1e-12 * scale {
            return Err(Error::EnergyAudit {
                replica: self.index,
                cached: self.energy,
                recomputed,
            });
        }
        Ok(())
    }

    /// Exchanges configurations and cached energies. Temperatures, streams
    /// and counters stay with their slots.
    pub fn exchange_state(&mut self, other: &mut Replica) {
        std::mem::swap(&mut self.lattice, &mut other.lattice);
        std::mem::swap(&mut self.energy, &mut other.energy);
    }
}
