//! Post-run statistics: equilibrium magnetization, convergence detection,
//! power-law fits and the exact small-lattice Boltzmann distribution.

use crate::error::{Error, Result};
use crate::executor::RunRecord;
use crate::lattice::{IsingParams, SpinLattice};
use crate::mh::Replica;
use crate::rng::{stable_hash, RngStream};

/// Mean `|m|` per temperature slot after discarding the first
/// `burn_in_fraction` of each series.
pub fn equilibrium_magnetization(record: &RunRecord, burn_in_fraction: f64) -> Result<Vec<f64>> {
    record
        .series
        .iter()
        .map(|s| mean_abs_after_burn_in(&s.magnetization, burn_in_fraction))
        .collect()
}

pub fn mean_abs_after_burn_in(series: &[f64], burn_in_fraction: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&burn_in_fraction) {
        return Err(Error::Analysis(format!(
            "burn-in fraction {burn_in_fraction} is outside [0, 1)"
        )));
    }
    let skip = (series.len() as f64 * burn_in_fraction).floor() as usize;
    let tail = &series[skip.min(series.len())..];
    if tail.is_empty() {
        return Err(Error::Analysis("no samples after burn-in".into()));
    }
    Ok(tail.iter().map(|m| m.abs()).sum::<f64>() / tail.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceCriterion {
    pub window: usize,
    pub tolerance: f64,
}

impl Default for ConvergenceCriterion {
    fn default() -> Self {
        ConvergenceCriterion {
            window: 1000,
            tolerance: 0.02,
        }
    }
}

/// First iteration `t` from which the mean `|m|` over `[t, t+w)` and over
/// `[t+w, t+2w)` stay within `tolerance` of each other for every later
/// start. `Ok(None)` means the series never settles.
pub fn convergence_iteration(series: &[f64], criterion: &ConvergenceCriterion) -> Result<Option<usize>> {
    let w = criterion.window;
    if w == 0 || criterion.tolerance.is_nan() || criterion.tolerance <= 0.0 {
        return Err(Error::Analysis(
            "convergence window must be >= 1 and tolerance > 0".into(),
        ));
    }
    if series.len() < 2 * w {
        return Err(Error::Analysis(format!(
            "series of length {} is shorter than two windows of {w}",
            series.len()
        )));
    }
    let mut prefix = Vec::with_capacity(series.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for m in series {
        acc += m.abs();
        prefix.push(acc);
    }
    let window_mean = |t: usize| (prefix[t + w] - prefix[t]) / w as f64;
    let last = series.len() - 2 * w;
    let mut earliest = None;
    for t in (0..=last).rev() {
        if (window_mean(t) - window_mean(t + w)).abs() < criterion.tolerance {
            earliest = Some(t);
        } else {
            break;
        }
    }
    Ok(earliest)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

impl ScalingFit {
    pub fn predict(&self, size: f64) -> f64 {
        self.prefactor * size.powf(self.exponent)
    }
}

/// Least-squares line through `(ln L, ln iterations)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::Analysis(format!(
            "a power-law fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(l, n)) = points.iter().find(|&&(l, n)| !(l > 0.0 && n > 0.0)) {
        return Err(Error::Analysis(format!(
            "power-law points must be positive, got ({l}, {n})"
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Analysis("all sizes are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    };
    Ok(ScalingFit {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared,
    })
}

/// Largest side for which the full configuration space is enumerated.
pub const MAX_EXACT_SIDE: usize = 4;

/// Configuration index: bit `k` is set when row-major site `k` is up.
pub fn configuration_index(lattice: &SpinLattice) -> usize {
    lattice
        .spins()
        .iter()
        .enumerate()
        .filter(|(_, &s)| s == 1)
        .fold(0, |acc, (k, _)| acc | (1 << k))
}

pub fn lattice_from_index(side: usize, index: usize) -> Result<SpinLattice> {
    let spins = (0..side * side)
        .map(|k| if index >> k & 1 == 1 { 1 } else { -1 })
        .collect();
    SpinLattice::from_spins(side, spins)
}

/// Boltzmann probability of every configuration, indexed by
/// [`configuration_index`], with the partition function from full
/// enumeration.
pub fn exact_boltzmann_distribution(side: usize, temperature: f64, params: &IsingParams) -> Result<Vec<f64>> {
    if side > MAX_EXACT_SIDE {
        return Err(Error::Analysis(format!(
            "exact enumeration is limited to side {MAX_EXACT_SIDE}, got {side}"
        )));
    }
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::Analysis(format!("temperature {temperature} must be positive")));
    }
    let count = 1usize << (side * side);
    let energies = (0..count)
        .map(|i| Ok(lattice_from_index(side, i)?.total_energy(params)))
        .collect::<Result<Vec<f64>>>()?;
    // shift by the ground-state energy so the largest weight is 1
    let ground = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies
        .iter()
        .map(|e| (-(e - ground) / temperature).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / z).collect())
}

/// Half the L1 distance between two distributions on the same support.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions must share a support");
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Normalised histogram of visited configurations.
pub fn empirical_distribution(indices: impl IntoIterator<Item = usize>, support: usize) -> Vec<f64> {
    let mut counts = vec![0u64; support];
    let mut n = 0u64;
    for i in indices {
        counts[i] += 1;
        n += 1;
    }
    counts.into_iter().map(|c| c as f64 / n as f64).collect()
}

/// Convergence-time measurement at a single temperature across lattice
/// sizes. Each size runs `seeds` independent single-replica chains from a
/// biased random start, averages their `|m|` series, and reports the first
/// iteration at which the averaged series settles. Window and series length
/// are measured in sweeps (multiples of `L * L` steps).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub sizes: Vec<usize>,
    pub seeds: usize,
    pub temperature: f64,
    pub params: IsingParams,
    pub init_up_fraction: f64,
    pub window_sweeps: f64,
    pub tolerance: f64,
    pub series_sweeps: f64,
    pub master_seed: u64,
}

impl Default for ConvergenceStudy {
    fn default() -> Self {
        ConvergenceStudy {
            sizes: vec![8, 12, 16, 24, 32],
            seeds: 5,
            temperature: 1.5,
            params: IsingParams::default(),
            init_up_fraction: 0.8,
            window_sweeps: 4.0,
            tolerance: 0.05,
            series_sweeps: 30.0,
            master_seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergencePoint {
    pub side: usize,
    /// `None` when the averaged series never settles.
    pub iteration: Option<usize>,
}

const STUDY_LAYOUT_STREAM: u64 = 0;
const STUDY_MH_STREAM: u64 = 1;

impl ConvergenceStudy {
    fn sweeps(&self, side: usize, sweeps: f64) -> usize {
        ((sweeps * (side * side) as f64).round() as usize).max(1)
    }

    /// `|m|` after every step, averaged over the seeds.
    pub fn averaged_series(&self, side: usize) -> Result<Vec<f64>> {
        if self.seeds == 0 {
            return Err(Error::Analysis("convergence study needs at least one seed".into()));
        }
        let len = self.sweeps(side, self.series_sweeps);
        let mut avg = vec![0.0; len];
        let scale = 1.0 / self.seeds as f64;
        for s in 0..self.seeds {
            let seed = stable_hash(&[self.master_seed, side as u64, s as u64]);
            let mut layout_rng = RngStream::new(seed, STUDY_LAYOUT_STREAM);
            let lattice = SpinLattice::random(side, self.init_up_fraction, &mut layout_rng)?;
            let mut replica = Replica::new(0, self.temperature, lattice, &self.params, RngStream::new(seed, STUDY_MH_STREAM))?;
            for a in avg.iter_mut() {
                replica.step(&self.params);
                *a += replica.magnetization_fraction().abs() * scale;
            }
        }
        Ok(avg)
    }

    pub fn run(&self) -> Result<Vec<ConvergencePoint>> {
        self.sizes
            .iter()
            .map(|&side| {
                let series = self.averaged_series(side)?;
                let criterion = ConvergenceCriterion {
                    window: self.sweeps(side, self.window_sweeps),
                    tolerance: self.tolerance,
                };
                Ok(ConvergencePoint {
                    side,
                    iteration: convergence_iteration(&series, &criterion)?,
                })
            })
            .collect()
    }
}

/// Power-law fit over the converged points with a positive iteration count.
pub fn fit_convergence_points(points: &[ConvergencePoint]) -> Result<ScalingFit> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| p.iteration.filter(|&t| t > 0).map(|t| (p.side as f64, t as f64)))
        .collect();
    fit_power_law(&xy)
}

/// Mean and sample standard deviation (n - 1; zero for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
