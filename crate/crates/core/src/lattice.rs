//! Square Ising lattice with periodic boundaries.
//!
//! Energy follows `E = B * sum(s_i) - J * sum_<ij>(s_i * s_j)`, with each
//! nearest-neighbour bond counted once (every site owns its right and down
//! bond, `2 L^2` bonds in total). Note the positive sign on the field term.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Coupling `J` and external field `B`, in units where `k_B = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    pub coupling: f64,
    pub field: f64,
}

impl IsingParams {
    pub const fn new(coupling: f64, field: f64) -> Self {
        IsingParams { coupling, field }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.coupling.is_finite() {
            return Err(Error::config("J", "must be finite"));
        }
        if !self.field.is_finite() {
            return Err(Error::config("B", "must be finite"));
        }
        Ok(())
    }
}

impl Default for IsingParams {
    /// Ferromagnet without external field.
    fn default() -> Self {
        IsingParams::new(1.0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Site {
    pub row: usize,
    pub col: usize,
}

impl Site {
    pub const fn new(row: usize, col: usize) -> Self {
        Site { row, col }
    }
}

/// `L x L` spins stored row-major as `i8` values in `{-1, +1}`.
///
/// The running spin sum is cached so magnetization is O(1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinLattice {
    side: usize,
    spins: Vec<i8>,
    spin_sum: i64,
}

impl SpinLattice {
    pub const MIN_SIDE: usize = 2;

    /// Lattice with every spin set to `spin`.
    pub fn uniform(side: usize, spin: i8) -> Result<Self> {
        Self::check_side(side)?;
        Self::from_spins(side, vec![spin; side * side])
    }

    pub fn all_up(side: usize) -> Result<Self> {
        Self::uniform(side, 1)
    }

    pub fn from_spins(side: usize, spins: Vec<i8>) -> Result<Self> {
        Self::check_side(side)?;
        if spins.len() != side * side {
            return Err(Error::Lattice(format!(
                "expected {} spins for side {side}, got {}",
                side * side,
                spins.len()
            )));
        }
        if let Some(bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::Lattice(format!("spin value {bad} is not -1 or +1")));
        }
        let spin_sum = spins.iter().map(|&s| i64::from(s)).sum();
        Ok(SpinLattice {
            side,
            spins,
            spin_sum,
        })
    }

    /// Random lattice with exactly `round(up_fraction * L^2)` up spins at
    /// uniformly shuffled positions.
    pub fn random(side: usize, up_fraction: f64, rng: &mut RngStream) -> Result<Self> {
        Self::check_side(side)?;
        if !(0.0..=1.0).contains(&up_fraction) {
            return Err(Error::config(
                "init-up",
                format!("{up_fraction} is outside [0, 1]"),
            ));
        }
        let n = side * side;
        let ups = (up_fraction * n as f64).round() as usize;
        let mut spins: Vec<i8> = (0..n).map(|i| if i < ups { 1 } else { -1 }).collect();
        if ups != 0 && ups != n {
            // Fisher-Yates
            for i in (1..n).rev() {
                let j = rng.next_below(i as u64 + 1) as usize;
                spins.swap(i, j);
            }
        }
        Self::from_spins(side, spins)
    }

    fn check_side(side: usize) -> Result<()> {
        if side < Self::MIN_SIDE {
            return Err(Error::config(
                "size",
                format!("lattice side must be at least {}, got {side}", Self::MIN_SIDE),
            ));
        }
        Ok(())
    }

    #[inline]
    pub fn side(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn site_count(&self) -> usize {
        self.spins.len()
    }

    #[inline]
    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    #[inline]
    pub fn spin_sum(&self) -> i64 {
        self.spin_sum
    }

    #[inline]
    pub fn get(&self, site: Site) -> i8 {
        self.spins[site.row * self.side + site.col]
    }

    #[inline]
    pub fn site_of(&self, index: usize) -> Site {
        Site::new(index / self.side, index % self.side)
    }

    #[inline]
    pub fn flip(&mut self, site: Site) {
        let idx = site.row * self.side + site.col;
        let s = self.spins[idx];
        self.spins[idx] = -s;
        self.spin_sum -= 2 * i64::from(s);
    }

    /// Sum of the four periodic neighbours of `site`.
    #[inline]
    pub fn neighbour_sum(&self, site: Site) -> i32 {
        let l = self.side;
        let Site { row, col } = site;
        let up = if row == 0 { l - 1 } else { row - 1 };
        let down = if row + 1 == l { 0 } else { row + 1 };
        let left = if col == 0 { l - 1 } else { col - 1 };
        let right = if col + 1 == l { 0 } else { col + 1 };
        let s = &self.spins;
        i32::from(s[up * l + col])
            + i32::from(s[down * l + col])
            + i32::from(s[row * l + left])
            + i32::from(s[row * l + right])
    }

    /// Full energy, summing every site's right and down bond once.
    pub fn total_energy(&self, params: &IsingParams) -> f64 {
        let l = self.side;
        let mut bonds: i64 = 0;
        for row in 0..l {
            let down_row = if row + 1 == l { 0 } else { row + 1 };
            for col in 0..l {
                let right = if col + 1 == l { 0 } else { col + 1 };
                let s = i64::from(self.spins[row * l + col]);
                bonds += s * i64::from(self.spins[row * l + right]);
                bonds += s * i64::from(self.spins[down_row * l + col]);
            }
        }
        params.field * self.spin_sum as f64 - params.coupling * bonds as f64
    }

    /// Energy change from flipping `site`: `2 s (J * sum(neighbours) - B)`.
    #[inline]
    pub fn flip_delta(&self, site: Site, params: &IsingParams) -> f64 {
        let s = f64::from(self.get(site));
        let nbrs = f64::from(self.neighbour_sum(site));
        2.0 * s * (params.coupling * nbrs - params.field)
    }

    /// Mean spin, in `[-1, 1]`.
    #[inline]
    pub fn magnetization_fraction(&self) -> f64 {
        self.spin_sum as f64 / self.spins.len() as f64
    }

    /// Copy of the lattice shifted cyclically by `rows` and `cols`.
    pub fn rotated(&self, rows: usize, cols: usize) -> Self {
        let l = self.side;
        let mut spins = vec![0i8; l * l];
        for r in 0..l {
            for c in 0..l {
                spins[((r + rows) % l) * l + (c + cols) % l] = self.spins[r * l + c];
            }
        }
        SpinLattice {
            side: l,
            spins,
            spin_sum: self.spin_sum,
        }
    }

    /// Copy with every spin reversed.
    pub fn inverted(&self) -> Self {
        SpinLattice {
            side: self.side,
            spins: self.spins.iter().map(|s| -s).collect(),
            spin_sum: -self.spin_sum,
        }
    }
}
