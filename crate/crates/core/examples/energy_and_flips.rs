//! Builds a small lattice, flips spins and compares the incremental energy
//! change with a full recompute.

use pt_ising::{IsingParams, RngStream, SpinLattice};

fn main() -> pt_ising::Result<()> {
    let params = IsingParams { coupling: 1.0, field: 0.0 };
    let mut rng = RngStream::new(1, 0);
    let mut lattice = SpinLattice::random(6, 0.5, &mut rng)?;
    println!("6x6 lattice, m = {:+.3}, E = {}", lattice.magnetization_fraction(), lattice.total_energy(&params));

    for k in [0, 7, 20, 35] {
        let site = lattice.site_of(k);
        let delta = lattice.flip_delta(site, &params) + 0.0;
        let before = lattice.total_energy(&params);
        lattice.flip(site);
        let after = lattice.total_energy(&params);
        println!(
            "flip ({}, {}): neighbour sum {:+}, dE = {:+}, recomputed {:+}",
            site.row,
            site.col,
            lattice.neighbour_sum(site),
            delta,
            after - before + 0.0
        );
    }

    let ordered = SpinLattice::all_up(6)?;
    println!("all up: E = {} (two bonds per site)", ordered.total_energy(&params));
    let with_field = IsingParams { coupling: 1.0, field: 0.5 };
    println!("all up with B = 0.5: E = {}", ordered.total_energy(&with_field));
    Ok(())
}
