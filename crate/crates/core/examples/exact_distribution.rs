//! Samples a 3x3 lattice with a single Metropolis-Hastings chain and compares
//! the visited configuration frequencies with the exact Boltzmann weights.

use pt_ising::analysis::{configuration_index, empirical_distribution, exact_boltzmann_distribution, total_variation};
use pt_ising::{IsingParams, Replica, RngStream, SpinLattice};

fn main() -> pt_ising::Result<()> {
    let steps: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);
    let params = IsingParams::default();
    let temperature = 2.5;
    let exact = exact_boltzmann_distribution(3, temperature, &params)?;

    let lattice = SpinLattice::random(3, 0.5, &mut RngStream::new(7, 1))?;
    let mut chain = Replica::new(0, temperature, lattice, &params, RngStream::new(7, 0))?;
    let visited = (0..steps).map(|_| {
        chain.step(&params);
        configuration_index(chain.lattice())
    });
    let empirical = empirical_distribution(visited, exact.len());

    println!("{steps} steps at T = {temperature}, acceptance rate {:.3}", chain.accepted() as f64 / steps as f64);
    println!("total variation distance: {:.5}", total_variation(&empirical, &exact));
    let mut top: Vec<usize> = (0..exact.len()).collect();
    top.sort_by(|&a, &b| exact[b].total_cmp(&exact[a]));
    for &i in &top[..4] {
        println!("config {i:3}: exact {:.5}  sampled {:.5}", exact[i], empirical[i]);
    }
    Ok(())
}
