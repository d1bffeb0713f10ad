//! Convergence iterations against lattice size at T = 1.5 and the fitted
//! power-law exponent.

use pt_ising::analysis::{fit_convergence_points, ConvergenceStudy};

fn main() -> pt_ising::Result<()> {
    let master_seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let study = ConvergenceStudy {
        master_seed,
        ..ConvergenceStudy::default()
    };
    let points = study.run()?;
    for p in &points {
        match p.iteration {
            Some(t) => println!("L = {:2}: {t:6} iterations ({:.2} sweeps)", p.side, t as f64 / (p.side * p.side) as f64),
            None => println!("L = {:2}: not converged", p.side),
        }
    }
    let fit = fit_convergence_points(&points)?;
    println!("iterations ~ {:.3} * L^{:.3} (r^2 = {:.3})", fit.prefactor, fit.exponent, fit.r_squared);
    Ok(())
}
