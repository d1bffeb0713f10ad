//! Temperature ladder, alternating pair schedule and swap probabilities.

use pt_ising::tempering::{execute_swap_round, SwapStreams};
use pt_ising::{build_ladder, pairing, swap_probability, IsingParams, Replica, RngStream, SpinLattice};

fn main() -> pt_ising::Result<()> {
    let ladder = build_ladder(6)?;
    println!("ladder for 6 replicas: {:?}", ladder.temperatures());
    for round in 0..2 {
        let r = pairing(round, 6);
        println!("round {round} ({:?}): {:?}", r.parity, r.pairs);
    }

    let (bi, bj) = (1.0 / ladder.get(0), 1.0 / ladder.get(1));
    for (ei, ej) in [(-60.0, -60.0), (-60.0, -50.0), (-50.0, -60.0)] {
        println!("E = ({ei}, {ej}): swap probability {:.4}", swap_probability(bi, bj, ei, ej));
    }

    let params = IsingParams::default();
    let mut layout = RngStream::new(3, 1000);
    let mut replicas = ladder
        .temperatures()
        .iter()
        .enumerate()
        .map(|(i, &t)| Replica::new(i, t, SpinLattice::random(8, 0.5, &mut layout)?, &params, RngStream::new(3, i as u64)))
        .collect::<pt_ising::Result<Vec<_>>>()?;
    let count = replicas.len();
    let streams = SwapStreams::new(3, count);
    let mut accepted = 0;
    for round in 0..50u64 {
        for r in replicas.iter_mut() {
            for _ in 0..200 {
                r.step(&params);
            }
        }
        accepted += execute_swap_round(&mut replicas, &pairing(round, count), round, &streams);
    }
    println!("50 rounds of 200 steps: {accepted} accepted swaps");
    for r in &replicas {
        println!("T = {:.2}: E = {:6}, m = {:+.3}", r.temperature(), r.energy(), r.magnetization_fraction());
    }
    Ok(())
}
