//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints a status line even when it passes:
//!
//!     cargo test --release --test acceptance
//!
//! Exits non-zero if any criterion fails. A criterion whose preconditions the
//! host cannot meet (too few cores for a scaling measurement) is reported as
//! BLOCKED with the numbers it did measure.

use std::path::Path;
use std::time::Instant;

use pt_ising::analysis::{
    configuration_index, equilibrium_magnetization, exact_boltzmann_distribution, fit_convergence_points,
    total_variation, ConvergenceStudy,
};
use pt_ising::bench::{mean_total, run_sweep, Preset, SweepKind, SweepSpec};
use pt_ising::tempering::{execute_swap_round, SwapStreams};
use pt_ising::{
    acceptance_probability, build_ladder, pairing, run, swap_probability, IsingParams, RecordMode, Replica,
    RngStream, SimulationConfig, SpinLattice,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Blocked,
}

struct Outcome {
    status: Status,
    detail: String,
}

impl Outcome {
    fn check(ok: bool, detail: String) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Outcome { status, detail }
    }
}

fn exact_distribution() -> Outcome {
    let start = Instant::now();
    let params = IsingParams::default();
    let (side, temperature, steps) = (3, 2.5, 1_000_000);
    let exact = exact_boltzmann_distribution(side, temperature, &params).expect("exact distribution");
    let lattice = SpinLattice::random(side, 0.5, &mut RngStream::new(2024, 1)).expect("lattice");
    let mut replica = Replica::new(0, temperature, lattice, &params, RngStream::new(2024, 0)).expect("replica");
    let mut counts = vec![0u64; exact.len()];
    for _ in 0..steps {
        replica.step(&params);
        counts[configuration_index(replica.lattice())] += 1;
    }
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / steps as f64).collect();
    let tv = total_variation(&empirical, &exact);
    let secs = start.elapsed().as_secs_f64();
    Outcome::check(
        tv <= 0.02 && secs < 60.0,
        format!("L=3 T=2.5 10^6 steps: TV = {tv:.5} (limit 0.02), {secs:.2} s (limit 60 s)"),
    )
}

fn phase_transition() -> Outcome {
    let cfg = SimulationConfig {
        side: 32,
        replicas: 16,
        iterations: 200_000,
        swap_interval: 100,
        workers: 4,
        master_seed: 42,
        init_up_fraction: 1.0,
        record_mode: RecordMode::Observables,
        ..SimulationConfig::default()
    };
    let record = run(&cfg).expect("phase transition run");
    let m = equilibrium_magnetization(&record, 0.5).expect("magnetization");
    let t = &record.temperatures;
    let cold_ok = t.iter().zip(&m).filter(|(t, _)| **t <= 1.5).all(|(_, m)| *m > 0.9);
    let hot_ok = t.iter().zip(&m).filter(|(t, _)| **t >= 3.5).all(|(_, m)| *m < 0.3);
    let (k, drop) = (0..m.len() - 1)
        .map(|i| (i, m[i] - m[i + 1]))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least two replicas");
    let mid = 0.5 * (t[k] + t[k + 1]);
    let curve: Vec<String> = t.iter().zip(&m).map(|(t, m)| format!("{t:.3}:{m:.3}")).collect();
    Outcome::check(
        cold_ok && hot_ok && (2.0..=2.6).contains(&mid),
        format!(
            "|m|>0.9 for T<=1.5: {cold_ok}, |m|<0.3 for T>=3.5: {hot_ok}, steepest drop {drop:.3} between T={:.4} and T={:.4} (midpoint {mid:.4}, want [2.0, 2.6]); curve [{}]",
            t[k],
            t[k + 1],
            curve.join(" ")
        ),
    )
}

fn convergence_scaling() -> Outcome {
    let study = ConvergenceStudy::default();
    let points = study.run().expect("convergence study");
    let listed: Vec<String> = points
        .iter()
        .map(|p| match p.iteration {
            Some(t) => format!("L={}:{t}", p.side),
            None => format!("L={}:none", p.side),
        })
        .collect();
    match fit_convergence_points(&points) {
        Ok(fit) => Outcome::check(
            (1.6..=2.4).contains(&fit.exponent) && points.iter().all(|p| p.iteration.is_some()),
            format!(
                "T=1.5, {} seeds per L, iterations [{}]: exponent {:.3} (want [1.6, 2.4]), r^2 {:.3}",
                study.seeds,
                listed.join(" "),
                fit.exponent,
                fit.r_squared
            ),
        ),
        Err(e) => Outcome::check(false, format!("fit failed ({e}); iterations [{}]", listed.join(" "))),
    }
}

fn timing_base() -> SimulationConfig {
    SimulationConfig {
        replicas: 128,
        record_mode: RecordMode::None,
        ..Preset::Desk.config()
    }
}

fn warm_up(base: &SimulationConfig) {
    run(base).expect("warm-up run");
}

fn parallel_efficiency(dir: &Path) -> Outcome {
    let base = SimulationConfig {
        swap_interval: 0,
        ..timing_base()
    };
    warm_up(&base);
    let spec = SweepSpec {
        kind: SweepKind::WorkerScaling,
        base,
        axis: vec![1, 2, 4],
        repetitions: 3,
        out_dir: dir.join("worker_scaling"),
    };
    let outcome = run_sweep(&spec).expect("worker-scaling sweep");
    let speedup = |p: usize| outcome.summary.points[p].speedup.unwrap_or(f64::NAN);
    let (s2, s4) = (speedup(1), speedup(2));
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let detail = format!(
        "|R|=128 I=0: speed-up W=2 {s2:.3} (want >= 1.8), W=4 {s4:.3} (want >= 2.8); host has {cores} core(s)"
    );
    if cores < 4 {
        return Outcome {
            status: Status::Blocked,
            detail: format!("{detail}; needs at least 4 cores to be meaningful"),
        };
    }
    Outcome::check(s2 >= 1.8 && s4 >= 2.8 && outcome.failed_rows == 0, detail)
}

fn swap_overhead(dir: &Path) -> Outcome {
    let base = SimulationConfig {
        workers: 4,
        ..timing_base()
    };
    warm_up(&base);
    let spec = SweepSpec {
        kind: SweepKind::SwapSweep,
        base,
        axis: vec![0, 100, 1000, 10_000],
        repetitions: 10,
        out_dir: dir.join("swap_sweep"),
    };
    let outcome = run_sweep(&spec).expect("swap sweep");
    let means: Vec<f64> = (0..4)
        .map(|p| mean_total(&outcome.rows, p).map(|m| m.0).unwrap_or(f64::NAN))
        .collect();
    let excess = means[1] / means[0] - 1.0;
    Outcome::check(
        excess < 0.15 && outcome.failed_rows == 0,
        format!(
            "|R|=128 W=4 mean total s: I=0 {:.4}, I=100 {:.4}, I=1000 {:.4}, I=10000 {:.4}; I=100 excess {:+.1}% (limit 15%)",
            means[0],
            means[1],
            means[2],
            means[3],
            excess * 100.0
        ),
    )
}

fn determinism(dir: &Path) -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for interval in [0u64, 100] {
        let mut reference: Option<Vec<u8>> = None;
        for workers in [1usize, 2, 4, 8] {
            let cfg = SimulationConfig {
                workers,
                swap_interval: interval,
                record_mode: RecordMode::Observables,
                ..Preset::Desk.config()
            };
            let out = dir.join(format!("det_i{interval}_w{workers}"));
            let outcome = run_sweep(&SweepSpec::single(cfg, &out)).expect("determinism run");
            let bytes = std::fs::read(&outcome.observable_paths[0]).expect("observables.csv");
            match &reference {
                None => reference = Some(bytes),
                Some(r) if *r == bytes => {}
                Some(_) => mismatches.push(format!("I={interval} W={workers}")),
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::check(
        mismatches.is_empty() && secs < 300.0,
        format!(
            "desk preset, W in {{1,2,4,8}}, I in {{0,100}}: {} ({secs:.1} s, limit 300 s)",
            if mismatches.is_empty() {
                "observables.csv identical to W=1".to_string()
            } else {
                format!("differs from W=1 at {}", mismatches.join(", "))
            }
        ),
    )
}

fn unit_invariants() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = RngStream::new(99, 0);

    // Incremental energy change against a full recompute, integer couplings.
    for side in [2usize, 3, 5, 8] {
        for (j, b) in [(1.0, 0.0), (-1.0, 0.0), (2.0, 1.0), (1.0, -2.0), (0.0, 3.0)] {
            let params = IsingParams { coupling: j, field: b };
            let lattice = SpinLattice::random(side, 0.5, &mut rng).expect("lattice");
            let before = lattice.total_energy(&params);
            for k in 0..lattice.site_count() {
                let site = lattice.site_of(k);
                let mut flipped = lattice.clone();
                flipped.flip(site);
                if lattice.flip_delta(site, &params) != flipped.total_energy(&params) - before {
                    failures.push(format!("flip_delta L={side} J={j} B={b} site {k}"));
                }
            }
        }
    }

    // Swap rounds permute states among slots and never alter them.
    let params = IsingParams::default();
    let ladder = build_ladder(7).expect("ladder");
    let mut replicas: Vec<Replica> = ladder
        .temperatures()
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let lattice = SpinLattice::random(6, 0.5, &mut rng).expect("lattice");
            Replica::new(i, t, lattice, &params, RngStream::new(5, i as u64)).expect("replica")
        })
        .collect();
    let snapshot = |rs: &[Replica]| {
        let mut states: Vec<Vec<i8>> = rs.iter().map(|r| r.lattice().spins().to_vec()).collect();
        states.sort();
        states
    };
    let initial = snapshot(&replicas);
    let streams = SwapStreams::new(5, replicas.len());
    for round in 0..100u64 {
        execute_swap_round(&mut replicas, &pairing(round, 7), round, &streams);
        if snapshot(&replicas) != initial {
            failures.push(format!("multiset changed in round {round}"));
            break;
        }
    }

    // Ladder values.
    let exact: [(usize, &[f64]); 3] = [
        (1, &[1.0]),
        (3, &[1.0, 2.0, 3.0]),
        (6, &[1.0, 1.5, 2.0, 2.5, 3.0, 3.5]),
    ];
    for (n, want) in exact {
        if build_ladder(n).expect("ladder").temperatures() != want {
            failures.push(format!("ladder |R|={n}"));
        }
    }
    let big = build_ladder(1500).expect("ladder");
    for (i, &t) in big.temperatures().iter().enumerate() {
        let rational = (1500 + 3 * i) as f64 / 1500.0;
        if (t - rational).abs() > f64::EPSILON * rational || t >= 4.0 {
            failures.push(format!("ladder |R|=1500 index {i}: {t} vs {rational}"));
            break;
        }
    }

    // Pairing: even rounds start at 0, odd rounds at 1, pairs are disjoint.
    for n in 1..=12usize {
        for round in 0..4u64 {
            let first = (round % 2) as usize;
            let want: Vec<(usize, usize)> = (first..n.saturating_sub(1)).step_by(2).map(|i| (i, i + 1)).collect();
            if pairing(round, n).pairs != want {
                failures.push(format!("pairing round {round} |R|={n}"));
            }
        }
    }

    // Probability identities.
    if acceptance_probability(0.0, 0.7) != 1.0 {
        failures.push("min(1, e^0) != 1".into());
    }
    if swap_probability(0.5, 0.5, -10.0, 3.0) != 0.5 {
        failures.push("logistic(0) != 0.5".into());
    }
    for _ in 0..1000 {
        let bi = 0.25 + rng.next_f64();
        let bj = 0.25 + rng.next_f64();
        let ei = -2048.0 * rng.next_f64();
        let ej = -2048.0 * rng.next_f64();
        // Reversing the temperature order negates the logistic argument.
        let sum = swap_probability(bi, bj, ei, ej) + swap_probability(bj, bi, ei, ej);
        if (sum - 1.0).abs() > 1e-15 {
            failures.push(format!("p(i,j) + p(j,i) = {sum}"));
            break;
        }
        // Relabelling both replicas leaves the argument unchanged.
        if swap_probability(bi, bj, ei, ej) != swap_probability(bj, bi, ej, ei) {
            failures.push("relabelled pair changed the swap probability".into());
            break;
        }
    }

    Outcome::check(
        failures.is_empty(),
        if failures.is_empty() {
            "flip_delta, swap multiset, ladder |R| in {1,3,6,1500}, pairing parity, probability identities".into()
        } else {
            failures.join("; ")
        },
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let criteria: Vec<Criterion> = vec![
        ("unit invariants", Box::new(unit_invariants)),
        ("exact distribution", Box::new(exact_distribution)),
        ("phase transition", Box::new(phase_transition)),
        ("quadratic convergence scaling", Box::new(convergence_scaling)),
        ("determinism", Box::new(|| determinism(dir.path()))),
        ("swap overhead", Box::new(|| swap_overhead(dir.path()))),
        ("parallel efficiency", Box::new(|| parallel_efficiency(dir.path()))),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let outcome = check();
        let tag = match outcome.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
            Status::Blocked => "BLOCKED",
        };
        println!("[{tag}] {name}: {}", outcome.detail);
    }
    println!("acceptance: {} criteria, {failed} failed", criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
