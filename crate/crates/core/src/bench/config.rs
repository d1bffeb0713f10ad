//! Command-line and config-file parsing for benchmark sweeps.
//!
//! Precedence is flags, then the TOML config file, then the selected preset
//! (`desk` when nothing is chosen).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::executor::{RecordMode, SimulationConfig};
use crate::lattice::IsingParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// L=32, |R|=16, N=50k, I=100, W=4
    Desk,
    /// L=100, |R|=128, N=100k
    PaperSmall,
    /// L=300, |R|=1500, N=300k
    PaperFull,
}

impl Preset {
    pub fn config(self) -> SimulationConfig {
        let desk = SimulationConfig {
            side: 32,
            replicas: 16,
            iterations: 50_000,
            swap_interval: 100,
            workers: 4,
            master_seed: 42,
            params: IsingParams::new(1.0, 0.0),
            init_up_fraction: 0.5,
            record_mode: RecordMode::Observables,
        };
        match self {
            Preset::Desk => desk,
            Preset::PaperSmall => SimulationConfig {
                side: 100,
                replicas: 128,
                iterations: 100_000,
                ..desk
            },
            Preset::PaperFull => SimulationConfig {
                side: 300,
                replicas: 1500,
                iterations: 300_000,
                workers: 16,
                ..desk
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SweepKind {
    Single,
    WorkerScaling,
    ReplicaScaling,
    SwapSweep,
    SizeSweep,
}

impl SweepKind {
    pub fn default_axis(self) -> Vec<u64> {
        match self {
            SweepKind::Single => vec![],
            SweepKind::WorkerScaling => vec![1, 2, 4, 8],
            SweepKind::ReplicaScaling => vec![16, 32, 64, 128],
            SweepKind::SwapSweep => vec![0, 100, 1000, 10_000],
            SweepKind::SizeSweep => vec![8, 12, 16, 24, 32],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SweepKind::Single => "single",
            SweepKind::WorkerScaling => "worker_scaling",
            SweepKind::ReplicaScaling => "replica_scaling",
            SweepKind::SwapSweep => "swap_sweep",
            SweepKind::SizeSweep => "size_sweep",
        }
    }

    /// Config for one axis value.
    pub fn apply(self, base: &SimulationConfig, value: u64) -> SimulationConfig {
        let mut cfg = base.clone();
        match self {
            SweepKind::Single => {}
            SweepKind::WorkerScaling => cfg.workers = value as usize,
            SweepKind::ReplicaScaling => cfg.replicas = value as usize,
            SweepKind::SwapSweep => cfg.swap_interval = value,
            SweepKind::SizeSweep => cfg.side = value as usize,
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordFlag {
    None,
    Observables,
    Full,
}

impl From<RecordFlag> for RecordMode {
    fn from(flag: RecordFlag) -> Self {
        match flag {
            RecordFlag::None => RecordMode::None,
            RecordFlag::Observables => RecordMode::Observables,
            RecordFlag::Full => RecordMode::FullStates,
        }
    }
}

/// A fully resolved benchmark request.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub base: SimulationConfig,
    /// Axis values; empty for `single`.
    pub axis: Vec<u64>,
    pub repetitions: u32,
    pub out_dir: PathBuf,
}

impl SweepSpec {
    pub fn single(base: SimulationConfig, out_dir: impl Into<PathBuf>) -> Self {
        SweepSpec {
            kind: SweepKind::Single,
            base,
            axis: vec![],
            repetitions: 1,
            out_dir: out_dir.into(),
        }
    }

    /// One config per sweep point, in axis order.
    pub fn points(&self) -> Vec<SimulationConfig> {
        if self.kind == SweepKind::Single {
            return vec![self.base.clone()];
        }
        self.axis.iter().map(|&v| self.kind.apply(&self.base, v)).collect()
    }

    pub fn axis_value(&self, point: usize) -> Option<u64> {
        self.axis.get(point).copied()
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::config("reps", "must be at least 1"));
        }
        if self.kind != SweepKind::Single && self.axis.is_empty() {
            return Err(Error::config("axis", "must list at least one value"));
        }
        for cfg in self.points() {
            cfg.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, Parser)]
#[command(
    name = "pt-ising-bench",
    version,
    about = "Parallel-tempering Ising benchmarks: single runs and scaling sweeps"
)]
pub struct CliArgs {
    /// TOML file with any of the flag values below (flags take precedence).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Lattice side L.
    #[arg(long)]
    pub size: Option<usize>,
    /// Replica count |R|.
    #[arg(long)]
    pub replicas: Option<usize>,
    /// MH iterations per replica N.
    #[arg(long)]
    pub iters: Option<u64>,
    /// Iterations between swap rounds; 0 disables swaps.
    #[arg(long = "swap-interval")]
    pub swap_interval: Option<u64>,
    /// Worker threads W.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Coupling J.
    #[arg(long = "J", allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// External field B.
    #[arg(long = "B", allow_negative_numbers = true)]
    pub field: Option<f64>,
    /// Fraction of up spins in every initial lattice.
    #[arg(long = "init-up")]
    pub init_up: Option<f64>,
    /// Sweep kind; `single` runs one configuration.
    #[arg(long, value_enum)]
    pub sweep: Option<SweepKind>,
    /// Comma-separated axis values for the sweep.
    #[arg(long, value_delimiter = ',')]
    pub axis: Option<Vec<u64>>,
    /// Repetitions per sweep point.
    #[arg(long)]
    pub reps: Option<u32>,
    /// Output directory (default `results`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to `observables` for single runs and `none` for sweeps.
    #[arg(long, value_enum)]
    pub record: Option<RecordFlag>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub preset: Option<Preset>,
    pub size: Option<usize>,
    pub replicas: Option<usize>,
    pub iters: Option<u64>,
    pub swap_interval: Option<u64>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    #[serde(rename = "J")]
    pub coupling: Option<f64>,
    #[serde(rename = "B")]
    pub field: Option<f64>,
    pub init_up: Option<f64>,
    pub sweep: Option<SweepKind>,
    pub axis: Option<Vec<u64>>,
    pub reps: Option<u32>,
    pub out: Option<PathBuf>,
    pub record: Option<RecordFlag>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::config("config", format!("{}: {e}", path.display())))
    }
}

/// Resolves flags, config file and preset into a validated [`SweepSpec`].
pub fn parse_config(args: &CliArgs) -> Result<SweepSpec> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let preset = args.preset.or(file.preset).unwrap_or(Preset::Desk);
    let mut base = preset.config();

    macro_rules! layer {
        ($target:expr, $field:ident) => {
            if let Some(v) = args.$field.clone().or(file.$field.clone()) {
                $target = v;
            }
        };
    }
    layer!(base.side, size);
    layer!(base.replicas, replicas);
    layer!(base.iterations, iters);
    layer!(base.swap_interval, swap_interval);
    layer!(base.workers, workers);
    layer!(base.master_seed, seed);
    layer!(base.params.coupling, coupling);
    layer!(base.params.field, field);
    layer!(base.init_up_fraction, init_up);

    let kind = args.sweep.or(file.sweep).unwrap_or(SweepKind::Single);
    let axis = args
        .axis
        .clone()
        .or(file.axis)
        .unwrap_or_else(|| kind.default_axis());
    let record = args.record.or(file.record).unwrap_or(match kind {
        SweepKind::Single => RecordFlag::Observables,
        _ => RecordFlag::None,
    });
    base.record_mode = record.into();

    let spec = SweepSpec {
        kind,
        base,
        axis: if kind == SweepKind::Single { vec![] } else { axis },
        repetitions: args.reps.or(file.reps).unwrap_or(1),
        out_dir: args
            .out
            .clone()
            .or(file.out)
            .unwrap_or_else(|| PathBuf::from("results")),
    };
    spec.validate()?;
    Ok(spec)
}
