use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ripsbar_core::{PairingVariant, TieConvention};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "ripsbar",
    version,
    about = "Vietoris-Rips barcodes under interchangeable metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub shared: Shared,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a planar point cloud into points.csv
    Cloud {
        /// Number of points
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        points: u64,
        #[arg(long, value_enum, default_value_t = RegionKind::Holes)]
        region: RegionKind,
    },
    /// Enumerate a dice space and write the non-transitive dice, their
    /// beating graph and distance matrices
    Dice,
    /// Compute a barcode (CSV and SVG) from points, a distance matrix or a dice list
    Persist {
        #[arg(long)]
        input: PathBuf,
        /// Also write the filtration, one simplex per line
        #[arg(long)]
        dump_filtration: bool,
    },
    /// Run several metrics over one input and tabulate the bar statistics
    Compare {
        #[arg(long)]
        input: PathBuf,
    },
    /// Per-dimension statistics of a barcode CSV
    Stats {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    /// Unit disk with four circular holes
    Holes,
    /// Unit disk
    Disk,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Metric name; repeat or comma-separate for `compare`
    #[arg(long, global = true, value_delimiter = ',')]
    pub metric: Vec<String>,
    /// Highest simplex dimension [default: 2 for planar data, 9 for dice]
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Stop the filtration once the complex is connected
    #[arg(long, global = true)]
    pub stop_on_connected: bool,
    /// Keep raw distances instead of dividing by the largest one
    #[arg(long, global = true)]
    pub no_normalize: bool,
    #[arg(long, global = true, default_value_t = ripsbar_core::point_cloud::DEFAULT_SEED)]
    pub seed: u64,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, global = true, default_value_t = 6)]
    pub sides: usize,
    #[arg(long, global = true, default_value_t = 6)]
    pub max_face: u32,
    #[arg(long, global = true, default_value_t = 21)]
    pub face_sum: u32,
    #[arg(long, global = true, default_value_t = TieConvention::Strict)]
    pub tie_convention: TieConvention,
    #[arg(long, global = true, default_value_t = PairingVariant::Literal)]
    pub symmetry_pairing: PairingVariant,
}

/// Everything that determines a run's output. Written as JSON into the
/// metadata line of every file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub input: Option<PathBuf>,
    pub out: PathBuf,
    pub metrics: Vec<String>,
    pub max_dim: Option<usize>,
    pub stop_when_connected: bool,
    pub normalize: bool,
    pub seed: u64,
    pub points: Option<u64>,
    pub region: Option<RegionKind>,
    pub sides: usize,
    pub max_face: u32,
    pub face_sum: u32,
    pub tie_convention: TieConvention,
    pub symmetry_pairing: PairingVariant,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Self {
        let s = &cli.shared;
        let (command, input, points, region) = match &cli.command {
            Command::Cloud { points, region } => ("cloud", None, Some(*points), Some(*region)),
            Command::Dice => ("dice", None, None, None),
            Command::Persist { input, .. } => ("persist", Some(input.clone()), None, None),
            Command::Compare { input } => ("compare", Some(input.clone()), None, None),
            Command::Stats { input } => ("stats", Some(input.clone()), None, None),
        };
        Self {
            command: command.into(),
            input,
            out: s.out.clone(),
            metrics: s.metric.clone(),
            max_dim: s.max_dim,
            stop_when_connected: s.stop_on_connected,
            normalize: !s.no_normalize,
            seed: s.seed,
            points,
            region,
            sides: s.sides,
            max_face: s.max_face,
            face_sum: s.face_sum,
            tie_convention: s.tie_convention,
            symmetry_pairing: s.symmetry_pairing,
        }
    }

    pub fn metadata(&self) -> String {
        ripsbar_core::formats::metadata_text(self)
    }
}
