//! Vietoris-Rips persistent homology under interchangeable (pseudo)metrics.
//!
//! The pipeline is: build a [`DistanceMatrix`], grow a Rips [`Filtration`]
//! over its sorted distance thresholds, reduce the total boundary matrix over
//! Z/2 into a [`Barcode`], then summarise each dimension with [`BarStats`].
//!
//! Two data domains ship with the crate: uniform samples from a planar region
//! ([`point_cloud`]) and the space of non-transitive dice ([`dice`]).

pub mod analysis;
pub mod dice;
mod error;
pub mod formats;
pub mod metric;
pub mod persistence;
pub mod pipeline;
pub mod point_cloud;
pub mod rips;

pub use analysis::{bar_stats, compare, BarStats, Comparison};
pub use dice::{BeatingGraph, DiceSpace, Die, PairingVariant, TieConvention};
pub use error::{Error, Result};
pub use metric::{DistanceMatrix, PlanarMetric, Point2, Violation};
pub use persistence::{Bar, Barcode, BarcodeMeta, SparseBinaryMatrix};
pub use pipeline::{MetricSelector, PersistOptions};
pub use point_cloud::{Circle, Region};
pub use rips::{Filtration, Simplex};

/// Tool version recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
