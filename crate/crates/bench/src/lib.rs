//! Fixed inputs shared by the benchmarks.

use ripsbar_core::metric::build_distance_matrix;
use ripsbar_core::point_cloud::{sample_region, Region, DEFAULT_SEED};
use ripsbar_core::{DistanceMatrix, PlanarMetric, Point2};

/// `n` points from the disk with four holes, default seed.
pub fn cloud(n: usize) -> Vec<Point2> {
    sample_region(&Region::holed_disk(), n, DEFAULT_SEED).expect("valid region")
}

pub fn cloud_matrix(n: usize, metric: PlanarMetric) -> DistanceMatrix {
    build_distance_matrix(&cloud(n), metric).expect("finite points")
}
