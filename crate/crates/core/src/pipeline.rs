//! End-to-end runs: distance matrix to barcode, and the dice data space.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dice::{self, BeatingGraph, DiceDistances, DiceSpace, PairingVariant, TieConvention};
use crate::persistence::{extract_pairs, reduce, total_boundary_matrix};
use crate::rips::{build_filtration, Filtration};
use crate::{Barcode, DistanceMatrix, Error, PlanarMetric, Result};

/// Every distance the tool knows, planar or on dice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricSelector {
    Euclidean,
    Taxicab,
    Supremum,
    Similarity,
    DiceEuclidean,
    FoliationSymmetry,
    ShortestPath,
}

impl MetricSelector {
    pub const ALL: [MetricSelector; 7] = [
        Self::Euclidean,
        Self::Taxicab,
        Self::Supremum,
        Self::Similarity,
        Self::DiceEuclidean,
        Self::FoliationSymmetry,
        Self::ShortestPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Euclidean => "euclidean",
            Self::Taxicab => "taxicab",
            Self::Supremum => "supremum",
            Self::Similarity => "similarity",
            Self::DiceEuclidean => "dice-euclidean",
            Self::FoliationSymmetry => "foliation-symmetry",
            Self::ShortestPath => "shortest-path",
        }
    }

    pub fn planar(self) -> Option<PlanarMetric> {
        match self {
            Self::Euclidean => Some(PlanarMetric::Euclidean),
            Self::Taxicab => Some(PlanarMetric::Taxicab),
            Self::Supremum => Some(PlanarMetric::Supremum),
            _ => None,
        }
    }

    pub fn is_dice(self) -> bool {
        self.planar().is_none()
    }
}

impl FromStr for MetricSelector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMetric(s.to_string()))
    }
}

impl fmt::Display for MetricSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistOptions {
    pub max_dim: usize,
    pub stop_when_connected: bool,
    pub normalize: bool,
}

impl Default for PersistOptions {
    fn default() -> Self {
        Self {
            max_dim: 2,
            stop_when_connected: false,
            normalize: true,
        }
    }
}

/// Filtration and barcode of `m`.
pub fn persist_with_filtration(
    m: &DistanceMatrix,
    metric: &str,
    opts: PersistOptions,
) -> Result<(Filtration, Barcode)> {
    if m.is_empty() {
        return Err(Error::EmptyInput("distance matrix"));
    }
    m.check_hard_axioms()?;
    let f = build_filtration(m, opts.max_dim, opts.stop_when_connected);
    let r = reduce(&total_boundary_matrix(&f));
    let b = extract_pairs(&r, &f, opts.normalize, metric);
    Ok((f, b))
}

pub fn persist(m: &DistanceMatrix, metric: &str, opts: PersistOptions) -> Result<Barcode> {
    persist_with_filtration(m, metric, opts).map(|(_, b)| b)
}

/// A dice space, its beating graph and the non-transitive subgraph.
#[derive(Debug, Clone)]
pub struct DiceRun {
    pub space: DiceSpace,
    pub graph: BeatingGraph,
    pub ntd: BeatingGraph,
    pub pairing: PairingVariant,
}

impl DiceRun {
    pub fn new(
        sides: usize,
        max_face: u32,
        face_sum: u32,
        convention: TieConvention,
        pairing: PairingVariant,
    ) -> Result<Self> {
        let space = dice::enumerate_dice(sides, max_face, face_sum);
        Self::from_space(space, convention, pairing)
    }

    pub fn from_space(
        space: DiceSpace,
        convention: TieConvention,
        pairing: PairingVariant,
    ) -> Result<Self> {
        let graph = dice::build_beating_graph(&space, convention)?;
        let ntd = graph.induced(&dice::non_transitive_indices(&graph));
        Ok(Self {
            space,
            graph,
            ntd,
            pairing,
        })
    }

    pub fn distances(&self) -> Result<DiceDistances> {
        DiceDistances::compute(&self.ntd, self.pairing)
    }

    /// Distance matrix over the non-transitive dice.
    pub fn matrix(&self, metric: MetricSelector) -> Result<DistanceMatrix> {
        match metric {
            MetricSelector::DiceEuclidean => dice::euclidean_dice_matrix(self.ntd.nodes()),
            MetricSelector::Similarity => Ok(self.distances()?.similarity_matrix()),
            MetricSelector::ShortestPath => Ok(self.distances()?.shortest_path_matrix()),
            MetricSelector::FoliationSymmetry => self.distances()?.foliation_symmetry_matrix(),
            planar => Err(Error::UnknownMetric(format!(
                "{planar} is not a dice distance"
            ))),
        }
    }
}
