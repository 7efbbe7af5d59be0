//! Pseudometric contract, planar metrics and distance matrices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Triangle tolerance for matrices computed in floating point.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

pub fn euclidean(a: Point2, b: Point2) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

pub fn taxicab(a: Point2, b: Point2) -> f64 {
    (a.x - b.x).abs() + (a.y - b.y).abs()
}

pub fn supremum(a: Point2, b: Point2) -> f64 {
    (a.x - b.x).abs().max((a.y - b.y).abs())
}

/// The three built-in metrics on the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanarMetric {
    Euclidean,
    Taxicab,
    Supremum,
}

impl PlanarMetric {
    pub const ALL: [PlanarMetric; 3] = [Self::Euclidean, Self::Taxicab, Self::Supremum];

    pub fn distance(self, a: Point2, b: Point2) -> f64 {
        match self {
            Self::Euclidean => euclidean(a, b),
            Self::Taxicab => taxicab(a, b),
            Self::Supremum => supremum(a, b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Euclidean => "euclidean",
            Self::Taxicab => "taxicab",
            Self::Supremum => "supremum",
        }
    }
}

impl fmt::Display for PlanarMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Square matrix of pairwise distances, stored row-major.
///
/// Distinct indices may sit at distance zero. `tolerance` is the slack
/// allowed when checking the triangle inequality: [`FLOAT_TOLERANCE`] for
/// matrices computed in floating point, zero for matrices converted from
/// exact integer or rational distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
    labels: Option<Vec<String>>,
    tolerance: f64,
}

/// A violated pseudometric axiom, with the witnessing indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NotFinite { i: usize, j: usize },
    Negative { i: usize, j: usize },
    Asymmetric { i: usize, j: usize },
    NonzeroDiagonal { i: usize },
    Triangle { i: usize, j: usize, k: usize },
}

impl DistanceMatrix {
    /// Wraps row-major entries without checking any axiom; see
    /// [`validate_pseudometric`] and [`DistanceMatrix::checked`].
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(Self {
            n,
            entries,
            labels: None,
            tolerance: FLOAT_TOLERANCE,
        })
    }

    /// Builds a matrix from a symmetric distance function evaluated on `i < j`.
    pub fn from_fn(n: usize, mut dist: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = dist(i, j);
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        Self {
            n,
            entries,
            labels: None,
            tolerance: FLOAT_TOLERANCE,
        }
    }

    /// Rejects matrices that are not square-symmetric with a zero diagonal
    /// and nonnegative finite entries. The triangle inequality is not
    /// required here.
    pub fn checked(self) -> Result<Self> {
        self.check_hard_axioms()?;
        Ok(self)
    }

    /// See [`DistanceMatrix::checked`].
    pub fn check_hard_axioms(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            if self.get(i, i) != 0.0 {
                return Err(Error::InvalidMatrix(
                    Violation::NonzeroDiagonal { i }.to_string(),
                ));
            }
            for j in i + 1..n {
                let (d, e) = (self.get(i, j), self.get(j, i));
                let v = if !d.is_finite() || !e.is_finite() {
                    Violation::NotFinite { i, j }
                } else if d < 0.0 {
                    Violation::Negative { i, j }
                } else if (d - e).abs() > self.tolerance {
                    Violation::Asymmetric { i, j }
                } else {
                    continue;
                };
                return Err(Error::InvalidMatrix(v.to_string()));
            }
        }
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per point");
        self.labels = Some(labels);
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Largest entry, or 0 for matrices without off-diagonal pairs.
    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    /// Divides every entry by the largest one.
    pub fn normalize(&self) -> Result<Self> {
        let max = self.max_entry();
        if max <= 0.0 {
            return Err(Error::AllZeroMatrix);
        }
        let mut out = self.clone();
        for e in &mut out.entries {
            *e /= max;
        }
        Ok(out)
    }

    /// Matrix with every entry multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e *= factor;
        }
        out
    }
}

pub fn build_distance_matrix(points: &[Point2], metric: PlanarMetric) -> Result<DistanceMatrix> {
    if points.is_empty() {
        return Err(Error::EmptyInput("point list"));
    }
    if let Some(index) = points.iter().position(|p| !p.is_finite()) {
        return Err(Error::NonFiniteCoordinate { index });
    }
    Ok(DistanceMatrix::from_fn(points.len(), |i, j| {
        metric.distance(points[i], points[j])
    }))
}

/// Lists every violated pseudometric axiom. An empty report means the
/// matrix is a pseudometric within `tolerance`.
pub fn validate_pseudometric(m: &DistanceMatrix, tolerance: f64) -> Vec<Violation> {
    let n = m.len();
    let mut out = Vec::new();
    for i in 0..n {
        if m.get(i, i) != 0.0 {
            out.push(Violation::NonzeroDiagonal { i });
        }
        for j in 0..n {
            let d = m.get(i, j);
            if !d.is_finite() {
                out.push(Violation::NotFinite { i, j });
                continue;
            }
            if i < j {
                if d < 0.0 {
                    out.push(Violation::Negative { i, j });
                }
                if (d - m.get(j, i)).abs() > tolerance {
                    out.push(Violation::Asymmetric { i, j });
                }
            }
        }
    }
    for i in 0..n {
        for k in i + 1..n {
            let direct = m.get(i, k);
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                if m.get(i, j) + m.get(j, k) < direct - tolerance {
                    out.push(Violation::Triangle { i, j, k });
                }
            }
        }
    }
    out
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::NotFinite { i, j } => write!(f, "entry ({i},{j}) is not finite"),
            Self::Negative { i, j } => write!(f, "negative distance at ({i},{j})"),
            Self::Asymmetric { i, j } => write!(f, "asymmetric at ({i},{j})"),
            Self::NonzeroDiagonal { i } => write!(f, "nonzero diagonal at ({i},{i})"),
            Self::Triangle { i, j, k } => {
                write!(
                    f,
                    "triangle inequality fails: d({i},{j}) + d({j},{k}) < d({i},{k})"
                )
            }
        }
    }
}
