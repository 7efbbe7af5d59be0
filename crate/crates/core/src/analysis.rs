//! Per-dimension barcode statistics and side-by-side metric comparisons.

use std::fmt::{self, Write as _};

use crate::{Barcode, Error, Result};

/// Statistics over the bars of one dimension of a normalised barcode.
/// Open bars count with lifespan `1 - birth`; zero-length pairs are not bars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarStats {
    pub dim: usize,
    pub bar_count: usize,
    /// `None` when there are no bars.
    pub avg_lifespan: Option<f64>,
    pub min_lifespan: Option<f64>,
    pub max_lifespan: Option<f64>,
}

pub fn bar_stats(b: &Barcode, dim: usize) -> Result<BarStats> {
    if !b.meta.normalized {
        return Err(Error::NotNormalized);
    }
    let spans: Vec<f64> = b
        .bars_of_dim(dim)
        .map(|bar| {
            if bar.open {
                1.0 - bar.birth
            } else {
                bar.lifespan()
            }
        })
        .collect();
    let count = spans.len();
    let (avg, min, max) = if count == 0 {
        (None, None, None)
    } else {
        (
            Some(spans.iter().sum::<f64>() / count as f64),
            spans.iter().copied().reduce(f64::min),
            spans.iter().copied().reduce(f64::max),
        )
    };
    Ok(BarStats {
        dim,
        bar_count: count,
        avg_lifespan: avg,
        min_lifespan: min,
        max_lifespan: max,
    })
}

/// Statistics of several runs over the same data, dimension by dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub metrics: Vec<String>,
    /// `rows[dim][run]`.
    pub rows: Vec<Vec<BarStats>>,
}

pub fn compare(runs: &[(String, Barcode)]) -> Result<Comparison> {
    if runs.len() < 2 {
        return Err(Error::TooFewRuns(runs.len()));
    }
    let points = runs[0].1.meta.points;
    if let Some((_, b)) = runs.iter().find(|(_, b)| b.meta.points != points) {
        return Err(Error::PointCountMismatch(points, b.meta.points));
    }
    let max_dim = runs.iter().map(|(_, b)| b.meta.max_dim).max().unwrap_or(0);
    let rows = (0..=max_dim)
        .map(|d| {
            runs.iter()
                .map(|(_, b)| bar_stats(b, d))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Comparison {
        metrics: runs.iter().map(|(m, _)| m.clone()).collect(),
        rows,
    })
}

pub(crate) fn fmt_stat(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6}"))
}

impl fmt::Display for Comparison {
    /// Aligned plain-text table, one block of rows per dimension.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header = ["dim", "metric", "count", "avg", "min", "max"];
        let mut cells: Vec<[String; 6]> = vec![header.map(String::from)];
        for (dim, row) in self.rows.iter().enumerate() {
            for (metric, s) in self.metrics.iter().zip(row) {
                cells.push([
                    format!("H{dim}"),
                    metric.clone(),
                    s.bar_count.to_string(),
                    fmt_stat(s.avg_lifespan),
                    fmt_stat(s.min_lifespan),
                    fmt_stat(s.max_lifespan),
                ]);
            }
        }
        let widths: Vec<usize> = (0..6)
            .map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        for r in &cells {
            let mut line = String::new();
            for (c, cell) in r.iter().enumerate() {
                if c > 0 {
                    line.push_str("  ");
                }
                if c < 2 {
                    write!(line, "{cell:<w$}", w = widths[c])?;
                } else {
                    write!(line, "{cell:>w$}", w = widths[c])?;
                }
            }
            writeln!(f, "{}", line.trim_end())?;
        }
        Ok(())
    }
}
