//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the filtration or reduction code it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ripsbar_core::{Barcode, DistanceMatrix, Point2};

/// Every vertex set of size `1..=max_dim + 1` whose members are pairwise
/// within `eps`, by scanning all subsets.
pub fn cliques(m: &DistanceMatrix, eps: f64, max_dim: usize) -> BTreeSet<Vec<usize>> {
    let n = m.len();
    assert!(n <= 20, "subset scan is exponential");
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() as usize > max_dim + 1 {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let ok = verts
            .iter()
            .enumerate()
            .all(|(a, &i)| verts[a + 1..].iter().all(|&j| m.get(i, j) <= eps));
        if ok {
            out.insert(verts);
        }
    }
    out
}

/// Rank over Z/2 of a dense 0/1 matrix given as rows.
fn rank_gf2(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Z/2 Betti numbers `b_0..=b_max_dim` of a simplicial complex given by its
/// vertex sets, by dense Gaussian elimination of every boundary map.
pub fn betti(complex: &BTreeSet<Vec<usize>>, max_dim: usize) -> Vec<usize> {
    let by_dim: Vec<Vec<&Vec<usize>>> = (0..=max_dim + 1)
        .map(|d| complex.iter().filter(|s| s.len() == d + 1).collect())
        .collect();
    let boundary_rank = |k: usize| -> usize {
        if k == 0 || k > max_dim + 1 || by_dim[k].is_empty() || by_dim[k - 1].is_empty() {
            return 0;
        }
        let rows: Vec<Vec<bool>> = by_dim[k]
            .iter()
            .map(|s| {
                by_dim[k - 1]
                    .iter()
                    .map(|f| f.iter().all(|v| s.contains(v)))
                    .collect()
            })
            .collect();
        rank_gf2(rows)
    };
    let ranks: Vec<usize> = (0..=max_dim + 1).map(boundary_rank).collect();
    (0..=max_dim)
        .map(|k| by_dim[k].len() - ranks[k] - ranks[k + 1])
        .collect()
}

/// Bars of each dimension alive at `eps`: born at or before it and either
/// open or dying strictly after it.
pub fn live(b: &Barcode, eps: f64, max_dim: usize) -> Vec<usize> {
    let mut counts = vec![0; max_dim + 1];
    for bar in &b.bars {
        if bar.birth <= eps && (bar.open || bar.death > eps) {
            counts[bar.dim] += 1;
        }
    }
    counts
}

/// Distinct off-diagonal entries, ascending, with 0 in front.
pub fn thresholds(m: &DistanceMatrix) -> Vec<f64> {
    let mut t = vec![0.0];
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            t.push(m.get(i, j));
        }
    }
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

pub struct Gen(ChaCha8Rng);

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Alternates between continuous points and points on a small integer
    /// grid, which produces many tied distances.
    pub fn cloud(&mut self, n: usize, grid: bool) -> Vec<Point2> {
        (0..n)
            .map(|_| {
                if grid {
                    Point2::new(self.below(4) as f64, self.below(4) as f64)
                } else {
                    Point2::new(self.unit() * 2.0 - 1.0, self.unit() * 2.0 - 1.0)
                }
            })
            .collect()
    }
}

/// Reference list of the non-transitive dice among six-sided dice with faces
/// in 1..=6 summing to 21.
pub const KNOWN_NTT6: [&str; 10] = [
    "112566", "114555", "122556", "144444", "222366", "222555", "234444", "333336", "333345",
    "333444",
];

pub const SEVEN_CYCLE: [&str; 7] = [
    "333336", "112566", "144444", "333345", "222366", "114555", "234444",
];

pub const SIMILAR_TRIO: [&str; 3] = ["112566", "122556", "222555"];
