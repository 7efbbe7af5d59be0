//! Total boundary matrix over Z/2, column reduction and barcode extraction.

use serde::{Deserialize, Serialize};

use crate::rips::Filtration;

/// Column-major sparse matrix over Z/2. Column `j` holds the ascending row
/// indices of its ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBinaryMatrix {
    columns: Vec<Vec<usize>>,
    dims: Vec<usize>,
}

impl SparseBinaryMatrix {
    pub fn from_columns(columns: Vec<Vec<usize>>, dims: Vec<usize>) -> Self {
        assert_eq!(columns.len(), dims.len());
        debug_assert!(columns.iter().all(|c| c.windows(2).all(|w| w[0] < w[1])));
        Self { columns, dims }
    }

    pub fn size(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    pub fn dim(&self, j: usize) -> usize {
        self.dims[j]
    }

    /// Row of the lowest one in column `j`.
    pub fn low(&self, j: usize) -> Option<usize> {
        self.columns[j].last().copied()
    }

    pub fn ones(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }
}

/// Column `j` lists the faces of simplex `j`; signs vanish mod 2.
pub fn total_boundary_matrix(f: &Filtration) -> SparseBinaryMatrix {
    let (columns, dims) = f
        .simplices()
        .iter()
        .map(|s| (s.faces.clone(), s.dim))
        .unzip();
    SparseBinaryMatrix { columns, dims }
}

/// `target ^= source` for sorted index lists.
fn add_column(target: &mut Vec<usize>, source: &[usize], scratch: &mut Vec<usize>) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < source.len() {
        match target[i].cmp(&source[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(source[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&target[i..]);
    scratch.extend_from_slice(&source[j..]);
    std::mem::swap(target, scratch);
}

/// Left-to-right reduction. Returns the reduced matrix and the column
/// additions performed, as `(source, target)` pairs in order.
pub fn reduce_logged(m: &SparseBinaryMatrix) -> (SparseBinaryMatrix, Vec<(usize, usize)>) {
    let mut r = m.clone();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; m.size()];
    let mut log = Vec::new();
    let mut scratch = Vec::new();
    for j in 0..r.size() {
        while let Some(low) = r.low(j) {
            match pivot_of_row[low] {
                Some(k) => {
                    let (left, right) = r.columns.split_at_mut(j);
                    add_column(&mut right[0], &left[k], &mut scratch);
                    log.push((k, j));
                }
                None => {
                    pivot_of_row[low] = Some(j);
                    break;
                }
            }
        }
    }
    (r, log)
}

/// Reduces `m` so that nonzero columns have pairwise distinct lowest ones,
/// using only additions of earlier columns into later ones.
pub fn reduce(m: &SparseBinaryMatrix) -> SparseBinaryMatrix {
    reduce_logged(m).0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub dim: usize,
    pub birth: f64,
    /// For open bars, the final threshold processed (1.0 once normalised).
    pub death: f64,
    pub open: bool,
}

impl Bar {
    pub fn lifespan(&self) -> f64 {
        self.death - self.birth
    }

    pub fn alive_at(&self, eps: f64) -> bool {
        self.birth <= eps && (self.open || eps < self.death)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarcodeMeta {
    pub metric: String,
    pub max_dim: usize,
    pub normalized: bool,
    pub points: usize,
}

/// Persistence intervals of one filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct Barcode {
    /// Positive-length and open bars, sorted by (dim, birth, death).
    pub bars: Vec<Bar>,
    /// Classes born and killed at the same threshold.
    pub zero_length: Vec<Bar>,
    pub meta: BarcodeMeta,
}

impl Barcode {
    pub fn bars_of_dim(&self, dim: usize) -> impl Iterator<Item = &Bar> + '_ {
        self.bars.iter().filter(move |b| b.dim == dim)
    }

    /// Bars of each dimension alive at `eps`.
    pub fn live_counts(&self, eps: f64) -> Vec<usize> {
        let mut out = vec![0; self.meta.max_dim + 1];
        for b in self.bars.iter().filter(|b| b.alive_at(eps)) {
            out[b.dim] += 1;
        }
        out
    }

    pub fn open_count(&self, dim: usize) -> usize {
        self.bars_of_dim(dim).filter(|b| b.open).count()
    }

    pub(crate) fn sort(&mut self) {
        let key = |a: &Bar, b: &Bar| {
            a.dim
                .cmp(&b.dim)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
                .then(a.open.cmp(&b.open))
        };
        self.bars.sort_by(key);
        self.zero_length.sort_by(key);
    }
}

/// Reads births and deaths off a reduced matrix. A zero column starts a
/// class; a nonzero column with lowest one at row `i` kills the class born
/// with simplex `i`. With `normalize`, every value is divided by the
/// largest distance of the source matrix and open bars end at 1.
pub fn extract_pairs(
    r: &SparseBinaryMatrix,
    f: &Filtration,
    normalize: bool,
    metric: &str,
) -> Barcode {
    let simplices = f.simplices();
    let scale = if normalize && f.max_distance() > 0.0 {
        f.max_distance()
    } else {
        1.0
    };
    let mut killed = vec![false; r.size()];
    let mut bars = Vec::new();
    let mut zero_length = Vec::new();
    for j in 0..r.size() {
        if let Some(i) = r.low(j) {
            killed[i] = true;
            let bar = Bar {
                dim: simplices[i].dim,
                birth: simplices[i].birth / scale,
                death: simplices[j].birth / scale,
                open: false,
            };
            if simplices[i].birth == simplices[j].birth {
                zero_length.push(bar);
            } else {
                bars.push(bar);
            }
        }
    }
    let end = if normalize { 1.0 } else { f.final_threshold() };
    for j in 0..r.size() {
        if r.column(j).is_empty() && !killed[j] {
            bars.push(Bar {
                dim: simplices[j].dim,
                birth: simplices[j].birth / scale,
                death: end,
                open: true,
            });
        }
    }
    let mut b = Barcode {
        bars,
        zero_length,
        meta: BarcodeMeta {
            metric: metric.to_string(),
            max_dim: f.max_dim(),
            normalized: normalize,
            points: f.vertex_count(),
        },
    };
    b.sort();
    b
}

/// Z/2 Betti numbers of the complex at `eps`, by dense elimination.
pub fn betti_numbers(f: &Filtration, eps: f64) -> Vec<usize> {
    let sets: Vec<Vec<usize>> = f
        .complex_at(eps)
        .iter()
        .map(|s| s.vertices.clone())
        .collect();
    betti_numbers_of(&sets, f.max_dim())
}

/// Z/2 Betti numbers `β_0..=β_max_dim` of the simplicial complex given by its
/// simplices' vertex sets (closed under faces). Faces are found by vertex
/// deletion, independently of any stored face lists.
pub fn betti_numbers_of(simplices: &[Vec<usize>], max_dim: usize) -> Vec<usize> {
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_dim + 2];
    for s in simplices
        .iter()
        .filter(|s| !s.is_empty() && s.len() <= max_dim + 2)
    {
        let mut s = s.clone();
        s.sort_unstable();
        by_dim[s.len() - 1].push(s);
    }
    let index: Vec<std::collections::HashMap<&[usize], usize>> = by_dim
        .iter()
        .map(|l| {
            l.iter()
                .enumerate()
                .map(|(i, s)| (s.as_slice(), i))
                .collect()
        })
        .collect();
    // rank of the boundary map from dimension k to k - 1
    let rank = |k: usize| -> usize {
        if k == 0 || k > max_dim + 1 {
            return 0;
        }
        let rows = by_dim[k - 1].len();
        let mut cols: Vec<BitRow> = by_dim[k]
            .iter()
            .map(|s| {
                let mut c = BitRow::zeros(rows);
                for skip in 0..s.len() {
                    let face: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    c.flip(index[k - 1][face.as_slice()]);
                }
                c
            })
            .collect();
        gf2_rank(&mut cols)
    };
    let ranks: Vec<usize> = (0..=max_dim + 1).map(rank).collect();
    (0..=max_dim)
        .map(|k| by_dim[k].len() - ranks[k] - ranks[k + 1])
        .collect()
}

#[derive(Clone)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn zeros(bits: usize) -> Self {
        Self(vec![0; bits.div_ceil(64)])
    }

    fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    fn highest(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + 63 - w.leading_zeros() as usize)
    }

    fn xor(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
}

fn gf2_rank(vectors: &mut [BitRow]) -> usize {
    let mut pivots: std::collections::HashMap<usize, BitRow> = std::collections::HashMap::new();
    for v in vectors.iter_mut() {
        while let Some(h) = v.highest() {
            match pivots.get(&h) {
                Some(p) => v.xor(p),
                None => {
                    pivots.insert(h, v.clone());
                    break;
                }
            }
        }
    }
    pivots.len()
}
