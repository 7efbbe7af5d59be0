//! Incremental Vietoris-Rips filtration.
//!
//! Simplices are stored as lists of their codimension-one faces (vertices
//! store nothing). Every distinct distance in the matrix is a threshold; at
//! each threshold the edges born there are appended, then each dimension is
//! extended from the window of simplices created at this threshold only:
//! a new `(d+1)`-simplex is found by joining a new `d`-simplex `σ` with a
//! `d`-simplex that shares one `(d-1)`-face with it, and is kept only if `σ`
//! is its lowest-id new face, so each candidate is produced exactly once.

use std::collections::HashMap;
use std::ops::Range;

use crate::DistanceMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    /// Position in filtration order.
    pub id: usize,
    pub dim: usize,
    /// Ids of the `dim - 1` faces, ascending. Empty for vertices.
    pub faces: Vec<usize>,
    /// Point indices, ascending.
    pub vertices: Vec<usize>,
    pub birth: f64,
}

/// Simplices created at one threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub threshold: f64,
    /// Filtration ids created at this threshold.
    pub ids: Range<usize>,
    /// Per dimension, the `previous_size..size` window into that
    /// dimension's simplex list.
    pub windows: Vec<Range<usize>>,
}

/// Rips filtration truncated at `max_dim`, in order of
/// (birth, dimension, vertex set).
#[derive(Debug, Clone)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    by_dim: Vec<Vec<usize>>,
    levels: Vec<Level>,
    max_dim: usize,
    max_distance: f64,
    // construction state
    lookup: HashMap<Vec<usize>, usize>,
    cofaces: Vec<Vec<usize>>,
    components: UnionFind,
}

impl Filtration {
    /// The `n` vertices of an empty complex, all born at 0.
    pub fn new(n: usize, max_dim: usize) -> Self {
        let simplices = (0..n)
            .map(|i| Simplex {
                id: i,
                dim: 0,
                faces: Vec::new(),
                vertices: vec![i],
                birth: 0.0,
            })
            .collect();
        let mut by_dim = vec![Vec::new(); max_dim + 1];
        by_dim[0] = (0..n).collect();
        Self {
            simplices,
            by_dim,
            levels: Vec::new(),
            max_dim,
            max_distance: 0.0,
            lookup: HashMap::new(),
            cofaces: vec![Vec::new(); n],
            components: UnionFind::new(n),
        }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.by_dim[0].len()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Thresholds processed so far, ascending.
    pub fn thresholds(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().map(|l| l.threshold)
    }

    /// Last threshold processed, or 0 before any.
    pub fn final_threshold(&self) -> f64 {
        self.levels.last().map_or(0.0, |l| l.threshold)
    }

    /// Largest entry of the source matrix (normalisation constant).
    pub fn max_distance(&self) -> f64 {
        self.max_distance
    }

    /// Ids of the `dim`-simplices in creation order.
    pub fn ids_of_dim(&self, dim: usize) -> &[usize] {
        &self.by_dim[dim]
    }

    /// The complex at threshold `eps`: a prefix of the filtration.
    pub fn complex_at(&self, eps: f64) -> &[Simplex] {
        let end = self.simplices.partition_point(|s| s.birth <= eps);
        &self.simplices[..end]
    }

    /// Number of connected components of the current complex.
    pub fn component_count(&self) -> usize {
        self.components.count
    }

    /// Adds the edges born at `threshold` and every clique they complete,
    /// up to `max_dim`.
    pub fn expand_increment(&mut self, threshold: f64, new_edges: &[(usize, usize)]) {
        let start = self.simplices.len();
        let mut windows = vec![0..0; self.max_dim + 1];
        let v = self.vertex_count();
        windows[0] = v..v;

        if self.max_dim >= 1 {
            let mut edges: Vec<Vec<usize>> = new_edges
                .iter()
                .map(|&(a, b)| if a < b { vec![a, b] } else { vec![b, a] })
                .collect();
            edges.sort_unstable();
            edges.dedup();
            for e in &edges {
                self.components.union(e[0], e[1]);
            }
            let batch = edges.into_iter().map(|vs| (vs.clone(), vs)).collect();
            windows[1] = self.push_batch(1, threshold, batch);
        }

        for dim in 1..self.max_dim {
            let window = windows[dim].clone();
            let batch = self.cofaces_from_window(dim, window);
            windows[dim + 1] = self.push_batch(dim + 1, threshold, batch);
        }

        self.levels.push(Level {
            threshold,
            ids: start..self.simplices.len(),
            windows,
        });
    }

    /// New `(dim+1)`-simplices having at least one face in `window` of the
    /// `dim`-simplex list, as (vertex set, face ids) pairs.
    fn cofaces_from_window(
        &self,
        dim: usize,
        window: Range<usize>,
    ) -> Vec<(Vec<usize>, Vec<usize>)> {
        let first_new = match self.by_dim[dim].get(window.start) {
            Some(&id) => id,
            None => return Vec::new(),
        };
        let mut out = Vec::new();
        let mut seen = Vec::new();
        for &sigma in &self.by_dim[dim][window] {
            let s = &self.simplices[sigma];
            seen.clear();
            for &rho in &s.faces {
                for &tau in &self.cofaces[rho] {
                    if tau == sigma {
                        continue;
                    }
                    // tau = rho + {extra}
                    let extra = self.simplices[tau]
                        .vertices
                        .iter()
                        .copied()
                        .find(|x| s.vertices.binary_search(x).is_err())
                        .expect("coface adds one vertex");
                    if seen.contains(&extra) {
                        continue;
                    }
                    seen.push(extra);

                    let mut verts = s.vertices.clone();
                    let pos = verts.binary_search(&extra).unwrap_err();
                    verts.insert(pos, extra);
                    let Some(faces) = self.faces_of(&verts) else {
                        continue;
                    };
                    // sigma must be the lowest new face
                    let lowest_new = faces.iter().copied().find(|&f| f >= first_new);
                    if lowest_new == Some(sigma) {
                        out.push((verts, faces));
                    }
                }
            }
        }
        out
    }

    /// Face ids of the simplex on `verts`, if all faces exist; ascending.
    fn faces_of(&self, verts: &[usize]) -> Option<Vec<usize>> {
        let mut faces = Vec::with_capacity(verts.len());
        let mut buf = Vec::with_capacity(verts.len() - 1);
        for skip in 0..verts.len() {
            buf.clear();
            buf.extend(
                verts
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &x)| x),
            );
            let id = if buf.len() == 1 {
                buf[0]
            } else {
                *self.lookup.get(&buf)?
            };
            faces.push(id);
        }
        faces.sort_unstable();
        Some(faces)
    }

    fn push_batch(
        &mut self,
        dim: usize,
        birth: f64,
        mut batch: Vec<(Vec<usize>, Vec<usize>)>,
    ) -> Range<usize> {
        batch.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let before = self.by_dim[dim].len();
        // top-dimensional simplices are never faces of a candidate
        let register = dim < self.max_dim;
        for (vertices, faces) in batch {
            let id = self.simplices.len();
            if register {
                for &f in &faces {
                    self.cofaces[f].push(id);
                }
                self.lookup.insert(vertices.clone(), id);
            }
            self.cofaces.push(Vec::new());
            self.by_dim[dim].push(id);
            self.simplices.push(Simplex {
                id,
                dim,
                faces,
                vertices,
                birth,
            });
        }
        before..self.by_dim[dim].len()
    }
}

/// Distinct off-diagonal distances, ascending. A zero appears exactly when
/// two distinct points are at distance zero.
pub fn critical_thresholds(m: &DistanceMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = (0..m.len())
        .flat_map(|i| (i + 1..m.len()).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j))
        .collect();
    values.sort_unstable_by(f64::total_cmp);
    values.dedup();
    values
}

/// Pairs `i < j` with `m[i][j] <= eps`.
pub fn neighborhood_edges(m: &DistanceMatrix, eps: f64) -> Vec<(usize, usize)> {
    let n = m.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| m.get(i, j) <= eps)
        .collect()
}

/// Grows the filtration over every critical threshold of `m`. With
/// `stop_when_connected`, stops after the first threshold at which the
/// complex has a single connected component.
pub fn build_filtration(
    m: &DistanceMatrix,
    max_dim: usize,
    stop_when_connected: bool,
) -> Filtration {
    let n = m.len();
    let mut f = Filtration::new(n, max_dim);
    f.max_distance = m.max_entry();
    if stop_when_connected && f.component_count() <= 1 {
        return f;
    }
    let mut pairs: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (m.get(i, j), i, j))
        .collect();
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let mut edges = Vec::new();
    let mut rest = &pairs[..];
    while let Some(&(eps, _, _)) = rest.first() {
        let k = rest.partition_point(|p| p.0 == eps);
        edges.clear();
        edges.extend(rest[..k].iter().map(|&(_, i, j)| (i, j)));
        rest = &rest[k..];
        f.expand_increment(eps, &edges);
        if stop_when_connected && f.component_count() == 1 {
            break;
        }
    }
    f
}

/// Union-find over vertices, tracking the number of components.
#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    count: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            count: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.count -= 1;
        true
    }
}
