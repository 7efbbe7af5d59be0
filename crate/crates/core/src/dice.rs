//! Dice, beating relations and distances on the non-transitive dice graph.
//!
//! All arithmetic here is exact: win counts are integers, shortest paths are
//! hop counts, the similarity distance is kept squared as an integer and the
//! foliation-symmetry constants are rationals. Rounding happens only when a
//! [`DistanceMatrix`] is assembled.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::{Deserialize, Serialize};

use crate::metric::FLOAT_TOLERANCE;
use crate::{DistanceMatrix, Error, Result};

/// Node budget for [`longest_cycle`] when the caller has no preference.
pub const DEFAULT_CYCLE_BUDGET: usize = 12;

/// A die as the multiset of its faces, kept sorted non-decreasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Die {
    faces: Vec<u32>,
}

impl Die {
    /// Canonicalises `faces`; every face must be at least 1.
    pub fn new(mut faces: Vec<u32>) -> Result<Self> {
        if faces.is_empty() || faces.contains(&0) {
            return Err(Error::InvalidDie {
                faces,
                reason: "needs at least one face, all faces >= 1".into(),
            });
        }
        faces.sort_unstable();
        Ok(Self { faces })
    }

    pub fn faces(&self) -> &[u32] {
        &self.faces
    }

    pub fn sides(&self) -> usize {
        self.faces.len()
    }

    pub fn total(&self) -> u32 {
        self.faces.iter().sum()
    }

    /// Concatenated digits (`112566`); faces above 9 are joined with `.`.
    pub fn label(&self) -> String {
        let sep = if self.faces.iter().any(|&f| f > 9) {
            "."
        } else {
            ""
        };
        self.faces
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for Die {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Die {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidDie {
            faces: Vec::new(),
            reason: format!("cannot parse `{s}`"),
        };
        let faces = if s.contains('.') {
            s.split('.')
                .map(|t| t.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?
        };
        Die::new(faces)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiceSpace {
    pub sides: usize,
    pub max_face: u32,
    pub face_sum: Option<u32>,
    pub dice: Vec<Die>,
}

impl DiceSpace {
    pub fn len(&self) -> usize {
        self.dice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dice.is_empty()
    }
}

/// All canonical `sides`-faced dice over `1..=max_face` whose faces sum to
/// `face_sum`, in lexicographic order. Infeasible sums give an empty space.
pub fn enumerate_dice(sides: usize, max_face: u32, face_sum: u32) -> DiceSpace {
    let mut dice = Vec::new();
    let mut current = Vec::with_capacity(sides);
    if sides > 0 && max_face > 0 {
        fill(&mut current, sides, 1, max_face, face_sum, &mut dice);
    }
    DiceSpace {
        sides,
        max_face,
        face_sum: Some(face_sum),
        dice,
    }
}

fn fill(cur: &mut Vec<u32>, sides: usize, min: u32, max: u32, remaining: u32, out: &mut Vec<Die>) {
    let left = (sides - cur.len()) as u32;
    if left == 0 {
        if remaining == 0 {
            out.push(Die { faces: cur.clone() });
        }
        return;
    }
    for f in min..=max {
        // the remaining faces are all >= f and <= max
        if f * left > remaining {
            break;
        }
        if f + (left - 1) * max < remaining {
            continue;
        }
        cur.push(f);
        fill(cur, sides, f, max, remaining - f, out);
        cur.pop();
    }
}

/// Exhaustive face-pair outcome counts of rolling `x` against `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WinCount {
    pub wins: u32,
    pub losses: u32,
    pub ties: u32,
}

impl WinCount {
    pub fn total(&self) -> u32 {
        self.wins + self.losses + self.ties
    }

    /// `wins/total`, as printed on graph edges.
    pub fn label(&self) -> String {
        format!("{}/{}", self.wins, self.total())
    }

    pub fn probability(&self) -> Ratio<u32> {
        Ratio::new(self.wins, self.total())
    }
}

pub fn beating_probability(x: &Die, y: &Die) -> Result<WinCount> {
    if x.sides() != y.sides() {
        return Err(Error::SideMismatch(x.sides(), y.sides()));
    }
    let mut c = WinCount {
        wins: 0,
        losses: 0,
        ties: 0,
    };
    for a in &x.faces {
        for b in &y.faces {
            match a.cmp(b) {
                std::cmp::Ordering::Greater => c.wins += 1,
                std::cmp::Ordering::Less => c.losses += 1,
                std::cmp::Ordering::Equal => c.ties += 1,
            }
        }
    }
    Ok(c)
}

/// How ties count when deciding whether one die beats another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieConvention {
    /// `wins / n² > 1/2`.
    Strict,
    /// `wins > losses`.
    Majority,
}

impl TieConvention {
    pub fn decides(self, c: WinCount) -> bool {
        match self {
            Self::Strict => 2 * c.wins > c.total(),
            Self::Majority => c.wins > c.losses,
        }
    }
}

impl FromStr for TieConvention {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strict" => Ok(Self::Strict),
            "majority" => Ok(Self::Majority),
            _ => Err(format!("unknown tie convention `{s}` (strict|majority)")),
        }
    }
}

impl fmt::Display for TieConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Strict => "strict",
            Self::Majority => "majority",
        })
    }
}

pub fn beats(x: &Die, y: &Die, convention: TieConvention) -> Result<bool> {
    Ok(convention.decides(beating_probability(x, y)?))
}

/// Directed graph on dice with an edge `x -> y` whenever `x` beats `y`.
#[derive(Debug, Clone)]
pub struct BeatingGraph {
    nodes: Vec<Die>,
    out: Vec<Vec<(usize, WinCount)>>,
    convention: TieConvention,
}

impl BeatingGraph {
    pub fn nodes(&self) -> &[Die] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn convention(&self) -> TieConvention {
        self.convention
    }

    pub fn index_of(&self, die: &Die) -> Option<usize> {
        self.nodes.iter().position(|d| d == die)
    }

    /// Out-neighbours of node `i` with the exact win counts, ascending by index.
    pub fn successors(&self, i: usize) -> &[(usize, WinCount)] {
        &self.out[i]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out[from].iter().any(|&(j, _)| j == to)
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, WinCount)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, succ)| succ.iter().map(move |&(j, c)| (i, j, c)))
    }

    /// Subgraph on `keep` (indices into this graph), in the given order.
    pub fn induced(&self, keep: &[usize]) -> BeatingGraph {
        let mut remap = vec![usize::MAX; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let out = keep
            .iter()
            .map(|&old| {
                let mut succ: Vec<_> = self.out[old]
                    .iter()
                    .filter(|(j, _)| remap[*j] != usize::MAX)
                    .map(|&(j, c)| (remap[j], c))
                    .collect();
                succ.sort_by_key(|&(j, _)| j);
                succ
            })
            .collect();
        BeatingGraph {
            nodes: keep.iter().map(|&i| self.nodes[i].clone()).collect(),
            out,
            convention: self.convention,
        }
    }

    /// Subgraph on the given dice; errors if one of them is not a node.
    pub fn restrict_to(&self, dice: &[Die]) -> Result<BeatingGraph> {
        let keep = dice
            .iter()
            .map(|d| {
                self.index_of(d).ok_or_else(|| Error::InvalidDie {
                    faces: d.faces.clone(),
                    reason: "not a node of the graph".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.induced(&keep))
    }

    /// Hop counts from `source` along directed edges; `None` when unreachable.
    pub fn distances_from(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &(v, _) in &self.out[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

pub fn build_beating_graph(space: &DiceSpace, convention: TieConvention) -> Result<BeatingGraph> {
    build_graph_on(&space.dice, convention)
}

pub fn build_graph_on(dice: &[Die], convention: TieConvention) -> Result<BeatingGraph> {
    let mut out = vec![Vec::new(); dice.len()];
    for (i, x) in dice.iter().enumerate() {
        for (j, y) in dice.iter().enumerate() {
            if i == j {
                continue;
            }
            let c = beating_probability(x, y)?;
            if convention.decides(c) {
                out[i].push((j, c));
            }
        }
    }
    Ok(BeatingGraph {
        nodes: dice.to_vec(),
        out,
        convention,
    })
}

/// Indices of nodes lying on some directed cycle, i.e. members of a strongly
/// connected component with at least two nodes. Ascending.
pub fn non_transitive_indices(g: &BeatingGraph) -> Vec<usize> {
    let mut pg = DiGraph::<(), ()>::with_capacity(g.len(), g.edge_count());
    for _ in 0..g.len() {
        pg.add_node(());
    }
    for (i, j, _) in g.edges() {
        pg.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
    }
    let mut keep: Vec<usize> = tarjan_scc(&pg)
        .into_iter()
        .filter(|c| c.len() >= 2)
        .flatten()
        .map(NodeIndex::index)
        .collect();
    keep.sort_unstable();
    keep
}

pub fn non_transitive_subset(g: &BeatingGraph) -> DiceSpace {
    let dice: Vec<Die> = non_transitive_indices(g)
        .into_iter()
        .map(|i| g.nodes[i].clone())
        .collect();
    DiceSpace {
        sides: dice.first().map_or(0, Die::sides),
        max_face: dice
            .iter()
            .flat_map(|d| d.faces.last().copied())
            .max()
            .unwrap_or(0),
        face_sum: None,
        dice,
    }
}

/// A longest simple directed cycle, as node indices starting from its
/// smallest index. Empty for acyclic graphs. The search is exhaustive, so
/// graphs larger than `budget` nodes are refused.
pub fn longest_cycle_indices(g: &BeatingGraph, budget: usize) -> Result<Vec<usize>> {
    if g.len() > budget {
        return Err(Error::BudgetExceeded {
            nodes: g.len(),
            budget,
        });
    }
    let mut best = Vec::new();
    let mut on_path = vec![false; g.len()];
    let mut path = Vec::new();
    for start in 0..g.len() {
        if best.len() >= g.len() - start {
            break;
        }
        path.push(start);
        on_path[start] = true;
        extend_cycle(g, start, &mut path, &mut on_path, &mut best);
        on_path[start] = false;
        path.pop();
    }
    Ok(best)
}

fn extend_cycle(
    g: &BeatingGraph,
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    best: &mut Vec<usize>,
) {
    let last = *path.last().unwrap();
    for &(next, _) in &g.out[last] {
        if next == start {
            if path.len() > best.len() {
                best.clone_from(path);
            }
        } else if next > start && !on_path[next] {
            on_path[next] = true;
            path.push(next);
            extend_cycle(g, start, path, on_path, best);
            path.pop();
            on_path[next] = false;
        }
    }
}

pub fn longest_cycle(g: &BeatingGraph, budget: usize) -> Result<Vec<Die>> {
    Ok(longest_cycle_indices(g, budget)?
        .into_iter()
        .map(|i| g.nodes[i].clone())
        .collect())
}

/// Hops from `x` to `y` plus hops from `y` back to `x`.
pub fn shortest_path_distance(g: &BeatingGraph, x: &Die, y: &Die) -> Result<u32> {
    let missing = |d: &Die| Error::InvalidDie {
        faces: d.faces.clone(),
        reason: "not a node of the graph".into(),
    };
    let i = g.index_of(x).ok_or_else(|| missing(x))?;
    let j = g.index_of(y).ok_or_else(|| missing(y))?;
    let there = g.distances_from(i)[j];
    let back = g.distances_from(j)[i];
    match (there, back) {
        (Some(a), Some(b)) => Ok(a + b),
        (None, _) => Err(unreachable(g, i, j)),
        (_, None) => Err(unreachable(g, j, i)),
    }
}

fn unreachable(g: &BeatingGraph, from: usize, to: usize) -> Error {
    Error::Unreachable {
        from: g.nodes[from].label(),
        to: g.nodes[to].label(),
    }
}

/// All-pairs symmetrised shortest path matrix, by one BFS per node.
pub fn shortest_path_matrix(g: &BeatingGraph) -> Result<Vec<Vec<u32>>> {
    let n = g.len();
    let mut directed = Vec::with_capacity(n);
    for i in 0..n {
        let row = g.distances_from(i);
        if let Some(j) = row.iter().position(Option::is_none) {
            return Err(unreachable(g, i, j));
        }
        directed.push(row.into_iter().map(Option::unwrap).collect::<Vec<u32>>());
    }
    Ok((0..n)
        .map(|i| (0..n).map(|j| directed[i][j] + directed[j][i]).collect())
        .collect())
}

/// Squared similarity distances: for each pair `(i, j)`, the squared
/// Euclidean distance between columns `i` and `j` of `d` once rows `i` and
/// `j` are both deleted.
pub fn similarity_squared(d: &[Vec<u32>]) -> Vec<Vec<u64>> {
    let n = d.len();
    let mut out = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let s: u64 = (0..n)
                .filter(|&k| k != i && k != j)
                .map(|k| {
                    let diff = d[k][i].abs_diff(d[k][j]) as u64;
                    diff * diff
                })
                .sum();
            out[i][j] = s;
            out[j][i] = s;
        }
    }
    out
}

pub fn similarity_matrix(d: &[Vec<u32>]) -> Vec<Vec<f64>> {
    similarity_squared(d)
        .into_iter()
        .map(|row| row.into_iter().map(|s| (s as f64).sqrt()).collect())
        .collect()
}

fn require_standard_six(x: &Die, what: &'static str) -> Result<()> {
    if x.sides() != 6 || x.faces.iter().any(|&f| f > 6) {
        return Err(Error::UnsupportedDiceSpace(what));
    }
    Ok(())
}

/// `x₁ − 1 + 6 − x₆`.
pub fn foliation(x: &Die) -> Result<i64> {
    require_standard_six(x, "the foliation constant")?;
    Ok(x.faces[0] as i64 - 1 + 6 - x.faces[5] as i64)
}

/// Which faces the symmetry constant pairs up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingVariant {
    /// `(d₁,d₅), (d₂,d₄), (d₃,d₃)`.
    Literal,
    /// `(d₁,d₆), (d₂,d₅), (d₃,d₄)`.
    Opposite,
}

impl FromStr for PairingVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "literal" => Ok(Self::Literal),
            "opposite" => Ok(Self::Opposite),
            _ => Err(format!("unknown symmetry pairing `{s}` (literal|opposite)")),
        }
    }
}

impl fmt::Display for PairingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Literal => "literal",
            Self::Opposite => "opposite",
        })
    }
}

/// `Σ_{i=1..3} ((dᵢ + d_pair(i))/2 − 7/2)²`.
pub fn symmetry(x: &Die, pairing: PairingVariant) -> Result<Ratio<i64>> {
    if x.sides() != 6 {
        return Err(Error::UnsupportedDiceSpace("the symmetry constant"));
    }
    let n = 6;
    let sum: i64 = (0..3)
        .map(|i| {
            let partner = match pairing {
                PairingVariant::Literal => n - i - 2,
                PairingVariant::Opposite => n - i - 1,
            };
            let t = x.faces[i] as i64 + x.faces[partner] as i64 - 7;
            t * t
        })
        .sum();
    Ok(Ratio::new(sum, 4))
}

fn foliation_symmetry(x: &Die, pairing: PairingVariant) -> Result<Ratio<i64>> {
    Ok(symmetry(x, pairing)? + foliation(x)?)
}

/// `|(s(X) + f(X)) − (s(Y) + f(Y))|`.
pub fn foliation_symmetry_distance(
    x: &Die,
    y: &Die,
    pairing: PairingVariant,
) -> Result<Ratio<i64>> {
    let d = foliation_symmetry(x, pairing)? - foliation_symmetry(y, pairing)?;
    Ok(if d < Ratio::from_integer(0) { -d } else { d })
}

pub fn euclidean_dice_squared(x: &Die, y: &Die) -> Result<u64> {
    if x.sides() != y.sides() {
        return Err(Error::SideMismatch(x.sides(), y.sides()));
    }
    Ok(x.faces
        .iter()
        .zip(&y.faces)
        .map(|(a, b)| {
            let d = a.abs_diff(*b) as u64;
            d * d
        })
        .sum())
}

pub fn euclidean_dice(x: &Die, y: &Die) -> Result<f64> {
    Ok((euclidean_dice_squared(x, y)? as f64).sqrt())
}

/// Exact distances on a dice graph, before conversion to floating point.
#[derive(Debug, Clone)]
pub struct DiceDistances {
    pub dice: Vec<Die>,
    pub shortest_path: Vec<Vec<u32>>,
    pub similarity_squared: Vec<Vec<u64>>,
    /// `s(X) + f(X)` per die; `None` outside the standard six-sided space.
    pub foliation_symmetry: Option<Vec<Ratio<i64>>>,
}

impl DiceDistances {
    pub fn compute(g: &BeatingGraph, pairing: PairingVariant) -> Result<Self> {
        let shortest_path = shortest_path_matrix(g)?;
        let similarity_squared = similarity_squared(&shortest_path);
        let foliation_symmetry = g
            .nodes
            .iter()
            .map(|d| foliation_symmetry(d, pairing))
            .collect::<Result<Vec<_>>>()
            .ok();
        Ok(Self {
            dice: g.nodes.clone(),
            shortest_path,
            similarity_squared,
            foliation_symmetry,
        })
    }

    fn labels(&self) -> Vec<String> {
        self.dice.iter().map(Die::label).collect()
    }

    pub fn shortest_path_matrix(&self) -> DistanceMatrix {
        let sp = &self.shortest_path;
        DistanceMatrix::from_fn(self.dice.len(), |i, j| sp[i][j] as f64)
            .with_labels(self.labels())
            .with_tolerance(0.0)
    }

    pub fn similarity_matrix(&self) -> DistanceMatrix {
        let sq = &self.similarity_squared;
        DistanceMatrix::from_fn(self.dice.len(), |i, j| (sq[i][j] as f64).sqrt())
            .with_labels(self.labels())
            .with_tolerance(FLOAT_TOLERANCE)
    }

    pub fn foliation_symmetry_matrix(&self) -> Result<DistanceMatrix> {
        let fs = self
            .foliation_symmetry
            .as_ref()
            .ok_or(Error::UnsupportedDiceSpace(
                "the foliation-symmetry distance",
            ))?;
        Ok(DistanceMatrix::from_fn(self.dice.len(), |i, j| {
            let d = fs[i] - fs[j];
            let d = if d < Ratio::from_integer(0) { -d } else { d };
            *d.numer() as f64 / *d.denom() as f64
        })
        .with_labels(self.labels())
        .with_tolerance(0.0))
    }

    pub fn euclidean_matrix(&self) -> Result<DistanceMatrix> {
        euclidean_dice_matrix(&self.dice)
    }
}

pub fn euclidean_dice_matrix(dice: &[Die]) -> Result<DistanceMatrix> {
    let mut sq = vec![vec![0u64; dice.len()]; dice.len()];
    for i in 0..dice.len() {
        for j in i + 1..dice.len() {
            sq[i][j] = euclidean_dice_squared(&dice[i], &dice[j])?;
        }
    }
    Ok(
        DistanceMatrix::from_fn(dice.len(), |i, j| (sq[i][j] as f64).sqrt())
            .with_labels(dice.iter().map(Die::label).collect())
            .with_tolerance(FLOAT_TOLERANCE),
    )
}
