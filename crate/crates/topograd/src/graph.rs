//! Immutable simple graphs on dense integer vertices, plus the exact
//! rational quantities everything downstream is built on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational; no floating point appears in any density value.
pub type Rational = BigRational;

/// Build a rational from two machine integers.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn ratio_int(num: i64) -> Rational {
    Rational::from(BigInt::from(num))
}

/// Immutable undirected simple graph. Vertices are `0..n`, equality and
/// hashing are by `(n, edge set)`; labels are carried but ignored by `Eq`.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    masks: Vec<u128>,
    labels: BTreeMap<usize, String>,
}

#[derive(Serialize, Deserialize)]
struct GraphData {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<usize, String>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        GraphData {
            n: self.n,
            edges: self.edges.iter().copied().collect(),
            labels: self.labels.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let data = GraphData::deserialize(de)?;
        let g = Graph::new(data.n, data.edges).map_err(serde::de::Error::custom)?;
        Ok(g.with_labels(data.labels))
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}
impl Eq for Graph {}

impl std::hash::Hash for Graph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.edges.hash(state);
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n, self.edges.len(), self.edges)
    }
}

impl Graph {
    /// Builds a graph, rejecting loops and out-of-range endpoints.
    /// Duplicate edges collapse silently (the edge set is a set).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u},{v}) out of range for {n} vertices"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph::from_edge_set(n, set))
    }

    fn from_edge_set(n: usize, edges: BTreeSet<(usize, usize)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut masks = vec![0u128; n];
        if n <= 128 {
            for &(u, v) in &edges {
                masks[u] |= 1u128 << v;
                masks[v] |= 1u128 << u;
            }
        }
        Graph { n, edges, adj, masks, labels: BTreeMap::new() }
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_edge_set(n, BTreeSet::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        0..self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Neighbor bitmask; only valid when `n <= 128` (the search kernels
    /// check this up front).
    #[inline]
    pub fn mask(&self, v: usize) -> u128 {
        self.masks[v]
    }

    pub fn fits_mask_kernel(&self) -> bool {
        self.n <= 128
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.get(&v).map(|s| s.as_str())
    }

    pub fn labels(&self) -> &BTreeMap<usize, String> {
        &self.labels
    }

    pub fn with_labels(mut self, labels: BTreeMap<usize, String>) -> Graph {
        self.labels = labels;
        self
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        self.labels.insert(v, label.into());
    }

    /// 2|E|/|V| exactly.
    pub fn average_degree(&self) -> Result<Rational> {
        if self.n == 0 {
            return Err(Error::DegenerateInput("average degree of the empty graph".into()));
        }
        Ok(Rational::new(BigInt::from(2 * self.edges.len()), BigInt::from(self.n)))
    }

    /// Edge count of the subgraph induced by a vertex mask (n <= 128).
    pub fn edges_within_mask(&self, mask: u128) -> usize {
        let mut count = 0usize;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            count += (self.masks[v] & rest).count_ones() as usize;
        }
        count
    }

    /// Edge count of the subgraph induced by an arbitrary vertex set.
    pub fn edges_within(&self, set: &BTreeSet<usize>) -> usize {
        self.edges
            .iter()
            .filter(|(u, v)| set.contains(u) && set.contains(v))
            .count()
    }

    /// The subgraph induced by `s`, relabeled to `0..s.len()` in sorted
    /// order. Labels survive; unlabeled vertices pick up none.
    pub fn induced_subgraph(&self, s: &BTreeSet<usize>) -> Result<Graph> {
        if let Some(&v) = s.iter().find(|&&v| v >= self.n) {
            return Err(Error::invalid(format!("vertex {v} out of range")));
        }
        let order: Vec<usize> = s.iter().copied().collect();
        let index: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = BTreeSet::new();
        for &(u, v) in &self.edges {
            if let (Some(&iu), Some(&iv)) = (index.get(&u), index.get(&v)) {
                edges.insert((iu.min(iv), iu.max(iv)));
            }
        }
        let mut g = Graph::from_edge_set(order.len(), edges);
        for (i, &v) in order.iter().enumerate() {
            if let Some(l) = self.labels.get(&v) {
                g.labels.insert(i, l.clone());
            }
        }
        Ok(g)
    }

    /// Induced subgraph plus the new-index -> old-vertex map.
    pub fn induced_with_map(&self, s: &BTreeSet<usize>) -> Result<(Graph, Vec<usize>)> {
        let g = self.induced_subgraph(s)?;
        Ok((g, s.iter().copied().collect()))
    }

    /// Connected components as sorted vertex sets, in order of smallest member.
    pub fn components(&self) -> Vec<BTreeSet<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// BFS distances from `src`; unreachable = usize::MAX.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// Average degree of the subgraph induced by `set` (as a plain quantity,
/// without materializing the subgraph).
pub fn set_average_degree(g: &Graph, set: &BTreeSet<usize>) -> Result<Rational> {
    if set.is_empty() {
        return Err(Error::DegenerateInput("average degree over an empty vertex set".into()));
    }
    let m = g.edges_within(set);
    Ok(Rational::new(BigInt::from(2 * m), BigInt::from(set.len())))
}

pub fn zero_rational() -> Rational {
    Rational::zero()
}

/// A bipartition carried alongside a graph: two disjoint vertex sets.
/// Edges inside a side are allowed unless the holder demands bipartiteness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteLayout {
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
}

impl BipartiteLayout {
    pub fn new(
        left: impl IntoIterator<Item = usize>,
        right: impl IntoIterator<Item = usize>,
    ) -> BipartiteLayout {
        BipartiteLayout {
            left: left.into_iter().collect(),
            right: right.into_iter().collect(),
        }
    }

    /// Checks disjointness and range; with `require_bipartite`, also that
    /// every edge of `g` crosses between the two sides.
    pub fn validate(&self, g: &Graph, require_bipartite: bool) -> Result<()> {
        if !self.left.is_disjoint(&self.right) {
            return Err(Error::invalid("layout sides are not disjoint"));
        }
        for &v in self.left.iter().chain(self.right.iter()) {
            if v >= g.n() {
                return Err(Error::invalid(format!("layout vertex {v} out of range")));
            }
        }
        if require_bipartite {
            for (u, v) in g.edges() {
                let cross = (self.left.contains(&u) && self.right.contains(&v))
                    || (self.left.contains(&v) && self.right.contains(&u));
                if !cross {
                    return Err(Error::invalid(format!(
                        "edge ({u},{v}) does not cross the bipartition"
                    )));
                }
            }
        }
        Ok(())
    }
}
