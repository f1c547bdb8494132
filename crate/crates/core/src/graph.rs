//! Undirected simple graphs on dense vertex identifiers, together with the
//! [`Path`] and [`Cycle`] objects every search in this crate produces.
//!
//! A [`Graph`] is immutable once built. Vertices are `0..n`, adjacency lists
//! are kept sorted so that membership tests are a binary search and every
//! iteration order is reproducible.

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex identifier. Always in `0..graph.n()`.
pub type Vertex = usize;

const ABSENT: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Immutable undirected simple graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.edge_count)
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges (in either orientation) and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut edge_count = 0;
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0];
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            edge_count += list.len();
        }
        Ok(Graph {
            adj,
            edge_count: edge_count / 2,
        })
    }

    /// Builds a graph from an edge list that is known to be valid. Duplicate
    /// pairs are merged.
    pub(crate) fn from_edges_dedup<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            debug_assert!(u != v && u < n && v < n);
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut edge_count = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Graph {
            adj,
            edge_count: edge_count / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// External neighborhood `N(S)`: vertices outside `S` with a neighbor in
    /// `S`. Returned sorted.
    pub fn neighborhood(&self, set: &[Vertex]) -> Result<Vec<Vertex>, GraphError> {
        let n = self.n();
        let mut inside = FixedBitSet::with_capacity(n);
        for &v in set {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            inside.insert(v);
        }
        let mut out = FixedBitSet::with_capacity(n);
        for &v in set {
            for &w in &self.adj[v] {
                if !inside.contains(w) {
                    out.insert(w);
                }
            }
        }
        Ok(out.ones().collect())
    }

    /// Closed neighborhood `S ∪ N(S)` as a bitset. Panics on out-of-range input.
    pub(crate) fn closed_neighborhood_bits(&self, set: &[Vertex]) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.n());
        for &v in set {
            bits.insert(v);
            for &w in &self.adj[v] {
                bits.insert(w);
            }
        }
        bits
    }

    /// True iff the graph has exactly one connected component. The graph on
    /// zero vertices is reported as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    /// Breadth-first hop distances from `source`.
    pub fn bfs_distances(&self, source: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components of the graph with `removed` deleted, each sorted,
    /// listed by smallest member.
    pub fn components_without(&self, removed: &FixedBitSet) -> Vec<Vec<Vertex>> {
        let n = self.n();
        let mut seen = removed.clone();
        seen.grow(n);
        let mut comps = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            seen.insert(start);
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen.contains(w) {
                        seen.insert(w);
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Induced subgraph on `vertices` (in the given order). Vertex `i` of the
    /// result corresponds to `vertices[i]`.
    pub fn induced(&self, vertices: &[Vertex]) -> Graph {
        let mut local = vec![ABSENT; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != ABSENT && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges_dedup(vertices.len(), edges)
    }

    /// Copy of the graph with the edge `(u, v)` present.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Graph, GraphError> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let mut g = self.clone();
        if !g.has_edge(u, v) {
            for (a, b) in [(u, v), (v, u)] {
                let pos = g.adj[a].binary_search(&b).unwrap_err();
                g.adj[a].insert(pos, b);
            }
            g.edge_count += 1;
        }
        Ok(g)
    }
}

/// A simple path in some graph, with an inverse index from vertex to
/// position.
#[derive(Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<Vertex>,
    position: Vec<usize>,
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Path").field(&self.vertices).finish()
    }
}

impl Path {
    /// Validates `vertices` as a path of `g`.
    pub fn new(g: &Graph, vertices: Vec<Vertex>) -> Result<Path, WalkViolation> {
        check_walk(g, &vertices, false)?;
        Ok(Path::from_parts(g.n(), vertices))
    }

    /// Builds a path without checking edges. `n` bounds the vertex ids.
    pub(crate) fn from_parts(n: usize, vertices: Vec<Vertex>) -> Path {
        let mut position = vec![ABSENT; n];
        for (i, &v) in vertices.iter().enumerate() {
            debug_assert_eq!(position[v], ABSENT, "repeated vertex {v}");
            position[v] = i;
        }
        Path { vertices, position }
    }

    /// Single-vertex path.
    pub fn single(n: usize, v: Vertex) -> Path {
        Path::from_parts(n, vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().expect("empty path")
    }

    /// Size of the vertex universe this path indexes into.
    pub fn universe(&self) -> usize {
        self.position.len()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        match self.position.get(v) {
            Some(&p) if p != ABSENT => Some(p),
            _ => None,
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.position(v).is_some()
    }

    pub fn reversed(&self) -> Path {
        let mut p = self.clone();
        p.reverse_from(0);
        p
    }

    /// Reverses `vertices[from..]` in place.
    pub(crate) fn reverse_from(&mut self, from: usize) {
        self.vertices[from..].reverse();
        for i in from..self.vertices.len() {
            self.position[self.vertices[i]] = i;
        }
    }

    pub(crate) fn push(&mut self, v: Vertex) {
        debug_assert_eq!(self.position[v], ABSENT);
        self.position[v] = self.vertices.len();
        self.vertices.push(v);
    }

    /// Path edges as unordered pairs `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices.windows(2).map(|w| ordered(w[0], w[1]))
    }

    /// True iff `u` and `v` are consecutive on the path.
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        match (self.position(u), self.position(v)) {
            (Some(a), Some(b)) => a.abs_diff(b) == 1,
            _ => false,
        }
    }
}

/// A cycle given by its cyclic vertex order; the closing edge is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle(Vec<Vertex>);

impl Cycle {
    /// Validates `vertices` as a cycle of `g` (of any length).
    pub fn new(g: &Graph, vertices: Vec<Vertex>) -> Result<Cycle, WalkViolation> {
        validate_cycle(g, &vertices, false)?;
        Ok(Cycle(vertices))
    }

    pub(crate) fn from_vec_unchecked(vertices: Vec<Vertex>) -> Cycle {
        Cycle(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Cycle edges including the closing one, as `(min, max)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| ordered(self.0[i], self.0[(i + 1) % k]))
    }

    pub fn contains_edge(&self, u: Vertex, v: Vertex) -> bool {
        let e = ordered(u, v);
        self.edges().any(|f| f == e)
    }

    /// One line of space-separated vertex ids.
    pub fn to_line(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        parts.join(" ")
    }
}

/// The first violated condition found when validating a path or cycle.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WalkViolation {
    #[error("empty vertex sequence")]
    Empty,
    #[error("a cycle needs at least 3 vertices, got {len}")]
    TooShort { len: usize },
    #[error("vertex {vertex} out of range (n = {n})")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error("vertex {vertex} repeated")]
    RepeatedVertex { vertex: Vertex },
    #[error("({u}, {v}) is not an edge")]
    MissingEdge { u: Vertex, v: Vertex },
    #[error("length {len} differs from n = {n}")]
    NotSpanning { len: usize, n: usize },
}

/// The edge `(u, v)` as `(min, max)`.
pub fn ordered(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn check_walk(g: &Graph, seq: &[Vertex], spanning: bool) -> Result<(), WalkViolation> {
    if seq.is_empty() {
        return Err(WalkViolation::Empty);
    }
    let n = g.n();
    let mut seen = FixedBitSet::with_capacity(n);
    for &v in seq {
        if v >= n {
            return Err(WalkViolation::OutOfRange { vertex: v, n });
        }
        if seen.put(v) {
            return Err(WalkViolation::RepeatedVertex { vertex: v });
        }
    }
    for w in seq.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(WalkViolation::MissingEdge { u: w[0], v: w[1] });
        }
    }
    if spanning && seq.len() != n {
        return Err(WalkViolation::NotSpanning { len: seq.len(), n });
    }
    Ok(())
}

/// Checks that `seq` is a path of `g`; with `hamilton` set it must also
/// visit every vertex.
pub fn validate_path(g: &Graph, seq: &[Vertex], hamilton: bool) -> Result<(), WalkViolation> {
    check_walk(g, seq, hamilton)
}

/// Checks that `seq` is a cycle of `g` (closing edge implicit); with
/// `hamilton` set it must also have length `n`.
pub fn validate_cycle(g: &Graph, seq: &[Vertex], hamilton: bool) -> Result<(), WalkViolation> {
    check_walk(g, seq, false)?;
    if seq.len() < 3 {
        return Err(WalkViolation::TooShort { len: seq.len() });
    }
    let (a, b) = (seq[seq.len() - 1], seq[0]);
    if !g.has_edge(a, b) {
        return Err(WalkViolation::MissingEdge { u: a, v: b });
    }
    if hamilton && seq.len() != g.n() {
        return Err(WalkViolation::NotSpanning {
            len: seq.len(),
            n: g.n(),
        });
    }
    Ok(())
}
