//! Simple undirected graphs with a canonical indexing of the complement
//! ("fill edges"), chordality testing and chordless-cycle detection.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("graph is disconnected: vertex {unreachable} is not reachable from vertex 0")]
    Disconnected { unreachable: Vertex },
    #[error("fill index {index} out of range (graph has {mc} fill edges)")]
    FillOutOfRange { index: usize, mc: usize },
    #[error("pair {{{0}, {1}}} is an edge of the graph, not a fill edge")]
    NotAFillEdge(Vertex, Vertex),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
}

/// Position of a fill edge (a vertex pair missing from the graph) in the
/// canonical order: pairs `{u, v}`, `u < v`, sorted lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FillIndex(pub usize);

impl FillIndex {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for FillIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
pub fn ordered(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

const NO_FILL: u32 = u32::MAX;

/// Immutable simple connected graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
    matrix: Vec<bool>,
    fill: Vec<(Vertex, Vertex)>,
    fill_of: Vec<u32>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph, dropping duplicate edges. Self-loops, out-of-range
    /// vertices and disconnected inputs are rejected.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let g = Self::build(n, edges)?;
        if let Some(unreachable) = g.first_unreachable() {
            return Err(GraphError::Disconnected { unreachable });
        }
        Ok(g)
    }

    fn build(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert(ordered(u, v));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut matrix = vec![false; n * n];
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            matrix[u * n + v] = true;
            matrix[v * n + u] = true;
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut fill = Vec::with_capacity(n * (n - 1) / 2 - edges.len());
        let mut fill_of = vec![NO_FILL; n * n];
        for u in 0..n {
            for v in u + 1..n {
                if !matrix[u * n + v] {
                    let idx = fill.len() as u32;
                    fill_of[u * n + v] = idx;
                    fill_of[v * n + u] = idx;
                    fill.push((u, v));
                }
            }
        }
        Ok(Graph {
            n,
            edges,
            adj,
            matrix,
            fill,
            fill_of,
        })
    }

    fn first_unreachable(&self) -> Option<Vertex> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::new(n, &edges).expect("complete graph is valid")
    }

    pub fn cycle(k: usize) -> Self {
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::new(k, &edges).expect("cycle graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Number of fill edges, `n(n-1)/2 - m`.
    pub fn mc(&self) -> usize {
        self.fill.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.matrix[u * self.n + v]
    }

    #[inline]
    pub fn fill_index(&self, u: Vertex, v: Vertex) -> Option<FillIndex> {
        if u == v {
            return None;
        }
        match self.fill_of[u * self.n + v] {
            NO_FILL => None,
            i => Some(FillIndex(i as usize)),
        }
    }

    /// The pair a fill index denotes.
    pub fn fill_pair(&self, f: FillIndex) -> (Vertex, Vertex) {
        self.fill[f.0]
    }

    pub fn fill_pairs(&self) -> &[(Vertex, Vertex)] {
        &self.fill
    }

    pub fn check_fill(&self, f: FillIndex) -> Result<(), GraphError> {
        if f.0 < self.fill.len() {
            Ok(())
        } else {
            Err(GraphError::FillOutOfRange {
                index: f.0,
                mc: self.fill.len(),
            })
        }
    }

    /// `G + F`. The original graph is left untouched.
    pub fn apply_completion(&self, fill: &[FillIndex]) -> Result<Graph, GraphError> {
        let mut edges = self.edges.clone();
        for &f in fill {
            self.check_fill(f)?;
            edges.push(self.fill[f.0]);
        }
        Self::build(self.n, &edges)
    }

    /// Induced subgraph on `vertices`, relabelled `0..vertices.len()` in the
    /// given order. The result may be disconnected, so it is not returned as
    /// a [`Graph`] but as an adjacency structure.
    pub fn induced(&self, vertices: &[Vertex]) -> Adjacency {
        let k = vertices.len();
        let mut adj = Adjacency::empty(k);
        for i in 0..k {
            for j in i + 1..k {
                if self.has_edge(vertices[i], vertices[j]) {
                    adj.add_edge(i, j);
                }
            }
        }
        adj
    }

    /// Induced subgraph as a [`Graph`]; fails if it is disconnected.
    pub fn induced_graph(&self, vertices: &[Vertex]) -> Result<Graph, GraphError> {
        let k = vertices.len();
        let mut edges = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                if self.has_edge(vertices[i], vertices[j]) {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(k, &edges)
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency {
            n: self.n,
            matrix: self.matrix.clone(),
            adj: self.adj.clone(),
        }
    }

    /// Adjacency of `G + F` for a fill set given as indices.
    pub fn adjacency_with(&self, fill: impl IntoIterator<Item = FillIndex>) -> Adjacency {
        let mut adj = self.adjacency();
        for f in fill {
            let (u, v) = self.fill[f.0];
            adj.add_edge(u, v);
        }
        adj
    }

    pub fn perfect_elimination_ordering(&self) -> Option<Vec<Vertex>> {
        self.adjacency().perfect_elimination_ordering()
    }

    pub fn is_chordal(&self) -> bool {
        self.perfect_elimination_ordering().is_some()
    }

    pub fn find_chordless_cycle(&self) -> Option<Cycle> {
        self.adjacency().find_chordless_cycle()
    }

    pub fn is_valid_completion(&self, fill: &[FillIndex]) -> bool {
        fill.iter().all(|f| f.0 < self.mc())
            && self
                .adjacency_with(fill.iter().copied())
                .perfect_elimination_ordering()
                .is_some()
    }
}

/// Mutable adjacency (matrix + sorted lists) used for working copies such
/// as `G + E(x)`. No connectivity requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    matrix: Vec<bool>,
    adj: Vec<Vec<Vertex>>,
}

impl Adjacency {
    pub fn empty(n: usize) -> Self {
        Adjacency {
            n,
            matrix: vec![false; n * n],
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.matrix[u * self.n + v]
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        if u == v || self.matrix[u * self.n + v] {
            return;
        }
        self.matrix[u * self.n + v] = true;
        self.matrix[v * self.n + u] = true;
        let pos = self.adj[u].partition_point(|&w| w < v);
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].partition_point(|&w| w < u);
        self.adj[v].insert(pos, u);
    }

    /// Maximum cardinality search followed by verification that the reverse
    /// visiting order is a perfect elimination ordering.
    pub fn perfect_elimination_ordering(&self) -> Option<Vec<Vertex>> {
        let n = self.n;
        let mut weight = vec![0usize; n];
        let mut numbered = vec![false; n];
        let mut visit = Vec::with_capacity(n);
        for _ in 0..n {
            let mut best = None;
            for v in 0..n {
                if !numbered[v] && best.is_none_or(|b: Vertex| weight[v] > weight[b]) {
                    best = Some(v);
                }
            }
            let v = best.expect("unnumbered vertex remains");
            numbered[v] = true;
            visit.push(v);
            for &w in &self.adj[v] {
                if !numbered[w] {
                    weight[w] += 1;
                }
            }
        }
        visit.reverse();
        if self.is_perfect_elimination_ordering(&visit) {
            Some(visit)
        } else {
            None
        }
    }

    pub fn is_perfect_elimination_ordering(&self, order: &[Vertex]) -> bool {
        let n = self.n;
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for &v in order {
            let later: Vec<Vertex> = self.adj[v]
                .iter()
                .copied()
                .filter(|&w| pos[w] > pos[v])
                .collect();
            let Some(&parent) = later.iter().min_by_key(|&&w| pos[w]) else {
                continue;
            };
            if later
                .iter()
                .any(|&w| w != parent && !self.has_edge(parent, w))
            {
                return false;
            }
        }
        true
    }

    pub fn is_chordal(&self) -> bool {
        self.perfect_elimination_ordering().is_some()
    }

    pub fn find_chordless_cycle(&self) -> Option<Cycle> {
        self.chordless_cycles(1).into_iter().next()
    }

    /// Up to `max` distinct (after canonicalization) chordless cycles of
    /// length at least four.
    ///
    /// For every triple `(v, w, u)` with `vw, wu` edges and `vu` a non-edge,
    /// the shortest `v`-`u` path whose interior avoids `w` and all of its
    /// neighbours closes a chordless cycle through `w`. Triples are visited
    /// in ascending `(v, w, u)` order and BFS explores neighbours in
    /// ascending order, so the output is deterministic.
    pub fn chordless_cycles(&self, max: usize) -> Vec<Cycle> {
        let n = self.n;
        let mut found: Vec<Cycle> = Vec::new();
        let mut seen = BTreeSet::new();
        if max == 0 {
            return found;
        }
        let mut dist = vec![usize::MAX; n];
        let mut pred = vec![usize::MAX; n];
        let mut blocked = vec![false; n];
        let mut queue = VecDeque::new();
        for v in 0..n {
            for &w in &self.adj[v] {
                let targets: Vec<Vertex> = self.adj[w]
                    .iter()
                    .copied()
                    .filter(|&u| u > v && !self.has_edge(u, v))
                    .collect();
                if targets.is_empty() {
                    continue;
                }
                // BFS from v through vertices outside N[w].
                blocked.iter_mut().for_each(|b| *b = false);
                blocked[w] = true;
                for &y in &self.adj[w] {
                    blocked[y] = true;
                }
                dist.iter_mut().for_each(|d| *d = usize::MAX);
                dist[v] = 0;
                queue.clear();
                queue.push_back(v);
                while let Some(a) = queue.pop_front() {
                    for &b in &self.adj[a] {
                        if !blocked[b] && dist[b] == usize::MAX {
                            dist[b] = dist[a] + 1;
                            pred[b] = a;
                            queue.push_back(b);
                        }
                    }
                }
                for u in targets {
                    // Interior must be non-empty: the last interior vertex is
                    // a reached, unblocked neighbour of u.
                    let last = self.adj[u]
                        .iter()
                        .copied()
                        .filter(|&y| y != v && !blocked[y] && dist[y] != usize::MAX)
                        .min_by_key(|&y| (dist[y], y));
                    let Some(mut y) = last else { continue };
                    let mut path = vec![u];
                    while y != v {
                        path.push(y);
                        y = pred[y];
                    }
                    path.push(v);
                    path.reverse();
                    path.push(w);
                    let cycle = Cycle { vertices: path }.canonical();
                    debug_assert!(self.is_chordless(&cycle));
                    if !self.is_chordless(&cycle) {
                        continue;
                    }
                    if seen.insert(cycle.vertices.clone()) {
                        found.push(cycle);
                        if found.len() >= max {
                            return found;
                        }
                    }
                }
            }
        }
        found
    }

    /// Every exterior pair is an edge and every interior pair is a non-edge.
    pub fn is_chordless(&self, c: &Cycle) -> bool {
        c.len() >= 4
            && c.exterior().all(|(a, b)| self.has_edge(a, b))
            && c.interior().all(|(a, b)| !self.has_edge(a, b))
    }
}

/// Ordered list of distinct vertices `(v_0, ..., v_{k-1})`, `k >= 4`, read
/// cyclically. The exterior is the `k` consecutive pairs (with wraparound);
/// the interior is every other pair of its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    vertices: Vec<Vertex>,
}

impl Cycle {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, GraphError> {
        Self::with_min_len(vertices, 4)
    }

    /// Like [`Cycle::new`] but with a custom minimum length (sub-cycles used
    /// by lifting arguments may be triangles).
    pub fn with_min_len(vertices: Vec<Vertex>, min_len: usize) -> Result<Self, GraphError> {
        if vertices.len() < min_len {
            return Err(GraphError::InvalidCycle(format!(
                "needs at least {min_len} vertices, got {}",
                vertices.len()
            )));
        }
        let distinct: BTreeSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(GraphError::InvalidCycle("repeated vertex".into()));
        }
        Ok(Cycle { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex at position `i` taken modulo the length.
    pub fn at(&self, i: isize) -> Vertex {
        let k = self.vertices.len() as isize;
        self.vertices[i.rem_euclid(k) as usize]
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    /// Cyclic distance between positions `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> usize {
        let k = self.vertices.len();
        let d = i.abs_diff(j) % k;
        d.min(k - d)
    }

    pub fn exterior(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| ordered(self.vertices[i], self.vertices[(i + 1) % k]))
    }

    /// Interior pairs as position pairs `(i, j)`, `i < j`.
    pub fn interior_positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.vertices.len();
        (0..k).flat_map(move |i| {
            (i + 1..k)
                .filter(move |&j| self.distance(i, j) >= 2)
                .map(move |j| (i, j))
        })
    }

    pub fn interior(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.interior_positions()
            .map(|(i, j)| ordered(self.vertices[i], self.vertices[j]))
    }

    /// Rotated so the smallest vertex comes first, then oriented so the
    /// second vertex is the smaller of its two cycle neighbours.
    pub fn canonical(&self) -> Cycle {
        let k = self.vertices.len();
        let start = (0..k).min_by_key(|&i| self.vertices[i]).unwrap_or(0);
        let next = self.vertices[(start + 1) % k];
        let prev = self.vertices[(start + k - 1) % k];
        let vertices = if next <= prev {
            (0..k).map(|i| self.vertices[(start + i) % k]).collect()
        } else {
            (0..k).map(|i| self.vertices[(start + k - i) % k]).collect()
        };
        Cycle { vertices }
    }

    /// Rotation by `r` positions (`v_r` becomes the first vertex).
    pub fn rotated(&self, r: usize) -> Cycle {
        let k = self.vertices.len();
        Cycle {
            vertices: (0..k).map(|i| self.vertices[(i + r) % k]).collect(),
        }
    }

    pub fn reversed(&self) -> Cycle {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Cycle { vertices }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Assignment of values in `[0, 1]` to the fill edges of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    values: Vec<f64>,
}

impl Point {
    pub fn new(values: Vec<f64>) -> Self {
        Point { values }
    }

    pub fn zeros(mc: usize) -> Self {
        Point {
            values: vec![0.0; mc],
        }
    }

    /// Characteristic vector `x(F)`.
    pub fn from_fill(mc: usize, fill: &[FillIndex]) -> Self {
        let mut values = vec![0.0; mc];
        for f in fill {
            values[f.0] = 1.0;
        }
        Point { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, f: FillIndex) -> f64 {
        self.values[f.0]
    }

    pub fn is_integer(&self, tol: f64) -> bool {
        self.values
            .iter()
            .all(|&v| v.abs() <= tol || (v - 1.0).abs() <= tol)
    }

    /// `E(x)`: indices at value one (rounded at 1/2).
    pub fn support(&self) -> Vec<FillIndex> {
        self.at_least(0.5)
    }

    /// `E^delta(x)`: indices with value at least `delta`.
    pub fn at_least(&self, delta: f64) -> Vec<FillIndex> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v >= delta)
            .map(|(i, _)| FillIndex(i))
            .collect()
    }
}
