//! Undirected simple graphs on `0..n`.
//!
//! Every structure in the crate (hosts, random rounds, targets, the doubled
//! auxiliary graph) is a [`Graph`]. Adjacency is kept twice: sorted neighbour
//! lists for iteration and a bit matrix for constant-time edge queries, which
//! dominate the embedding searches.

mod embedding;
mod generate;
mod io;

pub use embedding::{is_embedding, Embedding, EmbeddingViolation};
pub use generate::{gnp_sample, make_host, min_degree_target, random_bounded_degree, HostKind, HostSpec};
pub use io::{read_edge_list, write_edge_list};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("edge probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("infeasible host: {0}")]
    InfeasibleHost(String),
}

/// Row-major `n x n` bit matrix.
#[derive(Clone, PartialEq, Eq)]
struct BitMatrix {
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self { words, data: vec![0; words * n] }
    }

    #[inline]
    fn get(&self, u: usize, v: usize) -> bool {
        self.data[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.data[u * self.words + v / 64] |= 1 << (v % 64);
    }
}

/// Incremental construction of a [`Graph`]. Re-inserting an existing edge is
/// a no-op, which makes unions and projections straightforward.
#[derive(Clone)]
pub struct GraphBuilder {
    n: usize,
    bits: BitMatrix,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self { n, bits: BitMatrix::new(n), adj: vec![Vec::new(); n], m: 0 }
    }

    /// Inserts `{u, v}`; returns `Ok(true)` if the edge is new.
    pub fn insert(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.bits.get(u, v) {
            return Ok(false);
        }
        self.bits.set(u, v);
        self.bits.set(v, u);
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.m += 1;
        Ok(true)
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.bits.get(u, v)
    }

    pub fn build(mut self) -> Graph {
        for list in &mut self.adj {
            list.sort_unstable();
        }
        Graph { n: self.n, adj: self.adj, bits: self.bits, m: self.m }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    bits: BitMatrix,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges().collect::<Vec<_>>()).finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        GraphBuilder::new(n).build()
    }

    /// Strict constructor: loops, out-of-range endpoints and duplicates are errors.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            if !b.insert(u, v)? {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        Ok(b.build())
    }

    pub fn complete(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                b.insert(u, v).expect("in range");
            }
        }
        b.build()
    }

    pub fn cycle(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        if n >= 3 {
            for u in 0..n {
                b.insert(u, (u + 1) % n).expect("in range");
            }
        } else if n == 2 {
            b.insert(0, 1).expect("in range");
        }
        b.build()
    }

    pub fn path(n: usize) -> Self {
        let mut b = GraphBuilder::new(n);
        for u in 1..n {
            b.insert(u - 1, u).expect("in range");
        }
        b.build()
    }

    pub fn complete_bipartite(a: usize, b_size: usize) -> Self {
        let mut b = GraphBuilder::new(a + b_size);
        for u in 0..a {
            for v in a..a + b_size {
                b.insert(u, v).expect("in range");
            }
        }
        b.build()
    }

    /// Vertex-disjoint copies of `h` laid out in contiguous blocks.
    pub fn disjoint_copies(h: &Graph, copies: usize) -> Self {
        let mut b = GraphBuilder::new(h.n * copies);
        for c in 0..copies {
            let off = c * h.n;
            for (u, v) in h.edges() {
                b.insert(u + off, v + off).expect("in range");
            }
        }
        b.build()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.bits.get(u, v)
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Minimum degree; `0` for the graph on no vertices.
    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn union(&self, other: &Graph) -> Result<Graph, GraphError> {
        if self.n != other.n {
            return Err(GraphError::SizeMismatch { left: self.n, right: other.n });
        }
        let mut b = self.to_builder();
        for (u, v) in other.edges() {
            b.insert(u, v)?;
        }
        Ok(b.build())
    }

    pub fn to_builder(&self) -> GraphBuilder {
        GraphBuilder { n: self.n, bits: self.bits.clone(), adj: self.adj.clone(), m: self.m }
    }

    /// Induced subgraph on `vertices`, relabelled `vertices[i] -> i`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut b = GraphBuilder::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    b.insert(i, j).expect("in range");
                }
            }
        }
        b.build()
    }

    /// Number of edges with both endpoints in `vertices`.
    pub fn edges_within(&self, vertices: &[usize]) -> usize {
        let mut count = 0;
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                if self.has_edge(u, v) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Image of the graph under the vertex permutation `perm` (`u -> perm[u]`).
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut b = GraphBuilder::new(self.n);
        for (u, v) in self.edges() {
            b.insert(perm[u], perm[v]).expect("permutation stays in range");
        }
        b.build()
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Checks the representation invariants: symmetric, loop-free adjacency
    /// consistent with the bit matrix and the edge count.
    pub fn check_invariants(&self) -> bool {
        let mut degree_sum = 0;
        for u in 0..self.n {
            let list = &self.adj[u];
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &v in list {
                if v == u || !self.bits.get(u, v) || !self.bits.get(v, u) {
                    return false;
                }
                if self.adj[v].binary_search(&u).is_err() {
                    return false;
                }
            }
            let row_bits: u32 =
                self.bits.data[u * self.bits.words..(u + 1) * self.bits.words].iter().map(|w| w.count_ones()).sum();
            if row_bits as usize != list.len() {
                return false;
            }
            degree_sum += list.len();
        }
        degree_sum == 2 * self.m
    }
}
