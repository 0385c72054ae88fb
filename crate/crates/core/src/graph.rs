//! Immutable simple undirected graphs backed by per-vertex adjacency bitsets.

use std::fmt;

use crate::error::Error;

/// A simple undirected graph on vertices `0..n`.
///
/// Each vertex owns a row of `u64` words; bit `v` of row `u` is set iff
/// `{u, v}` is an edge. Rows are kept symmetric and the diagonal is always
/// clear. A `Graph` has at least one vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Graph {
    /// Builds a graph from an edge list. Repeated edges are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, Error>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut g = Graph::edgeless_unchecked(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), order: n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// The graph on `n` vertices with no edges. Panics if `n == 0`.
    pub fn edgeless(n: usize) -> Graph {
        assert!(n > 0, "a graph needs at least one vertex");
        Graph::edgeless_unchecked(n)
    }

    /// Complete graph `K_n`. Panics if `n == 0`.
    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::edgeless(n);
        for v in 1..n {
            for u in 0..v {
                g.set_edge(u, v);
            }
        }
        g
    }

    /// Path `P_n` on `n` vertices, `0 - 1 - ... - (n-1)`. Panics if `n == 0`.
    pub fn path(n: usize) -> Graph {
        let mut g = Graph::edgeless(n);
        for v in 1..n {
            g.set_edge(v - 1, v);
        }
        g
    }

    /// Cycle `C_n`. Panics if `n < 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let mut g = Graph::path(n);
        g.set_edge(0, n - 1);
        g
    }

    /// Star `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Graph {
        let mut g = Graph::edgeless(k + 1);
        for v in 1..=k {
            g.set_edge(0, v);
        }
        g
    }

    pub(crate) fn edgeless_unchecked(n: usize) -> Graph {
        let words = words_for(n);
        Graph { n, words, rows: vec![0; n * words] }
    }

    /// Only for use while a graph is still under construction inside the crate.
    #[inline]
    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    /// Number of vertices.
    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        let twice: u32 = self.rows.iter().map(|w| w.count_ones()).sum();
        twice as usize / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }

    /// Adjacency bitset of `v`.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub(crate) fn words_per_row(&self) -> usize {
        self.words
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter::new(self.row(v))
    }

    /// Edges `(u, v)` with `u < v`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Degrees sorted ascending.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// True iff a traversal from vertex 0 reaches every vertex.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![0u64; self.words];
        let mut frontier = vec![0usize];
        seen[0] |= 1;
        let mut reached = 1;
        while let Some(u) = frontier.pop() {
            for (i, (&r, s)) in self.row(u).iter().zip(seen.iter_mut()).enumerate() {
                let mut fresh = r & !*s;
                *s |= fresh;
                while fresh != 0 {
                    let b = fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    frontier.push(i * 64 + b);
                    reached += 1;
                }
            }
        }
        reached == self.n
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length must equal the order");
        let mut g = Graph::edgeless_unchecked(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        g
    }

    /// Subgraph induced by `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::edgeless(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match crate::graph6::emit_graph6(self) {
            Ok(s) => write!(f, "Graph({s})"),
            Err(_) => write!(f, "Graph(n={}, m={})", self.n, self.edge_count()),
        }
    }
}

/// Iterates the set bits of a word slice in increasing order.
pub(crate) struct BitIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> BitIter<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        BitIter { words, idx: 0, cur: words.first().copied().unwrap_or(0) }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}
