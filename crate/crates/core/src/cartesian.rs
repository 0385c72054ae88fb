//! Cartesian products and Cartesian prime factorization.
//!
//! Factorization follows the product-relation approach: two edges belong to
//! the same prime factor when they are related by the Djoković-Winkler
//! relation (`d(x,u) + d(y,v) != d(x,v) + d(y,u)` for edges `xy`, `uv`) or
//! when they meet at a vertex without spanning a chordless square. The
//! transitive closure of the union partitions the edges into one class per
//! prime factor, and the class-`i` layer through vertex 0 is a copy of the
//! `i`-th factor. Every result is reassembled and checked against the input
//! before it is returned.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::canon::{are_isomorphic, canonical_form_uncapped};
use crate::error::Error;
use crate::graph::Graph;
use crate::graph6::{emit_graph6, parse_graph6};

/// `G □ H`. Vertex `(u, v)` gets index `u * |V(H)| + v`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let (ng, nh) = (g.order(), h.order());
    let mut p = Graph::edgeless(ng * nh);
    for u in 0..ng {
        for (v, w) in h.edges() {
            p.set_edge(u * nh + v, u * nh + w);
        }
    }
    for (u, x) in g.edges() {
        for v in 0..nh {
            p.set_edge(u * nh + v, x * nh + v);
        }
    }
    p
}

/// Product of a sequence of graphs, left to right; `K1` for an empty sequence.
pub fn product_of<'a, I>(graphs: I) -> Graph
where
    I: IntoIterator<Item = &'a Graph>,
{
    graphs.into_iter().fold(Graph::complete(1), |acc, g| cartesian_product(&acc, g))
}

/// A prime factor in canonical form together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub canon_g6: String,
    pub multiplicity: usize,
}

impl Factor {
    pub fn graph(&self) -> Graph {
        parse_graph6(self.canon_g6.as_bytes()).expect("factor holds valid graph6")
    }
}

/// Prime factors of a connected graph, sorted by canonical graph6.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorMultiset {
    pub factors: Vec<Factor>,
}

impl FactorMultiset {
    fn from_counts(counts: BTreeMap<String, usize>) -> Self {
        FactorMultiset {
            factors: counts.into_iter().map(|(canon_g6, multiplicity)| Factor { canon_g6, multiplicity }).collect(),
        }
    }

    fn counts(&self) -> BTreeMap<&str, usize> {
        self.factors.iter().map(|f| (f.canon_g6.as_str(), f.multiplicity)).collect()
    }

    /// Total number of prime factors counted with multiplicity.
    pub fn len(&self) -> usize {
        self.factors.iter().map(|f| f.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn contains(&self, canon_g6: &str) -> bool {
        self.factors.iter().any(|f| f.canon_g6 == canon_g6)
    }

    /// Canonical graph6 strings present in both multisets.
    pub fn shared_with<'a>(&'a self, other: &'a FactorMultiset) -> impl Iterator<Item = &'a str> + 'a {
        self.factors.iter().filter(|f| other.contains(&f.canon_g6)).map(|f| f.canon_g6.as_str())
    }

    /// Every factor repeated by its multiplicity, in canonical order.
    pub fn expanded(&self) -> Vec<Graph> {
        self.factors.iter().flat_map(|f| std::iter::repeat_n(f.graph(), f.multiplicity)).collect()
    }

    /// The product of all factors (`K1` when empty).
    pub fn reassemble(&self) -> Graph {
        product_of(&self.expanded())
    }
}

fn is_prime_number(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Cartesian prime factorization of a connected graph on at least two vertices.
pub fn prime_factorize(g: &Graph) -> Result<FactorMultiset, Error> {
    if g.order() < 2 {
        return Err(Error::TrivialGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut counts = BTreeMap::new();
    if is_prime_number(g.order()) {
        counts.insert(canonical_form_uncapped(g).canon_g6, 1);
        return Ok(FactorMultiset::from_counts(counts));
    }
    for layer in factor_layers(g) {
        *counts.entry(canonical_form_uncapped(&layer).canon_g6).or_insert(0) += 1;
    }
    let fm = FactorMultiset::from_counts(counts);
    let rebuilt = fm.reassemble();
    if !are_isomorphic(&rebuilt, g) {
        return Err(Error::FactorizationMismatch { graph: emit_graph6(g).unwrap_or_default() });
    }
    Ok(fm)
}

/// Factor multiset with the one-vertex graph mapped to the empty multiset.
pub(crate) fn factors_or_unit(g: &Graph) -> Result<FactorMultiset, Error> {
    if g.order() == 1 {
        Ok(FactorMultiset::default())
    } else {
        prime_factorize(g)
    }
}

pub fn is_prime(g: &Graph) -> Result<bool, Error> {
    let fm = prime_factorize(g)?;
    Ok(fm.factors.len() == 1 && fm.factors[0].multiplicity == 1)
}

/// True iff the two graphs have no prime factor in common.
pub fn are_coprime(g: &Graph, h: &Graph) -> Result<bool, Error> {
    let (fg, fh) = (prime_factorize(g)?, prime_factorize(h)?);
    let coprime = fg.shared_with(&fh).next().is_none();
    Ok(coprime)
}

/// `first ≅ common □ residue_a` and `second ≅ common □ residue_b`, with the
/// residues coprime.
#[derive(Clone, Debug)]
pub struct CommonFactorDecomposition {
    pub common: Graph,
    pub residue_a: Graph,
    pub residue_b: Graph,
}

/// Splits off the largest common factor of two connected graphs.
pub fn common_factor(g: &Graph, h: &Graph) -> Result<CommonFactorDecomposition, Error> {
    let (fg, fh) = (factors_or_unit(g)?, factors_or_unit(h)?);
    let (cg, ch) = (fg.counts(), fh.counts());
    let mut common = BTreeMap::new();
    let mut rest_a = BTreeMap::new();
    let mut rest_b = BTreeMap::new();
    for (&k, &a) in &cg {
        let b = ch.get(k).copied().unwrap_or(0);
        if a.min(b) > 0 {
            common.insert(k.to_string(), a.min(b));
        }
        if a > b {
            rest_a.insert(k.to_string(), a - b);
        }
    }
    for (&k, &b) in &ch {
        let a = cg.get(k).copied().unwrap_or(0);
        if b > a {
            rest_b.insert(k.to_string(), b - a);
        }
    }
    Ok(CommonFactorDecomposition {
        common: FactorMultiset::from_counts(common).reassemble(),
        residue_a: FactorMultiset::from_counts(rest_a).reassemble(),
        residue_b: FactorMultiset::from_counts(rest_b).reassemble(),
    })
}

// ---- factorization internals --------------------------------------------

fn bfs_distances(g: &Graph, src: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.order()];
    dist[src] = 0;
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        for v in g.neighbors(u) {
            if dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Edge classes of the product relation; returns the class root of each edge.
fn product_relation(g: &Graph, edges: &[(usize, usize)]) -> Vec<usize> {
    let n = g.order();
    let m = edges.len();
    let mut index = vec![usize::MAX; n * n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        index[u * n + v] = i;
        index[v * n + u] = i;
    }
    let dist: Vec<Vec<u32>> = (0..n).map(|s| bfs_distances(g, s)).collect();
    let mut uf = UnionFind((0..m).collect());

    // Djoković-Winkler
    for (i, &(x, y)) in edges.iter().enumerate() {
        for (j, &(u, v)) in edges.iter().enumerate().skip(i + 1) {
            if dist[x][u] + dist[y][v] != dist[x][v] + dist[y][u] {
                uf.union(i, j);
            }
        }
    }

    // incident edges that span no chordless square
    for x in 0..n {
        let nbrs: Vec<usize> = g.neighbors(x).collect();
        for (a, &y) in nbrs.iter().enumerate() {
            for &z in &nbrs[a + 1..] {
                let spans_square = !g.has_edge(y, z)
                    && g.row(y).iter().zip(g.row(z)).zip(g.row(x)).enumerate().any(|(wi, ((&ry, &rz), &rx))| {
                        let mut common = ry & rz & !rx;
                        if wi == x / 64 {
                            common &= !(1 << (x % 64));
                        }
                        common != 0
                    });
                if !spans_square {
                    uf.union(index[x * n + y], index[x * n + z]);
                }
            }
        }
    }
    (0..m).map(|i| uf.find(i)).collect()
}

/// One layer through vertex 0 per prime factor.
fn factor_layers(g: &Graph) -> Vec<Graph> {
    let n = g.order();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let class = product_relation(g, &edges);
    let mut edge_class = BTreeMap::new();
    for (&(u, v), &c) in edges.iter().zip(&class) {
        edge_class.insert((u, v), c);
        edge_class.insert((v, u), c);
    }
    let mut roots: Vec<usize> = class.clone();
    roots.sort_unstable();
    roots.dedup();

    roots
        .into_iter()
        .map(|c| {
            let mut seen = vec![false; n];
            let mut order = vec![0];
            seen[0] = true;
            let mut i = 0;
            while i < order.len() {
                let u = order[i];
                i += 1;
                for v in g.neighbors(u) {
                    if !seen[v] && edge_class[&(u, v)] == c {
                        seen[v] = true;
                        order.push(v);
                    }
                }
            }
            let mut layer = Graph::edgeless(order.len());
            for (a, &u) in order.iter().enumerate() {
                for (b, &v) in order.iter().enumerate().skip(a + 1) {
                    if g.has_edge(u, v) && edge_class[&(u, v)] == c {
                        layer.set_edge(a, b);
                    }
                }
            }
            layer
        })
        .collect()
}
