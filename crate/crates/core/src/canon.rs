//! Canonical labeling by individualization and refinement.
//!
//! The search tree is the usual one: refine an ordered partition to an
//! equitable one, pick the first non-singleton cell, individualize each of
//! its vertices in turn and recurse. Every refinement step feeds a
//! label-invariant trace hash; a leaf is ranked by its sequence of node
//! traces and then by its relabelled adjacency rows, and the least leaf
//! defines the canonical labeling. Subtrees whose trace prefix is already
//! worse than the best leaf are cut, and automorphisms discovered when two
//! leaves give the same graph prune sibling subtrees (orbit pruning plus
//! the jump back to the divergence point).

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{words_for, Graph};
use crate::graph6::emit_graph6;

/// Largest order accepted by [`canonical_form`].
pub const CANON_SIZE_CAP: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    /// graph6 of the canonically relabelled graph.
    pub canon_g6: String,
    /// `perm[v]` is the canonical label of input vertex `v`.
    pub perm: Vec<usize>,
}

/// Canonical form of `g`; isomorphic inputs give identical `canon_g6`.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, Error> {
    if g.order() > CANON_SIZE_CAP {
        return Err(Error::SizeCap { order: g.order(), cap: CANON_SIZE_CAP });
    }
    Ok(canonical_form_uncapped(g))
}

pub(crate) fn canonical_form_uncapped(g: &Graph) -> CanonicalForm {
    let perm = canonical_labeling(g);
    let canon = g.relabel(&perm);
    CanonicalForm { canon_g6: emit_graph6(&canon).expect("canonical graph within graph6 range"), perm }
}

/// The canonically relabelled graph itself.
pub fn canonical_graph(g: &Graph) -> Graph {
    g.relabel(&canonical_labeling(g))
}

/// Isomorphism test: cheap invariants first, then canonical forms.
pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return false;
    }
    if g.degree_sequence() != h.degree_sequence() {
        return false;
    }
    canonical_form_uncapped(g).canon_g6 == canonical_form_uncapped(h).canon_g6
}

// ---- partition --------------------------------------------------------

/// Ordered partition stored nauty-style: `lab` lists vertices, a cell is a
/// contiguous run of `lab` identified by its start index.
#[derive(Clone)]
struct Partition {
    lab: Vec<usize>,
    /// `len[s]` is the length of the cell starting at `s`, 0 elsewhere.
    len: Vec<usize>,
    /// Start of the cell containing each vertex.
    cell_of: Vec<usize>,
    cells: usize,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut len = vec![0; n];
        len[0] = n;
        Partition { lab: (0..n).collect(), len, cell_of: vec![0; n], cells: 1 }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    fn first_nonsingleton(&self) -> Option<usize> {
        let mut s = 0;
        while s < self.lab.len() {
            if self.len[s] > 1 {
                return Some(s);
            }
            s += self.len[s];
        }
        None
    }

    /// Moves `v` to the front of its cell and splits it off as a singleton.
    /// Returns the start of the new singleton cell.
    fn individualize(&mut self, v: usize) -> usize {
        let s = self.cell_of[v];
        let l = self.len[s];
        let pos = s + self.lab[s..s + l].iter().position(|&x| x == v).unwrap();
        self.lab.swap(s, pos);
        self.len[s] = 1;
        self.len[s + 1] = l - 1;
        for &x in &self.lab[s + 1..s + l] {
            self.cell_of[x] = s + 1;
        }
        self.cells += 1;
        s
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    // splitmix64 finalizer over an FNV-style accumulator
    let mut z = (h ^ x).wrapping_mul(0x100_0000_01b3).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Refines `p` to the coarsest equitable refinement, starting from the
/// given splitter cells. Returns a label-invariant trace hash.
fn refine(g: &Graph, p: &mut Partition, splitters: &[usize]) -> u64 {
    let n = g.order();
    let words = g.words_per_row();
    let mut in_queue = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    for &s in splitters {
        if !in_queue[s] {
            in_queue[s] = true;
            queue.push_back(s);
        }
    }
    let mut trace = 0x243f_6a88_85a3_08d3u64;
    let mut mask = vec![0u64; words];
    let mut counts: Vec<(usize, usize)> = Vec::with_capacity(n);

    while let Some(sp) = queue.pop_front() {
        in_queue[sp] = false;
        mask.iter_mut().for_each(|w| *w = 0);
        for &v in &p.lab[sp..sp + p.len[sp]] {
            mask[v / 64] |= 1 << (v % 64);
        }
        trace = mix(trace, sp as u64);

        let mut s = 0;
        while s < n {
            let l = p.len[s];
            if l == 1 {
                s += 1;
                continue;
            }
            counts.clear();
            for &v in &p.lab[s..s + l] {
                let c: u32 = g.row(v).iter().zip(&mask).map(|(a, b)| (a & b).count_ones()).sum();
                counts.push((c as usize, v));
            }
            let first = counts[0].0;
            if counts.iter().all(|&(c, _)| c == first) {
                s += l;
                continue;
            }
            counts.sort_by_key(|&(c, _)| c);
            let was_queued = in_queue[s];
            let mut start = s;
            let mut frag_starts = Vec::new();
            for (i, &(c, v)) in counts.iter().enumerate() {
                p.lab[s + i] = v;
                if i > 0 && c != counts[i - 1].0 {
                    p.len[start] = s + i - start;
                    frag_starts.push(start);
                    start = s + i;
                }
                p.cell_of[v] = start;
            }
            p.len[start] = s + l - start;
            frag_starts.push(start);
            p.cells += frag_starts.len() - 1;

            trace = mix(trace, s as u64);
            for &f in &frag_starts {
                let c = counts[f - s].0;
                trace = mix(trace, ((c as u64) << 32) | p.len[f] as u64);
            }

            // Hopcroft: if the cell was pending all fragments must be processed,
            // otherwise one largest fragment can be skipped.
            let skip = if was_queued {
                None
            } else {
                frag_starts.iter().copied().max_by_key(|&f| (p.len[f], std::cmp::Reverse(f)))
            };
            for &f in &frag_starts {
                if Some(f) != skip && !in_queue[f] {
                    in_queue[f] = true;
                    queue.push_back(f);
                }
            }
            s += l;
        }
    }
    mix(trace, p.cells as u64)
}

// ---- search -----------------------------------------------------------

struct Leaf {
    traces: Vec<u64>,
    rows: Vec<u64>,
    lab: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    words: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    /// Automorphisms found so far, as vertex maps.
    autos: Vec<Vec<usize>>,
}

enum Outcome {
    Continue,
    /// Abandon every node deeper than this level.
    JumpTo(usize),
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    fn leaf_rows(&self, lab: &[usize]) -> Vec<u64> {
        let n = self.g.order();
        let mut pos = vec![0; n];
        for (i, &v) in lab.iter().enumerate() {
            pos[v] = i;
        }
        let mut rows = vec![0u64; n * self.words];
        for (i, &v) in lab.iter().enumerate() {
            let row = &mut rows[i * self.words..(i + 1) * self.words];
            for u in self.g.neighbors(v) {
                let j = pos[u];
                row[j / 64] |= 1 << (j % 64);
            }
        }
        rows
    }

    /// Orbit representatives under the automorphisms found so far that fix
    /// `fixed` pointwise.
    fn stabilizer_orbits(&self, fixed: &[usize]) -> Vec<usize> {
        let n = self.g.order();
        let mut parent: Vec<usize> = (0..n).collect();
        for a in self.autos.iter().filter(|a| fixed.iter().all(|&f| a[f] == f)) {
            for (x, &y) in a.iter().enumerate() {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx.max(ry)] = rx.min(ry);
                }
            }
        }
        (0..n).map(|x| find(&mut parent, x)).collect()
    }

    fn record_automorphism(&mut self, from: &[usize], to: &[usize]) {
        let mut a = vec![0; from.len()];
        for (&x, &y) in from.iter().zip(to) {
            a[x] = y;
        }
        self.autos.push(a);
    }

    fn visit_leaf(&mut self, p: &Partition, traces: &[u64], path: &[usize]) -> Outcome {
        let leaf =
            Leaf { traces: traces.to_vec(), rows: self.leaf_rows(&p.lab), lab: p.lab.clone(), path: path.to_vec() };
        let Some(first) = &self.first else {
            self.first = Some(Leaf {
                traces: leaf.traces.clone(),
                rows: leaf.rows.clone(),
                lab: leaf.lab.clone(),
                path: leaf.path.clone(),
            });
            self.best = Some(leaf);
            return Outcome::Continue;
        };
        if first.traces == leaf.traces && first.rows == leaf.rows {
            let (from, level) = (first.lab.clone(), common_prefix(&first.path, path));
            self.record_automorphism(&from, &leaf.lab);
            return Outcome::JumpTo(level);
        }
        let best = self.best.as_ref().unwrap();
        match (&leaf.traces, &leaf.rows).cmp(&(&best.traces, &best.rows)) {
            std::cmp::Ordering::Less => {
                self.best = Some(leaf);
                Outcome::Continue
            }
            std::cmp::Ordering::Equal => {
                let (from, level) = (best.lab.clone(), common_prefix(&best.path, path));
                self.record_automorphism(&from, &leaf.lab);
                Outcome::JumpTo(level)
            }
            std::cmp::Ordering::Greater => Outcome::Continue,
        }
    }

    /// True if every leaf below a node with this trace prefix ranks after
    /// the current best leaf.
    fn prefix_loses(&self, traces: &[u64]) -> bool {
        let Some(best) = &self.best else {
            return false;
        };
        let k = traces.len().min(best.traces.len());
        match traces[..k].cmp(&best.traces[..k]) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            // a longer trace with equal prefix sorts after the best one
            std::cmp::Ordering::Equal => traces.len() > best.traces.len(),
        }
    }

    fn dfs(&mut self, p: Partition, traces: &mut Vec<u64>, path: &mut Vec<usize>) -> Outcome {
        if p.is_discrete() {
            return self.visit_leaf(&p, traces, path);
        }
        if self.prefix_loses(traces) {
            return Outcome::Continue;
        }
        let target = p.first_nonsingleton().expect("non-discrete partition");
        let mut cell = p.lab[target..target + p.len[target]].to_vec();
        cell.sort_unstable();

        let mut tried: Vec<usize> = Vec::new();
        let mut orbits: Option<(usize, Vec<usize>)> = None;
        for v in cell {
            if !tried.is_empty() {
                if orbits.as_ref().is_none_or(|(seen, _)| *seen != self.autos.len()) {
                    orbits = Some((self.autos.len(), self.stabilizer_orbits(path)));
                }
                let orb = &orbits.as_ref().unwrap().1;
                if tried.iter().any(|&w| orb[w] == orb[v]) {
                    continue;
                }
            }
            tried.push(v);

            let mut child = p.clone();
            let s = child.individualize(v);
            let t = refine(self.g, &mut child, &[s]);
            traces.push(t);
            path.push(v);
            let out = self.dfs(child, traces, path);
            traces.pop();
            path.pop();
            if let Outcome::JumpTo(level) = out {
                if level < path.len() {
                    return out;
                }
            }
        }
        Outcome::Continue
    }
}

/// `perm[v]` is the canonical label of `v`.
pub(crate) fn canonical_labeling(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut p = Partition::unit(n);
    let root = refine(g, &mut p, &[0]);
    let mut search = Search { g, words: words_for(n), first: None, best: None, autos: Vec::new() };
    search.dfs(p, &mut vec![root], &mut Vec::new());
    let best = search.best.expect("search visits at least one leaf");
    let mut perm = vec![0; n];
    for (i, &v) in best.lab.iter().enumerate() {
        perm[v] = i;
    }
    perm
}

/// Automorphisms found while labelling `g`. Not necessarily a complete
/// generating set; exposed for diagnostics and tests.
pub fn automorphisms_found(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut p = Partition::unit(n);
    let root = refine(g, &mut p, &[0]);
    let mut search = Search { g, words: words_for(n), first: None, best: None, autos: Vec::new() };
    search.dfs(p, &mut vec![root], &mut Vec::new());
    search.autos
}
