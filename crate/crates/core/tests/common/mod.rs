//! Reference implementations used as test oracles. Deliberately naive and
//! independent of the library's algorithms.

#![allow(dead_code, clippy::needless_range_loop)]

use cospec_core::Graph;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// A random spanning tree plus independent extra edges.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push((order[i], order[rng.gen_range(0..i)]));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn component_count(g: &Graph) -> usize {
    let n = g.order();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            let next = p[x];
            p[x] = r;
            x = next;
        }
        r
    }
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a] = b;
            }
        }
    }
    (0..n).filter(|&v| find(&mut parent, v) == v).count()
}

pub fn adjacency(g: &Graph) -> Vec<Vec<i64>> {
    let n = g.order();
    (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v) as i64).collect()).collect()
}

pub fn laplacian(g: &Graph) -> Vec<Vec<i64>> {
    let n = g.order();
    (0..n)
        .map(|u| (0..n).map(|v| if u == v { g.degree(u) as i64 } else { -(g.has_edge(u, v) as i64) }).collect())
        .collect()
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// det(t·I − M).
pub fn char_poly_at(m: &[Vec<i64>], t: i64) -> BigInt {
    let n = m.len();
    let shifted: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| BigInt::from(if i == j { t } else { 0 } - m[i][j])).collect()).collect();
    bareiss_det(&shifted)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn edge_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![0; n]; n];
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            idx[u][v] = k;
            idx[v][u] = k;
            k += 1;
        }
    }
    idx
}

/// Smallest upper-triangle bitmask over all relabelings (n ≤ 8).
pub fn brute_canon(g: &Graph) -> u64 {
    let n = g.order();
    assert!(n <= 8);
    let idx = edge_index(n);
    permutations(n).iter().map(|p| g.edges().fold(0u64, |m, (u, v)| m | 1 << idx[p[u]][p[v]])).min().unwrap()
}

pub fn mask_graph(n: usize, mask: u64) -> Graph {
    let idx = edge_index(n);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if mask >> idx[u][v] & 1 == 1 {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Connected isomorphism classes on exactly `n` vertices, counted by walking
/// every edge subset and striking out the whole orbit of each new class.
/// Returns one representative per class.
pub fn connected_classes_by_orbits(n: usize) -> Vec<Graph> {
    let m = n * (n - 1) / 2;
    let idx = edge_index(n);
    let perms = permutations(n);
    let mut seen = vec![false; 1 << m];
    let mut reps = Vec::new();
    for mask in 0..1u64 << m {
        if seen[mask as usize] {
            continue;
        }
        let g = mask_graph(n, mask);
        for p in &perms {
            let image = g.edges().fold(0u64, |acc, (u, v)| acc | 1 << idx[p[u]][p[v]]);
            seen[image as usize] = true;
        }
        if component_count(&g) == 1 {
            reps.push(g);
        }
    }
    reps
}

/// Straightforward graph6 encoder for comparison with the library's.
pub fn reference_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut bits = Vec::new();
    for v in 1..n {
        for u in 0..v {
            bits.push(g.has_edge(u, v));
        }
    }
    for chunk in bits.chunks(6) {
        let mut b = 0u8;
        for (i, &bit) in chunk.iter().enumerate() {
            if bit {
                b |= 1 << (5 - i);
            }
        }
        out.push(b + 63);
    }
    String::from_utf8(out).unwrap()
}
