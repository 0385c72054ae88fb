//! Exact characteristic polynomials of adjacency and Laplacian matrices.
//!
//! [`char_poly`] reduces the matrix to Hessenberg form modulo a set of
//! 31-bit primes and lifts the coefficients back over the integers with the
//! Chinese remainder theorem. Enough primes are taken that their product
//! exceeds twice the Gershgorin bound `(1 + r)^n` on every coefficient, so
//! the lift is exact. [`char_poly_faddeev_leverrier`] is a second, purely
//! integer route used to cross-check the first.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Adjacency,
    Laplacian,
}

impl SpectrumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumKind::Adjacency => "adjacency",
            SpectrumKind::Laplacian => "laplacian",
        }
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpectrumKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "adjacency" | "a" => Ok(SpectrumKind::Adjacency),
            "laplacian" | "l" => Ok(SpectrumKind::Laplacian),
            other => Err(format!("unknown spectrum kind `{other}` (expected adjacency or laplacian)")),
        }
    }
}

/// Monic integer polynomial `det(xI - M)`, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    /// Wraps ascending coefficients. Returns `None` unless the polynomial is monic.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Option<CharPoly> {
        coeffs.last().filter(|c| c.is_one())?;
        Some(CharPoly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients in ascending degree; the last one is 1.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_decimal_strings<S: AsRef<str>>(coeffs: &[S]) -> Option<CharPoly> {
        let parsed = coeffs.iter().map(|s| s.as_ref().parse().ok()).collect::<Option<Vec<BigInt>>>()?;
        CharPoly::from_coeffs(parsed)
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() || d == 0 {
                write!(f, "{mag}")?;
            }
            match d {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{d}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Integer matrix entry `(i, j)` of the chosen representation.
fn entry(g: &Graph, kind: SpectrumKind, i: usize, j: usize) -> i64 {
    match kind {
        SpectrumKind::Adjacency => i64::from(g.has_edge(i, j)),
        SpectrumKind::Laplacian if i == j => g.degree(i) as i64,
        SpectrumKind::Laplacian => -i64::from(g.has_edge(i, j)),
    }
}

fn integer_matrix(g: &Graph, kind: SpectrumKind) -> Vec<Vec<i64>> {
    let n = g.order();
    (0..n).map(|i| (0..n).map(|j| entry(g, kind, i, j)).collect()).collect()
}

/// Exact characteristic polynomial `det(xI - M)`.
pub fn char_poly(g: &Graph, kind: SpectrumKind) -> CharPoly {
    let n = g.order();
    // |c_{n-j}| <= e_j(|λ|) <= C(n,j) μ^j with μ the mean of |λ| (Maclaurin),
    // so every coefficient is at most (1 + μ)^n. For the adjacency matrix
    // μ <= sqrt(Σλ²/n) = sqrt(2m/n); Laplacian eigenvalues are non-negative
    // with mean 2m/n.
    let twice_m = 2 * g.edge_count() as u64;
    let mean_deg = twice_m.div_ceil(n as u64);
    let mu = match kind {
        SpectrumKind::Adjacency => ceil_sqrt(mean_deg),
        SpectrumKind::Laplacian => mean_deg,
    };
    // the symmetric lift needs modulus > 2 * bound
    let bound = num_traits::pow(BigUint::from(1 + mu), n) * 2u32;
    // each table prime exceeds 2^30
    let needed = (bound.bits() as usize).div_ceil(30) + 1;
    assert!(needed <= primes().len(), "prime table too short for order {n}");
    lift(&integer_matrix(g, kind), needed)
}

/// Char poly from its residues modulo the first `count` table primes,
/// lifted symmetrically.
fn lift(m: &[Vec<i64>], count: usize) -> CharPoly {
    let n = m.len();
    let table = &primes()[..count];
    let residues: Vec<Vec<u64>> = table.par_iter().map(|&p| char_poly_mod(m, p)).collect();

    let mut modulus = BigUint::one();
    let mut acc: Vec<BigUint> = vec![BigUint::zero(); n + 1];
    for (&p, residues) in table.iter().zip(residues) {
        // incremental CRT: acc <- acc + modulus * ((r - acc) * modulus^-1 mod p)
        let inv = mod_inv((&modulus % p).to_u64().unwrap(), p);
        for (a, r) in acc.iter_mut().zip(residues) {
            let a_mod = (&*a % p).to_u64().unwrap();
            let t = (r + p - a_mod) % p * inv % p;
            *a += &modulus * t;
        }
        modulus *= p;
    }

    let half = &modulus >> 1;
    let modulus = BigInt::from_biguint(Sign::Plus, modulus);
    let coeffs = acc
        .into_iter()
        .map(|a| {
            if a > half {
                BigInt::from_biguint(Sign::Plus, a) - &modulus
            } else {
                BigInt::from_biguint(Sign::Plus, a)
            }
        })
        .collect();
    CharPoly { coeffs }
}

/// Characteristic polynomial by the Faddeev-LeVerrier recurrence over the
/// integers (`O(n^4)` big-integer operations). All divisions are exact.
pub fn char_poly_faddeev_leverrier(g: &Graph, kind: SpectrumKind) -> CharPoly {
    let n = g.order();
    let a: Vec<Vec<BigInt>> =
        integer_matrix(g, kind).into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // m holds M_k; M_1 = I
    let mut m: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    for k in 1..=n {
        let am = mat_mul(&a, &m);
        let trace: BigInt = (0..n).map(|i| &am[i][i]).sum();
        let (c, rem) = (-trace).div_rem(&BigInt::from(k));
        debug_assert!(rem.is_zero());
        coeffs[n - k] = c.clone();
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c;
        }
    }
    CharPoly { coeffs }
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// True iff the two graphs have equal order and equal characteristic
/// polynomial. Says nothing about isomorphism.
pub fn cospectral(g: &Graph, h: &Graph, kind: SpectrumKind) -> bool {
    g.order() == h.order() && char_poly(g, kind) == char_poly(h, kind)
}

/// Byte key that is equal for two graphs iff they have the same order and
/// characteristic polynomial under `kind`.
pub fn spectral_key(g: &Graph, kind: SpectrumKind) -> Vec<u8> {
    spectral_key_of(g.order(), &char_poly(g, kind), kind)
}

pub(crate) fn spectral_key_of(order: usize, poly: &CharPoly, kind: SpectrumKind) -> Vec<u8> {
    let mut key = format!("{}:{}:", kind.as_str(), order).into_bytes();
    key.extend(poly.to_decimal_strings().join(",").bytes());
    key
}

/// Floating-point eigenvalues in ascending order. Only for reports and
/// property tests; exact decisions go through [`char_poly`].
pub fn float_eigenvalues(g: &Graph, kind: SpectrumKind) -> Result<Vec<f64>, Error> {
    let n = g.order();
    let m = DMatrix::from_fn(n, n, |i, j| entry(g, kind, i, j) as f64);
    let eig = m.try_symmetric_eigen(f64::EPSILON, 100_000).ok_or(Error::EigenFailure)?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

// ---- modular arithmetic -------------------------------------------------

/// The 256 largest primes below 2^31, descending; together they cover
/// coefficient bounds of about 7900 bits.
fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(256);
        let mut c: u64 = (1 << 31) - 1;
        while out.len() < 256 {
            if is_prime_u64(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

fn is_prime_u64(c: u64) -> bool {
    if c < 4 {
        return c >= 2;
    }
    if c.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= c {
        if c.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

/// Coefficients of `det(xI - M) mod p`, ascending, via Hessenberg reduction.
fn ceil_sqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r < x {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= x {
        r -= 1;
    }
    r
}

/// Barrett reduction for a fixed modulus below 2^31 and inputs below 2^62.
#[derive(Clone, Copy)]
struct Reducer {
    p: u64,
    m: u128,
}

impl Reducer {
    fn new(p: u64) -> Self {
        Reducer { p, m: u128::from(u64::MAX) / u128::from(p) }
    }

    #[inline]
    fn reduce(self, a: u64) -> u64 {
        let q = ((u128::from(a) * self.m) >> 64) as u64;
        let r = a - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }
}

fn char_poly_mod(m: &[Vec<i64>], p: u64) -> Vec<u64> {
    let n = m.len();
    let red = Reducer::new(p);
    let mut h: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect()).collect();

    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = mod_inv(h[j + 1][j], p);
        for r in j + 2..n {
            let u = red.mul(h[r][j], inv);
            if u == 0 {
                continue;
            }
            // row_r -= u * row_{j+1}; columns before j are already zero
            let neg = p - u;
            let (top, bottom) = h.split_at_mut(r);
            for (x, &s) in bottom[0][j..].iter_mut().zip(&top[j + 1][j..]) {
                *x = red.reduce(*x + neg * s);
            }
            // col_{j+1} += u * col_r
            for row in h.iter_mut() {
                row[j + 1] = red.reduce(row[j + 1] + u * row[r]);
            }
        }
    }

    // polys[k] = char poly of the leading k x k block
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        // (x - h[k][k]) * polys[k]
        let prev = &polys[k];
        let neg_diag = (p - h[k][k]) % p;
        let mut next = vec![0u64; k + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = red.reduce(next[d + 1] + c);
            next[d] = red.reduce(next[d] + neg_diag * c);
        }
        let mut t = 1u64;
        for i in (0..k).rev() {
            t = red.mul(t, h[i + 1][i]);
            if t == 0 {
                break;
            }
            let coef = red.mul(h[i][k], t);
            if coef == 0 {
                continue;
            }
            let neg = p - coef;
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = red.reduce(next[d] + neg * c);
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_char_polys() {
        let k2 = Graph::complete(2);
        assert_eq!(char_poly(&k2, SpectrumKind::Adjacency).coeffs(), ints(&[-1, 0, 1]));
        assert_eq!(char_poly(&k2, SpectrumKind::Laplacian).coeffs(), ints(&[0, -2, 1]));
        let p3 = Graph::path(3);
        assert_eq!(char_poly(&p3, SpectrumKind::Adjacency).coeffs(), ints(&[0, -2, 0, 1]));
        let c4 = Graph::cycle(4);
        assert_eq!(char_poly(&c4, SpectrumKind::Adjacency).coeffs(), ints(&[0, 0, -4, 0, 1]));
        assert_eq!(char_poly(&Graph::complete(1), SpectrumKind::Laplacian).coeffs(), ints(&[0, 1]));
    }

    #[test]
    fn routes_agree_on_dense_and_sparse_graphs() {
        for g in [Graph::complete(7), Graph::path(9), Graph::cycle(10), Graph::star(6)] {
            for kind in [SpectrumKind::Adjacency, SpectrumKind::Laplacian] {
                assert_eq!(char_poly(&g, kind), char_poly_faddeev_leverrier(&g, kind), "{g:?} {kind}");
            }
        }
    }

    #[test]
    fn mean_eigenvalue_bound_leaves_room() {
        use crate::cartesian::product_of;
        let c6 = Graph::cycle(6);
        let graphs = [
            product_of([&c6, &c6, &c6]),
            product_of([&Graph::complete(5), &Graph::path(4), &Graph::star(3)]),
            Graph::star(60),
            Graph::complete(40),
        ];
        for g in &graphs {
            for kind in [SpectrumKind::Adjacency, SpectrumKind::Laplacian] {
                let poly = char_poly(g, kind);
                let m = integer_matrix(g, kind);
                let max_bits = poly.coeffs().iter().map(|c| c.bits()).max().unwrap() as usize;
                assert_eq!(poly, lift(&m, max_bits / 30 + 12), "{g:?} {kind}");
            }
        }
    }

    #[test]
    fn laplacian_coefficients_past_64_bits() {
        // K_n Laplacian: x (x - n)^(n-1); the coefficients overflow i64 at n = 30
        let n = 30;
        let poly = char_poly(&Graph::complete(n), SpectrumKind::Laplacian);
        let x_minus_n = [BigInt::from(-(n as i64)), BigInt::one()];
        let mut expected = vec![BigInt::zero(), BigInt::one()];
        for _ in 0..n - 1 {
            let mut next = vec![BigInt::zero(); expected.len() + 1];
            for (d, c) in expected.iter().enumerate() {
                next[d] += c * &x_minus_n[0];
                next[d + 1] += c * &x_minus_n[1];
            }
            expected = next;
        }
        assert_eq!(poly.coeffs(), expected.as_slice());
        assert!(poly.coeffs().iter().any(|c| c.to_i64().is_none()));
    }

    #[test]
    fn spectral_keys() {
        let k2 = Graph::complete(2);
        assert_eq!(spectral_key(&k2, SpectrumKind::Adjacency), spectral_key(&k2, SpectrumKind::Adjacency));
        assert_ne!(spectral_key(&k2, SpectrumKind::Adjacency), spectral_key(&Graph::path(3), SpectrumKind::Adjacency));
        assert_ne!(spectral_key(&k2, SpectrumKind::Adjacency), spectral_key(&k2, SpectrumKind::Laplacian));
        assert!(cospectral(&k2, &k2, SpectrumKind::Adjacency));
        assert!(!cospectral(&k2, &Graph::path(3), SpectrumKind::Adjacency));
    }

    #[test]
    fn float_eigenvalue_examples() {
        let close = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9);
        let k2 = Graph::complete(2);
        assert!(close(&float_eigenvalues(&k2, SpectrumKind::Adjacency).unwrap(), &[-1.0, 1.0]));
        assert!(close(&float_eigenvalues(&k2, SpectrumKind::Laplacian).unwrap(), &[0.0, 2.0]));
        let c4 = float_eigenvalues(&Graph::cycle(4), SpectrumKind::Adjacency).unwrap();
        assert!(close(&c4, &[-2.0, 0.0, 0.0, 2.0]));
    }

    #[test]
    fn display_and_decimal_round_trip() {
        let p = char_poly(&Graph::cycle(4), SpectrumKind::Adjacency);
        assert_eq!(p.to_string(), "x^4 - 4x^2");
        assert_eq!(CharPoly::from_decimal_strings(&p.to_decimal_strings()), Some(p));
        assert_eq!(CharPoly::from_decimal_strings(&["1", "2"]), None);
        assert_eq!(char_poly(&Graph::complete(2), SpectrumKind::Laplacian).to_string(), "x^2 - 2x");
    }
}
