//! Cospectral family constructions from Cartesian products.
//!
//! Given verified families `G = {G_0, ..., G_{p-1}}` and
//! `H = {H_0, ..., H_{q-1}}` with different spectra, the grid
//! `F_ij = G_i □ H_j` is mutually cospectral. Which part of the grid is
//! pairwise non-isomorphic depends on how the two families' prime factors
//! interact:
//!
//! * condition 1 (all members prime), condition 2 (coprime orders) or
//!   condition 3 (no shared prime factor) give the whole `p·q` grid;
//! * a single coprime pair `(G_i, H_j)` gives the cross through `(i, j)`,
//!   `p + q - 1` graphs;
//! * with no condition, one full row or column gives `max(p, q)` graphs.
//!
//! A family of pairwise coprime graphs `U_0, ..., U_{p-1}` on `n` vertices
//! also yields one graph on `n^k` vertices for every way of distributing `k`
//! factors among the `U_i`.
//!
//! Indices are 0-based throughout. Every builder re-verifies its output.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartesian::{cartesian_product, factors_or_unit, product_of, FactorMultiset};
use crate::error::Error;
use crate::graph::Graph;
use crate::spectrum::{char_poly, CharPoly, SpectrumKind};
use crate::verify::{verify_cross_spectra, verify_family, Certificate, ConditionVerdict};

/// Connected, mutually cospectral, pairwise non-isomorphic graphs under one
/// spectrum kind (when `is_verified`).
#[derive(Clone, Debug)]
pub struct CospectralFamily {
    members: Vec<Graph>,
    kind: SpectrumKind,
    char_poly: CharPoly,
    verified: bool,
}

impl CospectralFamily {
    /// Verifies `members` and wraps them. Fails with the certificate when a
    /// check does not pass.
    pub fn verify(members: Vec<Graph>, kind: SpectrumKind) -> Result<Self, Error> {
        let cert = verify_family(&members, kind)?;
        Self::from_certificate(members, kind, cert)
    }

    fn from_certificate(members: Vec<Graph>, kind: SpectrumKind, cert: Certificate) -> Result<Self, Error> {
        if !cert.valid {
            return Err(Error::VerificationFailed(Box::new(cert)));
        }
        let char_poly = cert.shared_char_poly().expect("certificate carries a monic polynomial");
        Ok(CospectralFamily { members, kind, char_poly, verified: true })
    }

    /// Wraps `members` without checking anything. Builders refuse such families.
    pub fn unverified(members: Vec<Graph>, kind: SpectrumKind) -> Result<Self, Error> {
        let first = members.first().ok_or(Error::EmptyFamily)?;
        let char_poly = char_poly(first, kind);
        Ok(CospectralFamily { members, kind, char_poly, verified: false })
    }

    pub fn members(&self) -> &[Graph] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Graph> {
        self.members
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn char_poly(&self) -> &CharPoly {
        &self.char_poly
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Common order of the members.
    pub fn order(&self) -> usize {
        self.members[0].order()
    }
}

/// Multiplicities `e_i` of each seed graph in a power-family member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<usize>);

impl ExponentVector {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Where a member of a constructed family came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `F_ij = G_i □ H_j`.
    Pair(usize, usize),
    /// `□_i U_i^{e_i}`.
    Exponents(ExponentVector),
}

/// What justified a construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Justification {
    #[serde(rename = "1")]
    Condition1,
    #[serde(rename = "2")]
    Condition2,
    #[serde(rename = "3")]
    Condition3,
    #[serde(rename = "coprime-pair")]
    CoprimePair,
    #[serde(rename = "none")]
    None,
}

/// A pair of members that share a prime factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedFactor {
    pub g_index: usize,
    pub h_index: usize,
    pub factor: String,
}

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub family: CospectralFamily,
    /// One entry per member, in member order.
    pub provenance: Vec<Provenance>,
    pub condition_used: Justification,
    pub certificate: Certificate,
}

/// Verdicts for the three product conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub condition1: ConditionVerdict,
    pub condition2: ConditionVerdict,
    pub condition3: ConditionVerdict,
    pub shared: Vec<SharedFactor>,
}

impl ConditionReport {
    pub fn to_map(&self) -> BTreeMap<String, ConditionVerdict> {
        BTreeMap::from([
            ("1".to_string(), self.condition1.clone()),
            ("2".to_string(), self.condition2.clone()),
            ("3".to_string(), self.condition3.clone()),
        ])
    }
}

// ---- condition checks ---------------------------------------------------

fn require_verified(fams: &[&CospectralFamily]) -> Result<(), Error> {
    if fams.iter().all(|f| f.is_verified()) {
        Ok(())
    } else {
        Err(Error::UnverifiedFamily)
    }
}

fn family_factors(fam: &CospectralFamily) -> Result<Vec<FactorMultiset>, Error> {
    fam.members().par_iter().map(factors_or_unit).collect()
}

fn describe(fm: &FactorMultiset) -> String {
    if fm.is_empty() {
        return "K1".to_string();
    }
    fm.factors.iter().map(|f| format!("{}^{}", f.canon_g6, f.multiplicity)).collect::<Vec<_>>().join(" ")
}

fn condition1_from(gf: &[FactorMultiset], hf: &[FactorMultiset]) -> ConditionVerdict {
    let composite = gf
        .iter()
        .enumerate()
        .map(|(i, f)| ("G", i, f))
        .chain(hf.iter().enumerate().map(|(j, f)| ("H", j, f)))
        .find(|(_, _, f)| f.len() != 1);
    match composite {
        None => ConditionVerdict::holds(None),
        Some((name, i, f)) => ConditionVerdict::fails(format!("{name}[{i}] is not prime: factors {}", describe(f))),
    }
}

fn condition2_from(g_fam: &CospectralFamily, h_fam: &CospectralFamily) -> ConditionVerdict {
    let (a, b) = (g_fam.order(), h_fam.order());
    let d = num_integer::gcd(a, b);
    if d == 1 {
        ConditionVerdict::holds(Some(format!("gcd({a}, {b}) = 1")))
    } else {
        ConditionVerdict::fails(format!("gcd({a}, {b}) = {d}"))
    }
}

fn shared_factors(gf: &[FactorMultiset], hf: &[FactorMultiset]) -> Vec<SharedFactor> {
    let mut shared = Vec::new();
    for (i, a) in gf.iter().enumerate() {
        for (j, b) in hf.iter().enumerate() {
            shared.extend(a.shared_with(b).map(|f| SharedFactor { g_index: i, h_index: j, factor: f.to_string() }));
        }
    }
    shared
}

fn condition3_from(shared: &[SharedFactor]) -> ConditionVerdict {
    match shared.first() {
        None => ConditionVerdict::holds(None),
        Some(s) => ConditionVerdict::fails(format!(
            "{} member pairs share a prime factor, e.g. G[{}] and H[{}] share {}",
            shared.iter().map(|s| (s.g_index, s.h_index)).collect::<std::collections::BTreeSet<_>>().len(),
            s.g_index,
            s.h_index,
            s.factor
        )),
    }
}

/// Condition 1: every member of both families is Cartesian prime.
pub fn check_condition1(g_fam: &CospectralFamily, h_fam: &CospectralFamily) -> Result<ConditionVerdict, Error> {
    require_verified(&[g_fam, h_fam])?;
    Ok(condition1_from(&family_factors(g_fam)?, &family_factors(h_fam)?))
}

/// Condition 2: the member orders of the two families are coprime.
pub fn check_condition2(g_fam: &CospectralFamily, h_fam: &CospectralFamily) -> Result<ConditionVerdict, Error> {
    require_verified(&[g_fam, h_fam])?;
    Ok(condition2_from(g_fam, h_fam))
}

/// Condition 3: no prime factor occurs in a member of both families.
pub fn check_condition3(g_fam: &CospectralFamily, h_fam: &CospectralFamily) -> Result<ConditionVerdict, Error> {
    require_verified(&[g_fam, h_fam])?;
    Ok(condition3_from(&shared_factors(&family_factors(g_fam)?, &family_factors(h_fam)?)))
}

/// All three conditions, sharing one factorization pass.
pub fn check_conditions(g_fam: &CospectralFamily, h_fam: &CospectralFamily) -> Result<ConditionReport, Error> {
    require_verified(&[g_fam, h_fam])?;
    let (gf, hf) = (family_factors(g_fam)?, family_factors(h_fam)?);
    let shared = shared_factors(&gf, &hf);
    Ok(ConditionReport {
        condition1: condition1_from(&gf, &hf),
        condition2: condition2_from(g_fam, h_fam),
        condition3: condition3_from(&shared),
        shared,
    })
}

// ---- builders -----------------------------------------------------------

fn check_pair_inputs(g_fam: &CospectralFamily, h_fam: &CospectralFamily) -> Result<(), Error> {
    require_verified(&[g_fam, h_fam])?;
    let cross = verify_cross_spectra(g_fam, h_fam)?;
    if !cross.distinct {
        return Err(Error::CrossSpectraNotDistinct(cross.witness));
    }
    Ok(())
}

/// Builds and verifies `{G_i □ H_j}` for the given index pairs.
fn assemble_pairs(
    g_fam: &CospectralFamily,
    h_fam: &CospectralFamily,
    pairs: Vec<(usize, usize)>,
    condition_used: Justification,
    conditions: BTreeMap<String, ConditionVerdict>,
) -> Result<ConstructionResult, Error> {
    let members: Vec<Graph> =
        pairs.par_iter().map(|&(i, j)| cartesian_product(&g_fam.members()[i], &h_fam.members()[j])).collect();
    let provenance = pairs.into_iter().map(|(i, j)| Provenance::Pair(i, j)).collect();
    finish(members, g_fam.kind(), provenance, condition_used, conditions)
}

fn finish(
    members: Vec<Graph>,
    kind: SpectrumKind,
    provenance: Vec<Provenance>,
    condition_used: Justification,
    conditions: BTreeMap<String, ConditionVerdict>,
) -> Result<ConstructionResult, Error> {
    let mut certificate = verify_family(&members, kind)?;
    certificate.conditions = conditions;
    certificate.provenance.clone_from(&provenance);
    certificate.condition_used = Some(condition_used);
    let family = CospectralFamily::from_certificate(members, kind, certificate.clone())?;
    Ok(ConstructionResult { family, provenance, condition_used, certificate })
}

/// The full grid `F_ij = G_i □ H_j`, row-major, provided one of the three
/// product conditions holds. Conditions are tried in order 1, 2, 3.
pub fn build_product_family(g_fam: &CospectralFamily, h_fam: &CospectralFamily) -> Result<ConstructionResult, Error> {
    check_pair_inputs(g_fam, h_fam)?;
    let (gf, hf) = (family_factors(g_fam)?, family_factors(h_fam)?);
    let mut conditions = BTreeMap::new();

    let c1 = condition1_from(&gf, &hf);
    let holds1 = c1.is_holds();
    conditions.insert("1".to_string(), c1);
    let used = if holds1 {
        Justification::Condition1
    } else {
        let c2 = condition2_from(g_fam, h_fam);
        let holds2 = c2.is_holds();
        conditions.insert("2".to_string(), c2);
        if holds2 {
            Justification::Condition2
        } else {
            let shared = shared_factors(&gf, &hf);
            let c3 = condition3_from(&shared);
            let holds3 = c3.is_holds();
            conditions.insert("3".to_string(), c3);
            if !holds3 {
                return Err(Error::NoConditionHolds { shared });
            }
            Justification::Condition3
        }
    };

    let pairs = (0..g_fam.len()).flat_map(|i| (0..h_fam.len()).map(move |j| (i, j))).collect();
    assemble_pairs(g_fam, h_fam, pairs, used, conditions)
}

/// First `(i, j)` in row-major order with `G_i` and `H_j` coprime.
pub fn find_coprime_pair(g_fam: &CospectralFamily, h_fam: &CospectralFamily) -> Result<Option<(usize, usize)>, Error> {
    require_verified(&[g_fam, h_fam])?;
    let (gf, hf) = (family_factors(g_fam)?, family_factors(h_fam)?);
    Ok((0..gf.len())
        .flat_map(|i| (0..hf.len()).map(move |j| (i, j)))
        .find(|&(i, j)| gf[i].shared_with(&hf[j]).next().is_none()))
}

/// The cross `{F_{i j*}} ∪ {F_{i* j}}` through a coprime pair `(i*, j*)`,
/// `p + q - 1` graphs in row-major order.
pub fn build_relaxed_family(
    g_fam: &CospectralFamily,
    h_fam: &CospectralFamily,
    i_star: usize,
    j_star: usize,
) -> Result<ConstructionResult, Error> {
    check_pair_inputs(g_fam, h_fam)?;
    if i_star >= g_fam.len() {
        return Err(Error::IndexOutOfRange { index: i_star, size: g_fam.len() });
    }
    if j_star >= h_fam.len() {
        return Err(Error::IndexOutOfRange { index: j_star, size: h_fam.len() });
    }
    let fg = factors_or_unit(&g_fam.members()[i_star])?;
    let fh = factors_or_unit(&h_fam.members()[j_star])?;
    if let Some(f) = fg.shared_with(&fh).next() {
        return Err(Error::NotCoprime { g_index: i_star, h_index: j_star, factor: f.to_string() });
    }
    let conditions = BTreeMap::from([(
        "coprime-pair".to_string(),
        ConditionVerdict::holds(Some(format!("G[{i_star}] and H[{j_star}] share no prime factor"))),
    )]);

    let mut pairs: Vec<(usize, usize)> = (0..g_fam.len())
        .map(|i| (i, j_star))
        .chain((0..h_fam.len()).filter(|&j| j != j_star).map(|j| (i_star, j)))
        .collect();
    pairs.sort_unstable();
    assemble_pairs(g_fam, h_fam, pairs, Justification::CoprimePair, conditions)
}

/// The larger of the first column `{F_i0}` and the first row `{F_0j}`
/// (the column on ties); needs no condition at all.
pub fn fallback_family(g_fam: &CospectralFamily, h_fam: &CospectralFamily) -> Result<ConstructionResult, Error> {
    check_pair_inputs(g_fam, h_fam)?;
    let pairs = if g_fam.len() >= h_fam.len() {
        (0..g_fam.len()).map(|i| (i, 0)).collect()
    } else {
        (0..h_fam.len()).map(|j| (0, j)).collect()
    };
    assemble_pairs(g_fam, h_fam, pairs, Justification::None, BTreeMap::new())
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// `(p-1)(q-1) + (p-1)·C(q,3) + (q-1)·C(p,3) + C(p+q-1,3)`.
///
/// Panics if `p` or `q` is zero.
pub fn count_new_triplets(p: u64, q: u64) -> BigUint {
    assert!(p >= 1 && q >= 1, "family sizes must be positive");
    let (pm, qm) = (BigUint::from(p - 1), BigUint::from(q - 1));
    &pm * &qm + &pm * binomial(q, 3) + &qm * binomial(p, 3) + binomial(p + q - 1, 3)
}

/// All weak compositions of `k` into `parts` non-negative parts, in
/// colexicographic order (the last coordinate varies slowest).
pub fn weak_compositions(k: usize, parts: usize) -> Vec<ExponentVector> {
    fn rec(k: usize, slot: usize, cur: &mut Vec<usize>, out: &mut Vec<ExponentVector>) {
        if slot == 0 {
            cur[0] = k;
            out.push(ExponentVector(cur.clone()));
            return;
        }
        for e in 0..=k {
            cur[slot] = e;
            rec(k - e, slot - 1, cur, out);
        }
        cur[slot] = 0;
    }
    let mut out = Vec::new();
    if parts == 0 {
        if k == 0 {
            out.push(ExponentVector(Vec::new()));
        }
        return out;
    }
    rec(k, parts - 1, &mut vec![0; parts], &mut out);
    out
}

/// One member `□_i U_i^{e_i}` for every weak composition `e` of `k`, from
/// a family of pairwise coprime graphs.
pub fn build_power_family(u_fam: &CospectralFamily, k: usize) -> Result<ConstructionResult, Error> {
    require_verified(&[u_fam])?;
    if k == 0 {
        return Err(Error::InvalidPower);
    }
    let factors = family_factors(u_fam)?;
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            if let Some(f) = factors[i].shared_with(&factors[j]).next() {
                return Err(Error::NotPairwiseCoprime { first: i, second: j, factor: f.to_string() });
            }
        }
    }
    let exps = weak_compositions(k, u_fam.len());
    let members: Vec<Graph> = exps
        .par_iter()
        .map(|e| {
            let seq = e.0.iter().enumerate().flat_map(|(i, &c)| std::iter::repeat_n(&u_fam.members()[i], c));
            product_of(seq)
        })
        .collect();
    let conditions = BTreeMap::from([(
        "pairwise-coprime".to_string(),
        ConditionVerdict::holds(Some(format!("{} seed graphs share no prime factors", u_fam.len()))),
    )]);
    let provenance = exps.into_iter().map(Provenance::Exponents).collect();
    finish(members, u_fam.kind(), provenance, Justification::CoprimePair, conditions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplet_formula_examples() {
        assert_eq!(count_new_triplets(2, 2), BigUint::from(2u32));
        assert_eq!(count_new_triplets(3, 2), BigUint::from(7u32));
        assert_eq!(count_new_triplets(3, 3), BigUint::from(18u32));
        assert_eq!(count_new_triplets(1, 1), BigUint::ZERO);
    }

    #[test]
    fn compositions_in_colex_order() {
        let e: Vec<Vec<usize>> = weak_compositions(2, 2).into_iter().map(|e| e.0).collect();
        assert_eq!(e, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let e3 = weak_compositions(3, 3);
        assert_eq!(e3.len(), 10);
        assert!(e3.iter().all(|e| e.total() == 3));
        let keys: Vec<Vec<usize>> = e3.iter().map(|e| e.0.iter().rev().copied().collect()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(weak_compositions(4, 1), vec![ExponentVector(vec![4])]);
    }

    #[test]
    fn unverified_families_are_refused() {
        let a = CospectralFamily::unverified(vec![Graph::complete(2)], SpectrumKind::Adjacency).unwrap();
        let b = CospectralFamily::verify(vec![Graph::path(3)], SpectrumKind::Adjacency).unwrap();
        assert!(matches!(check_condition2(&a, &b), Err(Error::UnverifiedFamily)));
        assert!(matches!(build_product_family(&a, &b), Err(Error::UnverifiedFamily)));
    }

    #[test]
    fn singleton_product() {
        let a = CospectralFamily::verify(vec![Graph::complete(2)], SpectrumKind::Adjacency).unwrap();
        let b = CospectralFamily::verify(vec![Graph::path(3)], SpectrumKind::Adjacency).unwrap();
        let r = build_product_family(&a, &b).unwrap();
        assert_eq!(r.family.len(), 1);
        assert_eq!(r.condition_used, Justification::Condition1);
        assert_eq!(r.provenance, vec![Provenance::Pair(0, 0)]);
        assert!(r.certificate.valid);

        let r = build_relaxed_family(&a, &b, 0, 0).unwrap();
        assert_eq!(r.family.len(), 1);
        assert_eq!(fallback_family(&a, &b).unwrap().family.len(), 1);
    }

    #[test]
    fn same_family_twice_is_refused() {
        let a = CospectralFamily::verify(vec![Graph::complete(2)], SpectrumKind::Adjacency).unwrap();
        assert!(matches!(build_product_family(&a, &a), Err(Error::CrossSpectraNotDistinct(_))));
    }

    #[test]
    fn power_family_of_one_seed() {
        let u = CospectralFamily::verify(vec![Graph::path(3)], SpectrumKind::Laplacian).unwrap();
        let r = build_power_family(&u, 3).unwrap();
        assert_eq!(r.family.len(), 1);
        assert_eq!(r.family.order(), 27);
        assert!(matches!(build_power_family(&u, 0), Err(Error::InvalidPower)));
    }
}
