//! Independent certification of graph families.
//!
//! Everything here is recomputed from the raw graphs; nothing set by the
//! builders in [`crate::construct`] is trusted.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form_uncapped, CANON_SIZE_CAP};
use crate::construct::{CospectralFamily, Justification, Provenance};
use crate::error::Error;
use crate::graph::Graph;
use crate::spectrum::{char_poly, CharPoly, SpectrumKind};

pub const CHECK_CONNECTED: &str = "connected";
pub const CHECK_EQUAL_ORDER: &str = "equal_order";
pub const CHECK_EQUAL_CHAR_POLY: &str = "equal_char_poly";
pub const CHECK_NON_ISOMORPHIC: &str = "pairwise_non_isomorphic";

/// Largest list accepted by [`enumerate_cospectral_triplets`].
pub const TRIPLET_CAP: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub status: CheckStatus,
    pub witness: Option<String>,
}

impl CheckResult {
    fn pass() -> Self {
        CheckResult { status: CheckStatus::Pass, witness: None }
    }

    fn fail(witness: String) -> Self {
        CheckResult { status: CheckStatus::Fail, witness: Some(witness) }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionStatus {
    Holds,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub status: ConditionStatus,
    pub witness: Option<String>,
}

impl ConditionVerdict {
    pub(crate) fn holds(witness: Option<String>) -> Self {
        ConditionVerdict { status: ConditionStatus::Holds, witness }
    }

    pub(crate) fn fails(witness: String) -> Self {
        ConditionVerdict { status: ConditionStatus::Fails, witness: Some(witness) }
    }

    pub fn is_holds(&self) -> bool {
        self.status == ConditionStatus::Holds
    }
}

/// Machine-readable verification record for a family of graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: SpectrumKind,
    pub valid: bool,
    /// Canonical graph6 of each member, in member order.
    pub members: Vec<String>,
    /// Order of the first member.
    pub order: usize,
    /// Characteristic polynomial of the first member, ascending decimal coefficients.
    pub char_poly: Vec<String>,
    pub checks: BTreeMap<String, CheckResult>,
    #[serde(default)]
    pub conditions: BTreeMap<String, ConditionVerdict>,
    #[serde(default)]
    pub provenance: Vec<Provenance>,
    #[serde(default)]
    pub condition_used: Option<Justification>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn shared_char_poly(&self) -> Option<CharPoly> {
        CharPoly::from_decimal_strings(&self.char_poly)
    }

    fn recompute_validity(&mut self) {
        self.valid = self.checks.values().all(CheckResult::passed);
    }
}

struct MemberFacts {
    connected: bool,
    order: usize,
    poly: CharPoly,
    canon: String,
}

fn member_facts(graphs: &[Graph], kind: SpectrumKind) -> Vec<MemberFacts> {
    graphs
        .par_iter()
        .map(|g| MemberFacts {
            connected: g.is_connected(),
            order: g.order(),
            poly: char_poly(g, kind),
            canon: canonical_form_uncapped(g).canon_g6,
        })
        .collect()
}

/// Checks that `graphs` are connected, of equal order, share one
/// characteristic polynomial, and are pairwise non-isomorphic.
pub fn verify_family(graphs: &[Graph], kind: SpectrumKind) -> Result<Certificate, Error> {
    if graphs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let facts = member_facts(graphs, kind);
    let mut checks = BTreeMap::new();

    let disconnected: Vec<usize> = (0..facts.len()).filter(|&i| !facts[i].connected).collect();
    checks.insert(
        CHECK_CONNECTED.to_string(),
        if disconnected.is_empty() {
            CheckResult::pass()
        } else {
            CheckResult::fail(format!("members {disconnected:?} are disconnected"))
        },
    );

    let order = facts[0].order;
    checks.insert(
        CHECK_EQUAL_ORDER.to_string(),
        match facts.iter().position(|f| f.order != order) {
            None => CheckResult::pass(),
            Some(i) => {
                CheckResult::fail(format!("member 0 has order {order}, member {i} has order {}", facts[i].order))
            }
        },
    );

    checks.insert(
        CHECK_EQUAL_CHAR_POLY.to_string(),
        match facts.iter().position(|f| f.poly != facts[0].poly) {
            None => CheckResult::pass(),
            Some(i) => CheckResult::fail(format!("members 0 and {i} differ: {} vs {}", facts[0].poly, facts[i].poly)),
        },
    );

    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    let mut duplicate = None;
    for (i, f) in facts.iter().enumerate() {
        if let Some(&j) = seen.get(f.canon.as_str()) {
            duplicate = Some((j, i, f.canon.clone()));
            break;
        }
        seen.insert(&f.canon, i);
    }
    checks.insert(
        CHECK_NON_ISOMORPHIC.to_string(),
        match duplicate {
            None => CheckResult::pass(),
            Some((a, b, canon)) => {
                CheckResult::fail(format!("members ({a}, {b}) are isomorphic, canonical form {canon}"))
            }
        },
    );

    let warnings = facts
        .iter()
        .enumerate()
        .filter(|(_, f)| f.order > CANON_SIZE_CAP)
        .map(|(i, f)| format!("member {i} has order {} above the canonical-form cap {CANON_SIZE_CAP}", f.order))
        .collect();

    let mut cert = Certificate {
        kind,
        valid: false,
        members: facts.iter().map(|f| f.canon.clone()).collect(),
        order,
        char_poly: facts[0].poly.to_decimal_strings(),
        checks,
        conditions: BTreeMap::new(),
        provenance: Vec::new(),
        condition_used: None,
        warnings,
    };
    cert.recompute_validity();
    Ok(cert)
}

/// Outcome of comparing the spectra of two verified families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossSpectra {
    pub distinct: bool,
    pub witness: String,
}

/// Whether two verified families have different shared spectra.
pub fn verify_cross_spectra(g_fam: &CospectralFamily, h_fam: &CospectralFamily) -> Result<CrossSpectra, Error> {
    if !g_fam.is_verified() || !h_fam.is_verified() {
        return Err(Error::UnverifiedFamily);
    }
    if g_fam.kind() != h_fam.kind() {
        return Err(Error::KindMismatch);
    }
    // recompute from the first members rather than trusting the cached polynomial
    let (g0, h0) = (&g_fam.members()[0], &h_fam.members()[0]);
    let witness = if g0.order() != h0.order() {
        Some(format!("orders differ: {} vs {}", g0.order(), h0.order()))
    } else {
        let (pg, ph) = (char_poly(g0, g_fam.kind()), char_poly(h0, h_fam.kind()));
        (pg != ph).then(|| format!("characteristic polynomials differ: {pg} vs {ph}"))
    };
    Ok(match witness {
        Some(w) => CrossSpectra { distinct: true, witness: w },
        None => CrossSpectra {
            distinct: false,
            witness: format!("both families have characteristic polynomial {}", g_fam.char_poly()),
        },
    })
}

/// Number of 3-subsets of `graphs` that share a characteristic polynomial
/// (and order) and are pairwise non-isomorphic.
pub fn enumerate_cospectral_triplets(graphs: &[Graph], kind: SpectrumKind) -> Result<u64, Error> {
    if graphs.len() > TRIPLET_CAP {
        return Err(Error::TooManyGraphs { count: graphs.len(), cap: TRIPLET_CAP });
    }
    let facts = member_facts(graphs, kind);
    let same = |a: &MemberFacts, b: &MemberFacts| a.order == b.order && a.poly == b.poly && a.canon != b.canon;
    let m = facts.len();
    let mut count = 0;
    for i in 0..m {
        for j in i + 1..m {
            if !same(&facts[i], &facts[j]) {
                continue;
            }
            for k in j + 1..m {
                if same(&facts[i], &facts[k]) && same(&facts[j], &facts[k]) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}
