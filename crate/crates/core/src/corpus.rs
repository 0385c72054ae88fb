//! Graph corpora: family files, exhaustive small-graph generation and
//! discovery of cospectral seed families.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::canon::canonical_form_uncapped;
use crate::cartesian::factors_or_unit;
use crate::construct::CospectralFamily;
use crate::error::Error;
use crate::graph::Graph;
use crate::graph6::{emit_graph6, parse_graph6};
use crate::spectrum::{char_poly, spectral_key_of, SpectrumKind};

/// Largest order accepted by [`generate_small_corpus`].
pub const MAX_CORPUS_ORDER: usize = 8;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub graph: Graph,
    /// 1-based line number in the source file.
    pub line: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub total: usize,
    pub connected: usize,
    /// Entries whose canonical form already appeared earlier in the corpus.
    pub duplicate_canonical: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    pub stats: CorpusStats,
}

impl Corpus {
    pub fn from_entries(entries: Vec<CorpusEntry>) -> Corpus {
        let canon: Vec<String> = entries.par_iter().map(|e| canonical_form_uncapped(&e.graph).canon_g6).collect();
        let distinct: BTreeSet<&String> = canon.iter().collect();
        let stats = CorpusStats {
            total: entries.len(),
            connected: entries.iter().filter(|e| e.graph.is_connected()).count(),
            duplicate_canonical: entries.len() - distinct.len(),
        };
        Corpus { entries, stats }
    }

    /// Parses a family/corpus file: one graph6 string per line; blank lines
    /// and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Corpus, Error> {
        Ok(Corpus::from_entries(parse_graph_lines(text)?))
    }

    pub fn graphs(&self) -> impl Iterator<Item = &Graph> {
        self.entries.iter().map(|e| &e.graph)
    }

    /// One graph6 string per line.
    pub fn to_graph6_lines(&self) -> String {
        let mut out = String::new();
        for g in self.graphs() {
            out.push_str(&emit_graph6(g).expect("corpus graphs are small"));
            out.push('\n');
        }
        out
    }
}

pub fn parse_graph_lines(text: &str) -> Result<Vec<CorpusEntry>, Error> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let graph = parse_graph6(line.as_bytes()).map_err(|source| Error::Parse { line: i + 1, source })?;
        entries.push(CorpusEntry { graph, line: i + 1 });
    }
    Ok(entries)
}

/// Renders a family as a family file, with a descriptive comment header.
pub fn family_file(family: &CospectralFamily) -> String {
    let mut out = format!(
        "# kind={} order={} size={} char_poly={}\n",
        family.kind(),
        family.order(),
        family.len(),
        family.char_poly()
    );
    for g in family.members() {
        out.push_str(&emit_graph6(g).expect("family graphs fit graph6"));
        out.push('\n');
    }
    out
}

/// Connected graphs on exactly `n` vertices, one canonical representative
/// per isomorphism class, sorted by canonical graph6.
///
/// Every connected graph has a vertex whose removal leaves it connected, so
/// the classes on `n` vertices are exactly the one-vertex extensions of the
/// classes on `n - 1` vertices by a non-empty neighbourhood.
fn extend_classes(prev: &[Graph]) -> Vec<Graph> {
    let canon: BTreeSet<String> = prev
        .par_iter()
        .flat_map_iter(|g| {
            let n = g.order();
            (1u64..1 << n).map(move |mask| {
                let mut h = Graph::edgeless(n + 1);
                for (u, v) in g.edges() {
                    h.set_edge(u, v);
                }
                for u in 0..n {
                    if mask & (1 << u) != 0 {
                        h.set_edge(u, n);
                    }
                }
                canonical_form_uncapped(&h).canon_g6
            })
        })
        .collect();
    canon.into_iter().map(|s| parse_graph6(s.as_bytes()).unwrap()).collect()
}

/// All connected graphs on `1..=n_max` vertices up to isomorphism, ordered
/// by order and then canonical graph6.
pub fn generate_small_corpus(n_max: usize) -> Result<Corpus, Error> {
    if n_max > MAX_CORPUS_ORDER {
        return Err(Error::CorpusTooLarge(n_max));
    }
    let mut graphs = Vec::new();
    let mut layer = vec![Graph::complete(1)];
    for n in 1..=n_max {
        if n > 1 {
            layer = extend_classes(&layer);
        }
        graphs.extend(layer.iter().cloned());
    }
    let entries: Vec<CorpusEntry> =
        graphs.into_iter().enumerate().map(|(i, graph)| CorpusEntry { graph, line: i + 1 }).collect();
    let stats = CorpusStats { total: entries.len(), connected: entries.len(), duplicate_canonical: 0 };
    Ok(Corpus { entries, stats })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedOptions {
    pub min_size: usize,
    /// Keep only a pairwise coprime subset of each group.
    pub require_coprime: bool,
    /// Keep only Cartesian prime members.
    pub require_prime: bool,
}

impl Default for SeedOptions {
    fn default() -> Self {
        SeedOptions { min_size: 2, require_coprime: false, require_prime: false }
    }
}

/// Groups the connected graphs of a corpus by spectrum and returns every
/// group of at least `min_size` pairwise non-isomorphic members as a
/// verified family, ordered by (order, spectral key). Members are canonical
/// graphs sorted by canonical graph6.
pub fn find_seed_families(
    corpus: &Corpus,
    kind: SpectrumKind,
    opts: SeedOptions,
) -> Result<Vec<CospectralFamily>, Error> {
    let keyed: Vec<(Vec<u8>, String)> = corpus
        .entries
        .par_iter()
        .filter(|e| e.graph.is_connected())
        .map(|e| {
            let key = spectral_key_of(e.graph.order(), &char_poly(&e.graph, kind), kind);
            (key, canonical_form_uncapped(&e.graph).canon_g6)
        })
        .collect();

    let mut groups: BTreeMap<(usize, Vec<u8>), BTreeSet<String>> = BTreeMap::new();
    for (key, canon) in keyed {
        let order = parse_graph6(canon.as_bytes()).map(|g| g.order()).unwrap_or(0);
        groups.entry((order, key)).or_default().insert(canon);
    }

    let candidates: Vec<Vec<Graph>> = groups
        .into_values()
        .filter(|g| g.len() >= opts.min_size.max(1))
        .map(|g| g.into_iter().map(|s| parse_graph6(s.as_bytes()).unwrap()).collect())
        .collect();

    let filtered: Vec<Option<Vec<Graph>>> = candidates
        .into_par_iter()
        .map(|members| -> Result<Option<Vec<Graph>>, Error> {
            let members = if opts.require_prime || opts.require_coprime {
                let factors = members.iter().map(factors_or_unit).collect::<Result<Vec<_>, _>>()?;
                let mut kept: Vec<usize> = Vec::new();
                for (i, f) in factors.iter().enumerate() {
                    if opts.require_prime && f.len() != 1 {
                        continue;
                    }
                    if opts.require_coprime && kept.iter().any(|&j| factors[j].shared_with(f).next().is_some()) {
                        continue;
                    }
                    kept.push(i);
                }
                kept.into_iter().map(|i| members[i].clone()).collect()
            } else {
                members
            };
            Ok((members.len() >= opts.min_size.max(1)).then_some(members))
        })
        .collect::<Result<_, _>>()?;

    filtered.into_iter().flatten().map(|members| CospectralFamily::verify(members, kind)).collect()
}
