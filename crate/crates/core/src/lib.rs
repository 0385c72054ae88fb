//! Connected cospectral graph families built from Cartesian products.
//!
//! The crate covers the whole pipeline: graphs and their graph6 encoding
//! ([`graph`], [`graph6`]), exact characteristic polynomials ([`spectrum`]),
//! canonical labeling ([`canon`]), Cartesian products and prime
//! factorization ([`cartesian`]), the family constructions themselves
//! ([`construct`]), independent certification ([`verify`]) and seed
//! discovery over small-graph corpora ([`corpus`]).

pub mod canon;
pub mod cartesian;
pub mod construct;
pub mod corpus;
mod error;
pub mod graph;
pub mod graph6;
pub mod spectrum;
pub mod verify;

pub use canon::{are_isomorphic, canonical_form, CanonicalForm};
pub use cartesian::{
    are_coprime, cartesian_product, common_factor, is_prime, prime_factorize, CommonFactorDecomposition, FactorMultiset,
};
pub use construct::{
    build_power_family, build_product_family, build_relaxed_family, count_new_triplets, fallback_family,
    ConstructionResult, CospectralFamily, ExponentVector, Justification, Provenance,
};
pub use error::Error;
pub use graph::Graph;
pub use graph6::{emit_graph6, parse_graph6, Graph6Error};
pub use spectrum::{char_poly, cospectral, spectral_key, CharPoly, SpectrumKind};
pub use verify::{enumerate_cospectral_triplets, verify_cross_spectra, verify_family, Certificate};
