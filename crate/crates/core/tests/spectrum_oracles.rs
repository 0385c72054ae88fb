mod common;

use common::{adjacency, bareiss_det, char_poly_at, laplacian, random_connected, random_graph, random_perm};
use cospec_core::spectrum::{char_poly_faddeev_leverrier, float_eigenvalues};
use cospec_core::{cartesian_product, char_poly, cospectral, spectral_key, Graph, SpectrumKind};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KINDS: [SpectrumKind; 2] = [SpectrumKind::Adjacency, SpectrumKind::Laplacian];

fn matrix(g: &Graph, kind: SpectrumKind) -> Vec<Vec<i64>> {
    match kind {
        SpectrumKind::Adjacency => adjacency(g),
        SpectrumKind::Laplacian => laplacian(g),
    }
}

#[test]
fn agrees_with_determinant_at_enough_points() {
    // A monic degree-n polynomial is pinned down by its values at n points.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let density = rng.gen_range(0.1..0.9);
        let g = random_graph(&mut rng, n, density);
        for kind in KINDS {
            let poly = char_poly(&g, kind);
            assert_eq!(poly.degree(), n);
            let m = matrix(&g, kind);
            for t in -2..n as i64 - 1 {
                assert_eq!(poly.eval(&BigInt::from(t)), char_poly_at(&m, t), "{g:?} {kind} t={t}");
            }
        }
    }
}

#[test]
fn c4_adjacency_from_determinant_oracle() {
    let m = adjacency(&Graph::cycle(4));
    // x^4 - 4x^2 evaluated at 0..=4
    let expected = [0, -3, 0, 45, 192];
    for (t, e) in expected.iter().enumerate() {
        assert_eq!(char_poly_at(&m, t as i64), BigInt::from(*e));
    }
    assert_eq!(char_poly(&Graph::cycle(4), SpectrumKind::Adjacency).to_string(), "x^4 - 4x^2");
}

#[test]
fn modular_and_rational_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..60 {
        let n = rng.gen_range(1..=24);
        let density = rng.gen_range(0.05..0.95);
        let g = random_graph(&mut rng, n, density);
        for kind in KINDS {
            assert_eq!(char_poly(&g, kind), char_poly_faddeev_leverrier(&g, kind), "{g:?} {kind}");
        }
    }
}

#[test]
fn invariant_under_relabeling_and_structural_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let n = rng.gen_range(2..=14);
        let g = random_graph(&mut rng, n, 0.4);
        let h = g.relabel(&random_perm(&mut rng, n));
        for kind in KINDS {
            assert_eq!(char_poly(&g, kind), char_poly(&h, kind));
            assert!(cospectral(&g, &h, kind));
            assert_eq!(spectral_key(&g, kind), spectral_key(&h, kind));
        }
        let a = char_poly(&g, SpectrumKind::Adjacency);
        assert_eq!(a.coeffs()[n - 1], BigInt::from(0));
        assert_eq!(a.coeffs()[n - 2], -BigInt::from(g.edge_count()));
        let l = char_poly(&g, SpectrumKind::Laplacian);
        assert_eq!(l.coeffs()[0], BigInt::from(0));
        assert_eq!(l.coeffs()[n - 1], -BigInt::from(2 * g.edge_count()));
    }
}

#[test]
fn laplacian_linear_coefficient_counts_spanning_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let n = rng.gen_range(2..=12);
        let g = random_connected(&mut rng, n, 0.3);
        let l = laplacian(&g);
        let reduced: Vec<Vec<BigInt>> = (1..n).map(|i| (1..n).map(|j| BigInt::from(l[i][j])).collect()).collect();
        let trees = bareiss_det(&reduced);
        let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
        let expected = BigInt::from(sign) * BigInt::from(n) * trees;
        assert_eq!(char_poly(&g, SpectrumKind::Laplacian).coeffs()[1], expected, "{g:?}");
    }
}

#[test]
fn float_eigenvalues_are_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.gen_range(1..=10);
        let g = random_graph(&mut rng, n, 0.5);
        for kind in KINDS {
            let vals = float_eigenvalues(&g, kind).unwrap();
            assert_eq!(vals.len(), n);
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
            let trace: f64 = vals.iter().sum();
            let expected = match kind {
                SpectrumKind::Adjacency => 0.0,
                SpectrumKind::Laplacian => 2.0 * g.edge_count() as f64,
            };
            assert!((trace - expected).abs() < 1e-8);
        }
    }
}

#[test]
fn product_spectrum_is_pairwise_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..40 {
        let ng = rng.gen_range(1..=5);
        let g = random_graph(&mut rng, ng, 0.5);
        let nh = rng.gen_range(1..=5);
        let h = random_graph(&mut rng, nh, 0.5);
        let p = cartesian_product(&g, &h);
        for kind in KINDS {
            let (eg, eh) = (float_eigenvalues(&g, kind).unwrap(), float_eigenvalues(&h, kind).unwrap());
            let mut sums: Vec<f64> = eg.iter().flat_map(|a| eh.iter().map(move |b| a + b)).collect();
            sums.sort_by(f64::total_cmp);
            let ep = float_eigenvalues(&p, kind).unwrap();
            for (x, y) in sums.iter().zip(&ep) {
                assert!((x - y).abs() < 1e-8, "{kind}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn cospectral_requires_equal_order() {
    assert!(!cospectral(&Graph::complete(2), &Graph::path(3), SpectrumKind::Adjacency));
    assert_ne!(
        spectral_key(&Graph::complete(2), SpectrumKind::Laplacian),
        spectral_key(&Graph::path(3), SpectrumKind::Laplacian)
    );
}
