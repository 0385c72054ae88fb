mod common;

use common::{component_count, random_graph, reference_graph6};
use cospec_core::corpus::generate_small_corpus;
use cospec_core::{emit_graph6, parse_graph6, Graph};
use proptest::prelude::*;
use rand::Rng;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn graph6_round_trip(g in arb_graph(70)) {
        let s = emit_graph6(&g).unwrap();
        prop_assert_eq!(&s, &reference_graph6(&g));
        prop_assert_eq!(parse_graph6(s.as_bytes()).unwrap(), g);
    }

    #[test]
    fn connectivity_matches_union_find(g in arb_graph(24)) {
        prop_assert_eq!(g.is_connected(), component_count(&g) == 1);
    }

    #[test]
    fn relabel_preserves_degree_multiset(g in arb_graph(16), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let perm = common::random_perm(&mut rng, g.order());
        let h = g.relabel(&perm);
        for (v, &image) in perm.iter().enumerate() {
            prop_assert_eq!(g.degree(v), h.degree(image));
        }
        prop_assert_eq!(g.edge_count(), h.edge_count());
    }
}

#[test]
fn sparse_random_graphs_match_union_find() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=30);
        let g = random_graph(&mut rng, n, 1.5 / n as f64);
        assert_eq!(g.is_connected(), component_count(&g) == 1, "{g:?}");
    }
}

#[test]
fn corpus_round_trips_byte_exact() {
    let corpus = generate_small_corpus(7).unwrap();
    for line in corpus.to_graph6_lines().lines() {
        let g = parse_graph6(line.as_bytes()).unwrap();
        assert_eq!(emit_graph6(&g).unwrap(), line);
    }
}

#[test]
fn four_byte_size_prefix_round_trips() {
    let g = Graph::cycle(63);
    let s = emit_graph6(&g).unwrap();
    assert_eq!(&s.as_bytes()[..4], &[126, 63, 63, 63 + 63]);
    assert_eq!(parse_graph6(s.as_bytes()).unwrap(), g);
}
