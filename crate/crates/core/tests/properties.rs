use proptest::prelude::*;
use qcut_core::*;

fn arb_graph() -> impl Strategy<Value = WeightedDigraph> {
    (1usize..9).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 0.0f64..10.0), 0..25).prop_map(move |es| {
            let mut g = WeightedDigraph::new(n);
            for (a, b, w) in es {
                if a != b {
                    g.add_edge(a, b, w).unwrap();
                }
            }
            g
        })
    })
}

fn arb_relation() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (1usize..10).prop_flat_map(|n| (Just(n), prop::collection::vec(prop::bool::weighted(0.2), n * n)))
}

/// Floyd–Warshall oracle, independent of the Dijkstra implementation.
fn floyd(g: &WeightedDigraph) -> Vec<f64> {
    let n = g.vertex_count();
    let mut d = vec![f64::INFINITY; n * n];
    for x in 0..n {
        d[x * n + x] = 0.0;
    }
    for e in g.edges() {
        let c = &mut d[e.tail * n + e.head];
        *c = c.min(e.weight);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i * n + k] + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    d
}

proptest! {
    #[test]
    fn shortest_paths_form_a_relaxed_quasimetric(g in arb_graph()) {
        let q = shortest_path_quasimetric(&g);
        prop_assert!(validate_quasimetric(&q, false).is_empty());
        for (a, b) in q.table().iter().zip(floyd(&g)) {
            prop_assert!(approx_eq(*a, b));
        }
    }

    #[test]
    fn closure_is_monotone_and_idempotent((n, rel) in arb_relation()) {
        let q = transitive_closure(n, &rel).unwrap();
        for i in 0..n * n {
            prop_assert!(!rel[i] || q.contains(i / n, i % n));
        }
        prop_assert!(q.is_reflexive() && q.is_transitive());
        prop_assert_eq!(transitive_closure(n, &q.to_matrix()).unwrap(), q);
    }

    #[test]
    fn zero_one_from_closure_is_a_quasimetric((n, rel) in arb_relation()) {
        let q = transitive_closure(n, &rel).unwrap();
        prop_assert_eq!(zero_one_from_quasipartition(&q).triangle_violation(), None);
    }

    #[test]
    fn cut_metrics_are_zero_one(side in prop::collection::vec(any::<bool>(), 1..64)) {
        let c = DirectedCutMetric::from_indicator(side);
        prop_assert_eq!(c.to_zero_one().triangle_violation(), None);
    }

    #[test]
    fn directed_l1_axioms(
        pts in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 4), 3)
    ) {
        let (x, y, z) = (&pts[0], &pts[1], &pts[2]);
        let dxy = directed_l1_distance(x, y).unwrap();
        let dyz = directed_l1_distance(y, z).unwrap();
        let dxz = directed_l1_distance(x, z).unwrap();
        prop_assert!(dxy >= 0.0);
        prop_assert_eq!(directed_l1_distance(x, x).unwrap(), 0.0);
        prop_assert!(approx_le(dxz, dxy + dyz));
    }
}

#[test]
fn directed_l1_triangle_on_many_triples() {
    // deterministic LCG so the 10^5 triples do not depend on proptest's budget
    let mut s: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) * 20.0 - 10.0
    };
    for _ in 0..100_000 {
        let x: Vec<f64> = (0..3).map(|_| next()).collect();
        let y: Vec<f64> = (0..3).map(|_| next()).collect();
        let z: Vec<f64> = (0..3).map(|_| next()).collect();
        let lhs = directed_l1_distance(&x, &z).unwrap();
        let rhs = directed_l1_distance(&x, &y).unwrap() + directed_l1_distance(&y, &z).unwrap();
        assert!(approx_le(lhs, rhs));
    }
}

#[test]
fn cut_metrics_exhaustive_triple_scan_n64() {
    for shift in 0..8u32 {
        let side: Vec<bool> = (0..64u32).map(|i| (i * 7 + shift) % 3 == 0).collect();
        let c = DirectedCutMetric::from_indicator(side);
        for x in 0..64 {
            for y in 0..64 {
                for z in 0..64 {
                    assert!(c.distance(x, z) <= c.distance(x, y) + c.distance(y, z));
                }
            }
        }
    }
}
