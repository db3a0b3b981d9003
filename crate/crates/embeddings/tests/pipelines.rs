use proptest::prelude::*;
use qcut_core::{shortest_path_quasimetric, WeightedDigraph};
use qcut_embeddings::{
    combination_from_distribution, cut_family, cuts_to_l1, cycle_cut_distribution, cycle_cut_distribution_unchecked,
    exact_distortion, tree_cut_distribution, EmbedError, MAX_REMOVED,
};
use qcut_sampling::{enumerate_cycle_law, CycleInstance, QuasipartitionDistribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bidirected_cycle(n: usize, rng: &mut ChaCha8Rng) -> WeightedDigraph {
    let mut g = WeightedDigraph::new(n);
    for i in 0..n {
        let (f, r) = (rng.gen_range(1..=10) as f64, rng.gen_range(1..=10) as f64);
        g.add_bidirected(i, (i + 1) % n, f, r).unwrap();
    }
    g
}

fn bidirected_tree(n: usize, rng: &mut ChaCha8Rng) -> WeightedDigraph {
    let mut g = WeightedDigraph::new(n);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let (f, r) = (rng.gen_range(1..=10) as f64, rng.gen_range(1..=10) as f64);
        g.add_bidirected(u, v, f, r).unwrap();
    }
    g
}

#[test]
fn tree_pipeline_is_isometric_up_to_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    for _ in 0..100 {
        let n = rng.gen_range(2..=64);
        let g = bidirected_tree(n, &mut rng);
        let q = shortest_path_quasimetric(&g);
        let c = tree_cut_distribution(&g).unwrap();
        let e = cuts_to_l1(&c).unwrap();
        let w = g.total_weight();
        for x in 0..n {
            for y in 0..n {
                assert!((e.distance(x, y) * w - q.get(x, y)).abs() <= 1e-9 * w);
                assert!((c.distance(x, y) - e.distance(x, y)).abs() <= 1e-9);
            }
        }
        let d = exact_distortion(&q, |x, y| e.distance(x, y));
        assert!((d.distortion - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn cycle_pipeline_distortions() {
    let mut rng = ChaCha8Rng::seed_from_u64(82);
    for n in [4, 8, 16, 32] {
        let (mut zero_one, mut cut, mut family, mut removed) = (0.0f64, 0.0f64, 0, 0);
        for _ in 0..5 {
            let g = bidirected_cycle(n, &mut rng);
            let q = shortest_path_quasimetric(&g);
            let c = CycleInstance::new(&g).unwrap();
            let law = enumerate_cycle_law(&c);
            let phi = combination_from_distribution(&QuasipartitionDistribution::Explicit(law.distribution().unwrap()))
                .unwrap();
            let d01 = exact_distortion(&q, |x, y| phi.distance(x, y));
            assert!(d01.distortion <= 28.0 + 1e-9, "0-1 distortion {}", d01.distortion);
            zero_one = zero_one.max(d01.distortion);
            // every pair separated by a support member is separated by one of its cuts
            for atom in &law.atoms {
                let fam = cut_family(&c, &atom.removed).unwrap();
                for x in 0..n {
                    for y in 0..n {
                        if !atom.quasipartition.contains(x, y) {
                            assert!(fam.iter().any(|s| s.distance(x, y) == 1.0));
                        }
                    }
                }
            }
            let cuts = cycle_cut_distribution_unchecked(&c, &law).unwrap();
            let l1 = cuts_to_l1(&cuts.combination).unwrap();
            let dc = exact_distortion(&q, |x, y| l1.distance(x, y));
            cut = cut.max(dc.distortion);
            family = family.max(cuts.max_family);
            removed = removed.max(cuts.max_removed);
            match cycle_cut_distribution(&c, &law) {
                Ok(_) => assert!(cuts.max_removed <= MAX_REMOVED),
                Err(EmbedError::TooManyRemoved(k)) => assert!(k > MAX_REMOVED),
                Err(e) => panic!("{e}"),
            }
        }
        println!("n={n}: 0-1 distortion {zero_one:.3}, cut distortion {cut:.3}, max |P_Q| {family}, max |S| {removed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn zero_one_combination_is_a_quasimetric(seed in 0u64..1000, n in 3usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = bidirected_cycle(n, &mut rng);
        let law = enumerate_cycle_law(&CycleInstance::new(&g).unwrap());
        let phi = combination_from_distribution(&QuasipartitionDistribution::Explicit(law.distribution().unwrap()))
            .unwrap();
        let t = phi.table();
        for x in 0..n {
            prop_assert_eq!(t[x * n + x], 0.0);
            for y in 0..n {
                for z in 0..n {
                    prop_assert!(t[x * n + z] <= t[x * n + y] + t[y * n + z] + 1e-9);
                }
            }
        }
    }

    #[test]
    fn cut_coordinates_reproduce_the_combination(seed in 0u64..1000, n in 3usize..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = bidirected_cycle(n, &mut rng);
        let c = CycleInstance::new(&g).unwrap();
        let cuts = cycle_cut_distribution_unchecked(&c, &enumerate_cycle_law(&c)).unwrap();
        let e = cuts_to_l1(&cuts.combination).unwrap();
        for x in 0..n {
            for y in 0..n {
                prop_assert!((e.distance(x, y) - cuts.combination.distance(x, y)).abs() <= 1e-9);
            }
        }
    }
}
