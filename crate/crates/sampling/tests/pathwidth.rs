mod common;

use qcut_core::{bound_check, shortest_path_quasimetric};
use qcut_decompositions::EdgeKind;
use qcut_sampling::threshold::crosses;
use qcut_sampling::{
    calibrate_alpha, enumerate_pathwidth_support, stream, total_variation, PathwidthSampler,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn slack(bound: f64, samples: usize) -> f64 {
    let p = bound.min(1.0);
    bound + 4.0 * (p * (1.0 - p) / samples as f64).sqrt()
}

#[test]
fn removal_frequency_within_sweep_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let samples = 2000;
    for k in 1..=3 {
        for inst in 0..3 {
            let n = rng.gen_range(k + 2..=14);
            let pc = common::clique_host(n, k, &mut rng);
            let dist = shortest_path_quasimetric(pc.host());
            let r = dist.diameter() / [1.0, 3.0, 6.0][inst];
            let s = PathwidthSampler::new(&pc, r).unwrap();
            let m = pc.host().edge_count();
            let mut hits = vec![0usize; m];
            for i in 0..samples {
                let out = s.sample(&mut stream(k as u64 * 10 + inst as u64, i as u64));
                for (e, h) in hits.iter_mut().enumerate() {
                    *h += usize::from(out.removed_at[e].is_some());
                }
            }
            let beta = (2 * k * k + 1) as f64;
            for e in 0..m {
                let ed = pc.host().edge(e);
                let d = dist.get(ed.tail, ed.head) / r;
                let f = hits[e] as f64 / samples as f64;
                assert!(f <= slack(beta * d, samples), "k={k} edge {e}: {f} vs {}", beta * d);
            }
        }
    }
}

#[test]
fn kept_pairs_have_surviving_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for k in 1..=3 {
        let pc = common::clique_host(12, k, &mut rng);
        let r = shortest_path_quasimetric(pc.host()).diameter() / 3.0;
        let s = PathwidthSampler::new(&pc, r).unwrap();
        let n = pc.host().vertex_count();
        for i in 0..30 {
            let out = s.sample(&mut stream(k as u64, i));
            let mut adj = vec![Vec::new(); n];
            for e in out.kept_edges() {
                let ed = pc.host().edge(e);
                adj[ed.tail].push(ed.head);
            }
            for u in 0..n {
                let mut seen = vec![false; n];
                let mut stack = vec![u];
                seen[u] = true;
                while let Some(a) = stack.pop() {
                    for &b in &adj[a] {
                        if !std::mem::replace(&mut seen[b], true) {
                            stack.push(b);
                        }
                    }
                }
                for v in 0..n {
                    assert_eq!(out.host.contains(u, v), seen[v]);
                }
            }
        }
    }
}

#[test]
fn sweeps_cover_horizontal_edges() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let (mut runs, mut uncovered_runs) = (0, 0);
    for k in 1..=3 {
        for _ in 0..10 {
            let n = rng.gen_range(k + 2..=20);
            let pc = common::clique_host(n, k, &mut rng);
            let s = PathwidthSampler::new(&pc, 1.0).unwrap();
            runs += 1;
            uncovered_runs += usize::from(!s.uncovered_horizontal().is_empty());
            for sw in s.forward().iter().chain(s.backward()).flatten() {
                let horizontal = sw.path.iter().filter(|&&e| pc.edge_kind(e) != EdgeKind::Vertical);
                assert!(horizontal.count() >= pc.cliques().len() - 1);
            }
        }
    }
    println!("runs with uncovered horizontal edges: {uncovered_runs}/{runs}");
}

/// A surviving path that avoids earlier sweep paths and is not cut by sweep
/// `i` joins two vertices of `p_i` at distance at most `r`.
#[test]
fn uncut_segments_of_sweep_paths_are_short() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for k in 1..=2 {
        let pc = common::clique_host(8, k, &mut rng);
        let g = pc.host();
        let dist = shortest_path_quasimetric(g);
        let r = dist.diameter() / 4.0;
        let s = PathwidthSampler::new(&pc, r).unwrap();
        for t in 0..20 {
            let z = (t as f64 + 0.5) / 20.0 * r;
            for (i, sw) in s.forward().iter().enumerate() {
                let Some(sw) = sw else { continue };
                let mut verts = vec![sw.source];
                verts.extend(sw.path.iter().map(|&e| g.edge(e).head));
                let cut_here = |e: usize| {
                    let ed = g.edge(e);
                    crosses(sw.dist[ed.tail], sw.dist[ed.head], z, r)
                };
                let mut adj = vec![Vec::new(); g.vertex_count()];
                for &e in &sw.alive {
                    if !cut_here(e) {
                        adj[g.edge(e).tail].push(g.edge(e).head);
                    }
                }
                for (j, &u) in verts.iter().enumerate() {
                    let mut seen = vec![false; g.vertex_count()];
                    let mut stack = vec![u];
                    seen[u] = true;
                    while let Some(a) = stack.pop() {
                        for &b in &adj[a] {
                            if !std::mem::replace(&mut seen[b], true) {
                                stack.push(b);
                            }
                        }
                    }
                    for &v in verts[j..].iter().filter(|&&v| seen[v]) {
                        assert!(dist.get(u, v) <= r + 1e-9, "sweep {i}: {u}->{v} at {}", dist.get(u, v));
                    }
                }
            }
        }
    }
}

#[test]
fn enumerated_support_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let pc = common::clique_host(10, 2, &mut rng);
    let r = shortest_path_quasimetric(pc.host()).diameter() / 3.0;
    let (law, report) = enumerate_pathwidth_support(&pc, r).unwrap();
    assert!(report.within_bound());
    let n = pc.host().vertex_count();
    assert!(report.forward_breakpoints.iter().all(|&b| b < n));
    let s = PathwidthSampler::new(&pc, r).unwrap();
    let draws: Vec<_> = (0..20_000).map(|i| s.sample(&mut stream(9, i)).host).collect();
    let tv = total_variation(&law, &draws);
    assert!(tv <= 0.03, "tv {tv}");
}

#[test]
fn calibrated_alpha_bounds_every_support_member() {
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    for k in 1..=3 {
        let pc = common::clique_host(12, k, &mut rng);
        let dist = shortest_path_quasimetric(pc.host());
        let delta = dist.diameter() / 4.0;
        let alpha = calibrate_alpha(&pc, delta, 4).unwrap().expect("some alpha works");
        let r = delta / 2f64.powi((alpha * (k * k) as u32) as i32);
        let (law, _) = enumerate_pathwidth_support(&pc, r).unwrap();
        for (q, _) in law.support() {
            assert!(bound_check(q, &dist, delta).unwrap().bounded);
        }
    }
}
