mod common;

use std::collections::BTreeSet;

use hyperbcast::general::{cde_bound, spanning_quasi_tree};
use hyperbcast::generators::{add_cycle_edges, generate, random_quasi_tree, GenConfig};
use hyperbcast::{vset, Hypergraph, SegmentId, SegmentSet, StorageTopology, VertexId, VertexSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_subsets_min_cut, bfs_connected};

fn random_hypergraph(rng: &mut ChaCha8Rng, n: u32, edges: usize) -> Hypergraph {
    let vs: Vec<u32> = (1..=n).collect();
    let mut h = Hypergraph::with_users(n, []).unwrap();
    for _ in 0..edges {
        let size = rng.gen_range(2..=n.max(2) as usize).min(n as usize);
        let e = vset(vs.choose_multiple(rng, size).copied());
        h.add_edge(e, rng.gen_range(1..=4)).unwrap();
    }
    h
}

fn random_topology(rng: &mut ChaCha8Rng, users: u32, segments: u32) -> StorageTopology {
    let mut holdings = vec![SegmentSet::new(); users as usize];
    for s in 1..=segments {
        // at least one holder each
        let first = rng.gen_range(0..users as usize);
        holdings[first].insert(SegmentId(s));
        for h in holdings.iter_mut() {
            if rng.gen_bool(0.35) {
                h.insert(SegmentId(s));
            }
        }
    }
    StorageTopology::new(segments, holdings).unwrap()
}

#[test]
fn connectivity_matches_bfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = rng.gen_range(1..=8);
        let k = rng.gen_range(0..6);
        let h = random_hypergraph(&mut rng, n, if n < 2 { 0 } else { k });
        assert_eq!(h.is_connected(), bfs_connected(&h), "{h:?}");
    }
}

#[test]
fn min_cut_matches_subset_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let n = rng.gen_range(2..=9);
        let k = rng.gen_range(0..8);
        let h = random_hypergraph(&mut rng, n, k);
        let want = all_subsets_min_cut(&h);
        let got = h.min_cut().unwrap();
        assert_eq!(got.capacity, want, "{h:?}");
        assert_eq!(h.cut(&got.witness).unwrap().weight, want);
        assert_eq!(h.min_cut_brute_force().unwrap().capacity, want);
    }
}

#[test]
fn quasi_tree_detector_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let n = rng.gen_range(2..=7);
        let k = rng.gen_range(1..6);
        let h = random_hypergraph(&mut rng, n, k);
        let by_def =
            bfs_connected(&h) && h.edges().all(|(e, _)| !bfs_connected(&h.without_edge(e)));
        assert_eq!(h.is_quasi_tree(), by_def);
        if by_def {
            let scan = h.min_cut_quasi_tree().unwrap().capacity;
            assert_eq!(scan, h.min_edge_weight().unwrap());
            assert_eq!(scan, all_subsets_min_cut(&h));
        }
    }
}

#[test]
fn fig2_minus_bridge_is_disconnected() {
    let fig2 = Hypergraph::with_users(
        6,
        [
            (vset([1, 4]), 1),
            (vset([2, 3]), 1),
            (vset([4, 5]), 1),
            (vset([3, 5, 6]), 1),
        ],
    )
    .unwrap();
    let h = fig2.without_edge(&vset([1, 4]));
    assert!(!h.is_connected());
    assert!(!bfs_connected(&h));
}

#[test]
fn edge_partition_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..50 {
        let n = rng.gen_range(2..=8);
        let k = rng.gen_range(0..8);
        let h = random_hypergraph(&mut rng, n, k);
        let vs: Vec<VertexId> = h.vertices().iter().copied().collect();
        let size = rng.gen_range(1..vs.len());
        let x: VertexSet = vs.choose_multiple(&mut rng, size).copied().collect();
        let part = h.partition_edges(&x).unwrap();
        // direct classification
        for (e, _) in h.edges() {
            let inside = e.iter().all(|v| x.contains(v));
            let outside = e.iter().all(|v| !x.contains(v));
            let in_c = part.crossing.iter().any(|c| &c.vertices == e);
            let in_i = part.inside.iter().any(|c| &c.vertices == e);
            let in_o = part.outside.iter().any(|c| &c.vertices == e);
            assert_eq!((in_c, in_i, in_o), (!inside && !outside, inside, outside));
        }
        let (c, i, o) = part.weights();
        assert_eq!(c + i + o, h.total_weight());
        assert_eq!(c, h.cut(&x).unwrap().weight);
    }
}

#[test]
fn segments_for_matches_set_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..30 {
        let users = rng.gen_range(2..=6);
        let w = rng.gen_range(1..=12);
        let t = random_topology(&mut rng, users, w);
        let all: Vec<VertexId> = t.users().collect();
        for size in 1..=3.min(all.len()) {
            for _ in 0..10 {
                let e: VertexSet = all.choose_multiple(&mut rng, size).copied().collect();
                let mut inter: Option<SegmentSet> = None;
                let mut union = SegmentSet::new();
                for v in &e {
                    let a = t.holdings(*v);
                    union.extend(a.iter().copied());
                    inter = Some(match inter {
                        None => a.clone(),
                        Some(acc) => acc.intersection(a).copied().collect(),
                    });
                }
                let others: SegmentSet = all
                    .iter()
                    .filter(|v| !e.contains(v))
                    .flat_map(|v| t.holdings(*v).iter().copied())
                    .collect();
                let want: SegmentSet = inter.unwrap().difference(&others).copied().collect();
                assert_eq!(t.segments_for(&e).unwrap(), want);
                assert_eq!(t.union_storage(&e).unwrap(), union);
            }
        }
    }
}

#[test]
fn to_hypergraph_groups_by_holder_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..50 {
        let users = rng.gen_range(3..=6);
        let w = rng.gen_range(1..=15);
        let t = random_topology(&mut rng, users, w);
        let d = t.to_hypergraph();
        let mut seen = SegmentSet::new();
        for (e, wt) in d.hypergraph.edges() {
            let ids: SegmentSet = d.placement[e].iter().copied().collect();
            assert_eq!(ids.len() as u64, wt);
            assert_eq!(t.segments_for(e).unwrap(), ids);
            for s in &ids {
                assert!(seen.insert(*s), "segment in two edges");
            }
        }
        for s in &d.leftovers {
            let n = t.holders(*s).len();
            assert!(n <= 1 || n == users as usize);
            assert!(seen.insert(*s));
        }
        assert_eq!(seen.len(), w as usize);
        if d.leftovers.is_empty() {
            assert_eq!(d.hypergraph.total_weight(), w as u64);
        }
    }
}

#[test]
fn generated_quasi_trees() {
    for seed in 0..500u64 {
        let v = 3 + (seed % 10) as u32;
        let w = 12 + (seed % 53) as u32;
        let g = random_quasi_tree(&GenConfig::new(v, w, seed)).unwrap();
        assert!(g.hypergraph.is_quasi_tree(), "seed {seed}");
        assert_eq!(g.hypergraph.total_weight(), w as u64);
        let d = g.topology.to_hypergraph();
        assert!(d.leftovers.is_empty());
        assert_eq!(d.hypergraph, g.hypergraph);
        for s in g.topology.segments() {
            let n = g.topology.holders(s).len();
            assert!((2..v as usize).contains(&n));
        }
        let back = StorageTopology::from_hypergraph(&g.hypergraph, Some(&g.placement)).unwrap();
        assert_eq!(back, g.topology);
    }
}

#[test]
fn generator_produces_non_tree_quasi_trees() {
    // the overlay step should sometimes create an edge pair sharing >= 2 vertices
    let mut found = false;
    for seed in 0..200u64 {
        let g = random_quasi_tree(&GenConfig::new(8, 20, seed)).unwrap();
        let edges: Vec<&VertexSet> = g.hypergraph.edges().map(|(e, _)| e).collect();
        if edges.iter().enumerate().any(|(i, a)| {
            edges[i + 1..]
                .iter()
                .any(|b| a.intersection(b).count() >= 2)
        }) {
            found = true;
            break;
        }
    }
    assert!(found);
}

#[test]
fn cycle_edges_on_random_quasi_trees() {
    for seed in 0..200u64 {
        let g = random_quasi_tree(&GenConfig::new(4 + (seed % 8) as u32, 30, seed)).unwrap();
        let k = 1 + (seed % 3) as u32;
        let (h, p) = add_cycle_edges(&g.hypergraph, &g.placement, k, 3, seed).unwrap();
        assert!(h.is_connected());
        assert!(!h.is_quasi_tree());
        assert_eq!(h.total_weight(), 30 + k as u64);
        let t = StorageTopology::from_hypergraph(&h, Some(&p)).unwrap();
        assert!(t.to_hypergraph().leftovers.is_empty());
    }
}

#[test]
fn fig2_plus_edge_is_general() {
    let mut h = Hypergraph::with_users(
        6,
        [
            (vset([1, 4]), 1),
            (vset([2, 3]), 1),
            (vset([4, 5]), 1),
            (vset([3, 5, 6]), 1),
        ],
    )
    .unwrap();
    h.add_edge(vset([1, 2]), 1).unwrap();
    assert!(h.is_connected());
    assert!(!h.is_quasi_tree());
}

#[test]
fn spanning_reduction_random() {
    for seed in 0..100u64 {
        let cfg = GenConfig {
            extra_edges: 1 + (seed % 3) as u32,
            ..GenConfig::new(5 + (seed % 7) as u32, 30, seed)
        };
        let g = generate(&cfg).unwrap();
        assert!(!g.hypergraph.is_quasi_tree());
        let r = spanning_quasi_tree(&g.hypergraph).unwrap();
        assert!(r.kept.is_quasi_tree());
        assert_eq!(r.kept.vertices(), g.hypergraph.vertices());
        let mut all: BTreeSet<VertexSet> = r.kept.edges().map(|(e, _)| e.clone()).collect();
        for e in &r.removed {
            assert!(all.insert(e.vertices.clone()));
        }
        let orig: BTreeSet<VertexSet> = g.hypergraph.edges().map(|(e, _)| e.clone()).collect();
        assert_eq!(all, orig);
        assert_eq!(r.delta_kept, r.kept.min_edge_weight().unwrap());
    }
}

#[test]
fn bound_dominance_and_strict_witness() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut strict = None;
    for _ in 0..400 {
        let n = rng.gen_range(3..=7);
        let k = rng.gen_range(1..8);
        let h = random_hypergraph(&mut rng, n, k);
        let cut_bound = h.total_weight() - h.min_cut().unwrap().capacity;
        let cde = cde_bound(&h);
        assert!(cut_bound >= cde);
        if cut_bound > cde && strict.is_none() {
            strict = Some(h);
        }
    }
    let h = strict.expect("some instance where the min-cut is not a vertex star");
    let min_star = h
        .vertices()
        .iter()
        .map(|&v| h.degree(v).unwrap().1)
        .min()
        .unwrap();
    assert!(all_subsets_min_cut(&h) < min_star);
}

#[test]
fn trees_are_quasi_trees() {
    // graph trees (all edges of size 2) built by attaching each vertex to an earlier one
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..100 {
        let n = rng.gen_range(2..=10u32);
        let edges = (2..=n).map(|v| (vset([rng.gen_range(1..v), v]), rng.gen_range(1..4)));
        let h = Hypergraph::with_users(n, edges.collect::<Vec<_>>()).unwrap();
        assert!(h.is_quasi_tree());
    }
}
