//! Seeded random instances: quasi-trees, and general hypergraphs obtained by
//! adding redundant (cycle-closing) edges to a quasi-tree.
//!
//! All randomness comes from ChaCha8 seeded with a 64-bit value, see
//! [`RNG_ALGORITHM`].

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId, VertexSet};
use crate::topology::{PlacementMap, SegmentId, StorageTopology};

/// Identifier recorded in generated files.
pub const RNG_ALGORITHM: &str = "chacha8(rand_chacha 0.3, seed_from_u64)";

const OVERLAY_ATTEMPTS: usize = 32;
const MAX_RETRIES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub num_users: u32,
    pub num_segments: u32,
    pub max_edge_size: u32,
    pub extra_edges: u32,
    pub seed: u64,
}

impl GenConfig {
    /// Defaults `max_edge_size` to `min(4, V - 1)`.
    pub fn new(num_users: u32, num_segments: u32, seed: u64) -> Self {
        GenConfig {
            num_users,
            num_segments,
            max_edge_size: 4.min(num_users.saturating_sub(1)).max(2),
            extra_edges: 0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_users < 3 {
            return Err(Error::InvalidConfig(format!(
                "need at least 3 users, got {}",
                self.num_users
            )));
        }
        if self.max_edge_size < 2 || self.max_edge_size > self.num_users - 1 {
            return Err(Error::InvalidConfig(format!(
                "max edge size {} outside 2..={}",
                self.max_edge_size,
                self.num_users - 1
            )));
        }
        let base = self.base_segments()?;
        let min_edges = (self.num_users - 1).div_ceil(self.max_edge_size - 1);
        if base < min_edges {
            return Err(Error::Infeasible(format!(
                "{} users need at least {min_edges} edges (max size {}) but only {base} segments remain for the quasi-tree",
                self.num_users, self.max_edge_size
            )));
        }
        Ok(())
    }

    /// Segments left for the quasi-tree once every extra edge has taken one.
    fn base_segments(&self) -> Result<u32> {
        self.num_segments
            .checked_sub(self.extra_edges)
            .ok_or_else(|| {
                Error::Infeasible(format!(
                    "{} extra edges need at least as many segments, got {}",
                    self.extra_edges, self.num_segments
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub topology: StorageTopology,
    pub hypergraph: Hypergraph,
    pub placement: PlacementMap,
}

/// splitmix64 finaliser, used to derive independent sub-seeds.
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut h: u64 = 0x9E37_79B9_7F4A_7C15;
    for &p in parts {
        let mut z = h ^ p.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h = z ^ (z >> 31);
    }
    h
}

/// Random quasi-tree with `cfg.num_segments` segments (`extra_edges` ignored).
pub fn random_quasi_tree(cfg: &GenConfig) -> Result<GeneratedInstance> {
    let cfg = GenConfig {
        extra_edges: 0,
        ..cfg.clone()
    };
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut accepted = None;
    for _ in 0..MAX_RETRIES {
        let edges = grow_skeleton(&cfg, &mut rng)?;
        let edges = overlay(&cfg, edges, &mut rng);
        let h = Hypergraph::with_users(cfg.num_users, edges.iter().map(|e| (e.clone(), 1)))?;
        if h.is_quasi_tree() {
            accepted = Some(edges);
            break;
        }
    }
    let edges = accepted.ok_or(Error::RetryBudgetExhausted(MAX_RETRIES))?;

    // one segment per edge, the rest spread uniformly
    let mut weights = vec![1u64; edges.len()];
    for _ in 0..cfg.num_segments as usize - edges.len() {
        weights[rng.gen_range(0..edges.len())] += 1;
    }
    let h = Hypergraph::with_users(cfg.num_users, edges.into_iter().zip(weights))?;
    let topology = StorageTopology::from_hypergraph(&h, None)?;
    let placement = topology.to_hypergraph().placement;
    Ok(GeneratedInstance {
        topology,
        hypergraph: h,
        placement,
    })
}

/// Berge-acyclic growth: every new edge takes one vertex from each of
/// `size` distinct components and merges them.
fn grow_skeleton<R: Rng>(cfg: &GenConfig, rng: &mut R) -> Result<Vec<VertexSet>> {
    let r = cfg.max_edge_size as usize;
    let budget = cfg.num_segments as usize;
    let needed = |c: usize| if c <= 1 { 0 } else { (c - 1).div_ceil(r - 1) };
    let mut components: Vec<Vec<VertexId>> =
        (1..=cfg.num_users).map(|v| vec![VertexId(v)]).collect();
    let mut edges = Vec::new();
    while components.len() > 1 {
        let c = components.len();
        let feasible: Vec<usize> = (2..=r.min(c))
            .filter(|&s| edges.len() + 1 + needed(c - (s - 1)) <= budget)
            .collect();
        let &size = feasible.choose(rng).ok_or_else(|| {
            Error::Infeasible("not enough segments for a spanning skeleton".into())
        })?;
        let mut picked: Vec<usize> = (0..c).collect();
        picked.shuffle(rng);
        picked.truncate(size);
        picked.sort_unstable();
        let edge: VertexSet = picked
            .iter()
            .map(|&i| *components[i].choose(rng).expect("nonempty component"))
            .collect();
        let mut merged = Vec::new();
        for &i in picked.iter().rev() {
            merged.extend(components.swap_remove(i));
        }
        components.push(merged);
        edges.push(edge);
    }
    Ok(edges)
}

/// Try enlarging edges by one vertex while the result stays a quasi-tree.
/// This produces quasi-trees that are not trees, like {a,b,c},{a,b,d}.
fn overlay<R: Rng>(cfg: &GenConfig, mut edges: Vec<VertexSet>, rng: &mut R) -> Vec<VertexSet> {
    if edges.is_empty() {
        return edges;
    }
    let attempts = rng.gen_range(0..=OVERLAY_ATTEMPTS.min(edges.len()));
    for _ in 0..attempts {
        let i = rng.gen_range(0..edges.len());
        if edges[i].len() >= cfg.max_edge_size as usize {
            continue;
        }
        let v = VertexId(rng.gen_range(1..=cfg.num_users));
        if edges[i].contains(&v) {
            continue;
        }
        let mut grown = edges[i].clone();
        grown.insert(v);
        if edges.contains(&grown) {
            continue;
        }
        let old = std::mem::replace(&mut edges[i], grown);
        let h = Hypergraph::with_users(cfg.num_users, edges.iter().map(|e| (e.clone(), 1)))
            .expect("vertices in range");
        if !h.is_quasi_tree() {
            edges[i] = old;
        }
    }
    edges
}

/// Add `k` redundant edges, each over a new vertex set and carrying one fresh
/// segment numbered after the existing ones. The input must be a quasi-tree.
pub fn add_cycle_edges(
    h: &Hypergraph,
    placement: &PlacementMap,
    k: u32,
    max_edge_size: u32,
    seed: u64,
) -> Result<(Hypergraph, PlacementMap)> {
    if k == 0 {
        return Ok((h.clone(), placement.clone()));
    }
    if !h.is_quasi_tree() {
        return Err(Error::NotQuasiTree);
    }
    let vertices: Vec<VertexId> = h.vertices().iter().copied().collect();
    let max_size = (max_edge_size as usize).min(vertices.len() - 1);
    if max_size < 2 {
        return Err(Error::Infeasible(
            "hypergraph too small for a redundant edge".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = h.clone();
    let mut placement = placement.clone();
    let first = h.total_weight() as u32 + 1;
    let mut taken: BTreeSet<VertexSet> = h.edges().map(|(e, _)| e.clone()).collect();
    for i in 0..k {
        let mut found = None;
        for _ in 0..1000 {
            let size = rng.gen_range(2..=max_size);
            let e: VertexSet = vertices.choose_multiple(&mut rng, size).copied().collect();
            if !taken.contains(&e) {
                found = Some(e);
                break;
            }
        }
        let e = match found {
            Some(e) => e,
            None => first_free_set(&vertices, max_size, &taken)
                .ok_or_else(|| Error::Infeasible("every candidate edge already exists".into()))?,
        };
        taken.insert(e.clone());
        out.add_edge(e.clone(), 1)?;
        placement.insert(e, vec![SegmentId(first + i)]);
    }
    Ok((out, placement))
}

fn first_free_set(
    vertices: &[VertexId],
    max_size: usize,
    taken: &BTreeSet<VertexSet>,
) -> Option<VertexSet> {
    // pairs are enough in practice; larger sets only when all pairs exist
    for size in 2..=max_size {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let e: VertexSet = idx.iter().map(|&i| vertices[i]).collect();
            if !taken.contains(&e) {
                return Some(e);
            }
            // next combination
            let mut i = size;
            while i > 0 && idx[i - 1] == vertices.len() - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}

/// Full instance for a config: a quasi-tree on `W - k` segments plus `k`
/// redundant edges of one segment each, so the total is exactly `W`.
pub fn generate(cfg: &GenConfig) -> Result<GeneratedInstance> {
    cfg.validate()?;
    let base = GenConfig {
        num_segments: cfg.base_segments()?,
        extra_edges: 0,
        seed: mix_seed(&[cfg.seed, 0]),
        ..cfg.clone()
    };
    let tree = random_quasi_tree(&base)?;
    if cfg.extra_edges == 0 {
        return Ok(tree);
    }
    let (h, placement) = add_cycle_edges(
        &tree.hypergraph,
        &tree.placement,
        cfg.extra_edges,
        cfg.max_edge_size,
        mix_seed(&[cfg.seed, 1]),
    )?;
    let topology = StorageTopology::from_hypergraph(&h, Some(&placement))?;
    Ok(GeneratedInstance {
        topology,
        hypergraph: h,
        placement,
    })
}
