//! Reference implementations kept independent of the library's code paths.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hyperbcast::{Hypergraph, VertexId};

pub const P: u64 = 2_147_483_647;

/// Reachability by repeated edge scans.
pub fn bfs_connected(h: &Hypergraph) -> bool {
    let Some(&start) = h.vertices().iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut frontier = vec![start];
    while let Some(v) = frontier.pop() {
        for (e, _) in h.edges() {
            if e.contains(&v) {
                for u in e {
                    if seen.insert(*u) {
                        frontier.push(*u);
                    }
                }
            }
        }
    }
    seen.len() == h.num_vertices()
}

/// Minimum crossing weight over every nonempty proper subset (no symmetry
/// breaking, no fast path).
pub fn all_subsets_min_cut(h: &Hypergraph) -> u64 {
    let vs: Vec<VertexId> = h.vertices().iter().copied().collect();
    let n = vs.len();
    let mut best = u64::MAX;
    for mask in 1u32..(1u32 << n) - 1 {
        let x: BTreeSet<VertexId> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| vs[i])
            .collect();
        let w: u64 = h
            .edges()
            .filter(|(e, _)| e.iter().any(|v| x.contains(v)) && e.iter().any(|v| !x.contains(v)))
            .map(|(_, w)| w)
            .sum();
        best = best.min(w);
    }
    best
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

/// Rank of row vectors over GF(2^31 - 1), plain row-echelon elimination.
pub fn rank_mod_p(rows: &[Vec<u64>]) -> usize {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x % P).collect())
        .collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], P - 2);
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * inv % P;
                let pivot = a[rank].clone();
                for (x, p) in a[r][c..].iter_mut().zip(&pivot[c..]) {
                    *x = (*x + P - f * p % P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant over GF(p) by cofactor expansion; fine for n <= 8.
pub fn det_cofactor(m: &[Vec<u64>]) -> u64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] % P;
    }
    let mut acc = 0u64;
    for j in 0..n {
        let minor: Vec<Vec<u64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let term = m[0][j] % P * det_cofactor(&minor) % P;
        acc = if j % 2 == 0 {
            (acc + term) % P
        } else {
            (acc + P - term) % P
        };
    }
    acc
}
