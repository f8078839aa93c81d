//! Phase-structured coded broadcast for quasi-trees.
//!
//! Broadcasters are visited in an order whose every prefix induces a
//! connected subhypergraph. Phase `i` covers the segments the i-th
//! broadcaster adds to what earlier broadcasters hold, plus Δ seed segments
//! it shares with an earlier broadcaster through a bridge edge. The block is
//! sent as `|Z_i| - Δ` Vandermonde combinations, so anyone who already knows
//! Δ segments of the block recovers all of it. Total length is `W - Δ`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hypergraph::{Hypergraph, VertexId, VertexSet};
use crate::linalg::determinant;
use crate::sim::BroadcastSchedule;
use crate::topology::{PlacementMap, SegmentId, SegmentSet, StorageTopology};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentativeSequence {
    pub order: Vec<VertexId>,
    /// covered edge set after each prefix
    pub covered: Vec<BTreeSet<VertexSet>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhasePlan<F> {
    /// 1-based phase number
    pub index: usize,
    pub representative: VertexId,
    pub bridge_edge: Option<VertexSet>,
    pub seed: Vec<SegmentId>,
    /// ascending segment ids
    pub block: Vec<SegmentId>,
    /// |block| x (|block| - Δ), row k = (k^0, k^1, ...)
    #[serde(skip)]
    pub coding_matrix: Vec<Vec<F>>,
    pub broadcast_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DbqtPlan<F> {
    pub delta: u64,
    pub representatives: RepresentativeSequence,
    pub phases: Vec<PhasePlan<F>>,
    pub schedule: BroadcastSchedule<F>,
}

fn strict_subset(a: &BTreeSet<&VertexSet>, b: &BTreeSet<&VertexSet>) -> bool {
    a.len() < b.len() && a.is_subset(b)
}

/// Among `candidates`, the smallest id whose incident edge set is not a
/// strict subset of another candidate's.
fn pick_maximal(
    candidates: &[VertexId],
    incident: &BTreeMap<VertexId, BTreeSet<&VertexSet>>,
) -> Option<VertexId> {
    candidates.iter().copied().find(|v| {
        candidates
            .iter()
            .all(|u| u == v || !strict_subset(&incident[v], &incident[u]))
    })
}

/// Greedy ordered representative vertices of a connected hypergraph.
///
/// The first pick is any vertex whose incident edges are not strictly
/// contained in another vertex's. Each later pick lies on an already covered
/// edge, brings at least one uncovered edge, and is maximal in the same sense
/// among such candidates. Ties go to the smallest vertex id.
pub fn ordered_representatives(h: &Hypergraph) -> Result<RepresentativeSequence> {
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    let incident: BTreeMap<VertexId, BTreeSet<&VertexSet>> =
        h.vertices().iter().map(|&v| (v, h.incident(v))).collect();
    let all: BTreeSet<&VertexSet> = h.edges().map(|(e, _)| e).collect();
    let vertices: Vec<VertexId> = h.vertices().iter().copied().collect();

    let first = pick_maximal(&vertices, &incident).expect("nonempty vertex set");
    let mut chosen: BTreeSet<VertexId> = BTreeSet::from([first]);
    let mut order = vec![first];
    let mut covered: BTreeSet<&VertexSet> = incident[&first].clone();
    let mut trace = vec![covered.iter().map(|e| (*e).clone()).collect()];

    while covered != all {
        let reachable: BTreeSet<VertexId> =
            covered.iter().flat_map(|e| e.iter().copied()).collect();
        let eligible: Vec<VertexId> = reachable
            .into_iter()
            .filter(|v| !chosen.contains(v))
            .filter(|v| !incident[v].is_subset(&covered))
            .collect();
        let next = pick_maximal(&eligible, &incident).ok_or(Error::Disconnected)?;
        chosen.insert(next);
        order.push(next);
        covered.extend(incident[&next].iter().copied());
        trace.push(covered.iter().map(|e| (*e).clone()).collect());
    }
    Ok(RepresentativeSequence {
        order,
        covered: trace,
    })
}

/// n x m matrix with entry (k, j) = k^(j-1) for k in 1..=n, j in 1..=m.
pub fn vandermonde<F: Field>(n: usize, m: usize) -> Result<Vec<Vec<F>>> {
    if m > n {
        return Err(Error::VandermondeShape { n, m });
    }
    Ok((1..=n as u64)
        .map(|k| {
            let node = F::from_u64(k);
            let mut row = Vec::with_capacity(m);
            let mut x = F::one();
            for _ in 0..m {
                row.push(x.clone());
                x = x * node.clone();
            }
            row
        })
        .collect())
}

/// Whether a receiver holding the block positions `held` (1-based, exactly
/// `delta` of them) can solve for an n-segment block from its n - Δ coded
/// combinations: `[one-hots | vandermonde(n, n - Δ)]` must be nonsingular.
pub fn decodable_with<F: Field>(n: usize, delta: usize, held: &BTreeSet<usize>) -> Result<bool> {
    if delta > n {
        return Err(Error::InvalidPositions(format!(
            "Δ = {delta} exceeds n = {n}"
        )));
    }
    if held.len() != delta {
        return Err(Error::InvalidPositions(format!(
            "{} positions given, expected {delta}",
            held.len()
        )));
    }
    if let Some(p) = held.iter().find(|&&p| p == 0 || p > n) {
        return Err(Error::InvalidPositions(format!(
            "position {p} outside 1..={n}"
        )));
    }
    let coded = vandermonde::<F>(n, n - delta)?;
    let matrix: Vec<Vec<F>> = (1..=n)
        .map(|k| {
            let mut row: Vec<F> = held
                .iter()
                .map(|&p| if p == k { F::one() } else { F::zero() })
                .collect();
            row.extend(coded[k - 1].iter().cloned());
            row
        })
        .collect();
    Ok(!determinant(&matrix).is_zero())
}

/// Phase plans for a quasi-tree whose storage has no leftover segments.
pub fn plan_phases<F: Field>(
    topology: &StorageTopology,
    tree: &Hypergraph,
    placement: &PlacementMap,
    reps: &RepresentativeSequence,
) -> Result<Vec<PhasePlan<F>>> {
    if !tree.is_quasi_tree() {
        return Err(Error::NotQuasiTree);
    }
    let leftovers = topology.to_hypergraph().leftovers;
    if !leftovers.is_empty() {
        return Err(Error::Leftovers(leftovers.len()));
    }
    let delta = tree.min_edge_weight().ok_or(Error::NotQuasiTree)?;
    build_phases(topology, tree, placement, reps, delta)
}

/// Phase construction without the precondition checks. `topology` supplies
/// the full holdings; `tree` and `placement` supply bridge edges and seeds.
pub(crate) fn build_phases<F: Field>(
    topology: &StorageTopology,
    tree: &Hypergraph,
    placement: &PlacementMap,
    reps: &RepresentativeSequence,
    delta: u64,
) -> Result<Vec<PhasePlan<F>>> {
    let delta_n = delta as usize;
    let mut seen = SegmentSet::new();
    let mut phases = Vec::with_capacity(reps.order.len());
    for (i, &rep) in reps.order.iter().enumerate() {
        let held = topology.try_holdings(rep)?;
        let fresh: SegmentSet = held.difference(&seen).copied().collect();
        let (bridge_edge, seed) = if i == 0 {
            (None, Vec::new())
        } else {
            let earlier = &reps.order[..i];
            let bridge = tree
                .edges()
                .map(|(e, _)| e)
                .find(|e| e.contains(&rep) && earlier.iter().any(|v| e.contains(v)))
                .ok_or(Error::Disconnected)?
                .clone();
            let mut exclusive = placement
                .get(&bridge)
                .ok_or_else(|| {
                    Error::PlacementMismatch(format!("no segments for edge {bridge:?}"))
                })?
                .clone();
            exclusive.sort();
            assert!(
                exclusive.len() >= delta_n,
                "edge {bridge:?} lighter than the min-cut"
            );
            exclusive.truncate(delta_n);
            (Some(bridge), exclusive)
        };
        let block: Vec<SegmentId> = {
            let mut b: SegmentSet = fresh.clone();
            for s in &seed {
                // seeds are held by an earlier representative, fresh ones are not
                assert!(b.insert(*s), "seed {s} overlaps the fresh segments");
            }
            b.into_iter().collect()
        };
        let n = block.len();
        let broadcast_count = n.checked_sub(delta_n).ok_or_else(|| {
            Error::Infeasible(format!(
                "phase {} block of {n} is smaller than Δ = {delta}",
                i + 1
            ))
        })?;
        phases.push(PhasePlan {
            index: i + 1,
            representative: rep,
            bridge_edge,
            seed,
            block,
            coding_matrix: vandermonde(n, broadcast_count)?,
            broadcast_count,
        });
        seen.extend(held.iter().copied());
    }
    Ok(phases)
}

/// Flatten phases into slots. Slot τ of phase i sends column τ of the
/// coding matrix applied to the block, from the phase's representative.
pub(crate) fn emit_schedule<F: Field>(
    topology: &StorageTopology,
    phases: &[PhasePlan<F>],
    start_slot: usize,
) -> Result<BroadcastSchedule<F>> {
    let mut schedule = BroadcastSchedule::new();
    for phase in phases {
        let held = topology.try_holdings(phase.representative)?;
        let positions: Vec<usize> = phase
            .block
            .iter()
            .map(|s| {
                held.contains(s)
                    .then(|| held.range(..*s).count())
                    .ok_or(Error::InvalidSegment(*s))
            })
            .collect::<Result<_>>()?;
        for tau in 0..phase.broadcast_count {
            let slot = start_slot + schedule.len();
            let mut combo = vec![F::zero(); held.len() + slot];
            for (k, &pos) in positions.iter().enumerate() {
                combo[pos] = phase.coding_matrix[k][tau].clone();
            }
            schedule.push(phase.representative, combo);
        }
    }
    Ok(schedule)
}

/// Plan the optimal schedule for a storage topology whose hypergraph is a
/// connected quasi-tree without leftover segments.
pub fn dbqt_schedule<F: Field>(topology: &StorageTopology) -> Result<DbqtPlan<F>> {
    let d = topology.to_hypergraph();
    if !d.leftovers.is_empty() {
        return Err(Error::Leftovers(d.leftovers.len()));
    }
    let tree = &d.hypergraph;
    if !tree.is_connected() {
        return Err(Error::Disconnected);
    }
    if !tree.is_quasi_tree() {
        return Err(Error::NotQuasiTree);
    }
    let delta = tree.min_cut_quasi_tree()?.capacity;
    let representatives = ordered_representatives(tree)?;
    let phases = build_phases(topology, tree, &d.placement, &representatives, delta)?;
    let schedule = emit_schedule(topology, &phases, 0)?;
    Ok(DbqtPlan {
        delta,
        representatives,
        phases,
        schedule,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::hypergraph::vset;
    use crate::sim::{run_schedule, RunOptions};
    use num_traits::Zero;

    fn fig2() -> Hypergraph {
        Hypergraph::with_users(
            6,
            [
                (vset([1, 4]), 1),
                (vset([2, 3]), 1),
                (vset([4, 5]), 1),
                (vset([3, 5, 6]), 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fig2_representatives() {
        let reps = ordered_representatives(&fig2()).unwrap();
        assert_eq!(reps.order, vec![VertexId(3), VertexId(5), VertexId(4)]);
        assert_eq!(reps.covered.last().unwrap().len(), 4);
    }

    #[test]
    fn star_has_one_representative() {
        let h =
            Hypergraph::with_users(4, [(vset([1, 2]), 1), (vset([1, 3]), 1), (vset([1, 4]), 1)])
                .unwrap();
        assert_eq!(
            ordered_representatives(&h).unwrap().order,
            vec![VertexId(1)]
        );
    }

    #[test]
    fn disconnected_input_rejected() {
        let h = Hypergraph::with_users(3, [(vset([1, 2]), 2)]).unwrap();
        assert_eq!(ordered_representatives(&h), Err(Error::Disconnected));
        let t = StorageTopology::from_hypergraph(&h, None).unwrap();
        assert!(dbqt_schedule::<Fp>(&t).is_err());
    }

    #[test]
    fn fig2_phases() {
        let h = fig2();
        let t = StorageTopology::from_hypergraph(&h, None).unwrap();
        let d = t.to_hypergraph();
        let reps = ordered_representatives(&h).unwrap();
        let phases = plan_phases::<Fp>(&t, &h, &d.placement, &reps).unwrap();
        let sizes: Vec<usize> = phases.iter().map(|p| p.block.len()).collect();
        let counts: Vec<usize> = phases.iter().map(|p| p.broadcast_count).collect();
        assert_eq!(sizes, vec![2, 2, 2]);
        assert_eq!(counts, vec![1, 1, 1]);
        assert_eq!(phases[1].bridge_edge, Some(vset([3, 5, 6])));
        assert_eq!(phases[2].bridge_edge, Some(vset([4, 5])));
    }

    #[test]
    fn fig2_schedule_completes_in_three() {
        let t = StorageTopology::from_hypergraph(&fig2(), None).unwrap();
        let plan = dbqt_schedule::<Fp>(&t).unwrap();
        assert_eq!(plan.delta, 1);
        assert_eq!(plan.schedule.len(), 3);
        let tr = run_schedule(&t, &plan.schedule, RunOptions::default()).unwrap();
        assert!(tr.complete);
    }

    #[test]
    fn vandermonde_entries() {
        let m = vandermonde::<Fp>(2, 1).unwrap();
        assert_eq!(m, vec![vec![Fp::new(1)], vec![Fp::new(1)]]);
        let m = vandermonde::<Fp>(3, 2).unwrap();
        let want: Vec<Vec<Fp>> = [[1, 1], [1, 2], [1, 3]]
            .iter()
            .map(|r| r.iter().map(|&x| Fp::new(x)).collect())
            .collect();
        assert_eq!(m, want);
        assert_eq!(
            vandermonde::<Fp>(2, 3),
            Err(Error::VandermondeShape { n: 2, m: 3 })
        );
        // rows (1,0,..) (0,1,..) (0,0,..) for the one-hot at row 2 next to M
        let aug: Vec<Vec<Fp>> = (0..3)
            .map(|k| {
                let mut row = vec![if k == 1 { Fp::new(1) } else { Fp::zero() }];
                row.extend(m_row(k));
                row
            })
            .collect();
        assert_eq!(determinant(&aug), -Fp::new(2));
    }

    fn m_row(k: usize) -> Vec<Fp> {
        vandermonde::<Fp>(3, 2).unwrap()[k].clone()
    }

    #[test]
    fn decodable_small() {
        assert!(decodable_with::<Fp>(2, 1, &BTreeSet::from([1])).unwrap());
        assert!(decodable_with::<Fp>(3, 0, &BTreeSet::new()).unwrap());
        assert!(decodable_with::<Fp>(2, 1, &BTreeSet::from([3])).is_err());
        assert!(decodable_with::<Fp>(2, 1, &BTreeSet::from([1, 2])).is_err());
    }
}
