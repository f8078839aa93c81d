//! Planning on general (non-quasi-tree) topologies: reduce to a spanning
//! quasi-tree, plan on it, then sweep whatever is still missing with uncoded
//! broadcasts. Also hosts the vertex-star lower bound and the randomized
//! experiment harness.

use rayon::prelude::*;
use serde::Serialize;

use crate::dbqt::{build_phases, emit_schedule, ordered_representatives, PhasePlan};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::generators::{generate, mix_seed, GenConfig};
use crate::hypergraph::{Edge, Hypergraph};
use crate::sim::{self, uncoded_combo, BroadcastSchedule};
use crate::topology::{SegmentId, SegmentSet, StorageTopology};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub kept: Hypergraph,
    pub removed: Vec<Edge>,
    pub delta_kept: u64,
}

/// Drop redundant edges (lightest first, ties by vertex set) until every
/// remaining edge is a bridge.
pub fn spanning_quasi_tree(h: &Hypergraph) -> Result<Reduction> {
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut order = h.edge_list();
    order.sort_by(|a, b| {
        a.weight
            .cmp(&b.weight)
            .then_with(|| a.vertices.cmp(&b.vertices))
    });
    let mut kept = h.clone();
    let mut removed = Vec::new();
    // removing edges never makes another edge redundant, so one pass suffices
    for edge in order {
        let candidate = kept.without_edge(&edge.vertices);
        if candidate.is_connected() {
            kept = candidate;
            removed.push(edge);
        }
    }
    debug_assert!(kept.is_quasi_tree());
    let delta_kept = kept.min_edge_weight().unwrap_or(0);
    Ok(Reduction {
        kept,
        removed,
        delta_kept,
    })
}

/// `W - min_v w(H[v])`, the bound obtained from single-vertex cuts only.
pub fn cde_bound(h: &Hypergraph) -> u64 {
    let min_star = h
        .vertices()
        .iter()
        .map(|&v| h.degree(v).expect("own vertex").1)
        .min()
        .unwrap_or(0);
    h.total_weight() - min_star
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralRunResult {
    pub t_total: usize,
    pub t_dbqt: usize,
    pub t_completion: usize,
    /// `W - Δ` of the original hypergraph (W when disconnected)
    pub lower_bound: u64,
    /// segments that actually need delivering (W minus those everyone holds)
    pub segments: u64,
    pub delta: u64,
    pub delta_kept: Option<u64>,
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct GeneralRun<F> {
    pub result: GeneralRunResult,
    pub reduction: Option<Reduction>,
    pub phases: Vec<PhasePlan<F>>,
    pub schedule: BroadcastSchedule<F>,
}

/// Plan and verify a schedule for any covered topology.
///
/// Connected topologies go through the spanning quasi-tree; the plan uses
/// every user's full storage, and any segment some user still lacks is then
/// sent uncoded by its lowest-id holder. Disconnected topologies get one
/// uncoded broadcast per segment.
pub fn dbqt_general<F: Field>(topology: &StorageTopology) -> Result<GeneralRun<F>> {
    let report = topology.validate();
    if let Some(&s) = report.missing.first() {
        return Err(Error::UncoveredSegment(s));
    }
    // segments everyone holds never need to be sent
    let universal: SegmentSet = report.universally_held.iter().copied().collect();
    let planning = if universal.is_empty() {
        topology.clone()
    } else {
        let holdings = topology
            .users()
            .map(|v| {
                topology
                    .holdings(v)
                    .difference(&universal)
                    .copied()
                    .collect()
            })
            .collect();
        StorageTopology::new(topology.num_segments(), holdings)?
    };
    let needed = topology.num_segments() as u64 - universal.len() as u64;
    let d = planning.to_hypergraph();
    let h = &d.hypergraph;

    let (delta, reduction, phases, mut schedule) = if h.num_vertices() < 2 || !h.is_connected() {
        (0, None, Vec::new(), BroadcastSchedule::new())
    } else {
        let delta = h.min_cut()?.capacity;
        let reduction = spanning_quasi_tree(h)?;
        let reps = ordered_representatives(&reduction.kept)?;
        let phases = build_phases::<F>(
            &planning,
            &reduction.kept,
            &d.placement,
            &reps,
            reduction.delta_kept,
        )?;
        let schedule = emit_schedule(topology, &phases, 0)?;
        (delta, Some(reduction), phases, schedule)
    };
    let t_dbqt = schedule.len();

    let mut states = sim::init_states::<F>(topology);
    for b in schedule.broadcasts() {
        sim::apply_broadcast(&mut states, b)?;
    }
    let mut missing = SegmentSet::new();
    for s in &states {
        let dec = s.decoded();
        missing.extend(topology.segments().filter(|x| !dec.contains(x)));
    }
    for s in missing {
        let sender = *topology
            .holders(s)
            .iter()
            .next()
            .ok_or(Error::UncoveredSegment(s))?;
        let slot = schedule.len();
        let combo = uncoded_combo(topology, sender, s, slot)?;
        schedule.push(sender, combo);
        let b = schedule.broadcasts().last().expect("just pushed").clone();
        sim::apply_broadcast(&mut states, &b)?;
    }
    let t_total = schedule.len();
    Ok(GeneralRun {
        result: GeneralRunResult {
            t_total,
            t_dbqt,
            t_completion: t_total - t_dbqt,
            lower_bound: needed - delta,
            segments: needed,
            delta,
            delta_kept: reduction.as_ref().map(|r| r.delta_kept),
            complete: sim::is_complete(&states),
        },
        reduction,
        phases,
        schedule,
    })
}

/// Segment ids not known to every user after `schedule`.
pub fn undelivered<F: Field>(
    topology: &StorageTopology,
    schedule: &BroadcastSchedule<F>,
) -> Result<Vec<SegmentId>> {
    let tr = sim::run_schedule(topology, schedule, sim::RunOptions::default())?;
    let mut out = SegmentSet::new();
    for s in &tr.final_states {
        let dec = s.decoded();
        out.extend(topology.segments().filter(|x| !dec.contains(x)));
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentConfig {
    pub users: Vec<u32>,
    pub segments: Vec<u32>,
    pub trials: u32,
    pub extra_edges: u32,
    /// defaults to `min(4, V - 1)` per grid point
    pub max_edge_size: Option<u32>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub users: u32,
    pub segments: u32,
    pub trials: u32,
    pub mean_t: f64,
    pub min_t: usize,
    pub max_t: usize,
    pub mean_lower_bound: f64,
    pub mean_gap: f64,
    pub mean_cde_bound: f64,
    /// runs with T outside [W - Δ, W] or not complete
    pub violations: u32,
    /// runs where W - Δ < the vertex-star bound
    pub dominance_violations: u32,
}

#[derive(Clone, Copy, Debug)]
struct Trial {
    t: usize,
    lower_bound: u64,
    cde: u64,
    violation: bool,
    dominance_violation: bool,
}

fn run_trial(cfg: &GenConfig) -> Result<Trial> {
    let inst = generate(cfg)?;
    let run = dbqt_general::<crate::field::Fp>(&inst.topology)?;
    let r = run.result;
    let w = r.segments;
    let cde = cde_bound(&inst.hypergraph);
    Ok(Trial {
        t: r.t_total,
        lower_bound: r.lower_bound,
        cde,
        violation: !r.complete || (r.t_total as u64) < r.lower_bound || r.t_total as u64 > w,
        dominance_violation: r.lower_bound < cde,
    })
}

/// For every (V, W) on the grid, run `trials` seeded instances through
/// [`dbqt_general`] and aggregate. Trials run in parallel; each derives its
/// seed from (seed, V, W, trial) so results do not depend on scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    if config.trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if config.users.is_empty() || config.segments.is_empty() {
        return Err(Error::InvalidConfig("empty user or segment list".into()));
    }
    let mut rows = Vec::new();
    for &v in &config.users {
        for &w in &config.segments {
            let base = GenConfig {
                extra_edges: config.extra_edges,
                ..GenConfig::new(v, w, 0)
            };
            let base = match config.max_edge_size {
                Some(r) => GenConfig {
                    max_edge_size: r,
                    ..base
                },
                None => base,
            };
            base.validate()?;
            let trials: Vec<Trial> = (0..config.trials)
                .into_par_iter()
                .map(|i| {
                    run_trial(&GenConfig {
                        seed: mix_seed(&[config.seed, v as u64, w as u64, i as u64]),
                        ..base.clone()
                    })
                })
                .collect::<Result<_>>()?;
            let n = trials.len() as f64;
            let mean = |f: &dyn Fn(&Trial) -> f64| trials.iter().map(f).sum::<f64>() / n;
            rows.push(ExperimentRow {
                users: v,
                segments: w,
                trials: config.trials,
                mean_t: mean(&|t| t.t as f64),
                min_t: trials.iter().map(|t| t.t).min().expect("trials >= 1"),
                max_t: trials.iter().map(|t| t.t).max().expect("trials >= 1"),
                mean_lower_bound: mean(&|t| t.lower_bound as f64),
                mean_gap: mean(&|t| t.t as f64 - t.lower_bound as f64),
                mean_cde_bound: mean(&|t| t.cde as f64),
                violations: trials.iter().filter(|t| t.violation).count() as u32,
                dominance_violations: trials.iter().filter(|t| t.dominance_violation).count()
                    as u32,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::hypergraph::vset;

    fn fig1() -> Hypergraph {
        Hypergraph::with_users(
            6,
            [
                (vset([1, 4]), 1),
                (vset([1, 2, 3]), 1),
                (vset([2, 3]), 1),
                (vset([4, 5]), 1),
                (vset([3, 5, 6]), 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fig1_reduces_to_fig2() {
        let r = spanning_quasi_tree(&fig1()).unwrap();
        assert_eq!(r.removed.len(), 1);
        assert_eq!(r.removed[0].vertices, vset([1, 2, 3]));
        assert_eq!(r.kept, fig1().without_edge(&vset([1, 2, 3])));
        assert_eq!(r.delta_kept, 1);
    }

    #[test]
    fn quasi_tree_is_fixed_point() {
        let q = fig1().without_edge(&vset([1, 2, 3]));
        let r = spanning_quasi_tree(&q).unwrap();
        assert!(r.removed.is_empty());
        assert_eq!(r.kept, q);
    }

    #[test]
    fn triangle_needs_two() {
        let h =
            Hypergraph::with_users(3, [(vset([1, 2]), 1), (vset([2, 3]), 1), (vset([1, 3]), 1)])
                .unwrap();
        let t = StorageTopology::from_hypergraph(&h, None).unwrap();
        let run = dbqt_general::<Fp>(&t).unwrap();
        assert_eq!(run.result.lower_bound, 1);
        assert_eq!(run.result.t_total, 2);
        assert_eq!(run.result.t_dbqt, 1);
        assert_eq!(run.result.t_completion, 1);
        assert!(run.result.complete);
        assert!(undelivered(&t, &run.schedule).unwrap().is_empty());
    }

    #[test]
    fn disconnected_is_all_uncoded() {
        let h = Hypergraph::with_users(4, [(vset([1, 2]), 2), (vset([3, 4]), 3)]).unwrap();
        let t = StorageTopology::from_hypergraph(&h, None).unwrap();
        let run = dbqt_general::<Fp>(&t).unwrap();
        assert_eq!(run.result.t_total, 5);
        assert_eq!(run.result.t_dbqt, 0);
        assert_eq!(run.result.lower_bound, 5);
        assert!(run.result.complete);
    }

    #[test]
    fn cde_on_fig1() {
        assert_eq!(cde_bound(&fig1()), 4);
        let star =
            Hypergraph::with_users(4, [(vset([1, 2]), 2), (vset([1, 3]), 1), (vset([1, 4]), 3)])
                .unwrap();
        assert_eq!(cde_bound(&star), 6 - 1);
        assert_eq!(star.total_weight() - star.min_cut().unwrap().capacity, 5);
    }

    #[test]
    fn universally_held_segments_are_skipped() {
        // s1 on {1,2}, s2 on {2,3}, s3 held by all three
        let segs = |ids: &[u32]| ids.iter().map(|&i| SegmentId(i)).collect::<SegmentSet>();
        let t =
            StorageTopology::new(3, vec![segs(&[1, 3]), segs(&[1, 2, 3]), segs(&[2, 3])]).unwrap();
        let run = dbqt_general::<Fp>(&t).unwrap();
        assert!(run.result.complete);
        assert_eq!(run.result.segments, 2);
        assert_eq!(run.result.t_total, 1);
    }

    #[test]
    fn experiment_validates_config() {
        let cfg = ExperimentConfig {
            users: vec![6],
            segments: vec![12],
            trials: 0,
            extra_edges: 1,
            max_edge_size: None,
            seed: 1,
        };
        assert!(run_experiment(&cfg).is_err());
    }
}
