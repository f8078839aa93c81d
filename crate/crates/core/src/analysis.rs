//! Whole-instance analysis and strategy execution, as used by the command
//! line front end.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dbqt::{dbqt_schedule, ordered_representatives};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::format::{instance_digest, Classification, ResultRecord};
use crate::general::{cde_bound, dbqt_general};
use crate::hypergraph::{MinCutMethod, BRUTE_FORCE_MAX_VERTICES};
use crate::payload::{materialize_payloads, verify_payload_run};
use crate::sim::{self, run_schedule, BroadcastSchedule, RunOptions, Transcript};
use crate::topology::StorageTopology;

/// Bounds and structure of one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub instance_digest: String,
    pub num_users: u32,
    pub num_segments: u32,
    pub num_edges: usize,
    pub classification: Classification,
    pub delta: u64,
    pub delta_method: String,
    /// quasi-trees only: the single scan and the exhaustive search agree
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fast_path_agrees: Option<bool>,
    /// segments every user already holds
    pub universally_held: usize,
    /// segments held by a single user
    pub singly_held: usize,
    pub lower_bound: u64,
    pub cde_bound: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<u32>>,
    pub warnings: Vec<String>,
}

/// Δ, the lower bound `W' - Δ` and the vertex-star bound, where `W'` counts
/// the segments not already held by everyone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub delta: u64,
    pub needed: u64,
    pub lower_bound: u64,
    pub cde_bound: u64,
}

pub fn bounds(topology: &StorageTopology) -> Result<Bounds> {
    let report = topology.validate();
    let needed = topology.num_segments() as u64 - report.universally_held.len() as u64;
    let h = topology.to_hypergraph().hypergraph;
    let delta = if h.num_vertices() < 2 {
        0
    } else {
        h.min_cut()?.capacity
    };
    // singly held segments sit outside every edge but still need sending
    let outside = needed - h.total_weight();
    Ok(Bounds {
        delta,
        needed,
        lower_bound: needed - delta,
        cde_bound: cde_bound(&h) + outside,
    })
}

pub fn analyze(topology: &StorageTopology) -> Result<AnalysisReport> {
    let report = topology.validate();
    if let Some(&s) = report.missing.first() {
        return Err(Error::UncoveredSegment(s));
    }
    let h = topology.to_hypergraph().hypergraph;
    let b = bounds(topology)?;
    let (method, fast_path_agrees) = if h.num_vertices() < 2 {
        ("trivial".to_string(), None)
    } else {
        let cut = h.min_cut()?;
        let agrees = if cut.method == MinCutMethod::QuasiTreeScan
            && h.num_vertices() <= BRUTE_FORCE_MAX_VERTICES
        {
            Some(h.min_cut_brute_force()?.capacity == cut.capacity)
        } else {
            None
        };
        (format!("{:?}", cut.method), agrees)
    };
    let representatives = if report.quasi_tree {
        Some(
            ordered_representatives(&h)?
                .order
                .iter()
                .map(|v| v.0)
                .collect(),
        )
    } else {
        None
    };
    Ok(AnalysisReport {
        instance_digest: instance_digest(topology),
        num_users: topology.num_users(),
        num_segments: topology.num_segments(),
        num_edges: h.num_edges(),
        classification: Classification {
            connected: report.connected,
            quasi_tree: report.quasi_tree,
        },
        delta: b.delta,
        delta_method: method,
        fast_path_agrees,
        universally_held: report.universally_held.len(),
        singly_held: report.singly_held.len(),
        lower_bound: b.lower_bound,
        cde_bound: b.cde_bound,
        representatives,
        warnings: report.warnings(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Dbqt,
    DbqtGeneral,
    Naive,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Dbqt => "dbqt",
            Strategy::DbqtGeneral => "dbqt-general",
            Strategy::Naive => "naive",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dbqt" => Ok(Strategy::Dbqt),
            "dbqt-general" => Ok(Strategy::DbqtGeneral),
            "naive" => Ok(Strategy::Naive),
            other => Err(Error::InvalidConfig(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Every segment once, uncoded, from its lowest-id holder.
pub fn naive_schedule(topology: &StorageTopology) -> Result<BroadcastSchedule<Fp>> {
    let mut schedule = BroadcastSchedule::new();
    for s in topology.segments() {
        let sender = *topology
            .holders(s)
            .iter()
            .next()
            .ok_or(Error::UncoveredSegment(s))?;
        schedule.push(
            sender,
            sim::uncoded_combo(topology, sender, s, schedule.len())?,
        );
    }
    Ok(schedule)
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub record: ResultRecord,
    pub schedule: BroadcastSchedule<Fp>,
    pub transcript: Transcript<Fp>,
}

/// Plan with `strategy`, simulate, and optionally replay on payloads seeded
/// by `payload_seed`.
pub fn execute(
    topology: &StorageTopology,
    strategy: Strategy,
    payload_seed: Option<u64>,
) -> Result<RunOutcome> {
    let report = topology.validate();
    if let Some(&s) = report.missing.first() {
        return Err(Error::UncoveredSegment(s));
    }
    let b = bounds(topology)?;
    let (schedule, t_dbqt, t_completion) = match strategy {
        Strategy::Dbqt => {
            if !report.quasi_tree {
                return Err(Error::NotQuasiTree);
            }
            (dbqt_schedule::<Fp>(topology)?.schedule, None, None)
        }
        Strategy::DbqtGeneral => {
            let run = dbqt_general::<Fp>(topology)?;
            (
                run.schedule,
                Some(run.result.t_dbqt),
                Some(run.result.t_completion),
            )
        }
        Strategy::Naive => (naive_schedule(topology)?, None, None),
    };
    let transcript = run_schedule(topology, &schedule, RunOptions { track_edges: true })?;
    let payload_check = match payload_seed {
        Some(seed) => {
            let store = materialize_payloads::<Fp>(topology, seed)?;
            Some(verify_payload_run(topology, &store, &schedule)?.agreed)
        }
        None => None,
    };
    let final_ranks: BTreeMap<u32, usize> = transcript
        .final_states
        .iter()
        .map(|s| (s.user().0, s.rank()))
        .collect();
    let record = ResultRecord {
        instance_digest: instance_digest(topology),
        strategy: strategy.name().to_string(),
        classification: Classification {
            connected: report.connected,
            quasi_tree: report.quasi_tree,
        },
        num_users: topology.num_users(),
        num_segments: topology.num_segments(),
        delta: b.delta,
        lower_bound: b.lower_bound,
        cde_bound: b.cde_bound,
        t: transcript.length(),
        t_dbqt,
        t_completion,
        complete: transcript.complete,
        payload_check,
        final_ranks,
    };
    Ok(RunOutcome {
        record,
        schedule,
        transcript,
    })
}
