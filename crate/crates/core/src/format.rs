//! On-disk formats: instance files (topology or hypergraph flavour), plan
//! and transcript exports, run records and experiment tables.
//!
//! Instance files are pretty-printed JSON carrying `format_version`.
//! Topology flavour:
//!
//! ```json
//! { "format_version": 1, "num_users": 3, "num_segments": 2,
//!   "users": [ { "id": 1, "segments": [1] }, ... ],
//!   "metadata": { "seed": 7, "generator": "...", "rng": "..." } }
//! ```
//!
//! Hypergraph flavour (segments optional, assigned in edge order otherwise):
//!
//! ```json
//! { "format_version": 1, "num_vertices": 6,
//!   "edges": [ { "vertices": [1, 4], "weight": 1, "segments": [1] }, ... ] }
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dbqt::DbqtPlan;
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::general::ExperimentRow;
use crate::hypergraph::{Hypergraph, VertexId, VertexSet};
use crate::sim::{SlotRecord, Transcript};
use crate::topology::{PlacementMap, SegmentId, StorageTopology};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserEntry {
    pub id: u32,
    pub segments: Vec<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_edge_size: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_edges: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format_version: u32,
    pub num_users: u32,
    pub num_segments: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload_length: Option<usize>,
    pub users: Vec<UserEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub vertices: Vec<u32>,
    pub weight: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphFile {
    pub format_version: u32,
    pub num_vertices: u32,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported format_version {v} (expected {FORMAT_VERSION})"
        )));
    }
    Ok(())
}

impl InstanceFile {
    pub fn from_topology(t: &StorageTopology, metadata: Option<Metadata>) -> Self {
        InstanceFile {
            format_version: FORMAT_VERSION,
            num_users: t.num_users(),
            num_segments: t.num_segments(),
            payload_length: t.payload_length(),
            users: t
                .users()
                .map(|v| UserEntry {
                    id: v.0,
                    segments: t.holdings(v).iter().map(|s| s.0).collect(),
                })
                .collect(),
            metadata,
        }
    }

    pub fn to_topology(&self) -> Result<StorageTopology> {
        check_version(self.format_version)?;
        if self.users.len() != self.num_users as usize {
            return Err(Error::Format(format!(
                "num_users is {} but {} users are listed",
                self.num_users,
                self.users.len()
            )));
        }
        let mut holdings = vec![None; self.num_users as usize];
        for u in &self.users {
            if u.id == 0 || u.id > self.num_users {
                return Err(Error::Format(format!(
                    "user id {} outside 1..={}",
                    u.id, self.num_users
                )));
            }
            let slot = &mut holdings[u.id as usize - 1];
            if slot.is_some() {
                return Err(Error::Format(format!("user {} listed twice", u.id)));
            }
            *slot = Some(u.segments.iter().map(|&s| SegmentId(s)).collect());
        }
        let holdings = holdings
            .into_iter()
            .map(|h| h.expect("every id seen"))
            .collect();
        let t = StorageTopology::new(self.num_segments, holdings)?;
        match self.payload_length {
            Some(l) => t.with_payload_length(l),
            None => Ok(t),
        }
    }
}

impl HypergraphFile {
    pub fn from_hypergraph(h: &Hypergraph, placement: Option<&PlacementMap>) -> Self {
        HypergraphFile {
            format_version: FORMAT_VERSION,
            num_vertices: h.num_vertices() as u32,
            edges: h
                .edges()
                .map(|(e, w)| EdgeEntry {
                    vertices: e.iter().map(|v| v.0).collect(),
                    weight: w,
                    segments: placement
                        .and_then(|p| p.get(e))
                        .map(|ss| ss.iter().map(|s| s.0).collect()),
                })
                .collect(),
            metadata: None,
        }
    }

    pub fn to_hypergraph(&self) -> Result<(Hypergraph, Option<PlacementMap>)> {
        check_version(self.format_version)?;
        let mut h = Hypergraph::with_users(self.num_vertices, [])?;
        let mut placement = PlacementMap::new();
        let with_segments = self.edges.iter().filter(|e| e.segments.is_some()).count();
        if with_segments != 0 && with_segments != self.edges.len() {
            return Err(Error::Format(
                "either every edge lists segments or none does".into(),
            ));
        }
        for e in &self.edges {
            let vs: VertexSet = e.vertices.iter().map(|&v| VertexId(v)).collect();
            if vs.len() != e.vertices.len() {
                return Err(Error::Format(format!(
                    "edge {:?} repeats a vertex",
                    e.vertices
                )));
            }
            if placement.contains_key(&vs) || h.weight(&vs).is_some() {
                return Err(Error::Format(format!("edge {:?} listed twice", e.vertices)));
            }
            h.add_edge(vs.clone(), e.weight)?;
            if let Some(ss) = &e.segments {
                placement.insert(vs, ss.iter().map(|&s| SegmentId(s)).collect());
            }
        }
        Ok((h, (with_segments > 0).then_some(placement)))
    }
}

/// Parsed instance, either flavour.
#[derive(Clone, Debug)]
pub struct LoadedInstance {
    pub topology: StorageTopology,
    pub metadata: Option<Metadata>,
}

pub fn parse_instance(text: &str) -> Result<LoadedInstance> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if value.get("edges").is_some() {
        let file: HypergraphFile =
            serde_json::from_value(value).map_err(|e| Error::Format(e.to_string()))?;
        let (h, placement) = file.to_hypergraph()?;
        Ok(LoadedInstance {
            topology: StorageTopology::from_hypergraph(&h, placement.as_ref())?,
            metadata: file.metadata,
        })
    } else {
        let file: InstanceFile =
            serde_json::from_value(value).map_err(|e| Error::Format(e.to_string()))?;
        Ok(LoadedInstance {
            topology: file.to_topology()?,
            metadata: file.metadata,
        })
    }
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// SHA-256 over the compact topology encoding (metadata excluded).
pub fn instance_digest(t: &StorageTopology) -> String {
    let canonical =
        serde_json::to_string(&InstanceFile::from_topology(t, None)).expect("serializable");
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseExport {
    pub index: usize,
    pub representative: u32,
    pub bridge_edge: Option<Vec<u32>>,
    pub seed: Vec<u32>,
    pub block: Vec<u32>,
    pub broadcast_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BroadcastExport {
    pub slot: usize,
    pub sender: u32,
    pub combo: Vec<Fp>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlanExport {
    pub delta: u64,
    pub representatives: Vec<u32>,
    pub phases: Vec<PhaseExport>,
    pub schedule: Vec<BroadcastExport>,
}

impl PlanExport {
    pub fn new(plan: &DbqtPlan<Fp>) -> Self {
        PlanExport {
            delta: plan.delta,
            representatives: plan.representatives.order.iter().map(|v| v.0).collect(),
            phases: plan
                .phases
                .iter()
                .map(|p| PhaseExport {
                    index: p.index,
                    representative: p.representative.0,
                    bridge_edge: p
                        .bridge_edge
                        .as_ref()
                        .map(|e| e.iter().map(|v| v.0).collect()),
                    seed: p.seed.iter().map(|s| s.0).collect(),
                    block: p.block.iter().map(|s| s.0).collect(),
                    broadcast_count: p.broadcast_count,
                })
                .collect(),
            schedule: plan
                .schedule
                .broadcasts()
                .iter()
                .map(|b| BroadcastExport {
                    slot: b.slot,
                    sender: b.sender.0,
                    combo: b.combo.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TranscriptExport<'a> {
    pub initial_ranks: &'a [usize],
    pub slots: &'a [SlotRecord<Fp>],
    pub complete: bool,
}

impl<'a> TranscriptExport<'a> {
    pub fn new(t: &'a Transcript<Fp>) -> Self {
        TranscriptExport {
            initial_ranks: &t.initial_ranks,
            slots: &t.slots,
            complete: t.complete,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub connected: bool,
    pub quasi_tree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResultRecord {
    pub instance_digest: String,
    pub strategy: String,
    pub classification: Classification,
    pub num_users: u32,
    pub num_segments: u32,
    pub delta: u64,
    pub lower_bound: u64,
    pub cde_bound: u64,
    pub t: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_dbqt: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_completion: Option<usize>,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload_check: Option<bool>,
    /// rank of every user at the end, keyed by user id
    pub final_ranks: BTreeMap<u32, usize>,
}

pub const EXPERIMENT_HEADER: &str = "users,segments,trials,mean_t,min_t,max_t,mean_lower_bound,mean_gap,mean_cde_bound,violations,dominance_violations";

/// Comma-separated table with a header row; means carry four decimals.
pub fn experiment_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(EXPERIMENT_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.4},{},{},{:.4},{:.4},{:.4},{},{}",
            r.users,
            r.segments,
            r.trials,
            r.mean_t,
            r.min_t,
            r.max_t,
            r.mean_lower_bound,
            r.mean_gap,
            r.mean_cde_bound,
            r.violations,
            r.dominance_violations
        );
    }
    out
}
