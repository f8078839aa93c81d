//! Storage topologies: which user holds which segment, and the mapping to
//! and from the hypergraph view where an edge is a group of users sharing
//! segments no one else holds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId, VertexSet};

/// A data segment, numbered from 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SegmentId(pub u32);

impl fmt::Debug for SegmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl fmt::Display for SegmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

pub type SegmentSet = BTreeSet<SegmentId>;

/// Edge vertex set -> the segments exclusively shared by exactly those users.
pub type PlacementMap = BTreeMap<VertexSet, Vec<SegmentId>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StorageTopology {
    num_segments: u32,
    holdings: Vec<SegmentSet>,
    payload_length: Option<usize>,
}

/// Output of [`StorageTopology::to_hypergraph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub hypergraph: Hypergraph,
    pub placement: PlacementMap,
    /// Segments whose holder set has size 0, 1 or V and therefore has no edge.
    pub leftovers: Vec<SegmentId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub covered: bool,
    pub missing: Vec<SegmentId>,
    /// holder count -> number of segments with that many holders
    pub holder_histogram: BTreeMap<usize, usize>,
    pub singly_held: Vec<SegmentId>,
    pub universally_held: Vec<SegmentId>,
    pub connected: bool,
    pub quasi_tree: bool,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.covered
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.singly_held.is_empty() {
            out.push(format!(
                "{} segment(s) held by a single user: {:?}",
                self.singly_held.len(),
                self.singly_held
            ));
        }
        if !self.universally_held.is_empty() {
            out.push(format!(
                "{} segment(s) held by every user: {:?}",
                self.universally_held.len(),
                self.universally_held
            ));
        }
        out
    }
}

impl StorageTopology {
    /// `holdings[i]` is the segment set of user `i + 1`.
    pub fn new(num_segments: u32, holdings: Vec<SegmentSet>) -> Result<Self> {
        if holdings.is_empty() {
            return Err(Error::InvalidTopology("no users".into()));
        }
        for (i, held) in holdings.iter().enumerate() {
            if let Some(s) = held.iter().find(|s| s.0 == 0 || s.0 > num_segments) {
                return Err(Error::InvalidTopology(format!(
                    "user {} holds {s} outside 1..={num_segments}",
                    i + 1
                )));
            }
        }
        Ok(StorageTopology {
            num_segments,
            holdings,
            payload_length: None,
        })
    }

    pub fn with_payload_length(mut self, length: usize) -> Result<Self> {
        if length <= self.num_segments as usize {
            return Err(Error::PayloadTooShort {
                length,
                segments: self.num_segments as usize,
            });
        }
        self.payload_length = Some(length);
        Ok(self)
    }

    pub fn num_segments(&self) -> u32 {
        self.num_segments
    }

    pub fn num_users(&self) -> u32 {
        self.holdings.len() as u32
    }

    pub fn users(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.num_users()).map(VertexId)
    }

    pub fn segments(&self) -> impl Iterator<Item = SegmentId> {
        (1..=self.num_segments).map(SegmentId)
    }

    pub fn payload_length(&self) -> Option<usize> {
        self.payload_length
    }

    /// Explicit payload length, or the smallest legal one (W + 1).
    pub fn payload_length_or_default(&self) -> usize {
        self.payload_length
            .unwrap_or(self.num_segments as usize + 1)
    }

    /// A_v. Panics on an unknown user.
    pub fn holdings(&self, v: VertexId) -> &SegmentSet {
        &self.holdings[v.0 as usize - 1]
    }

    pub fn try_holdings(&self, v: VertexId) -> Result<&SegmentSet> {
        if v.0 == 0 || v.0 > self.num_users() {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.holdings(v))
    }

    /// Users holding segment `s`.
    pub fn holders(&self, s: SegmentId) -> VertexSet {
        self.users()
            .filter(|&v| self.holdings(v).contains(&s))
            .collect()
    }

    /// holder set for every segment in one pass
    fn holder_sets(&self) -> Vec<VertexSet> {
        let mut out = vec![VertexSet::new(); self.num_segments as usize];
        for v in self.users() {
            for s in self.holdings(v) {
                out[s.0 as usize - 1].insert(v);
            }
        }
        out
    }

    fn check_users(&self, e: &VertexSet) -> Result<()> {
        if e.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        match e.iter().find(|v| v.0 == 0 || v.0 > self.num_users()) {
            Some(v) => Err(Error::UnknownVertex(*v)),
            None => Ok(()),
        }
    }

    /// S_e: segments held by every user in `e` and by nobody outside it.
    pub fn segments_for(&self, e: &VertexSet) -> Result<SegmentSet> {
        self.check_users(e)?;
        let mut it = e.iter();
        let first = it.next().expect("nonempty");
        let mut common = self.holdings(*first).clone();
        for v in it {
            common = common.intersection(self.holdings(*v)).copied().collect();
        }
        for v in self.users().filter(|v| !e.contains(v)) {
            common = common.difference(self.holdings(v)).copied().collect();
        }
        Ok(common)
    }

    /// A_e: union of holdings over `e`.
    pub fn union_storage(&self, e: &VertexSet) -> Result<SegmentSet> {
        self.check_users(e)?;
        Ok(e.iter()
            .flat_map(|&v| self.holdings(v).iter().copied())
            .collect())
    }

    /// Group segments by exact holder set. Holder sets of size 2..=V-1 become
    /// edges weighted by group size; every other segment is a leftover.
    pub fn to_hypergraph(&self) -> Decomposition {
        let v = self.num_users() as usize;
        let mut placement = PlacementMap::new();
        let mut leftovers = Vec::new();
        for (i, holders) in self.holder_sets().into_iter().enumerate() {
            let s = SegmentId(i as u32 + 1);
            if holders.len() >= 2 && holders.len() < v {
                placement.entry(holders).or_default().push(s);
            } else {
                leftovers.push(s);
            }
        }
        let hypergraph = Hypergraph::new(
            self.users(),
            placement.iter().map(|(e, ss)| (e.clone(), ss.len() as u64)),
        )
        .expect("holder sets are valid edges");
        Decomposition {
            hypergraph,
            placement,
            leftovers,
        }
    }

    /// Inverse of [`to_hypergraph`](Self::to_hypergraph). Vertices must be
    /// `1..=V`. Without a placement, segment ids are handed out in edge order.
    pub fn from_hypergraph(h: &Hypergraph, placement: Option<&PlacementMap>) -> Result<Self> {
        let n = h.num_vertices() as u32;
        if h.vertices().iter().copied().ne((1..=n).map(VertexId)) {
            return Err(Error::InvalidTopology(
                "hypergraph vertices must be numbered 1..=V".into(),
            ));
        }
        let total = h.total_weight();
        let placement = match placement {
            Some(p) => {
                check_placement(h, p)?;
                p.clone()
            }
            None => {
                let mut next = 1u32;
                h.edges()
                    .map(|(e, w)| {
                        let ids = (next..next + w as u32).map(SegmentId).collect();
                        next += w as u32;
                        (e.clone(), ids)
                    })
                    .collect()
            }
        };
        let mut holdings = vec![SegmentSet::new(); n as usize];
        for (e, ids) in &placement {
            for v in e {
                holdings[v.0 as usize - 1].extend(ids.iter().copied());
            }
        }
        StorageTopology::new(total as u32, holdings)
    }

    pub fn validate(&self) -> ValidationReport {
        let v = self.num_users() as usize;
        let mut report = ValidationReport {
            covered: true,
            missing: Vec::new(),
            holder_histogram: BTreeMap::new(),
            singly_held: Vec::new(),
            universally_held: Vec::new(),
            connected: false,
            quasi_tree: false,
        };
        for (i, holders) in self.holder_sets().into_iter().enumerate() {
            let s = SegmentId(i as u32 + 1);
            *report.holder_histogram.entry(holders.len()).or_insert(0) += 1;
            match holders.len() {
                0 => report.missing.push(s),
                1 => report.singly_held.push(s),
                n if n == v => report.universally_held.push(s),
                _ => {}
            }
        }
        report.covered = report.missing.is_empty();
        let h = self.to_hypergraph().hypergraph;
        report.connected = h.is_connected();
        report.quasi_tree = report.connected && h.is_quasi_tree();
        report
    }
}

fn check_placement(h: &Hypergraph, p: &PlacementMap) -> Result<()> {
    if p.len() != h.num_edges() {
        return Err(Error::PlacementMismatch(format!(
            "{} placement entries for {} edges",
            p.len(),
            h.num_edges()
        )));
    }
    let mut seen = SegmentSet::new();
    for (e, w) in h.edges() {
        let ids = p
            .get(e)
            .ok_or_else(|| Error::PlacementMismatch(format!("no segments for edge {e:?}")))?;
        if ids.len() as u64 != w {
            return Err(Error::PlacementMismatch(format!(
                "edge {e:?} has weight {w} but {} segments",
                ids.len()
            )));
        }
        for s in ids {
            if !seen.insert(*s) {
                return Err(Error::PlacementMismatch(format!("{s} placed twice")));
            }
        }
    }
    let total = h.total_weight() as u32;
    if seen.iter().copied().ne((1..=total).map(SegmentId)) {
        return Err(Error::PlacementMismatch(format!(
            "segment ids must be exactly 1..={total}"
        )));
    }
    Ok(())
}
