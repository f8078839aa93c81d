//! Slot-by-slot simulation of the shared broadcast channel at the level of
//! coding coefficients.
//!
//! Every user keeps the matrix of coefficient vectors it knows (one column
//! per stored segment, then one per broadcast heard). A broadcast is a
//! linear combination of the sender's current columns; every user,
//! including the sender, appends the resolved coefficient vector. A segment
//! is decoded once its unit vector lies in the user's column span.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hypergraph::{Hypergraph, VertexId, VertexSet};
use crate::linalg::Basis;
use crate::topology::{PlacementMap, SegmentId, SegmentSet, StorageTopology};

/// Largest segment count the simulator accepts.
pub const MAX_SEGMENTS: usize = 10_000;

#[derive(Clone, Debug)]
pub struct UserState<F> {
    user: VertexId,
    columns: Vec<Vec<F>>,
    basis: Basis<F>,
}

impl<F: Field> UserState<F> {
    /// State of a user holding `held` out of `num_segments` segments.
    pub fn new(user: VertexId, num_segments: usize, held: &SegmentSet) -> Self {
        let mut state = UserState {
            user,
            columns: Vec::with_capacity(held.len()),
            basis: Basis::new(num_segments),
        };
        for s in held {
            let mut col = vec![F::zero(); num_segments];
            col[s.0 as usize - 1] = F::one();
            state.push_column(col);
        }
        state
    }

    /// State from arbitrary columns; mostly useful for tests.
    pub fn from_columns(user: VertexId, num_segments: usize, columns: Vec<Vec<F>>) -> Result<Self> {
        let mut state = UserState {
            user,
            columns: Vec::new(),
            basis: Basis::new(num_segments),
        };
        for col in columns {
            if col.len() != num_segments {
                return Err(Error::DimensionMismatch {
                    expected: num_segments,
                    found: col.len(),
                });
            }
            state.push_column(col);
        }
        Ok(state)
    }

    fn push_column(&mut self, col: Vec<F>) -> bool {
        let grew = self.basis.insert(col.clone());
        self.columns.push(col);
        grew
    }

    pub fn user(&self) -> VertexId {
        self.user
    }

    pub fn num_segments(&self) -> usize {
        self.basis.width()
    }

    /// Known coefficient vectors, in arrival order.
    pub fn columns(&self) -> &[Vec<F>] {
        &self.columns
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    /// Segments whose unit vector lies in the column span.
    pub fn decoded(&self) -> SegmentSet {
        self.basis
            .unit_coordinates()
            .into_iter()
            .map(|w| SegmentId(w as u32 + 1))
            .collect()
    }

    pub fn in_span(&self, v: &[F]) -> bool {
        self.basis.contains(v)
    }

    /// C · combo over the current columns.
    pub fn combine(&self, combo: &[F]) -> Result<Vec<F>> {
        if combo.len() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.columns.len(),
                found: combo.len(),
            });
        }
        let mut out = vec![F::zero(); self.num_segments()];
        for (c, col) in combo.iter().zip(&self.columns) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(col) {
                if !x.is_zero() {
                    *o = o.clone() + c.clone() * x.clone();
                }
            }
        }
        Ok(out)
    }
}

/// One slot: the sender and its combination of its current columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Broadcast<F> {
    pub slot: usize,
    pub sender: VertexId,
    pub combo: Vec<F>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BroadcastSchedule<F> {
    broadcasts: Vec<Broadcast<F>>,
}

impl<F: Field> BroadcastSchedule<F> {
    pub fn new() -> Self {
        BroadcastSchedule {
            broadcasts: Vec::new(),
        }
    }

    /// Build from explicit broadcasts; slots must run 0, 1, 2, ...
    pub fn from_broadcasts(broadcasts: Vec<Broadcast<F>>) -> Result<Self> {
        if let Some((i, b)) = broadcasts.iter().enumerate().find(|(i, b)| b.slot != *i) {
            return Err(Error::MalformedSchedule(format!(
                "entry {i} is numbered slot {}",
                b.slot
            )));
        }
        Ok(BroadcastSchedule { broadcasts })
    }

    /// Append a broadcast in the next slot.
    pub fn push(&mut self, sender: VertexId, combo: Vec<F>) {
        let slot = self.broadcasts.len();
        self.broadcasts.push(Broadcast {
            slot,
            sender,
            combo,
        });
    }

    pub fn len(&self) -> usize {
        self.broadcasts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.broadcasts.is_empty()
    }

    pub fn broadcasts(&self) -> &[Broadcast<F>] {
        &self.broadcasts
    }

    pub fn extend(&mut self, other: BroadcastSchedule<F>) {
        for b in other.broadcasts {
            self.push(b.sender, b.combo);
        }
    }
}

/// Index of segment `s` among the initial (one-hot) columns of user `v`.
pub fn initial_column(topology: &StorageTopology, v: VertexId, s: SegmentId) -> Option<usize> {
    let held = topology.try_holdings(v).ok()?;
    held.contains(&s).then(|| held.range(..s).count())
}

/// Combination vector sending segment `s` uncoded from user `v` in slot `slot`.
pub fn uncoded_combo<F: Field>(
    topology: &StorageTopology,
    v: VertexId,
    s: SegmentId,
    slot: usize,
) -> Result<Vec<F>> {
    let idx = initial_column(topology, v, s).ok_or(Error::InvalidSegment(s))?;
    let mut combo = vec![F::zero(); topology.holdings(v).len() + slot];
    combo[idx] = F::one();
    Ok(combo)
}

pub fn init_states<F: Field>(topology: &StorageTopology) -> Vec<UserState<F>> {
    let w = topology.num_segments() as usize;
    topology
        .users()
        .map(|v| UserState::new(v, w, topology.holdings(v)))
        .collect()
}

/// Deliver one broadcast to every user. Returns the resolved coefficient
/// vector (the sender's columns times the combination).
pub fn apply_broadcast<F: Field>(states: &mut [UserState<F>], b: &Broadcast<F>) -> Result<Vec<F>> {
    let idx = b.sender.0 as usize;
    if idx == 0 || idx > states.len() {
        return Err(Error::InvalidSender(b.sender));
    }
    let resolved = states[idx - 1].combine(&b.combo)?;
    for state in states.iter_mut() {
        state.push_column(resolved.clone());
    }
    Ok(resolved)
}

pub fn decoded_set<F: Field>(state: &UserState<F>) -> SegmentSet {
    state.decoded()
}

/// Edges that still have a segment some user has not decoded.
pub fn remaining_edges<F: Field>(
    states: &[UserState<F>],
    h: &Hypergraph,
    placement: &PlacementMap,
) -> Result<Vec<VertexSet>> {
    let known_by_all = known_by_all(states);
    let mut out = Vec::new();
    for (e, w) in h.edges() {
        let segs = placement
            .get(e)
            .ok_or_else(|| Error::PlacementMismatch(format!("no segments for edge {e:?}")))?;
        if segs.len() as u64 != w {
            return Err(Error::PlacementMismatch(format!(
                "edge {e:?} has weight {w} but {} segments",
                segs.len()
            )));
        }
        if segs.iter().any(|s| !known_by_all.contains(s)) {
            out.push(e.clone());
        }
    }
    Ok(out)
}

fn known_by_all<F: Field>(states: &[UserState<F>]) -> SegmentSet {
    let mut it = states.iter();
    let Some(first) = it.next() else {
        return SegmentSet::new();
    };
    let mut acc = first.decoded();
    for s in it {
        let d = s.decoded();
        acc.retain(|x| d.contains(x));
    }
    acc
}

/// Every user has full rank.
pub fn is_complete<F: Field>(states: &[UserState<F>]) -> bool {
    states.iter().all(|s| s.rank() == s.num_segments())
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Record the number of remaining edges after every slot.
    pub track_edges: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotRecord<F> {
    pub slot: usize,
    pub sender: VertexId,
    pub coefficients: Vec<F>,
    /// rank of every user after the slot, indexed by user - 1
    pub ranks: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remaining_edges: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Transcript<F> {
    pub initial_ranks: Vec<usize>,
    pub initial_remaining_edges: Option<usize>,
    pub slots: Vec<SlotRecord<F>>,
    pub final_states: Vec<UserState<F>>,
    pub complete: bool,
}

impl<F> Transcript<F> {
    /// Number of broadcasts, T.
    pub fn length(&self) -> usize {
        self.slots.len()
    }
}

/// Run a schedule from the initial storage.
pub fn run_schedule<F: Field>(
    topology: &StorageTopology,
    schedule: &BroadcastSchedule<F>,
    options: RunOptions,
) -> Result<Transcript<F>> {
    let w = topology.num_segments() as usize;
    if w > MAX_SEGMENTS {
        return Err(Error::TooManySegments {
            limit: MAX_SEGMENTS,
            found: w,
        });
    }
    let decomposition = options.track_edges.then(|| topology.to_hypergraph());
    let count_edges = |states: &[UserState<F>]| -> Result<Option<usize>> {
        match &decomposition {
            Some(d) => Ok(Some(
                remaining_edges(states, &d.hypergraph, &d.placement)?.len(),
            )),
            None => Ok(None),
        }
    };
    let mut states = init_states::<F>(topology);
    let initial_ranks = states.iter().map(|s| s.rank()).collect();
    let initial_remaining_edges = count_edges(&states)?;
    let mut slots = Vec::with_capacity(schedule.len());
    for (t, b) in schedule.broadcasts().iter().enumerate() {
        if b.slot != t {
            return Err(Error::MalformedSchedule(format!(
                "entry {t} is numbered slot {}",
                b.slot
            )));
        }
        let coefficients = apply_broadcast(&mut states, b)?;
        slots.push(SlotRecord {
            slot: t,
            sender: b.sender,
            coefficients,
            ranks: states.iter().map(|s| s.rank()).collect(),
            remaining_edges: count_edges(&states)?,
        });
    }
    let complete = is_complete(&states);
    Ok(Transcript {
        initial_ranks,
        initial_remaining_edges,
        slots,
        final_states: states,
        complete,
    })
}
