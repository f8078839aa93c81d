//! Coded broadcast over a shared collision channel, modelled on weighted
//! hypergraphs.
//!
//! Users hold subsets of W data segments and take turns broadcasting linear
//! combinations of what they know until everyone knows everything. Grouping
//! segments by the exact set of users holding them gives a weighted
//! hypergraph; its min-cut Δ gives the lower bound `W - Δ` on the number of
//! broadcasts, and on quasi-trees [`dbqt::dbqt_schedule`] meets it exactly.
//!
//! Linear algebra, simulation and planning are generic over [`Field`]; the
//! aliases below fix the scalar to GF(2^31 - 1) or to exact rationals.

pub mod analysis;
pub mod dbqt;
pub mod error;
pub mod field;
pub mod format;
pub mod general;
pub mod generators;
pub mod hypergraph;
pub mod linalg;
pub mod payload;
pub mod sim;
pub mod topology;

pub use error::{Error, Result};
pub use field::{Field, Fp};
pub use hypergraph::{vset, Edge, Hypergraph, VertexId, VertexSet};
pub use topology::{PlacementMap, SegmentId, SegmentSet, StorageTopology};

/// Exact rationals.
pub type Rational = num_rational::BigRational;

pub type GfUserState = sim::UserState<Fp>;
pub type GfSchedule = sim::BroadcastSchedule<Fp>;
pub type GfTranscript = sim::Transcript<Fp>;
pub type GfPlan = dbqt::DbqtPlan<Fp>;
pub type GfSegmentStore = payload::SegmentStore<Fp>;

pub type RationalUserState = sim::UserState<Rational>;
pub type RationalSchedule = sim::BroadcastSchedule<Rational>;
pub type RationalTranscript = sim::Transcript<Rational>;
pub type RationalPlan = dbqt::DbqtPlan<Rational>;
pub type RationalSegmentStore = payload::SegmentStore<Rational>;
