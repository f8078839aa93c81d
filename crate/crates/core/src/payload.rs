//! Payload-level replay of a schedule.
//!
//! Segments are materialised as random length-L vectors and every broadcast
//! is recomputed from the sender's actual payload columns, independently of
//! the coefficient-level bookkeeping. The two views must agree: a user can
//! rebuild segment w from payloads exactly when w is in its coefficient-level
//! decoded set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Basis;
use crate::sim::{self, BroadcastSchedule, UserState};
use crate::topology::{SegmentId, SegmentSet, StorageTopology};

/// The L x W matrix of segment payloads, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentStore<F> {
    length: usize,
    columns: Vec<Vec<F>>,
    draws: usize,
}

impl<F: Field> SegmentStore<F> {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn num_segments(&self) -> usize {
        self.columns.len()
    }

    pub fn segment(&self, s: SegmentId) -> &[F] {
        &self.columns[s.0 as usize - 1]
    }

    /// How many random draws it took to get independent columns.
    pub fn draws(&self) -> usize {
        self.draws
    }
}

/// Random independent payloads of length `topology.payload_length_or_default()`.
pub fn materialize_payloads<F: Field>(
    topology: &StorageTopology,
    seed: u64,
) -> Result<SegmentStore<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    materialize_payloads_with(topology, &mut rng)
}

pub fn materialize_payloads_with<F: Field, R: Rng + ?Sized>(
    topology: &StorageTopology,
    rng: &mut R,
) -> Result<SegmentStore<F>> {
    let w = topology.num_segments() as usize;
    let length = topology.payload_length_or_default();
    if length <= w {
        return Err(Error::PayloadTooShort {
            length,
            segments: w,
        });
    }
    let mut draws = 0;
    loop {
        draws += 1;
        let columns: Vec<Vec<F>> = (0..w)
            .map(|_| (0..length).map(|_| F::random(rng)).collect())
            .collect();
        let mut basis = Basis::new(length);
        let independent = columns.iter().all(|c| basis.insert(c.clone()));
        if independent {
            return Ok(SegmentStore {
                length,
                columns,
                draws,
            });
        }
    }
}

struct PayloadUser<F> {
    /// actual vectors known, one per coefficient column
    payloads: Vec<Vec<F>>,
    /// [coefficients | payload] rows, reduced on the coefficient part
    joint: Basis<F>,
    /// span of the payload vectors alone
    payload_span: Basis<F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayloadCheck {
    pub agreed: bool,
    /// number of checkpoints compared (initial state plus one per slot)
    pub checkpoints: usize,
    pub mismatch: Option<String>,
}

fn combine<F: Field>(columns: &[Vec<F>], combo: &[F], len: usize) -> Vec<F> {
    let mut out = vec![F::zero(); len];
    for (c, col) in combo.iter().zip(columns) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(col) {
            *o = o.clone() + c.clone() * x.clone();
        }
    }
    out
}

/// Replay `schedule` on real payloads and compare with the coefficient-level
/// decoded sets after every slot.
pub fn verify_payload_run<F: Field>(
    topology: &StorageTopology,
    store: &SegmentStore<F>,
    schedule: &BroadcastSchedule<F>,
) -> Result<PayloadCheck> {
    let w = topology.num_segments() as usize;
    if store.num_segments() != w {
        return Err(Error::DimensionMismatch {
            expected: w,
            found: store.num_segments(),
        });
    }
    let len = store.length();
    let mut states = sim::init_states::<F>(topology);
    let mut users: Vec<PayloadUser<F>> = topology
        .users()
        .map(|v| {
            let mut u = PayloadUser {
                payloads: Vec::new(),
                joint: Basis::new(w),
                payload_span: Basis::new(len),
            };
            for &s in topology.holdings(v) {
                let mut coeff = vec![F::zero(); w];
                coeff[s.0 as usize - 1] = F::one();
                let payload = store.segment(s).to_vec();
                u.add(coeff, payload);
            }
            u
        })
        .collect();

    let mut checkpoints = 0;
    if let Some(m) = compare(&states, &users, store) {
        return Ok(PayloadCheck {
            agreed: false,
            checkpoints: 1,
            mismatch: Some(format!("initial state: {m}")),
        });
    }
    checkpoints += 1;

    for b in schedule.broadcasts() {
        let coeff = sim::apply_broadcast(&mut states, b)?;
        let sender = &users[b.sender.0 as usize - 1];
        let payload = combine(&sender.payloads, &b.combo, len);
        for u in users.iter_mut() {
            u.add(coeff.clone(), payload.clone());
        }
        checkpoints += 1;
        if let Some(m) = compare(&states, &users, store) {
            return Ok(PayloadCheck {
                agreed: false,
                checkpoints,
                mismatch: Some(format!("slot {}: {m}", b.slot)),
            });
        }
    }
    Ok(PayloadCheck {
        agreed: true,
        checkpoints,
        mismatch: None,
    })
}

impl<F: Field> PayloadUser<F> {
    fn add(&mut self, coeff: Vec<F>, payload: Vec<F>) {
        let mut row = coeff;
        row.extend(payload.iter().cloned());
        self.joint.insert(row);
        self.payload_span.insert(payload.clone());
        self.payloads.push(payload);
    }
}

fn compare<F: Field>(
    states: &[UserState<F>],
    users: &[PayloadUser<F>],
    store: &SegmentStore<F>,
) -> Option<String> {
    for (state, user) in states.iter().zip(users) {
        let coeff_decoded = state.decoded();
        let payload_decoded: SegmentSet = (1..=store.num_segments() as u32)
            .map(SegmentId)
            .filter(|&s| user.payload_span.contains(store.segment(s)))
            .collect();
        if coeff_decoded != payload_decoded {
            return Some(format!(
                "{}: coefficient view {:?} vs payload view {:?}",
                state.user(),
                coeff_decoded,
                payload_decoded
            ));
        }
        for s in &coeff_decoded {
            match user.joint.unit_payload(s.0 as usize - 1) {
                Some(p) if p == store.segment(*s) => {}
                _ => {
                    return Some(format!("{} rebuilt {s} incorrectly", state.user()));
                }
            }
        }
    }
    None
}
