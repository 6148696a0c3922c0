//! Shared vector-by-matrix multiplication from one inner-product session per
//! column, and the attack on it.

use serde::Serialize;

use crate::attack::{recover_input, RecoveryResult};
use crate::error::{Error, Result};
use crate::field::FieldSampler;
use crate::linalg::{FieldMatrix, FieldVector};
use crate::membership::Outcome;
use crate::protocol::{run_session_over, Channel, Honest, P2View, Transcript};

/// Additive shares of `x̄ × Y` plus P2's per-session views.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VecMatShares {
    pub w1: FieldVector,
    pub w2: FieldVector,
    pub views2: Vec<P2View>,
}

impl VecMatShares {
    pub fn reconstruct(&self) -> FieldVector {
        self.w1
            .add(&self.w2)
            .expect("share vectors have equal shape")
    }
}

/// Outcome of a composition: all shares, or λ at the first aborted session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VecMatOutcome {
    Shares(VecMatShares),
    Abort {
        session: usize,
        /// P2's views from the sessions that completed before the abort.
        views2: Vec<P2View>,
        transcript: Box<Transcript>,
    },
}

impl VecMatOutcome {
    pub fn shares(&self) -> Option<&VecMatShares> {
        match self {
            VecMatOutcome::Shares(s) => Some(s),
            VecMatOutcome::Abort { .. } => None,
        }
    }
}

/// One fresh session per column of `y`: session `i` has P1 input `x̄` and P2
/// input column `i`. Sessions run in column order on the same `rng`.
pub fn shared_vec_mat<S: FieldSampler + ?Sized>(
    x: &FieldVector,
    y: &FieldMatrix,
    rng: &mut S,
) -> Result<VecMatOutcome> {
    shared_vec_mat_over(x, y, rng, &mut Honest)
}

pub fn shared_vec_mat_over<S, C>(
    x: &FieldVector,
    y: &FieldMatrix,
    rng: &mut S,
    channel: &mut C,
) -> Result<VecMatOutcome>
where
    S: FieldSampler + ?Sized,
    C: Channel + ?Sized,
{
    if x.len() != y.rows() || x.modulus() != y.modulus() {
        return Err(Error::DimensionMismatch(format!(
            "1x{} input against a {}x{} matrix",
            x.len(),
            y.rows(),
            y.cols()
        )));
    }
    let q = x.modulus();
    let (mut w1, mut w2, mut views2) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..y.cols() {
        let column = y.column(i);
        let t = run_session_over(x, &column, rng, channel)?;
        match (t.outcome1, t.outcome2, t.p2_view(&column)) {
            (Outcome::Share(a), Outcome::Share(b), Some(view)) => {
                w1.push(a);
                w2.push(b);
                views2.push(view);
            }
            _ => {
                return Ok(VecMatOutcome::Abort {
                    session: i,
                    views2,
                    transcript: Box::new(t),
                })
            }
        }
    }
    Ok(VecMatOutcome::Shares(VecMatShares {
        w1: FieldVector::new(w1, q)?,
        w2: FieldVector::new(w2, q)?,
        views2,
    }))
}

/// Recovers P1's `x̄` from the first `k` sessions of a composition.
pub fn attack_shared_vec_mat(shares: &VecMatShares) -> Result<RecoveryResult> {
    let k = shares
        .views2
        .first()
        .map(P2View::k)
        .ok_or_else(|| Error::InvalidArgument("composition has no sessions".into()))?;
    if shares.views2.len() < k {
        return Err(Error::InvalidArgument(format!(
            "need {k} sessions to attack a length-{k} input, have {}",
            shares.views2.len()
        )));
    }
    recover_input(&shares.views2[..k])
}
