//! The trusted-party reference functionality for distributed inner product.
//!
//! Both inputs go to the trusted party, which checks membership in F_q^k,
//! then hands out a uniformly random share `w1 = u` and its complement
//! `w2 = ⟨x̄₁·x̄₂⟩ − u`. Neither party sees anything else.

use serde::Serialize;

use crate::field::{FieldElement, FieldSampler, Modulus};
use crate::membership::{Outcome, RawVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IdealOutcome {
    Shares { w1: FieldElement, w2: FieldElement },
    Abort,
}

impl IdealOutcome {
    pub fn outcome1(self) -> Outcome {
        match self {
            IdealOutcome::Shares { w1, .. } => Outcome::Share(w1),
            IdealOutcome::Abort => Outcome::Abort,
        }
    }

    pub fn outcome2(self) -> Outcome {
        match self {
            IdealOutcome::Shares { w2, .. } => Outcome::Share(w2),
            IdealOutcome::Abort => Outcome::Abort,
        }
    }
}

/// Runs the trusted party on `x1` (from P1) and `x2` (from P2).
///
/// The mask `u` is drawn only when both inputs pass membership.
pub fn ideal_dip<S: FieldSampler + ?Sized>(
    x1: &RawVector,
    x2: &RawVector,
    k: usize,
    q: Modulus,
    rng: &mut S,
) -> IdealOutcome {
    let (Some(x1), Some(x2)) = (x1.validate(k, q), x2.validate(k, q)) else {
        return IdealOutcome::Abort;
    };
    let product = x1.dot(&x2).expect("validated to the same shape");
    let u = rng.sample(q);
    IdealOutcome::Shares {
        w1: u,
        w2: product - u,
    }
}
