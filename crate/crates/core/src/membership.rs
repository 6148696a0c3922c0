//! Unvalidated wire values and the λ outcome.

use serde::{Serialize, Serializer};

use crate::field::{FieldElement, Modulus};
use crate::linalg::FieldVector;

/// Integers as received, before any membership check against F_q^k.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RawVector(pub Vec<u64>);

impl RawVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The membership check: `Some` iff there are exactly `k` entries, all in `[0, q)`.
    pub fn validate(&self, k: usize, q: Modulus) -> Option<FieldVector> {
        if self.0.len() != k {
            return None;
        }
        let elems = self
            .0
            .iter()
            .map(|&v| q.element(v))
            .collect::<Option<Vec<_>>>()?;
        Some(FieldVector::new(elems, q).expect("elements share the modulus"))
    }
}

impl From<&FieldVector> for RawVector {
    fn from(v: &FieldVector) -> Self {
        RawVector(v.iter().map(|e| e.value() as u64).collect())
    }
}

impl From<Vec<u64>> for RawVector {
    fn from(v: Vec<u64>) -> Self {
        RawVector(v)
    }
}

impl Serialize for RawVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|v| v.to_string()))
    }
}

/// What a party outputs: a share, or the abort symbol λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Share(FieldElement),
    Abort,
}

impl Outcome {
    pub fn share(self) -> Option<FieldElement> {
        match self {
            Outcome::Share(w) => Some(w),
            Outcome::Abort => None,
        }
    }

    pub fn is_abort(self) -> bool {
        matches!(self, Outcome::Abort)
    }
}

/// λ is written as the string `"lambda"`, shares as decimal strings.
impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Outcome::Share(w) => w.serialize(s),
            Outcome::Abort => s.serialize_str("lambda"),
        }
    }
}
