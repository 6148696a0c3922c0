//! Byte encoding of protocol messages.
//!
//! Every frame is `tag (1 byte) ‖ k (u32 LE) ‖ values (u64 LE each)`:
//!
//! | tag    | message  | values                  |
//! |--------|----------|-------------------------|
//! | `0x01` | `Msg1`   | `ȳ₁` (k)                |
//! | `0x02` | `Msg2`   | `x̄₁` (k), then `r₁`     |
//! | `0x11` | `SetupP1`| `x̄₀` (k)                |
//! | `0x12` | `SetupP2`| `ȳ₀` (k), then `s₀`     |
//!
//! Protocol message values are not reduced or range-checked on decode, so a
//! frame carrying `2^40` for `q = 7` decodes fine and is refused later by the
//! receiving party. Setup frames come from the initializer and are checked
//! against `q` here.

use crate::error::DecodeError;
use crate::field::Modulus;
use crate::linalg::FieldVector;
use crate::membership::RawVector;

use super::{Msg1, Msg2, SetupP1, SetupP2};

pub const TAG_MSG1: u8 = 0x01;
pub const TAG_MSG2: u8 = 0x02;
pub const TAG_SETUP1: u8 = 0x11;
pub const TAG_SETUP2: u8 = 0x12;

const HEADER_LEN: usize = 5;

fn encode_frame(tag: u8, vector: &[u64], trailer: Option<u64>) -> Vec<u8> {
    let k = u32::try_from(vector.len()).expect("vector length fits in u32");
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * (vector.len() + 1));
    out.push(tag);
    out.extend_from_slice(&k.to_le_bytes());
    for v in vector.iter().chain(trailer.as_ref()) {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Splits a frame with the expected tag into its `k` vector values and the
/// optional trailing scalar.
fn decode_frame(
    buf: &[u8],
    tag: u8,
    trailer: bool,
) -> Result<(Vec<u64>, Option<u64>), DecodeError> {
    let (&found, rest) = buf.split_first().ok_or(DecodeError::Empty)?;
    if found != tag {
        return Err(DecodeError::WrongTag {
            expected: tag,
            found,
        });
    }
    let k_bytes: [u8; 4] = rest
        .get(..4)
        .ok_or(DecodeError::TruncatedHeader)?
        .try_into()
        .unwrap();
    let k = u32::from_le_bytes(k_bytes) as usize;
    let words = k + usize::from(trailer);
    let expected = words
        .checked_mul(8)
        .and_then(|n| n.checked_add(HEADER_LEN))
        .unwrap_or(usize::MAX);
    if buf.len() != expected {
        return Err(DecodeError::Length {
            expected,
            actual: buf.len(),
        });
    }
    let mut values: Vec<u64> = buf[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let last = if trailer { values.pop() } else { None };
    Ok((values, last))
}

impl Msg1 {
    pub fn encode(&self) -> Vec<u8> {
        encode_frame(TAG_MSG1, &self.y1.0, None)
    }

    pub fn decode(buf: &[u8]) -> Result<Self, DecodeError> {
        let (y1, _) = decode_frame(buf, TAG_MSG1, false)?;
        Ok(Msg1 { y1: RawVector(y1) })
    }
}

impl Msg2 {
    pub fn encode(&self) -> Vec<u8> {
        encode_frame(TAG_MSG2, &self.x1.0, Some(self.r1))
    }

    pub fn decode(buf: &[u8]) -> Result<Self, DecodeError> {
        let (x1, r1) = decode_frame(buf, TAG_MSG2, true)?;
        Ok(Msg2 {
            x1: RawVector(x1),
            r1: r1.expect("trailer present"),
        })
    }
}

fn field_values(v: &FieldVector) -> Vec<u64> {
    v.iter().map(|e| e.value() as u64).collect()
}

fn into_field(values: Vec<u64>, q: Modulus) -> Result<FieldVector, DecodeError> {
    let elems = values
        .into_iter()
        .map(|v| {
            q.element(v).ok_or(DecodeError::SetupValueOutOfField {
                value: v,
                q: q.get(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FieldVector::new(elems, q).expect("single modulus"))
}

impl SetupP1 {
    pub fn encode(&self) -> Vec<u8> {
        encode_frame(TAG_SETUP1, &field_values(&self.x0), None)
    }

    pub fn decode(buf: &[u8], q: Modulus) -> Result<Self, DecodeError> {
        let (x0, _) = decode_frame(buf, TAG_SETUP1, false)?;
        Ok(SetupP1 {
            x0: into_field(x0, q)?,
        })
    }
}

impl SetupP2 {
    pub fn encode(&self) -> Vec<u8> {
        encode_frame(
            TAG_SETUP2,
            &field_values(&self.y0),
            Some(self.s0.value() as u64),
        )
    }

    /// Decodes `(ȳ₀, s₀)` as sent. `s₀` is not recomputed; the initializer is trusted.
    pub fn decode(buf: &[u8], q: Modulus) -> Result<Self, DecodeError> {
        let (y0, s0) = decode_frame(buf, TAG_SETUP2, true)?;
        let s0 = s0.expect("trailer present");
        Ok(SetupP2 {
            y0: into_field(y0, q)?,
            s0: q.element(s0).ok_or(DecodeError::SetupValueOutOfField {
                value: s0,
                q: q.get(),
            })?,
        })
    }
}

/// A computation-phase message of either kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WireMessage {
    Msg1(Msg1),
    Msg2(Msg2),
}

impl WireMessage {
    pub fn decode(buf: &[u8]) -> Result<Self, DecodeError> {
        match buf.first() {
            None => Err(DecodeError::Empty),
            Some(&TAG_MSG1) => Msg1::decode(buf).map(WireMessage::Msg1),
            Some(&TAG_MSG2) => Msg2::decode(buf).map(WireMessage::Msg2),
            Some(&t) => Err(DecodeError::UnknownTag(t)),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        match self {
            WireMessage::Msg1(m) => m.encode(),
            WireMessage::Msg2(m) => m.encode(),
        }
    }
}
