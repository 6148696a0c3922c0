//! The preprocessing-model inner product protocol.
//!
//! An honest initializer hands P1 a random mask `x̄₀` and hands P2 a random
//! mask `ȳ₀` together with `s₀ = ⟨x̄₀·ȳ₀⟩`. Then:
//!
//! 1. P2 sends `ȳ₁ = ȳ − ȳ₀`.
//! 2. P1 checks `ȳ₁ ∈ F_q^k`, draws `r`, sends `x̄₁ = x̄ + x̄₀` and
//!    `r₁ = ⟨x̄·ȳ₁⟩ − r`, and outputs `w1 = r`.
//! 3. P2 checks `x̄₁ ∈ F_q^k`, `r₁ ∈ F_q` and outputs
//!    `w2 = ⟨x̄₁·ȳ₀⟩ + r₁ − s₀`.
//!
//! A failed membership check makes the checking party output λ
//! ([`Outcome::Abort`]).

mod party;
pub mod wire;

use serde::{Serialize, Serializer};

pub use party::{Party1, Party2, Phase};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSampler, Modulus};
use crate::linalg::FieldVector;
use crate::membership::{Outcome, RawVector};

/// P1's share of the correlated randomness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetupP1 {
    pub x0: FieldVector,
}

/// P2's share of the correlated randomness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetupP2 {
    pub y0: FieldVector,
    pub s0: FieldElement,
}

/// P2 → P1: the masked input `ȳ₁`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Msg1 {
    pub y1: RawVector,
}

/// P1 → P2: the masked input `x̄₁` and the masked partial product `r₁`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Msg2 {
    pub x1: RawVector,
    #[serde(serialize_with = "decimal")]
    pub r1: u64,
}

fn decimal<S: Serializer>(v: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Draws fresh correlated randomness for one session of length `k`.
///
/// Coins are consumed in the order `x̄₀` then `ȳ₀`.
pub fn preprocess<S: FieldSampler + ?Sized>(
    k: usize,
    q: Modulus,
    rng: &mut S,
) -> Result<(SetupP1, SetupP2)> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "vector length k must be at least 1".into(),
        ));
    }
    let x0 = FieldVector::random(k, q, rng);
    let y0 = FieldVector::random(k, q, rng);
    Ok(setup_from_masks(x0, y0))
}

/// Builds the setup pair from explicit masks, computing `s₀`.
pub fn setup_from_masks(x0: FieldVector, y0: FieldVector) -> (SetupP1, SetupP2) {
    let s0 = x0.dot(&y0).expect("masks share length and modulus");
    (SetupP1 { x0 }, SetupP2 { y0, s0 })
}

/// P2's first move: `ȳ₁ = ȳ − ȳ₀`.
pub fn p2_round1(y: &FieldVector, setup: &SetupP2) -> Result<Msg1> {
    let y1 = y.sub(&setup.y0)?;
    Ok(Msg1 { y1: (&y1).into() })
}

/// Result of P1's only move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum P1Reply {
    Send { msg2: Msg2, w1: FieldElement },
    Abort,
}

impl P1Reply {
    pub fn outcome(&self) -> Outcome {
        match self {
            P1Reply::Send { w1, .. } => Outcome::Share(*w1),
            P1Reply::Abort => Outcome::Abort,
        }
    }
}

/// P1's move on receiving `msg1`. `r` is drawn only after `ȳ₁` passes membership.
///
/// Errors only on P1's own inconsistency (`x̄` and `x̄₀` of different shapes).
pub fn p1_round2<S: FieldSampler + ?Sized>(
    x: &FieldVector,
    setup: &SetupP1,
    msg1: &Msg1,
    rng: &mut S,
) -> Result<P1Reply> {
    let x1 = x.add(&setup.x0)?;
    let Some(y1) = msg1.y1.validate(x.len(), x.modulus()) else {
        return Ok(P1Reply::Abort);
    };
    let r = rng.sample(x.modulus());
    let r1 = x.dot(&y1)? - r;
    Ok(P1Reply::Send {
        msg2: Msg2 {
            x1: (&x1).into(),
            r1: r1.value() as u64,
        },
        w1: r,
    })
}

/// `msg2` after P2's membership checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidMsg2 {
    pub x1: FieldVector,
    pub r1: FieldElement,
}

impl Msg2 {
    pub fn validate(&self, k: usize, q: Modulus) -> Option<ValidMsg2> {
        Some(ValidMsg2 {
            x1: self.x1.validate(k, q)?,
            r1: q.element(self.r1)?,
        })
    }
}

/// P2's output: `w2 = ⟨x̄₁·ȳ₀⟩ + r₁ − s₀`, or λ if `msg2` fails membership.
pub fn p2_finish(setup: &SetupP2, msg2: &Msg2) -> Outcome {
    match msg2.validate(setup.y0.len(), setup.y0.modulus()) {
        Some(m) => Outcome::Share(p2_output(setup, &m)),
        None => Outcome::Abort,
    }
}

fn p2_output(setup: &SetupP2, m: &ValidMsg2) -> FieldElement {
    m.x1.dot(&setup.y0).expect("validated to setup shape") + m.r1 - setup.s0
}

/// Everything exchanged and output in one session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub q: Modulus,
    pub k: usize,
    pub setup1: SetupP1,
    pub setup2: SetupP2,
    pub msg1: Msg1,
    pub msg2: Option<Msg2>,
    pub outcome1: Outcome,
    pub outcome2: Outcome,
}

impl Transcript {
    /// What P2 knows at the end of the session, given its own input `y`.
    /// `None` if P2 did not reach an output.
    pub fn p2_view(&self, y: &FieldVector) -> Option<P2View> {
        let Outcome::Share(w2) = self.outcome2 else {
            return None;
        };
        let m = self.msg2.as_ref()?.validate(self.k, self.q)?;
        Some(P2View {
            y: y.clone(),
            y0: self.setup2.y0.clone(),
            s0: self.setup2.s0,
            x1: m.x1,
            r1: m.r1,
            w2,
        })
    }

    /// `w1 + w2`, if neither party aborted.
    pub fn reconstructed(&self) -> Option<FieldElement> {
        Some(self.outcome1.share()? + self.outcome2.share()?)
    }
}

/// The view of a corrupted P2 after a session with an honest P1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct P2View {
    pub y: FieldVector,
    pub y0: FieldVector,
    pub s0: FieldElement,
    pub x1: FieldVector,
    pub r1: FieldElement,
    pub w2: FieldElement,
}

impl P2View {
    pub fn k(&self) -> usize {
        self.y0.len()
    }

    pub fn modulus(&self) -> Modulus {
        self.y0.modulus()
    }
}

/// Carries messages between the parties; may rewrite them in transit.
pub trait Channel {
    fn deliver_msg1(&mut self, msg: Msg1) -> Msg1 {
        msg
    }

    fn deliver_msg2(&mut self, msg: Msg2) -> Msg2 {
        msg
    }
}

/// Delivers every message untouched.
#[derive(Debug, Clone, Copy, Default)]
pub struct Honest;

impl Channel for Honest {}

/// Runs preprocessing and both parties end to end over an honest channel.
pub fn run_session<S: FieldSampler + ?Sized>(
    x: &FieldVector,
    y: &FieldVector,
    rng: &mut S,
) -> Result<Transcript> {
    run_session_over(x, y, rng, &mut Honest)
}

/// As [`run_session`], routing both messages through `channel`.
pub fn run_session_over<S, C>(
    x: &FieldVector,
    y: &FieldVector,
    rng: &mut S,
    channel: &mut C,
) -> Result<Transcript>
where
    S: FieldSampler + ?Sized,
    C: Channel + ?Sized,
{
    if x.len() != y.len() || x.modulus() != y.modulus() {
        return Err(Error::DimensionMismatch(format!(
            "inputs of length {} (mod {}) and {} (mod {})",
            x.len(),
            x.modulus(),
            y.len(),
            y.modulus()
        )));
    }
    let (k, q) = (x.len(), x.modulus());
    let (setup1, setup2) = preprocess(k, q, rng)?;

    let mut p1 = Party1::new(x.clone());
    let mut p2 = Party2::new(y.clone());
    p1.receive_setup(setup1.clone())?;
    let msg1 = channel.deliver_msg1(p2.receive_setup(setup2.clone())?);
    let msg2 = p1
        .receive_msg1(&msg1, rng)?
        .map(|m| channel.deliver_msg2(m));
    let outcome2 = match &msg2 {
        Some(m) => p2.receive_msg2(m)?,
        None => Outcome::Abort,
    };
    Ok(Transcript {
        q,
        k,
        setup1,
        setup2,
        msg1,
        msg2,
        outcome1: p1.outcome().expect("P1 has finished"),
        outcome2,
    })
}

/// Zero-extends a length-k′ input to length `k`.
pub fn pad_inputs(x: &FieldVector, k: usize) -> Result<FieldVector> {
    if x.is_empty() {
        return Err(Error::InvalidArgument("cannot pad an empty input".into()));
    }
    x.padded(k)
}

/// Runs the length-`k` protocol on zero-padded length-k′ inputs and returns
/// its transcript; the outputs are those of the length-k′ computation.
pub fn run_padded_session<S: FieldSampler + ?Sized>(
    x: &FieldVector,
    y: &FieldVector,
    k: usize,
    rng: &mut S,
) -> Result<Transcript> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "inputs of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    run_session(&pad_inputs(x, k)?, &pad_inputs(y, k)?, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{DipRng, ScriptedSource};

    fn q7() -> Modulus {
        Modulus::new(7).unwrap()
    }

    fn v7(values: &[i64]) -> FieldVector {
        FieldVector::from_values(values, q7())
    }

    #[test]
    fn preprocess_examples() {
        let (s1, s2) = preprocess(2, q7(), &mut ScriptedSource::new(vec![5, 6, 2, 3])).unwrap();
        assert_eq!(s1.x0, v7(&[5, 6]));
        assert_eq!(s2.y0, v7(&[2, 3]));
        assert_eq!(s2.s0.value(), 0);

        let q2 = Modulus::new(2).unwrap();
        for y0 in 0..2 {
            let (_, s2) = preprocess(1, q2, &mut ScriptedSource::new(vec![0, y0])).unwrap();
            assert!(s2.s0.is_zero());
        }

        let mut rng = DipRng::from_seed(1);
        for _ in 0..100 {
            let (s1, s2) = preprocess(5, Modulus::new(101).unwrap(), &mut rng).unwrap();
            assert_eq!(s1.x0.dot(&s2.y0).unwrap(), s2.s0);
        }
        assert!(preprocess(0, q7(), &mut rng).is_err());
    }

    #[test]
    fn round1_examples() {
        let (_, s2) = setup_from_masks(v7(&[5, 6]), v7(&[2, 3]));
        assert_eq!(
            p2_round1(&v7(&[3, 4]), &s2).unwrap().y1,
            RawVector(vec![1, 1])
        );
        assert_eq!(
            p2_round1(&v7(&[2, 3]), &s2).unwrap().y1,
            RawVector(vec![0, 0])
        );
        assert_eq!(
            p2_round1(&v7(&[0, 0]), &s2).unwrap().y1,
            RawVector(vec![5, 4])
        );
        assert!(p2_round1(&v7(&[1, 2, 3]), &s2).is_err());
    }

    #[test]
    fn round2_example() {
        let s1 = SetupP1 { x0: v7(&[5, 6]) };
        let msg1 = Msg1 {
            y1: RawVector(vec![1, 1]),
        };
        let reply = p1_round2(&v7(&[1, 2]), &s1, &msg1, &mut ScriptedSource::new(vec![4])).unwrap();
        assert_eq!(
            reply,
            P1Reply::Send {
                msg2: Msg2 {
                    x1: RawVector(vec![6, 1]),
                    r1: 6
                },
                w1: q7().reduce(4)
            }
        );
    }

    #[test]
    fn round2_aborts_on_bad_msg1() {
        let s1 = SetupP1 { x0: v7(&[5, 6]) };
        let mut coins = ScriptedSource::new(vec![]);
        for y1 in [vec![1, 7], vec![1, 1, 1], vec![1], vec![u64::MAX, 0]] {
            let reply =
                p1_round2(&v7(&[1, 2]), &s1, &Msg1 { y1: RawVector(y1) }, &mut coins).unwrap();
            assert_eq!(reply, P1Reply::Abort);
            assert!(reply.outcome().is_abort());
        }
    }

    #[test]
    fn finish_examples() {
        let (_, s2) = setup_from_masks(v7(&[5, 6]), v7(&[2, 3]));
        let w2 = p2_finish(
            &s2,
            &Msg2 {
                x1: RawVector(vec![6, 1]),
                r1: 6,
            },
        );
        assert_eq!(w2, Outcome::Share(q7().zero()));
        assert_eq!(
            p2_finish(
                &s2,
                &Msg2 {
                    x1: RawVector(vec![6, 1]),
                    r1: 7
                }
            ),
            Outcome::Abort
        );
        assert_eq!(
            p2_finish(
                &s2,
                &Msg2 {
                    x1: RawVector(vec![6, 9]),
                    r1: 0
                }
            ),
            Outcome::Abort
        );
        assert_eq!(
            p2_finish(
                &s2,
                &Msg2 {
                    x1: RawVector(vec![6]),
                    r1: 0
                }
            ),
            Outcome::Abort
        );

        let (_, zero) = setup_from_masks(v7(&[0, 0]), v7(&[2, 3]));
        assert_eq!(
            p2_finish(
                &zero,
                &Msg2 {
                    x1: RawVector(vec![0, 0]),
                    r1: 0
                }
            ),
            Outcome::Share(q7().zero())
        );
    }

    #[test]
    fn worked_session_end_to_end() {
        let mut coins = ScriptedSource::new(vec![5, 6, 2, 3, 4]);
        let t = run_session(&v7(&[1, 2]), &v7(&[3, 4]), &mut coins).unwrap();
        assert_eq!(t.msg1.y1, RawVector(vec![1, 1]));
        assert_eq!(
            t.msg2,
            Some(Msg2 {
                x1: RawVector(vec![6, 1]),
                r1: 6
            })
        );
        assert_eq!(t.outcome1, Outcome::Share(q7().reduce(4)));
        assert_eq!(t.outcome2, Outcome::Share(q7().zero()));
        assert_eq!(t.reconstructed(), Some(q7().reduce(4)));
        assert_eq!(coins.remaining(), 0);
    }

    #[test]
    fn zero_input_reconstructs_zero() {
        let mut rng = DipRng::from_seed(4);
        let t = run_session(&v7(&[0, 0, 0]), &v7(&[1, 5, 6]), &mut rng).unwrap();
        assert_eq!(t.reconstructed(), Some(q7().zero()));
    }

    #[test]
    fn session_rejects_mismatched_inputs() {
        let mut rng = DipRng::from_seed(4);
        assert!(run_session(&v7(&[1, 2]), &v7(&[1]), &mut rng).is_err());
    }

    #[test]
    fn padding_examples() {
        assert_eq!(pad_inputs(&v7(&[1, 2]), 4).unwrap(), v7(&[1, 2, 0, 0]));
        assert_eq!(pad_inputs(&v7(&[5]), 1).unwrap(), v7(&[5]));
        assert_eq!(pad_inputs(&v7(&[0]), 3).unwrap(), v7(&[0, 0, 0]));
        assert!(pad_inputs(&v7(&[1, 2, 3]), 2).is_err());
        assert!(pad_inputs(&v7(&[]), 2).is_err());
    }

    #[test]
    fn padded_session_example() {
        let mut rng = DipRng::from_seed(8);
        let t = run_padded_session(&v7(&[2]), &v7(&[3]), 3, &mut rng).unwrap();
        assert_eq!(t.k, 3);
        assert_eq!(t.reconstructed(), Some(q7().reduce(6)));
    }

    #[test]
    fn unpadded_run_is_the_same_session() {
        let (x, y) = (v7(&[1, 2, 3]), v7(&[4, 5, 6]));
        let a = run_padded_session(&x, &y, 3, &mut DipRng::from_seed(2)).unwrap();
        let b = run_session(&x, &y, &mut DipRng::from_seed(2)).unwrap();
        assert_eq!(a, b);
    }

    struct Corrupt;

    impl Channel for Corrupt {
        fn deliver_msg2(&mut self, mut msg: Msg2) -> Msg2 {
            msg.r1 = 1 << 40;
            msg
        }
    }

    #[test]
    fn tampered_msg2_makes_p2_abort() {
        let mut rng = DipRng::from_seed(5);
        let t = run_session_over(&v7(&[1, 2]), &v7(&[3, 4]), &mut rng, &mut Corrupt).unwrap();
        assert!(t.outcome1.share().is_some());
        assert_eq!(t.outcome2, Outcome::Abort);
        assert!(t.p2_view(&v7(&[3, 4])).is_none());
    }

    #[test]
    fn transcript_json_shape() {
        let mut coins = ScriptedSource::new(vec![5, 6, 2, 3, 4]);
        let t = run_session(&v7(&[1, 2]), &v7(&[3, 4]), &mut coins).unwrap();
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "q": 7,
                "k": 2,
                "setup1": {"x0": ["5", "6"]},
                "setup2": {"y0": ["2", "3"], "s0": "0"},
                "msg1": {"y1": ["1", "1"]},
                "msg2": {"x1": ["6", "1"], "r1": "6"},
                "outcome1": "4",
                "outcome2": "0",
            })
        );
    }
}
