//! Distributed inner product over a prime field: the trusted-party
//! functionality, the preprocessing-model two-party protocol, and the attacks
//! by a corrupted P2 that show the protocol leaks P1's input.
//!
//! ```
//! use diplab::{DipRng, FieldVector, Modulus, attack, protocol};
//!
//! let q = Modulus::new(101).unwrap();
//! let mut rng = DipRng::from_seed(7);
//! let x = FieldVector::from_values(&[42], q);
//! let y = FieldVector::from_values(&[5], q);
//!
//! let t = protocol::run_session(&x, &y, &mut rng).unwrap();
//! assert_eq!(t.reconstructed(), Some(q.reduce(210)));
//!
//! // P2 learns x whenever its mask y0 is nonzero.
//! let view = t.p2_view(&y).unwrap();
//! if let Some(x_guess) = attack::recover_k1(&view).unwrap() {
//!     assert_eq!(x_guess.value(), 42);
//! }
//! ```

pub mod attack;
pub mod composed;
pub mod error;
pub mod experiment;
pub mod field;
pub mod ideal;
pub mod linalg;
pub mod membership;
pub mod protocol;
pub mod stats;
pub mod trials;

pub use error::{DecodeError, Error, Result};
pub use field::{DipRng, FieldElement, FieldSampler, Modulus, ScriptedSource};
pub use linalg::{solve, FieldMatrix, FieldVector, SolutionKind, SolutionSet};
pub use membership::{Outcome, RawVector};
