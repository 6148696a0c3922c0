//! Prime-field arithmetic and seeded uniform sampling.
//!
//! Moduli are primes below 2^31, so the product of two canonical residues
//! always fits in a `u64` before reduction.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive).
pub const MODULUS_BOUND: u64 = 1 << 31;

/// A prime `q` with `2 <= q < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(q: u64) -> Result<Self> {
        if q >= MODULUS_BOUND || !is_prime(q) {
            return Err(Error::InvalidModulus(q));
        }
        Ok(Modulus(q as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Canonical residue of an arbitrary integer.
    pub fn reduce(self, v: i128) -> FieldElement {
        let r = v.rem_euclid(self.0 as i128) as u32;
        FieldElement { value: r, q: self }
    }

    pub fn reduce_u64(self, v: u64) -> FieldElement {
        FieldElement {
            value: (v % self.0 as u64) as u32,
            q: self,
        }
    }

    /// Accepts `v` only if it is already a canonical residue.
    pub fn element(self, v: u64) -> Option<FieldElement> {
        (v < self.0 as u64).then_some(FieldElement {
            value: v as u32,
            q: self,
        })
    }

    pub fn zero(self) -> FieldElement {
        FieldElement { value: 0, q: self }
    }

    pub fn one(self) -> FieldElement {
        FieldElement { value: 1, q: self }
    }

    /// All elements of the field in increasing order. Only sensible for small `q`.
    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.0).map(move |value| FieldElement { value, q: self })
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Modulus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.0)
    }
}

/// Deterministic Miller-Rabin; bases {2, 7, 61} are exact for n < 4_759_123_141.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 61] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    debug_assert!(n < 4_759_123_141);
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// A residue in `[0, q)` tagged with its modulus.
///
/// The `std::ops` impls panic when the moduli differ; the `try_*` methods
/// report the mismatch as [`Error::ModulusMismatch`] instead.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    q: Modulus,
}

impl FieldElement {
    /// `v mod q`, for any integer `v`.
    pub fn canon(v: i128, q: Modulus) -> Self {
        q.reduce(v)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: Self) -> Result<()> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: self.q.0,
                right: other.q.0,
            })
        }
    }

    pub fn try_add(self, rhs: Self) -> Result<Self> {
        self.same_field(rhs)?;
        let q = self.q.0 as u64;
        let s = self.value as u64 + rhs.value as u64;
        Ok(FieldElement {
            value: if s >= q { s - q } else { s } as u32,
            q: self.q,
        })
    }

    pub fn try_sub(self, rhs: Self) -> Result<Self> {
        self.same_field(rhs)?;
        self.try_add(-rhs)
    }

    pub fn try_mul(self, rhs: Self) -> Result<Self> {
        self.same_field(rhs)?;
        let p = self.value as u64 * rhs.value as u64;
        Ok(FieldElement {
            value: (p % self.q.0 as u64) as u32,
            q: self.q,
        })
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::InversionOfZero);
        }
        let (mut r0, mut r1) = (self.q.0 as i64, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.q.reduce(t0 as i128))
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut acc = self.q.one();
        let mut base = self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.q.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// Field elements go out as decimal strings.
impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.value)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            #[inline]
            fn $method(self, rhs: FieldElement) -> FieldElement {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = *self + rhs;
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let value = if self.value == 0 {
            0
        } else {
            self.q.0 - self.value
        };
        FieldElement { value, q: self.q }
    }
}

/// Source of uniformly random field elements.
///
/// [`DipRng`] is the real source; [`ScriptedSource`] replays fixed values so
/// worked examples can pin the protocol's coins.
pub trait FieldSampler {
    fn sample(&mut self, q: Modulus) -> FieldElement;

    fn sample_many(&mut self, q: Modulus, n: usize) -> Vec<FieldElement> {
        (0..n).map(|_| self.sample(q)).collect()
    }
}

impl<S: FieldSampler + ?Sized> FieldSampler for &mut S {
    fn sample(&mut self, q: Modulus) -> FieldElement {
        (**self).sample(q)
    }
}

/// Seeded ChaCha20 stream with rejection-sampled field draws.
#[derive(Debug, Clone)]
pub struct DipRng {
    seed: u64,
    inner: ChaCha20Rng,
}

impl DipRng {
    pub fn from_seed(seed: u64) -> Self {
        DipRng {
            seed,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream for trial `index` of an experiment seeded with `seed`.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        Self::from_seed(mix_seed(seed, index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}

impl FieldSampler for DipRng {
    fn sample(&mut self, q: Modulus) -> FieldElement {
        // Accept only draws below the largest multiple of q that fits in 32 bits.
        let q64 = q.0 as u64;
        let zone = (1u64 << 32) - (1u64 << 32) % q64;
        loop {
            let v = self.inner.next_u32() as u64;
            if v < zone {
                return FieldElement {
                    value: (v % q64) as u32,
                    q,
                };
            }
        }
    }
}

/// SplitMix64 finaliser over `seed` and `index`.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Replays a fixed list of values (reduced mod the requested `q`).
///
/// Panics when exhausted: a worked example that needs more coins than it
/// scripted is a broken example.
#[derive(Debug, Clone)]
pub struct ScriptedSource {
    values: Vec<u64>,
    next: usize,
}

impl ScriptedSource {
    pub fn new(values: impl Into<Vec<u64>>) -> Self {
        ScriptedSource {
            values: values.into(),
            next: 0,
        }
    }

    pub fn remaining(&self) -> usize {
        self.values.len() - self.next
    }
}

impl FieldSampler for ScriptedSource {
    fn sample(&mut self, q: Modulus) -> FieldElement {
        let v = *self
            .values
            .get(self.next)
            .unwrap_or_else(|| panic!("scripted source exhausted after {} draws", self.next));
        self.next += 1;
        q.reduce_u64(v)
    }
}
