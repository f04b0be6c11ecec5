//! GF(2^m) arithmetic in polynomial basis.
//!
//! Field elements are m-bit integers: bit i holds the coefficient of x^i.
//! The field is fixed by an irreducible degree-m modulus polynomial over
//! GF(2), encoded the same way with bit m set (so degree 3 with modulus
//! x^3 + x + 1 is `0xB`). Addition is `^`; multiplication is shift-and-add
//! with reduction. Degrees stay small enough (<= 19) that everything fits
//! comfortably in `u32` and exhaustive tests stay cheap.

use crate::{Error, Result};

/// A field element, an m-bit integer in polynomial basis. Plain `u32` keeps
/// the arithmetic free of wrapper friction; the owning [`Modulus`] (or
/// `GoldParams`) supplies the context that makes the bits meaningful.
pub type FieldElement = u32;

/// Largest supported extension degree. Keeps every product inside `u32`
/// and the per-parameter lookup tables inside a few megabytes.
pub const MAX_M: usize = 19;

/// Field addition: characteristic 2, so just XOR. Provided for readability
/// at call sites that are doing algebra rather than bit twiddling.
#[inline]
pub fn add(a: FieldElement, b: FieldElement) -> FieldElement {
    a ^ b
}

/// An irreducible degree-m modulus defining GF(2^m), plus the arithmetic
/// that depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Modulus {
    m: usize,
    poly: u32,
}

impl Modulus {
    /// Validate an explicit modulus: degree exactly m (bit m set, nothing
    /// above it) and irreducible over GF(2).
    pub fn new(m: usize, poly: u32) -> Result<Self> {
        if !(2..=MAX_M).contains(&m) {
            return Err(Error::Degree(m));
        }
        if poly >> m != 1 || !is_irreducible(poly, m) {
            return Err(Error::Modulus { m, poly });
        }
        Ok(Modulus { m, poly })
    }

    /// The lexicographically smallest irreducible degree-m polynomial,
    /// scanning candidates in increasing integer order. Deterministic, so
    /// every run of the tools agrees on the default field representation.
    pub fn find(m: usize) -> Result<Self> {
        if !(2..=MAX_M).contains(&m) {
            return Err(Error::Degree(m));
        }
        // An irreducible polynomial of degree >= 1 has a nonzero constant
        // term (else x divides it), so scan odd candidates only.
        let lo = (1u32 << m) | 1;
        let hi = 1u32 << (m + 1);
        for poly in (lo..hi).step_by(2) {
            if is_irreducible(poly, m) {
                return Ok(Modulus { m, poly });
            }
        }
        unreachable!("an irreducible polynomial of degree {m} exists");
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The modulus polynomial as an integer (bit m set).
    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Number of field elements, 2^m.
    pub fn field_size(&self) -> usize {
        1 << self.m
    }

    /// Product in GF(2^m): carryless multiply, then reduce modulo the
    /// modulus polynomial.
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a >> self.m == 0 && b >> self.m == 0);
        let mut acc: u64 = 0;
        let a = a as u64;
        for i in 0..self.m {
            if b >> i & 1 == 1 {
                acc ^= a << i;
            }
        }
        self.reduce(acc)
    }

    /// Frobenius endomorphism a -> a^2 (additive and bijective in
    /// characteristic 2).
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// a^e by square-and-multiply, with the convention pow(0, 0) = 1.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        debug_assert!(a >> self.m == 0);
        let mut base = a;
        let mut e = e;
        let mut acc: FieldElement = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn reduce(&self, mut acc: u64) -> FieldElement {
        let poly = self.poly as u64;
        let m = self.m as u32;
        let mut deg = 63u32.saturating_sub(acc.leading_zeros());
        while acc >> m != 0 {
            acc ^= poly << (deg - m);
            deg = 63u32.saturating_sub(acc.leading_zeros());
        }
        acc as FieldElement
    }
}

/// Remainder of carryless polynomial division a mod b (b nonzero).
fn poly_rem(mut a: u64, b: u64) -> u64 {
    debug_assert!(b != 0);
    let db = 63 - b.leading_zeros();
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Trial division by every polynomial of degree 1..=m/2. Cheap at these
/// sizes (m <= 19 means at most ~1000 candidate divisors).
fn is_irreducible(poly: u32, m: usize) -> bool {
    let poly = poly as u64;
    for deg in 1..=m / 2 {
        for div in (1u64 << deg)..(1u64 << (deg + 1)) {
            if poly_rem(poly, div) == 0 {
                return false;
            }
        }
    }
    true
}
