//! Subsets of the field as dense bit vectors.
//!
//! A subset X of F = GF(2^m) doubles as a vertex of the hypercube {0,1}^n,
//! n = 2^m: bit i is set iff field element i belongs to X. Everything the
//! partition machinery needs reduces to a handful of bit-vector primitives
//! (symmetric difference, parity, dot products) plus power sums evaluated
//! in the field.

use std::fmt;

use crate::field::{FieldElement, Modulus};
use crate::{Error, Result};

/// A subset of a fixed coordinate range 0..len, stored as packed 64-bit
/// words, least significant word first. Unused tail bits are kept zero so
/// equality, hashing and popcounts can work word-wise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetVec {
    len: usize,
    words: Vec<u64>,
}

impl SubsetVec {
    /// The empty subset of a length-`len` coordinate space.
    pub fn new(len: usize) -> Self {
        SubsetVec { len, words: vec![0; len.div_ceil(64)] }
    }

    /// The full subset (every coordinate present).
    pub fn full(len: usize) -> Self {
        let mut v = SubsetVec { len, words: vec![!0u64; len.div_ceil(64)] };
        v.mask_tail();
        v
    }

    /// A one-element subset.
    pub fn singleton(len: usize, x: FieldElement) -> Result<Self> {
        let mut v = SubsetVec::new(len);
        v.try_set(x)?;
        Ok(v)
    }

    /// A uniformly random subset (each coordinate an independent coin flip).
    pub fn random<R: rand::Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = SubsetVec { len, words: (0..len.div_ceil(64)).map(|_| rng.gen()).collect() };
        v.mask_tail();
        v
    }

    /// Build from an explicit element list. Duplicates collapse (these are
    /// sets); out-of-range elements are an error.
    pub fn from_elements(len: usize, elems: &[FieldElement]) -> Result<Self> {
        let mut v = SubsetVec::new(len);
        for &x in elems {
            v.try_set(x)?;
        }
        Ok(v)
    }

    /// Number of coordinates (not the cardinality).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Cardinality of the subset.
    pub fn cardinality(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Cardinality mod 2.
    pub fn parity(&self) -> u8 {
        (self.words.iter().fold(0u64, |acc, w| acc ^ w).count_ones() & 1) as u8
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let (w, b) = (i / 64, i % 64);
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    /// Toggle membership of one coordinate (a distance-1 step in the cube).
    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    fn try_set(&mut self, x: FieldElement) -> Result<()> {
        if (x as usize) < self.len {
            self.set(x as usize, true);
            Ok(())
        } else {
            Err(Error::Element { len: self.len, value: x })
        }
    }

    /// Symmetric difference, the cube's group operation.
    pub fn sym_diff(&self, other: &SubsetVec) -> Result<SubsetVec> {
        if self.len != other.len {
            return Err(Error::Length { expected: self.len, got: other.len });
        }
        let mut out = self.clone();
        out.xor_with(other);
        Ok(out)
    }

    /// In-place symmetric difference with a same-length vector.
    pub fn xor_with(&mut self, other: &SubsetVec) {
        assert_eq!(self.len, other.len, "xor_with needs equal lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// GF(2) inner product: parity of the intersection size.
    pub fn dot_parity(&self, other: &SubsetVec) -> u8 {
        assert_eq!(self.len, other.len, "dot_parity needs equal lengths");
        let acc = self
            .words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b));
        (acc.count_ones() & 1) as u8
    }

    /// Hamming distance to another vertex of the same cube.
    pub fn distance(&self, other: &SubsetVec) -> usize {
        assert_eq!(self.len, other.len, "distance needs equal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Iterate the elements (set bit positions) in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some((wi * 64) as FieldElement + b as FieldElement)
                }
            })
        })
    }

    /// Elements as a plain vector, for reports and error messages.
    pub fn elements(&self) -> Vec<FieldElement> {
        self.iter_ones().collect()
    }

    /// Serialize as lowercase hex, one nibble per four coordinates, least
    /// significant nibble first: digit k encodes coordinates 4k..4k+4, with
    /// coordinate 4k in the nibble's low bit. The string always has
    /// ceil(len/4) digits, so leading structure is never lost.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut out = String::with_capacity(digits);
        for k in 0..digits {
            let word = self.words[k / 16];
            let nib = (word >> ((k % 16) * 4)) & 0xF;
            out.push(char::from_digit(nib as u32, 16).unwrap());
        }
        out
    }

    /// Inverse of [`to_hex`]: expects exactly ceil(len/4) lowercase or
    /// uppercase hex digits, with any bits beyond `len` zero.
    ///
    /// [`to_hex`]: SubsetVec::to_hex
    pub fn from_hex(len: usize, s: &str) -> Result<Self> {
        let digits = len.div_ceil(4);
        if s.len() != digits {
            return Err(Error::Parse(format!(
                "expected {digits} hex digits for {len} coordinates, got {}",
                s.len()
            )));
        }
        let mut v = SubsetVec::new(len);
        for (k, c) in s.chars().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("invalid hex digit {c:?}")))?
                as u64;
            v.words[k / 16] |= nib << ((k % 16) * 4);
        }
        // Reject set bits beyond the coordinate range rather than silently
        // masking them: they indicate a caller-side length mixup.
        let mut masked = v.clone();
        masked.mask_tail();
        if masked.words != v.words {
            return Err(Error::Parse(format!(
                "hex string sets bits beyond coordinate {len}"
            )));
        }
        Ok(v)
    }

    fn mask_tail(&mut self) {
        let used = self.len % 64;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }
}

impl fmt::Debug for SubsetVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset[len={}]{{", self.len)?;
        for (i, x) in self.iter_ones().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Sum over the subset of x^e, evaluated in the field. The workhorse behind
/// both the cell-index formula and membership checks: in characteristic 2
/// these sums are additive under symmetric difference.
pub fn power_sum(x: &SubsetVec, e: u64, md: &Modulus) -> FieldElement {
    debug_assert_eq!(x.len(), md.field_size());
    x.iter_ones().fold(0, |acc, el| acc ^ md.pow(el, e))
}

/// A pointwise permutation of the field, acting on subsets coordinate-wise.
/// These generate the isometries of the cube that the partition machinery
/// cares about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointMap {
    /// x -> x + delta.
    Translate(FieldElement),
    /// x -> mu * x, mu nonzero.
    Scale(FieldElement),
    /// x -> x^2.
    Frobenius,
}

/// Apply a point map to every element of the subset. The image has the same
/// cardinality because each map is a bijection of F.
pub fn apply_point_map(x: &SubsetVec, map: PointMap, md: &Modulus) -> Result<SubsetVec> {
    let n = md.field_size();
    if x.len() != n {
        return Err(Error::Length { expected: n, got: x.len() });
    }
    if let PointMap::Scale(0) = map {
        return Err(Error::ZeroScale);
    }
    let mut out = SubsetVec::new(n);
    for el in x.iter_ones() {
        let img = match map {
            PointMap::Translate(d) => el ^ d,
            PointMap::Scale(mu) => md.mul(mu, el),
            PointMap::Frobenius => md.frobenius(el),
        };
        out.set(img as usize, true);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn md3() -> Modulus {
        Modulus::find(3).unwrap()
    }

    #[test]
    fn construction_and_cardinality() {
        let v = SubsetVec::from_elements(8, &[0, 3, 3, 5]).unwrap();
        assert_eq!(v.cardinality(), 3, "duplicates collapse");
        assert_eq!(v.parity(), 1);
        assert_eq!(v.elements(), vec![0, 3, 5]);
        assert!(SubsetVec::new(8).is_empty());
        assert_eq!(SubsetVec::full(8).cardinality(), 8);
        assert_eq!(SubsetVec::full(70).cardinality(), 70, "tail bits masked");
        assert_eq!(
            SubsetVec::from_elements(8, &[8]),
            Err(Error::Element { len: 8, value: 8 })
        );
    }

    #[test]
    fn sym_diff_and_distance() {
        let a = SubsetVec::from_elements(8, &[0, 1, 2]).unwrap();
        let b = SubsetVec::from_elements(8, &[2, 3]).unwrap();
        let d = a.sym_diff(&b).unwrap();
        assert_eq!(d.elements(), vec![0, 1, 3]);
        assert_eq!(a.distance(&b), 3);
        assert_eq!(a.distance(&a), 0);
        assert!(a.sym_diff(&SubsetVec::new(16)).is_err());
    }

    #[test]
    fn dot_parity_counts_intersection() {
        let a = SubsetVec::from_elements(8, &[0, 1, 2]).unwrap();
        let b = SubsetVec::from_elements(8, &[1, 2, 3]).unwrap();
        assert_eq!(a.dot_parity(&b), 0); // intersection {1,2}
        let c = SubsetVec::from_elements(8, &[2, 3]).unwrap();
        assert_eq!(a.dot_parity(&c), 1); // intersection {2}
    }

    #[test]
    fn hex_round_trip_examples() {
        // Singleton {0} in an 8-coordinate cube: low nibble 0b0001.
        let v = SubsetVec::singleton(8, 0).unwrap();
        assert_eq!(v.to_hex(), "10");
        assert_eq!(SubsetVec::from_hex(8, "10").unwrap(), v);
        // {0,1,2,3} fills the low nibble.
        let w = SubsetVec::from_elements(8, &[0, 1, 2, 3]).unwrap();
        assert_eq!(w.to_hex(), "f0");
        assert_eq!(SubsetVec::full(8).to_hex(), "ff");
        // Non-multiple-of-4 lengths round the digit count up.
        let p = SubsetVec::from_elements(7, &[6]).unwrap();
        assert_eq!(p.to_hex(), "04");
        assert_eq!(SubsetVec::from_hex(7, "04").unwrap(), p);
    }

    #[test]
    fn hex_rejects_malformed_input() {
        assert!(SubsetVec::from_hex(8, "1").is_err(), "wrong digit count");
        assert!(SubsetVec::from_hex(8, "1zz").is_err());
        assert!(SubsetVec::from_hex(8, "xg").is_err(), "non-hex digit");
        assert!(SubsetVec::from_hex(7, "08").is_err(), "bit beyond range");
    }

    #[test]
    fn power_sum_small_cases() {
        let md = md3();
        // Sum of all elements of GF(8) is 0 (pairs up under x -> x + 1,
        // or: each basis bit appears in exactly half the elements).
        let full = SubsetVec::full(8);
        assert_eq!(power_sum(&full, 1, &md), 0);
        // Over {0, a}: 0^e + a^e = a^e for e >= 1.
        for a in 1..8u32 {
            let v = SubsetVec::from_elements(8, &[0, a]).unwrap();
            assert_eq!(power_sum(&v, 3, &md), md.pow(a, 3));
        }
        // Empty sum is 0, and the pow(0,0)=1 convention shows up for e=0.
        assert_eq!(power_sum(&SubsetVec::new(8), 5, &md), 0);
        let v = SubsetVec::from_elements(8, &[0, 1, 5]).unwrap();
        assert_eq!(power_sum(&v, 0, &md), 1, "three ones XORed");
    }

    #[test]
    fn point_maps_small_cases() {
        let md = md3();
        let v = SubsetVec::from_elements(8, &[0, 1, 2]).unwrap();
        let t = apply_point_map(&v, PointMap::Translate(1), &md).unwrap();
        assert_eq!(t.elements(), vec![0, 1, 3]);
        let f = apply_point_map(&v, PointMap::Frobenius, &md).unwrap();
        assert_eq!(f.elements(), vec![0, 1, 4]);
        assert_eq!(apply_point_map(&v, PointMap::Scale(0), &md), Err(Error::ZeroScale));
        let bad = SubsetVec::new(16);
        assert!(apply_point_map(&bad, PointMap::Frobenius, &md).is_err());
    }

    /// A subset strategy over GF(2^m) for a few small degrees.
    fn arb_subset() -> impl Strategy<Value = (usize, SubsetVec)> {
        prop::sample::select(vec![3usize, 5, 7]).prop_flat_map(|m| {
            let n = 1usize << m;
            prop::collection::vec(0..n as u32, 0..n)
                .prop_map(move |els| (m, SubsetVec::from_elements(n, &els).unwrap()))
        })
    }

    proptest! {
        #[test]
        fn power_sums_add_over_sym_diff((m, a) in arb_subset(), seed in any::<u64>()) {
            // Independent second subset from the same cube.
            let n = 1usize << m;
            let mut b = SubsetVec::new(n);
            let mut state = seed;
            for i in 0..n {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if state >> 63 == 1 {
                    b.set(i, true);
                }
            }
            let md = Modulus::find(m).unwrap();
            for e in [1u64, 3, 5] {
                // Elements in the intersection contribute twice and cancel,
                // so the identity holds for arbitrary (not just disjoint) pairs.
                prop_assert_eq!(
                    power_sum(&a.sym_diff(&b).unwrap(), e, &md),
                    power_sum(&a, e, &md) ^ power_sum(&b, e, &md)
                );
            }
            prop_assert_eq!(
                a.sym_diff(&b).unwrap().parity(),
                a.parity() ^ b.parity()
            );
        }

        #[test]
        fn hex_round_trips((_m, a) in arb_subset()) {
            let s = a.to_hex();
            prop_assert_eq!(SubsetVec::from_hex(a.len(), &s).unwrap(), a);
        }

        #[test]
        fn point_maps_are_invertible_isometries((m, a) in arb_subset(), delta in any::<u32>(), mu in any::<u32>()) {
            let md = Modulus::find(m).unwrap();
            let mask = (md.field_size() - 1) as u32;
            let delta = delta & mask;
            let mu = (mu & mask).max(1);
            let order = (md.field_size() - 1) as u64;
            let mu_inv = md.pow(mu, order - 1);

            let t = apply_point_map(&a, PointMap::Translate(delta), &md).unwrap();
            prop_assert_eq!(t.cardinality(), a.cardinality());
            prop_assert_eq!(&apply_point_map(&t, PointMap::Translate(delta), &md).unwrap(), &a);

            let sc = apply_point_map(&a, PointMap::Scale(mu), &md).unwrap();
            prop_assert_eq!(&apply_point_map(&sc, PointMap::Scale(mu_inv), &md).unwrap(), &a);

            // Frobenius has order m on the field.
            let mut fr = a.clone();
            for _ in 0..m {
                fr = apply_point_map(&fr, PointMap::Frobenius, &md).unwrap();
            }
            prop_assert_eq!(&fr, &a);
        }
    }
}
