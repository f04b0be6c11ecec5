//! Gold power maps x -> x^(sigma+1), sigma = 2^s, and the cell-index
//! ("color") formula they induce on odd-cardinality subsets.
//!
//! For odd m and gcd(s, m) = 1 the map g(x) = x^(sigma+1) is a bijection of
//! F = GF(2^m) (sigma + 1 is invertible modulo 2^m - 1), and so is its
//! inverse y -> y^d with d = (sigma+1)^(-1). Both directions are hot paths
//! for the counting code, so [`GoldParams`] precomputes them as tables.

use crate::field::{FieldElement, Modulus, MAX_M};
use crate::subsets::SubsetVec;
use crate::{Error, ParamsEcho, Result};

/// Everything derived from a choice of (m, s, modulus): the field, the Gold
/// exponent sigma + 1 = 2^s + 1, its inverse exponent d, and forward/inverse
/// map tables indexed by field element.
#[derive(Debug, Clone)]
pub struct GoldParams {
    m: usize,
    s: usize,
    modulus: Modulus,
    d: u64,
    gold: Vec<FieldElement>,
    root: Vec<FieldElement>,
}

impl GoldParams {
    /// Validate (m, s) and build the tables. `modulus` overrides the default
    /// (smallest) irreducible polynomial; it must have degree m.
    pub fn new(m: usize, s: usize, modulus: Option<Modulus>) -> Result<Self> {
        if !(3..=MAX_M).contains(&m) {
            return Err(Error::Degree(m));
        }
        if m % 2 == 0 {
            return Err(Error::DegreeNotOdd(m));
        }
        if s == 0 || s >= m || gcd(s as u64, m as u64) != 1 {
            return Err(Error::Exponent { m, s });
        }
        let md = match modulus {
            Some(md) => {
                if md.m() != m {
                    return Err(Error::Modulus { m, poly: md.poly() });
                }
                md
            }
            None => Modulus::find(m)?,
        };
        let order = (1u64 << m) - 1;
        let sigma_plus_1 = (1u64 << s) + 1;
        let d = mod_inverse(sigma_plus_1 % order, order)
            .expect("2^s + 1 is invertible mod 2^m - 1 when gcd(s, m) = 1");
        let n = 1usize << m;
        let mut gold = Vec::with_capacity(n);
        let mut root = vec![0; n];
        for x in 0..n as FieldElement {
            let g = md.pow(x, sigma_plus_1);
            gold.push(g);
            root[g as usize] = x;
        }
        Ok(GoldParams { m, s, modulus: md, d, gold, root })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// sigma = 2^s.
    pub fn sigma(&self) -> u64 {
        1 << self.s
    }

    /// The Gold exponent sigma + 1.
    pub fn sigma_plus_1(&self) -> u64 {
        self.sigma() + 1
    }

    /// The inverse exponent: d * (sigma + 1) = 1 mod 2^m - 1.
    pub fn d(&self) -> u64 {
        self.d
    }

    /// Number of field elements, 2^m.
    pub fn field_size(&self) -> usize {
        1 << self.m
    }

    /// g(x) = x^(sigma+1), by table.
    #[inline]
    pub fn gold_map(&self, x: FieldElement) -> FieldElement {
        self.gold[x as usize]
    }

    /// The inverse bijection g^(-1)(y) = y^d, by table.
    #[inline]
    pub fn gold_root(&self, y: FieldElement) -> FieldElement {
        self.root[y as usize]
    }

    /// Element sum and Gold-power sum of a subset: (sum x, sum x^(sigma+1)).
    /// Both are additive over symmetric difference, which is what makes
    /// incremental color updates O(1).
    pub fn sums(&self, x: &SubsetVec) -> (FieldElement, FieldElement) {
        debug_assert_eq!(x.len(), self.field_size());
        x.iter_ones()
            .fold((0, 0), |(s, p), el| (s ^ el, p ^ self.gold[el as usize]))
    }

    /// The cell index of an odd-cardinality subset X: the unique alpha with
    /// `sum over x in X of (x + alpha)^(sigma+1) = 0`.
    ///
    /// Writing S and P for the element and Gold-power sums of X, expanding
    /// the defining sum for odd |X| gives `(S + alpha)^(sigma+1) =
    /// S^(sigma+1) + P`, so `alpha = S + (S^(sigma+1) + P)^d`. Uniqueness
    /// (and hence that the cells tile the odd half of the cube) follows from
    /// g being a bijection.
    pub fn color(&self, x: &SubsetVec) -> Result<FieldElement> {
        if x.len() != self.field_size() {
            return Err(Error::Length { expected: self.field_size(), got: x.len() });
        }
        if x.parity() != 1 {
            return Err(Error::EvenCardinality);
        }
        let (s, p) = self.sums(x);
        Ok(s ^ self.gold_root(self.gold_map(s) ^ p))
    }

    /// Parameter block for reports.
    pub fn echo(&self) -> ParamsEcho {
        ParamsEcho {
            m: self.m,
            s: self.s,
            sigma_plus_1: self.sigma_plus_1(),
            modulus_hex: format!("{:#x}", self.modulus.poly()),
            d: self.d,
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of a modulo n (extended Euclid), if gcd(a, n) = 1.
fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i64, n as i64);
    let (mut old_t, mut t) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_t.rem_euclid(n as i64) as u64)
}

/// All exponents s that are valid for this degree, in increasing order.
pub fn valid_exponents(m: usize) -> Vec<usize> {
    (1..m).filter(|&s| gcd(s as u64, m as u64) == 1).collect()
}
