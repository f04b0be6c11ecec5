//! Crookedness of permutation tables: the exact condition under which an
//! arbitrary permutation of F induces the same partition/distance structure
//! that the Gold maps do.
//!
//! A permutation f is *crooked* when every direction's difference set
//! `D_alpha = { f(x) + f(x + alpha) : x in F }`, alpha != 0, is an affine
//! subspace of dimension m - 1 (a hyperplane or its coset). Gold maps are
//! crooked; the identity map satisfies the affine-subspace condition
//! trivially (every D_alpha is the single point {alpha}) but not the size
//! condition, and a random permutation essentially never satisfies either.

use serde::Serialize;

use crate::field::{FieldElement, MAX_M};
use crate::gold::GoldParams;
use crate::subsets::SubsetVec;
use crate::{Error, Result};

/// Largest degree for which the full crookedness sweep (n - 1 directions,
/// O(n) work each) is attempted.
const MAX_CROOKED_M: usize = 13;

/// A permutation of F = GF(2^m) as an image table: images[x] = f(x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermTable {
    m: usize,
    images: Vec<FieldElement>,
}

impl PermTable {
    /// Validate an explicit image table: power-of-two length, every value
    /// hit exactly once.
    pub fn new(images: Vec<FieldElement>) -> Result<Self> {
        let n = images.len();
        if n < 2 || !n.is_power_of_two() || n > 1 << MAX_M {
            return Err(Error::Parse(format!(
                "permutation table length {n} is not a power of two in range"
            )));
        }
        let mut seen = vec![false; n];
        for &y in &images {
            if (y as usize) >= n || seen[y as usize] {
                return Err(Error::NotAPermutation);
            }
            seen[y as usize] = true;
        }
        Ok(PermTable { m: n.trailing_zeros() as usize, images })
    }

    pub fn identity(m: usize) -> Result<Self> {
        if !(1..=MAX_M).contains(&m) {
            return Err(Error::Degree(m));
        }
        Ok(PermTable { m, images: (0..1u32 << m).collect() })
    }

    /// The Gold permutation x -> x^(sigma+1) for these parameters.
    pub fn gold(gp: &GoldParams) -> Self {
        PermTable {
            m: gp.m(),
            images: (0..gp.field_size() as FieldElement).map(|x| gp.gold_map(x)).collect(),
        }
    }

    /// Parse a table from text: integers separated by whitespace and/or
    /// commas, one image per element in order.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut images = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let v: FieldElement = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad table entry {tok:?}")))?;
            images.push(v);
        }
        PermTable::new(images)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[FieldElement] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: FieldElement) -> FieldElement {
        self.images[x as usize]
    }
}

/// The difference set of f in direction alpha != 0, as a subset of F:
/// { f(x) + f(x + alpha) : x in F }. x and x + alpha give the same value,
/// so the set has at most 2^(m-1) elements; crookedness is about when that
/// bound is tight *and* the set is affine.
pub fn difference_set(f: &PermTable, alpha: FieldElement) -> Result<SubsetVec> {
    let n = f.len();
    if alpha == 0 {
        return Err(Error::ZeroAlpha);
    }
    if (alpha as usize) >= n {
        return Err(Error::Element { len: n, value: alpha });
    }
    let mut out = SubsetVec::new(n);
    for x in 0..n as FieldElement {
        out.set((f.apply(x) ^ f.apply(x ^ alpha)) as usize, true);
    }
    Ok(out)
}

/// Whether a set of field elements is an affine subspace (a coset t + V of
/// a GF(2)-linear subspace V). Empty sets are not affine subspaces.
///
/// Translate by any member, compute the linear span's dimension r by
/// Gaussian elimination on the element bits, and compare |set| with 2^r:
/// equality forces the translated set to be all of its span.
pub fn is_affine_subspace(set: &SubsetVec) -> bool {
    let elems = set.elements();
    let Some(&t) = elems.first() else {
        return false;
    };
    let mut basis: Vec<FieldElement> = Vec::new();
    for &e in &elems {
        let mut v = e ^ t;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            // Keep the basis reduced so each element's top bit is unique.
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    elems.len() == 1usize << basis.len()
}

/// Verdict of the full crookedness sweep.
#[derive(Debug, Clone, Serialize)]
pub struct CrookedReport {
    /// Every direction's difference set is an affine subspace of size
    /// 2^(m-1).
    pub crooked: bool,
    /// Every direction's difference set is an affine subspace (of any
    /// size). The identity permutation shows this alone is weaker.
    pub affine_condition: bool,
    pub directions_checked: usize,
    /// First direction violating crookedness, with its difference-set size
    /// and affineness, if any.
    pub witness: Option<CrookedWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrookedWitness {
    pub alpha: FieldElement,
    pub size: usize,
    pub affine: bool,
}

/// Sweep every nonzero direction and classify the permutation.
pub fn check_crooked(f: &PermTable) -> Result<CrookedReport> {
    if f.m() > MAX_CROOKED_M {
        return Err(Error::Budget(format!(
            "crookedness sweep is quadratic in 2^m; m = {} exceeds {MAX_CROOKED_M}",
            f.m()
        )));
    }
    let n = f.len();
    let half = n / 2;
    let mut report = CrookedReport {
        crooked: true,
        affine_condition: true,
        directions_checked: 0,
        witness: None,
    };
    for alpha in 1..n as FieldElement {
        report.directions_checked += 1;
        let d = difference_set(f, alpha)?;
        let size = d.cardinality();
        let affine = is_affine_subspace(&d);
        if !affine {
            report.affine_condition = false;
        }
        if !(affine && size == half) {
            report.crooked = false;
            if report.witness.is_none() {
                report.witness = Some(CrookedWitness { alpha, size, affine });
            }
        }
    }
    Ok(report)
}
