//! Partitions of the binary hypercube into cosets of extended-Hamming-like
//! codes derived from Gold power maps over GF(2^m), for odd m.
//!
//! The cube {0,1}^n, n = 2^m, is identified with the family of subsets of the
//! field F = GF(2^m). For a Gold exponent sigma + 1 = 2^s + 1 with
//! gcd(s, m) = 1, the odd-cardinality subsets X whose translated power sum
//! `sum over x in X of (x + alpha)^(sigma+1)` vanishes form a perfect-code-like
//! cell; the 2^m cells indexed by alpha partition the odd half of the cube,
//! and every even-cardinality subset is at distance one from the linear code
//! analogue. This crate builds those codes as explicit affine systems over
//! GF(2), computes the cell index ("color") of a subset in closed form,
//! verifies the rank/intersection laws and the isometries that permute the
//! cells, counts the two-colored-square orbit invariant that separates
//! inequivalent partitions, and checks the crooked-permutation condition that
//! characterizes when an arbitrary permutation of F yields such a partition.
//!
//! Module map:
//!
//! * [`field`] — GF(2^m) arithmetic in polynomial basis, modulus discovery.
//! * [`subsets`] — subsets of F as bit vectors, power sums, point maps, hex.
//! * [`gold`] — Gold parameters (m, s), the power map and its inverse, color.
//! * [`codes`] — affine GF(2) systems: builders, rank, solve, min weight.
//! * [`partition`] — partition/covering verification, puncturing, the
//!   coincidence of the s and m-s partitions.
//! * [`symmetry`] — isometries of the cell family and the two-orbit invariant.
//! * [`squares`] — counting two-colored squares (the Q invariant).
//! * [`crooked`] — crookedness checkers for arbitrary permutation tables.

pub mod codes;
pub mod crooked;
pub mod field;
pub mod gold;
pub mod partition;
pub mod squares;
pub mod subsets;
pub mod symmetry;

use std::fmt;

use serde::Serialize;

/// Crate-wide result type.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors shared across the crate.
///
/// Anything that indicates misuse of an API (bad parameters, mismatched
/// lengths, malformed input) lands here; internal invariant violations are
/// `debug_assert`s instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Field degree outside the supported range.
    Degree(usize),
    /// Gold constructions need an odd degree.
    DegreeNotOdd(usize),
    /// Gold exponent s out of range or not coprime with m.
    Exponent { m: usize, s: usize },
    /// Polynomial is not a valid irreducible modulus for degree m.
    Modulus { m: usize, poly: u32 },
    /// Operation requires an odd-cardinality subset.
    EvenCardinality,
    /// Two bit vectors (or a vector and an index space) disagree in length.
    Length { expected: usize, got: usize },
    /// A field element is outside the coordinate range of a subset.
    Element { len: usize, value: u32 },
    /// Multiplicative maps cannot scale by zero.
    ZeroScale,
    /// Difference sets are defined for nonzero directions only.
    ZeroAlpha,
    /// The subset is not a codeword of the linear code it must belong to.
    NotInCode,
    /// An image table does not describe a permutation of F.
    NotAPermutation,
    /// Minimum-weight search over an affine (non-homogeneous) system.
    AffineTargets,
    /// Weight-search limit outside the supported 1..=5 window.
    WeightLimit(usize),
    /// The request exceeds a compute budget and was refused, not attempted.
    Budget(String),
    /// Malformed textual input (hex subsets, permutation files, flags).
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Degree(m) => write!(f, "field degree {m} outside supported range 2..=19"),
            Error::DegreeNotOdd(m) => write!(f, "degree {m} must be odd (and >= 3)"),
            Error::Exponent { m, s } => {
                write!(f, "exponent s = {s} invalid for m = {m}: need 1 <= s < m with gcd(s, m) = 1")
            }
            Error::Modulus { m, poly } => {
                write!(f, "polynomial {poly:#x} is not an irreducible degree-{m} modulus")
            }
            Error::EvenCardinality => write!(f, "subset must have odd cardinality"),
            Error::Length { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::Element { len, value } => {
                write!(f, "element {value} out of range for a length-{len} vector")
            }
            Error::ZeroScale => write!(f, "scaling factor must be nonzero"),
            Error::ZeroAlpha => write!(f, "difference direction must be nonzero"),
            Error::NotInCode => write!(f, "subset is not a codeword of the required linear code"),
            Error::NotAPermutation => write!(f, "image table is not a permutation of the field"),
            Error::AffineTargets => {
                write!(f, "minimum-weight search requires a homogeneous (all-zero target) system")
            }
            Error::WeightLimit(w) => write!(f, "weight limit {w} outside supported 1..=5"),
            Error::Budget(msg) => write!(f, "refusing oversized computation: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Parameter block echoed into every report so a run is reproducible from
/// its output alone.
#[derive(Debug, Clone, Serialize)]
pub struct ParamsEcho {
    pub m: usize,
    pub s: usize,
    pub sigma_plus_1: u64,
    pub modulus_hex: String,
    pub d: u64,
}

/// Outcome of one named verification pass: how many samples ran and a
/// human-readable description of each failure (empty means the check passed).
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub samples: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport { name: name.into(), samples: 0, failures: Vec::new() }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    /// Record a failure, keeping at most a handful of witnesses so reports
    /// stay readable when something is systematically broken.
    pub fn fail(&mut self, witness: String) {
        if self.failures.len() < 8 {
            self.failures.push(witness);
        }
    }
}
