//! Counting two-colored squares: the orbit invariant that separates
//! partitions arising from different Gold exponents.
//!
//! Fix an odd base subset X and color every unordered pair {x, y} of field
//! elements by the cell of X with x and y flipped: c(x, y) = color of
//! X sym-diff {x, y}. A *two-colored square* is a 4-cycle x-y-z-v in the
//! distance-2 graph whose opposite edges carry equal colors:
//! c(x, y) = c(z, v) and c(y, z) = c(v, x). The count Q of such squares is
//! the same for every base subset in an isometry orbit, and its value table
//! over (m, s) distinguishes inequivalent partitions.
//!
//! The counter groups the ordered pairs by diagonal: for a fixed diagonal
//! {x, z}, each remaining element w gets the key (c(x, w), c(w, z)), and a
//! pair (y, v) closes a square iff key(v) is key(y) swapped. Summing
//! cnt[k] * cnt[swap(k)] over the keys of one diagonal counts ordered
//! (y, v) pairs in O(n) per diagonal after an O(n) scan — O(n^3) overall
//! instead of the O(n^4) of tuple enumeration. Each geometric square is
//! reached through 2 diagonals x 2 orientations, so the grand total is 4Q.
//!
//! Diagonals are independent, so they are strided across worker threads;
//! each worker owns a flat count array indexed by packed key (16 MiB at
//! m = 11) and resets only the keys it touched between diagonals.

use std::thread;

use crate::field::FieldElement;
use crate::gold::GoldParams;
use crate::subsets::SubsetVec;
use crate::{Error, Result};

/// Largest m for which the pairwise color table itself is reasonable
/// (2^(2m) u16 entries: 8 MiB at m = 11).
const MAX_TABLE_M: usize = 11;

/// Colors of all distance-2 flips of a base subset: entry (x, y) holds the
/// cell index of X sym-diff {x, y}. Symmetric; the diagonal holds the color
/// of X itself (never used by the counters, which skip x = y).
pub struct ColorTable {
    n: usize,
    bits: usize,
    base_color: FieldElement,
    colors: Vec<u16>,
}

impl ColorTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Color of X with x and y flipped (x != y), or of X itself on the
    /// diagonal.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> FieldElement {
        self.colors[x * self.n + y] as FieldElement
    }

    pub fn base_color(&self) -> FieldElement {
        self.base_color
    }

    /// How often each color value appears among the C(n, 2) unordered
    /// pairs.
    pub fn histogram(&self) -> Vec<u64> {
        let mut hist = vec![0u64; self.n];
        for x in 0..self.n {
            for y in (x + 1)..self.n {
                hist[self.get(x, y) as usize] += 1;
            }
        }
        hist
    }
}

/// Build the pairwise color table for an odd base subset.
///
/// Flipping {x, y} moves the element sum by x + y and the Gold-power sum by
/// g(x) + g(y), so each entry is a handful of table lookups rather than a
/// fresh pass over X.
pub fn build_color_table(x: &SubsetVec, gp: &GoldParams) -> Result<ColorTable> {
    let n = gp.field_size();
    if gp.m() > MAX_TABLE_M {
        return Err(Error::Budget(format!(
            "pairwise color table has 2^{} entries; supported for m <= {MAX_TABLE_M}",
            2 * gp.m()
        )));
    }
    if x.len() != n {
        return Err(Error::Length { expected: n, got: x.len() });
    }
    if x.parity() != 1 {
        return Err(Error::EvenCardinality);
    }
    let (sum0, gold0) = gp.sums(x);
    let base_color = gp.color(x)?;
    let mut colors = vec![0u16; n * n];
    for a in 0..n as FieldElement {
        colors[(a as usize) * n + a as usize] = base_color as u16;
        for b in (a + 1)..n as FieldElement {
            let s = sum0 ^ a ^ b;
            let p = gold0 ^ gp.gold_map(a) ^ gp.gold_map(b);
            let color = s ^ gp.gold_root(gp.gold_map(s) ^ p);
            colors[(a as usize) * n + b as usize] = color as u16;
            colors[(b as usize) * n + a as usize] = color as u16;
        }
    }
    Ok(ColorTable { n, bits: gp.m(), base_color, colors })
}

fn effective_threads(threads: usize) -> usize {
    if threads == 0 {
        thread::available_parallelism().map(|p| p.get()).unwrap_or(1).min(16)
    } else {
        threads.min(64)
    }
}

/// Count two-colored squares over a prebuilt color table.
///
/// Exact regardless of the thread count: workers sum disjoint diagonal
/// strides of an integer total.
pub fn count_table_squares(table: &ColorTable, threads: usize) -> u64 {
    let n = table.n;
    let bits = table.bits;
    let workers = effective_threads(threads).max(1);
    let colors = &table.colors;

    let total: u64 = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut cnt = vec![0u32; 1 << (2 * bits)];
                    let mut touched: Vec<u32> = Vec::with_capacity(n);
                    let mut acc = 0u64;
                    let mut x = w;
                    while x < n {
                        let row_x = &colors[x * n..(x + 1) * n];
                        for z in (x + 1)..n {
                            let row_z = &colors[z * n..(z + 1) * n];
                            touched.clear();
                            for wv in 0..n {
                                if wv == x || wv == z {
                                    continue;
                                }
                                let key =
                                    (row_x[wv] as u32) << bits | row_z[wv] as u32;
                                if cnt[key as usize] == 0 {
                                    touched.push(key);
                                }
                                cnt[key as usize] += 1;
                            }
                            let mask = (1u32 << bits) - 1;
                            for &key in &touched {
                                let (c1, c2) = (key >> bits, key & mask);
                                // Equal components would mean two distinct
                                // cells share a distance-2 pair; the codes
                                // make that impossible, and the count below
                                // silently relies on it.
                                assert_ne!(c1, c2, "same-color key on diagonal ({x},{z})");
                                let swapped = c2 << bits | c1;
                                acc += cnt[key as usize] as u64 * cnt[swapped as usize] as u64;
                            }
                            for &key in &touched {
                                cnt[key as usize] = 0;
                            }
                        }
                        x += workers;
                    }
                    acc
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).sum()
    });

    assert_eq!(total % 4, 0, "every square is reached 4 times");
    total / 4
}

/// Count the two-colored squares of the partition around a base subset.
///
/// Budget: the O(n^3) scan is immediate through m = 9 and takes on the
/// order of a minute of CPU at m = 11, so m = 11 requires `long_run` and
/// anything larger is refused outright.
pub fn count_two_color_squares(
    x: &SubsetVec,
    gp: &GoldParams,
    threads: usize,
    long_run: bool,
) -> Result<u64> {
    let m = gp.m();
    if m > 11 || (m == 11 && !long_run) {
        return Err(Error::Budget(format!(
            "square counting is cubic in 2^m; m = {m} {}",
            if m == 11 { "requires the long-run flag" } else { "is out of range (max 11)" }
        )));
    }
    let table = build_color_table(x, gp)?;
    Ok(count_table_squares(&table, threads))
}

/// Number of unordered pairs of distinct flip-pairs that received the same
/// color. A closed form exists — each of the 2^m - 1 colors other than the
/// base color decorates exactly 2^(m-1) pairs — and
/// [`expected_same_color_pairs`] is that form; the counter is the census.
pub fn count_same_color_pairs(x: &SubsetVec, gp: &GoldParams) -> Result<u64> {
    if gp.m() > 9 {
        return Err(Error::Budget(format!(
            "pair census walks 2^{} table entries; supported for m <= 9",
            2 * gp.m()
        )));
    }
    let table = build_color_table(x, gp)?;
    Ok(table
        .histogram()
        .iter()
        .map(|&c| c * c.saturating_sub(1) / 2)
        .sum())
}

/// (2^m - 1)(2^(m-1) - 1) 2^(m-2): the pair census in closed form.
pub fn expected_same_color_pairs(m: usize) -> u64 {
    let n = 1u64 << m;
    (n - 1) * (n / 2 - 1) * (n / 4)
}

/// Result of checking the octahedron structure around a base subset: every
/// two-colored square was enumerated, and a violation records a square
/// whose own diagonal pair is monochromatic.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OctahedronReport {
    /// Square visits; each geometric square is seen once per diagonal, so
    /// this equals 2Q.
    pub squares_seen: u64,
    /// Squares (x, y, z, v) with c(x, z) == c(y, v), capped at 8 witnesses.
    pub violations: Vec<[FieldElement; 4]>,
    pub violation_count: u64,
}

/// Enumerate every two-colored square explicitly and check that its two
/// diagonals never share a color (so square + diagonals always span three
/// cells, an octahedron-like configuration). Quartic scan; m <= 7.
pub fn octahedron_check(x: &SubsetVec, gp: &GoldParams) -> Result<OctahedronReport> {
    if gp.m() > 7 {
        return Err(Error::Budget(format!(
            "octahedron enumeration is quartic in 2^m; m = {} exceeds 7",
            gp.m()
        )));
    }
    let table = build_color_table(x, gp)?;
    let n = table.n();
    let mut report = OctahedronReport { squares_seen: 0, violations: Vec::new(), violation_count: 0 };
    for x1 in 0..n {
        for z in (x1 + 1)..n {
            let d_color = table.get(x1, z);
            for y in 0..n {
                if y == x1 || y == z {
                    continue;
                }
                for v in (y + 1)..n {
                    if v == x1 || v == z {
                        continue;
                    }
                    if table.get(x1, y) == table.get(z, v)
                        && table.get(y, z) == table.get(v, x1)
                    {
                        report.squares_seen += 1;
                        if table.get(y, v) == d_color {
                            report.violation_count += 1;
                            if report.violations.len() < 8 {
                                report.violations.push([
                                    x1 as FieldElement,
                                    y as FieldElement,
                                    z as FieldElement,
                                    v as FieldElement,
                                ]);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
