//! End-to-end verification that the cells really partition the odd half of
//! the cube, the distance-1 relation to the linear code, puncturing down to
//! perfect-code cosets, and the coincidence of the s and m-s partitions.

use rand::Rng;
use serde::Serialize;

use crate::codes::{build_h, build_h_alpha_p, log2_cardinality};
use crate::field::FieldElement;
use crate::gold::GoldParams;
use crate::subsets::SubsetVec;
use crate::{CheckReport, Error, ParamsEcho, Result};

/// How much of the cube a verification pass touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every subset of F. Only sane for m = 3 (2^8 vertices); larger m is
    /// refused rather than attempted.
    Exhaustive,
    /// This many uniformly random odd subsets.
    Sampled(usize),
}

/// Outcome of [`verify_partition`]: named checks with failure witnesses.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub params: ParamsEcho,
    pub mode: String,
    pub samples: usize,
    /// log2 of every cell's size: 2^m - m - 1.
    pub cell_log2_size: usize,
    pub checks: Vec<CheckReport>,
    pub pass: bool,
}

impl PartitionReport {
    fn seal(mut self) -> Self {
        self.pass = self.checks.iter().all(CheckReport::pass);
        self
    }
}

/// Membership of an odd subset in the cell at `alpha`, evaluated by
/// expanding the defining power sum through the subset's (S, P) sums:
/// `sum (x + alpha)^(sigma+1) = P + alpha S^sigma + alpha^sigma S +
/// alpha^(sigma+1)` for odd |X|. O(1) given the sums, which makes sweeping
/// all alpha cheap. This is a third, independent route to membership next
/// to row dot products and the closed-form color.
fn cell_sum(sum: FieldElement, gold_sum: FieldElement, alpha: FieldElement, gp: &GoldParams) -> FieldElement {
    let md = gp.modulus();
    let s_sigma = md.pow(sum, gp.sigma());
    let a_sigma = md.pow(alpha, gp.sigma());
    gold_sum ^ md.mul(alpha, s_sigma) ^ md.mul(a_sigma, sum) ^ gp.gold_map(alpha)
}

/// Verify the partition structure for one parameter set.
///
/// Checks, in both modes (exhaustively over all subsets, or over random odd
/// subsets):
///
/// * the color of an odd subset names the one cell containing it, and no
///   other cell does;
/// * flipping the element sum S of an odd subset lands in the linear code
///   (distance 1), and no other single flip does;
/// * cell sizes are 2^(2^m - m - 1).
///
/// Exhaustive mode additionally punctures the m = 3 cells to the 7-cube and
/// checks they are perfect single-error-correcting cosets there.
pub fn verify_partition<R: Rng + ?Sized>(
    gp: &GoldParams,
    mode: VerifyMode,
    rng: &mut R,
) -> Result<PartitionReport> {
    let n = gp.field_size();
    let report = PartitionReport {
        params: gp.echo(),
        mode: match mode {
            VerifyMode::Exhaustive => "exhaustive".into(),
            VerifyMode::Sampled(_) => "sampled".into(),
        },
        samples: 0,
        cell_log2_size: n - gp.m() - 1,
        checks: Vec::new(),
        pass: false,
    };
    match mode {
        VerifyMode::Exhaustive => {
            if gp.m() != 3 {
                return Err(Error::Budget(format!(
                    "exhaustive verification scans 2^{n} subsets; supported for m = 3 only"
                )));
            }
            Ok(verify_exhaustive_m3(gp, report).seal())
        }
        VerifyMode::Sampled(samples) => Ok(verify_sampled(gp, samples, rng, report)?.seal()),
    }
}

fn verify_exhaustive_m3(gp: &GoldParams, mut report: PartitionReport) -> PartitionReport {
    let n = gp.field_size();
    let h = build_h(gp);
    let cells: Vec<_> = (0..n as FieldElement)
        .map(|alpha| build_h_alpha_p(alpha, true, gp))
        .collect();

    let mut tiling = CheckReport::new("odd-subsets-tile-into-color-cells");
    let mut nearest = CheckReport::new("unique-distance-1-codeword");
    let mut sizes = CheckReport::new("cell-sizes");
    let mut cell_counts = vec![0u32; n];
    let mut punctured: Vec<Vec<SubsetVec>> = vec![Vec::new(); n];

    for mask in 0..1u32 << n {
        let elems: Vec<FieldElement> = (0..n as u32).filter(|i| mask >> i & 1 == 1).collect();
        let x = SubsetVec::from_elements(n, &elems).unwrap();
        if x.parity() == 0 {
            continue;
        }
        report.samples += 1;
        tiling.samples += 1;
        nearest.samples += 1;
        let color = gp.color(&x).unwrap();
        for (alpha, cell) in cells.iter().enumerate() {
            let inside = cell.contains(&x);
            if inside != (alpha as FieldElement == color) {
                tiling.fail(format!("X={x:?} alpha={alpha} inside={inside} color={color}"));
            }
        }
        cell_counts[color as usize] += 1;
        punctured[color as usize].push(puncture(&x).unwrap());

        // Exactly one single flip reaches the linear code, at index S.
        let (sum, _) = gp.sums(&x);
        let mut hits = Vec::new();
        for i in 0..n {
            let mut y = x.clone();
            y.flip(i);
            if h.contains(&y) {
                hits.push(i);
            }
        }
        if hits != vec![sum as usize] {
            nearest.fail(format!("X={x:?} flips into H at {hits:?}, expected [{sum}]"));
        }
    }
    report.samples *= 2; // odd subsets each tested against every cell and flip

    sizes.samples = n;
    for (alpha, &count) in cell_counts.iter().enumerate() {
        if count != 1 << report.cell_log2_size {
            sizes.fail(format!("cell {alpha} holds {count} subsets"));
        }
        if log2_cardinality(&cells[alpha]) != Some(report.cell_log2_size) {
            sizes.fail(format!("cell {alpha} rank disagrees with enumeration"));
        }
    }

    // Punctured cells: dropping coordinate 0 maps the odd half bijectively
    // onto the full 7-cube, and each cell becomes a coset of a perfect
    // single-error-correcting code: 16 words, pairwise distance >= 3,
    // minimum exactly 3, tiling all 128 words.
    let mut perfect = CheckReport::new("punctured-cells-are-perfect-code-cosets");
    perfect.samples = n;
    let mut total = 0usize;
    for (alpha, words) in punctured.iter().enumerate() {
        total += words.len();
        let mut min_d = usize::MAX;
        for (i, a) in words.iter().enumerate() {
            for b in words.iter().skip(i + 1) {
                min_d = min_d.min(a.distance(b));
            }
        }
        if min_d != 3 {
            perfect.fail(format!("cell {alpha}: punctured minimum distance {min_d}, expected 3"));
        }
    }
    let distinct: std::collections::HashSet<String> = punctured
        .iter()
        .flatten()
        .map(SubsetVec::to_hex)
        .collect();
    if total != 1 << (n - 1) || distinct.len() != total {
        perfect.fail(format!("punctured words: {total} total, {} distinct", distinct.len()));
    }

    report.checks.extend([tiling, nearest, sizes, perfect]);
    report
}

fn verify_sampled<R: Rng + ?Sized>(
    gp: &GoldParams,
    samples: usize,
    rng: &mut R,
    mut report: PartitionReport,
) -> Result<PartitionReport> {
    let n = gp.field_size();
    let h = build_h(gp);
    let mut tiling = CheckReport::new("odd-subsets-tile-into-color-cells");
    let mut nearest = CheckReport::new("unique-distance-1-codeword");
    let mut sizes = CheckReport::new("cell-sizes");

    for _ in 0..samples {
        report.samples += 1;
        tiling.samples += 1;
        nearest.samples += 1;
        let mut x = SubsetVec::random(n, rng);
        if x.parity() == 0 {
            x.flip(rng.gen_range(0..n));
        }
        let color = gp.color(&x)?;
        let (sum, gold_sum) = gp.sums(&x);

        // The color cell, via the explicit row system.
        if !build_h_alpha_p(color, true, gp).contains(&x) {
            tiling.fail(format!("sample not in its color cell {color}"));
        }
        // No other cell, via the expanded power sum at 8 random alphas.
        for _ in 0..8 {
            let alpha = rng.gen_range(0..n) as FieldElement;
            if alpha != color && cell_sum(sum, gold_sum, alpha, gp) == 0 {
                tiling.fail(format!("sample also vanishes at alpha={alpha}, color={color}"));
            }
        }

        // Distance 1 to the linear code: flip S lands inside, a random
        // other flip does not.
        let mut y = x.clone();
        y.flip(sum as usize);
        if !h.contains(&y) {
            nearest.fail(format!("flip of element sum {sum} not in the linear code"));
        }
        let other = (sum as usize + rng.gen_range(1..n)) % n;
        let mut z = x.clone();
        z.flip(other);
        if h.contains(&z) {
            nearest.fail(format!("flip at {other} also lands in the linear code"));
        }
    }

    // Spot-check cell sizes through the rank route.
    sizes.samples = 4;
    for _ in 0..4 {
        let alpha = rng.gen_range(0..n) as FieldElement;
        if log2_cardinality(&build_h_alpha_p(alpha, true, gp)) != Some(report.cell_log2_size) {
            sizes.fail(format!("cell {alpha} size differs from 2^{}", report.cell_log2_size));
        }
    }

    report.checks.extend([tiling, nearest, sizes]);
    Ok(report)
}

/// Drop coordinate 0: the image of X under restriction to F \ {0}. On odd
/// subsets this is a bijection onto the full (2^m - 1)-cube, because the
/// dropped bit is recoverable from the parity constraint.
pub fn puncture(x: &SubsetVec) -> Result<SubsetVec> {
    if x.len() < 2 {
        return Err(Error::Length { expected: 2, got: x.len() });
    }
    let mut out = SubsetVec::new(x.len() - 1);
    for el in x.iter_ones() {
        if el > 0 {
            out.set(el as usize - 1, true);
        }
    }
    Ok(out)
}

/// Inverse of [`puncture`] onto the odd half: re-insert coordinate 0 with
/// the value that makes the total cardinality odd.
pub fn unpuncture(w: &SubsetVec) -> SubsetVec {
    let mut out = SubsetVec::new(w.len() + 1);
    for el in w.iter_ones() {
        out.set(el as usize + 1, true);
    }
    out.set(0, w.parity() == 0);
    out
}

/// Check that the exponents s and m - s induce the same partition: equal
/// colors on odd subsets, and equal cell membership verdicts through the
/// explicit row systems. (x^(2^s + 1) and x^(2^(m-s) + 1) are linked by the
/// Frobenius x -> x^(2^s), which fixes every power sum's vanishing.)
pub fn coincidence_check<R: Rng + ?Sized>(
    gp: &GoldParams,
    samples: usize,
    rng: &mut R,
) -> Result<CheckReport> {
    let m = gp.m();
    let mirror = GoldParams::new(m, m - gp.s(), Some(*gp.modulus()))?;
    let mut check = CheckReport::new(format!("partition-coincides-with-mirror-exponent(s={},mirror={})", gp.s(), m - gp.s()));
    let n = gp.field_size();

    if m == 3 {
        // Exhaustive at the toy size.
        for mask in 0..1u32 << n {
            let elems: Vec<FieldElement> = (0..n as u32).filter(|i| mask >> i & 1 == 1).collect();
            let x = SubsetVec::from_elements(n, &elems).unwrap();
            if x.parity() == 0 {
                continue;
            }
            check.samples += 1;
            let (c1, c2) = (gp.color(&x)?, mirror.color(&x)?);
            if c1 != c2 {
                check.fail(format!("colors differ on {x:?}: {c1} vs {c2}"));
            }
        }
        return Ok(check);
    }

    for _ in 0..samples {
        check.samples += 1;
        let mut x = SubsetVec::random(n, rng);
        if x.parity() == 0 {
            x.flip(rng.gen_range(0..n));
        }
        let (c1, c2) = (gp.color(&x)?, mirror.color(&x)?);
        if c1 != c2 {
            check.fail(format!("colors differ: {c1} vs {c2}"));
        }
        // Row-system membership agrees at a random translate, on the odd
        // sample and on an even neighbor.
        let alpha = rng.gen_range(0..n) as FieldElement;
        let odd_a = build_h_alpha_p(alpha, true, gp).contains(&x);
        let odd_b = build_h_alpha_p(alpha, true, &mirror).contains(&x);
        if odd_a != odd_b {
            check.fail(format!("odd cell membership differs at alpha={alpha}"));
        }
        let mut even = x.clone();
        even.flip(rng.gen_range(0..n));
        let even_a = build_h_alpha_p(alpha, false, gp).contains(&even);
        let even_b = build_h_alpha_p(alpha, false, &mirror).contains(&even);
        if even_a != even_b {
            check.fail(format!("linear cell membership differs at alpha={alpha}"));
        }
    }
    Ok(check)
}
