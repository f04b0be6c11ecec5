//! The code constructions as explicit affine systems over GF(2), plus the
//! linear algebra to interrogate them: rank, solving, uniform sampling of
//! solution cosets, and bounded minimum-weight search.
//!
//! A system is a list of parity checks on vertices of {0,1}^n: row r and
//! target t constrain a subset X by `|X ∩ r| = t (mod 2)`. Every code in
//! this crate is such a system:
//!
//! * `H_alpha_p` — parity row with target p, plus the m bit-rows of the
//!   translated Gold map x -> g(x + alpha) with target 0. For p = 1 these
//!   are the cells of the partition; for p = 0, linear codes.
//! * `H_alpha_beta` — same rows, parity target 1, map targets set to the
//!   bits of g(beta): the "beta-slice" refinement of a cell.
//! * `H` — parity row plus the m bit-rows of x itself: the even-weight,
//!   zero-element-sum code (an extended Hamming code).
//! * `B` — the rows of `H` and of `H_alpha_p` together (2m + 1 rows): the
//!   intersection, a distance-6 code.
//! * arbitrary permutation tables, for the crooked generalization.

use std::collections::HashMap;

use rand::Rng;

use crate::field::FieldElement;
use crate::gold::GoldParams;
use crate::subsets::SubsetVec;
use crate::{CheckReport, Error, Result};

/// An affine system over GF(2): a subset X satisfies it iff
/// `dot_parity(rows[i], X) == targets[i]` for every i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineCodeSpec {
    len: usize,
    rows: Vec<SubsetVec>,
    targets: Vec<bool>,
    label: String,
}

impl AffineCodeSpec {
    fn new(len: usize, rows: Vec<SubsetVec>, targets: Vec<bool>, label: String) -> Self {
        debug_assert_eq!(rows.len(), targets.len());
        debug_assert!(rows.iter().all(|r| r.len() == len));
        AffineCodeSpec { len, rows, targets, label }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SubsetVec] {
        &self.rows
    }

    pub fn targets(&self) -> &[bool] {
        &self.targets
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Membership test: every row constraint satisfied.
    pub fn contains(&self, x: &SubsetVec) -> bool {
        assert_eq!(x.len(), self.len, "membership needs matching cube dimension");
        self.rows
            .iter()
            .zip(&self.targets)
            .all(|(row, &t)| x.dot_parity(row) == t as u8)
    }

    /// Concatenate the constraints of two systems over the same cube.
    pub fn stacked(&self, other: &AffineCodeSpec) -> Result<AffineCodeSpec> {
        if self.len != other.len {
            return Err(Error::Length { expected: self.len, got: other.len });
        }
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        let mut targets = self.targets.clone();
        targets.extend_from_slice(&other.targets);
        Ok(AffineCodeSpec::new(
            self.len,
            rows,
            targets,
            format!("{} + {}", self.label, other.label),
        ))
    }

    /// Rows and targets in the export format: one `<hex> <bit>` line per row.
    pub fn render_rows(&self) -> String {
        let mut out = String::new();
        for (row, &t) in self.rows.iter().zip(&self.targets) {
            out.push_str(&row.to_hex());
            out.push(' ');
            out.push(if t { '1' } else { '0' });
            out.push('\n');
        }
        out
    }
}

/// The m bit-rows of x -> f(x): row j contains x iff bit j of f(x) is set.
fn map_bit_rows(n: usize, m: usize, f: impl Fn(FieldElement) -> FieldElement) -> Vec<SubsetVec> {
    let mut rows = vec![SubsetVec::new(n); m];
    for x in 0..n as FieldElement {
        let v = f(x);
        for (j, row) in rows.iter_mut().enumerate() {
            if v >> j & 1 == 1 {
                row.set(x as usize, true);
            }
        }
    }
    rows
}

/// The cell system at translate `alpha`: parity target `odd_parity`, and the
/// m rows of x -> g(x + alpha) with target 0. With `odd_parity = true` this
/// is one cell of the partition of the odd half of the cube.
pub fn build_h_alpha_p(alpha: FieldElement, odd_parity: bool, gp: &GoldParams) -> AffineCodeSpec {
    let n = gp.field_size();
    let m = gp.m();
    let mut rows = vec![SubsetVec::full(n)];
    rows.extend(map_bit_rows(n, m, |x| gp.gold_map(x ^ alpha)));
    let mut targets = vec![false; m + 1];
    targets[0] = odd_parity;
    AffineCodeSpec::new(n, rows, targets, format!("H_alpha_p(alpha={alpha},p={})", odd_parity as u8))
}

/// The beta-slice of the cell at `alpha`: odd parity, and the translated
/// Gold sum pinned to g(beta) instead of 0.
pub fn build_h_alpha_beta(alpha: FieldElement, beta: FieldElement, gp: &GoldParams) -> AffineCodeSpec {
    let n = gp.field_size();
    let m = gp.m();
    let mut rows = vec![SubsetVec::full(n)];
    rows.extend(map_bit_rows(n, m, |x| gp.gold_map(x ^ alpha)));
    let g_beta = gp.gold_map(beta);
    let mut targets = vec![true];
    targets.extend((0..m).map(|j| g_beta >> j & 1 == 1));
    AffineCodeSpec::new(n, rows, targets, format!("H_alpha_beta(alpha={alpha},beta={beta})"))
}

/// The even-weight, zero-element-sum linear code (an extended Hamming code):
/// parity row plus the m bit-rows of the identity map, all targets 0.
pub fn build_h(gp: &GoldParams) -> AffineCodeSpec {
    let n = gp.field_size();
    let mut rows = vec![SubsetVec::full(n)];
    rows.extend(map_bit_rows(n, gp.m(), |x| x));
    AffineCodeSpec::new(n, rows, vec![false; gp.m() + 1], "H".into())
}

/// The intersection code: even weight, zero element sum, zero Gold-power
/// sum — 2m + 1 rows, all targets 0.
pub fn build_b(gp: &GoldParams) -> AffineCodeSpec {
    let n = gp.field_size();
    let m = gp.m();
    let mut rows = vec![SubsetVec::full(n)];
    rows.extend(map_bit_rows(n, m, |x| x));
    rows.extend(map_bit_rows(n, m, |x| gp.gold_map(x)));
    AffineCodeSpec::new(n, rows, vec![false; 2 * m + 1], "B".into())
}

/// The cell-style system for an arbitrary permutation table: parity target
/// `odd_parity` plus the bit-rows of x -> images[x + alpha] with target 0.
/// `images` must be a permutation of 0..n for a power-of-two n.
pub fn build_from_table(
    images: &[FieldElement],
    alpha: FieldElement,
    odd_parity: bool,
) -> Result<AffineCodeSpec> {
    let n = images.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::Parse(format!("table length {n} is not a power of two")));
    }
    let m = n.trailing_zeros() as usize;
    if (alpha as usize) >= n {
        return Err(Error::Element { len: n, value: alpha });
    }
    let mut seen = vec![false; n];
    for &y in images {
        if (y as usize) >= n || seen[y as usize] {
            return Err(Error::NotAPermutation);
        }
        seen[y as usize] = true;
    }
    let mut rows = vec![SubsetVec::full(n)];
    rows.extend(map_bit_rows(n, m, |x| images[(x ^ alpha) as usize]));
    let mut targets = vec![false; m + 1];
    targets[0] = odd_parity;
    Ok(AffineCodeSpec::new(n, rows, targets, format!("table(alpha={alpha},p={})", odd_parity as u8)))
}

/// Row rank over GF(2).
pub fn rank(rows: &[SubsetVec]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let spec = AffineCodeSpec::new(
        rows[0].len(),
        rows.to_vec(),
        vec![false; rows.len()],
        String::new(),
    );
    EchelonSystem::reduce(&spec).rank()
}

/// Outcome of solving an affine system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// The constraints are contradictory; the solution set is empty.
    Infeasible,
    /// Nonempty solution set: one solution plus the dimension of the
    /// homogeneous kernel (so there are 2^nullity solutions).
    Solutions { particular: SubsetVec, nullity: usize },
}

/// Solve the system by Gaussian elimination.
pub fn solve(spec: &AffineCodeSpec) -> SolveOutcome {
    let ech = EchelonSystem::reduce(spec);
    match ech.particular() {
        None => SolveOutcome::Infeasible,
        Some(particular) => SolveOutcome::Solutions { particular, nullity: ech.nullity() },
    }
}

/// log2 of the number of solutions, or None if infeasible.
pub fn log2_cardinality(spec: &AffineCodeSpec) -> Option<usize> {
    let ech = EchelonSystem::reduce(spec);
    ech.feasible().then(|| ech.nullity())
}

/// A system brought to reduced row echelon form: each remaining row owns one
/// pivot column and no row touches another row's pivot. This is the engine
/// behind rank, feasibility, enumeration and uniform sampling.
#[derive(Debug, Clone)]
pub struct EchelonSystem {
    len: usize,
    pivots: Vec<usize>,
    rows: Vec<SubsetVec>,
    targets: Vec<bool>,
    feasible: bool,
}

impl EchelonSystem {
    /// Gauss-Jordan elimination over GF(2). Zero rows with target 1 mark the
    /// system infeasible; zero rows with target 0 are dropped.
    pub fn reduce(spec: &AffineCodeSpec) -> Self {
        let len = spec.len();
        let mut rows = spec.rows().to_vec();
        let mut targets = spec.targets().to_vec();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..len {
            if r == rows.len() {
                break;
            }
            let Some(found) = (r..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(r, found);
            targets.swap(r, found);
            let pivot_row = rows[r].clone();
            let pivot_target = targets[r];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(col) {
                    row.xor_with(&pivot_row);
                    targets[i] ^= pivot_target;
                }
            }
            pivots.push(col);
            r += 1;
        }
        // Rows beyond the last pivot are all-zero; a set target there is a
        // contradiction 0 = 1.
        debug_assert!(rows[r..].iter().all(|row| row.is_empty()));
        let feasible = targets[r..].iter().all(|&t| !t);
        rows.truncate(r);
        targets.truncate(r);
        EchelonSystem { len, pivots, rows, targets, feasible }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Dimension of the homogeneous solution space.
    pub fn nullity(&self) -> usize {
        self.len - self.rank()
    }

    pub fn feasible(&self) -> bool {
        self.feasible
    }

    /// One solution: free coordinates zero, pivot coordinates forced. None
    /// if the system is contradictory.
    pub fn particular(&self) -> Option<SubsetVec> {
        if !self.feasible {
            return None;
        }
        let mut x = SubsetVec::new(self.len);
        for (i, &p) in self.pivots.iter().enumerate() {
            x.set(p, self.targets[i]);
        }
        Some(x)
    }

    /// A uniform sample from the solution set: free coordinates uniform,
    /// pivot coordinates forced by their rows. None if infeasible.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<SubsetVec> {
        if !self.feasible {
            return None;
        }
        let mut x = SubsetVec::random(self.len, rng);
        // In reduced form, row i contains its own pivot and free columns
        // only, so once the pivot bit is cleared the row's dot product
        // depends on free coordinates alone.
        for (i, &p) in self.pivots.iter().enumerate() {
            x.set(p, false);
            let forced = x.dot_parity(&self.rows[i]) != 0;
            x.set(p, forced != self.targets[i]);
        }
        Some(x)
    }
}

/// Smallest-weight nonzero codeword of a homogeneous system, if its weight
/// is at most `limit` (supported: 1..=5). Returns the witness subset, or
/// None when the minimum distance exceeds the limit.
///
/// Strategy: pack each coordinate's syndrome column into a u64, enumerate
/// supports of size w - 1 in lexicographic order, and close each with a
/// hash lookup for a later column matching the accumulated syndrome. That
/// turns the weight-w search from C(n, w) into C(n, w-1) probes.
pub fn min_weight_at_most(spec: &AffineCodeSpec, limit: usize) -> Result<Option<SubsetVec>> {
    if !(1..=5).contains(&limit) {
        return Err(Error::WeightLimit(limit));
    }
    if spec.targets().iter().any(|&t| t) {
        return Err(Error::AffineTargets);
    }
    let k = spec.rows().len();
    assert!(k <= 64, "syndrome columns must fit in u64");
    let n = spec.len();
    let cols: Vec<u64> = (0..n)
        .map(|j| {
            spec.rows()
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, row)| acc | (u64::from(row.get(j)) << i))
        })
        .collect();
    let mut by_val: HashMap<u64, Vec<u32>> = HashMap::new();
    for (j, &c) in cols.iter().enumerate() {
        by_val.entry(c).or_default().push(j as u32);
    }

    fn close(
        by_val: &HashMap<u64, Vec<u32>>,
        syndrome: u64,
        min_index: usize,
        picked: &mut Vec<u32>,
    ) -> bool {
        if let Some(cands) = by_val.get(&syndrome) {
            // Indices were inserted in increasing order.
            let at = cands.partition_point(|&j| (j as usize) < min_index);
            if at < cands.len() {
                picked.push(cands[at]);
                return true;
            }
        }
        false
    }

    fn search(
        cols: &[u64],
        by_val: &HashMap<u64, Vec<u32>>,
        picked: &mut Vec<u32>,
        start: usize,
        syndrome: u64,
        remaining: usize,
    ) -> bool {
        if remaining == 0 {
            return close(by_val, syndrome, start, picked);
        }
        for j in start..cols.len() {
            picked.push(j as u32);
            if search(cols, by_val, picked, j + 1, syndrome ^ cols[j], remaining - 1) {
                return true;
            }
            picked.pop();
        }
        false
    }

    for w in 1..=limit {
        let mut picked = Vec::with_capacity(w);
        if search(&cols, &by_val, &mut picked, 0, 0, w - 1) {
            let elems: Vec<FieldElement> = picked.iter().map(|&j| j).collect();
            let witness = SubsetVec::from_elements(n, &elems)?;
            debug_assert!(spec.contains(&witness));
            debug_assert_eq!(witness.cardinality(), w);
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// Sampled verification of the rank laws, for any supported degree:
///
/// * each translate's system has full rank m + 1, so every cell has
///   2^(2^m - m - 1) members;
/// * stacking the linear systems of two distinct translates gives rank 2m
///   (the parity rows coincide, everything else is independent) and stays
///   feasible;
/// * stacking two distinct odd cells is infeasible — the partition's
///   disjointness, seen through the solver;
/// * the intersection code B has full rank 2m + 1.
pub fn check_theorem_pairs<R: Rng + ?Sized>(
    gp: &GoldParams,
    pairs: usize,
    rng: &mut R,
) -> Vec<CheckReport> {
    let n = gp.field_size();
    let m = gp.m();
    let mut cell_rank = CheckReport::new("cell-systems-have-rank-m-plus-1");
    let mut linear_pairs = CheckReport::new("stacked-linear-translates-have-rank-2m");
    let mut odd_pairs = CheckReport::new("distinct-odd-cells-are-disjoint");
    let mut b_rank = CheckReport::new("intersection-code-has-rank-2m-plus-1");

    b_rank.samples = 1;
    let r = rank(build_b(gp).rows());
    if r != 2 * m + 1 {
        b_rank.fail(format!("rank(B) = {r}, expected {}", 2 * m + 1));
    }

    for _ in 0..pairs {
        let alpha = rng.gen_range(0..n) as FieldElement;
        let beta = loop {
            let b = rng.gen_range(0..n) as FieldElement;
            if b != alpha {
                break b;
            }
        };

        cell_rank.samples += 1;
        let cell = build_h_alpha_p(alpha, true, gp);
        match log2_cardinality(&cell) {
            Some(lc) if lc == n - m - 1 => {}
            other => cell_rank.fail(format!("cell {alpha}: log2 size {other:?}")),
        }

        linear_pairs.samples += 1;
        let stacked0 = build_h_alpha_p(alpha, false, gp)
            .stacked(&build_h_alpha_p(beta, false, gp))
            .unwrap();
        let ech = EchelonSystem::reduce(&stacked0);
        if ech.rank() != 2 * m || !ech.feasible() {
            linear_pairs.fail(format!(
                "({alpha},{beta}): rank {} feasible {}",
                ech.rank(),
                ech.feasible()
            ));
        }

        odd_pairs.samples += 1;
        let stacked1 = build_h_alpha_p(alpha, true, gp)
            .stacked(&build_h_alpha_p(beta, true, gp))
            .unwrap();
        if solve(&stacked1) != SolveOutcome::Infeasible {
            odd_pairs.fail(format!("cells {alpha} and {beta} intersect"));
        }
    }
    vec![cell_rank, linear_pairs, odd_pairs, b_rank]
}
