//! Acceptance gate for the crate: twelve numbered criteria, each a test that
//! prints one `criterion NN PASS/FAIL` line (run with `--nocapture` to see
//! the lines on success; cargo shows them automatically on failure).
//!
//! Every expected number in here was frozen from an independent computation
//! (direct field-arithmetic oracles, closed-form counts, or a separate
//! reference implementation) before the library was written, so these tests
//! cannot drift along with the code they check.

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::process::Command;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use goldpart::codes::{
    build_b, build_h, build_h_alpha_beta, build_h_alpha_p, check_theorem_pairs, log2_cardinality,
    min_weight_at_most, rank, AffineCodeSpec,
};
use goldpart::crooked::{check_crooked, PermTable};
use goldpart::field::{FieldElement, Modulus};
use goldpart::gold::{valid_exponents, GoldParams};
use goldpart::partition::{coincidence_check, verify_partition, VerifyMode};
use goldpart::squares::{
    build_color_table, count_same_color_pairs, count_two_color_squares, expected_same_color_pairs,
    octahedron_check,
};
use goldpart::subsets::SubsetVec;
use goldpart::symmetry::{canonical_reps, check_lemmas};

/// Run one criterion body and print its pass/fail line.
fn criterion<F: FnOnce() + UnwindSafe>(number: u32, what: &str, body: F) {
    match catch_unwind(body) {
        Ok(()) => println!("criterion {number:02} PASS — {what}"),
        Err(cause) => {
            println!("criterion {number:02} FAIL — {what}");
            resume_unwind(cause);
        }
    }
}

fn gp(m: usize, s: usize) -> GoldParams {
    GoldParams::new(m, s, None).unwrap()
}

fn subset_from_mask(n: usize, mask: u32) -> SubsetVec {
    let elems: Vec<FieldElement> = (0..n as u32).filter(|i| mask >> i & 1 == 1).collect();
    SubsetVec::from_elements(n, &elems).unwrap()
}

fn random_odd(n: usize, rng: &mut ChaCha8Rng) -> SubsetVec {
    let mut x = SubsetVec::random(n, rng);
    if x.parity() == 0 {
        x.flip(rng.gen_range(0..n));
    }
    x
}

/// Independent membership oracle: sum of (x + alpha)^(sigma+1) over X,
/// one generic exponentiation per element — no table lookups, no closed
/// forms shared with the library code under test.
fn direct_translated_sum(x: &SubsetVec, alpha: FieldElement, gp: &GoldParams) -> FieldElement {
    let md = gp.modulus();
    let mut acc = 0;
    for el in x.iter_ones() {
        acc ^= md.pow(el ^ alpha, gp.sigma_plus_1());
    }
    acc
}

/// Same sum, but through the two power sums of X (valid for odd X):
/// sum (x+a)^(sigma+1) = P + a * S^sigma + a^sigma * S + a^(sigma+1).
fn expanded_translated_sum(
    sum: FieldElement,
    gold_sum: FieldElement,
    a: FieldElement,
    gp: &GoldParams,
) -> FieldElement {
    let md = gp.modulus();
    let s_sigma = md.pow(sum, gp.sigma());
    let a_sigma = md.pow(a, gp.sigma());
    gold_sum ^ md.mul(a, s_sigma) ^ md.mul(a_sigma, sum) ^ gp.gold_map(a)
}

fn brute_member_count(spec: &AffineCodeSpec) -> usize {
    let n = spec.len();
    assert!(n <= 16, "brute enumeration is for tiny systems");
    (0..1u32 << n).filter(|&mask| spec.contains(&subset_from_mask(n, mask))).count()
}

fn q_pair(g: &GoldParams, long_run: bool) -> (u64, u64) {
    let (x0, x1) = canonical_reps(g);
    (
        count_two_color_squares(&x0, g, 0, long_run).unwrap(),
        count_two_color_squares(&x1, g, 0, long_run).unwrap(),
    )
}

#[test]
fn c01_exhaustive_ground_truth_m3() {
    criterion(1, "m=3 exhaustive: partition, membership oracles, enumerated sizes", || {
        let g = gp(3, 1);
        let n = g.field_size();
        let mut rng = ChaCha8Rng::seed_from_u64(11);

        let report = verify_partition(&g, VerifyMode::Exhaustive, &mut rng).unwrap();
        assert!(report.pass, "exhaustive verification failed: {:?}", report.checks);
        assert_eq!(report.cell_log2_size, 4);

        // Every affine system agrees with a direct field-arithmetic oracle
        // on all 256 subsets, and its size matches 2^(n - rank).
        let h = build_h(&g);
        let b = build_b(&g);
        for mask in 0..1u32 << n {
            let x = subset_from_mask(n, mask);
            let xor_sum = x.elements().iter().fold(0, |acc, &e| acc ^ e);
            let gold_sum = direct_translated_sum(&x, 0, &g);
            let even = x.parity() == 0;

            assert_eq!(h.contains(&x), even && xor_sum == 0, "H vs oracle at {x:?}");
            assert_eq!(b.contains(&x), even && xor_sum == 0 && gold_sum == 0, "B vs oracle");
            for alpha in 0..n as FieldElement {
                let vanishes = direct_translated_sum(&x, alpha, &g) == 0;
                assert_eq!(
                    build_h_alpha_p(alpha, true, &g).contains(&x),
                    !even && vanishes,
                    "cell {alpha} vs oracle at {x:?}"
                );
            }
        }

        assert_eq!(brute_member_count(&h), 1 << (n - rank(h.rows())));
        assert_eq!(brute_member_count(&b), 1 << (n - rank(b.rows())));
        assert_eq!(rank(b.rows()), 2 * 3 + 1);

        // B is {empty set, whole field}: the two words fixed by everything.
        assert_eq!(brute_member_count(&b), 2);
        assert!(b.contains(&SubsetVec::new(n)));
        assert!(b.contains(&SubsetVec::full(n)));

        // Cells hold 16 subsets each; the value slices at a fixed translate
        // also hold 16 each and tile the odd half.
        for alpha in 0..n as FieldElement {
            let cell = build_h_alpha_p(alpha, true, &g);
            assert_eq!(brute_member_count(&cell), 16);
            assert_eq!(log2_cardinality(&cell), Some(4));
            let mut sliced = 0;
            for beta in 0..n as FieldElement {
                sliced += brute_member_count(&build_h_alpha_beta(alpha, beta, &g));
            }
            assert_eq!(sliced, 128, "slices at alpha={alpha} must tile the odd half");
        }
    });
}

#[test]
fn c02_rank_laws_across_degrees() {
    criterion(2, "rank laws at 50 sampled pairs for every (m, s), m up to 13", || {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for m in [3usize, 5, 7, 9, 11, 13] {
            for s in valid_exponents(m) {
                let g = gp(m, s);
                for check in check_theorem_pairs(&g, 50, &mut rng) {
                    assert!(
                        check.pass(),
                        "m={m} s={s} {}: {:?}",
                        check.name,
                        check.failures
                    );
                }
            }
        }
    });
}

#[test]
fn c03_intersection_code_minimum_weight() {
    criterion(3, "intersection code: rank 2m+1, no nonzero words of weight <= 5", || {
        for m in [3usize, 5] {
            let g = gp(m, 1);
            let b = build_b(&g);
            assert_eq!(rank(b.rows()), 2 * m + 1);
            assert_eq!(min_weight_at_most(&b, 5).unwrap(), None, "m={m}");
        }
        // Contrast: the plain linear code does have weight-4 words.
        let h = build_h(&gp(5, 1));
        let w = min_weight_at_most(&h, 5).unwrap().expect("extended-Hamming-like word");
        assert_eq!(w.cardinality(), 4);
    });
}

#[test]
#[ignore = "C(128, 4) column enumeration; run with --ignored"]
fn c03_long_minimum_weight_m7() {
    criterion(3, "intersection code at m=7 has no words of weight <= 5 (long)", || {
        let g = gp(7, 1);
        let b = build_b(&g);
        assert_eq!(rank(b.rows()), 15);
        assert_eq!(min_weight_at_most(&b, 5).unwrap(), None);
    });
}

/// Square counts frozen from the reference computation: one row per
/// exponent orbit, both canonical base classes.
const Q_TABLE: &[(usize, usize, u64, u64)] = &[
    (5, 1, 155, 115),
    (5, 2, 0, 120),
    (7, 1, 2667, 1995),
    (7, 2, 2667, 1995),
    (7, 3, 0, 2016),
    (9, 1, 36792, 32184),
    (9, 2, 18396, 32220),
    (9, 4, 0, 32256),
];

const Q_TABLE_M11: &[(usize, usize, u64, u64)] = &[
    (11, 1, 540408, 523512),
    (11, 2, 585442, 523490),
    (11, 3, 607959, 523479),
    (11, 4, 360272, 523600),
    (11, 5, 0, 523776),
];

#[test]
fn c04_square_counts_match_frozen_table() {
    criterion(4, "two-colored-square counts match the frozen table (m = 5, 7, 9)", || {
        for &(m, s, q0, q1) in Q_TABLE {
            let g = gp(m, s);
            assert_eq!(q_pair(&g, false), (q0, q1), "m={m} s={s}");
        }
    });
}

#[test]
#[ignore = "ten cubic counts over 2^11 points; run with --ignored"]
fn c04_long_square_counts_m11() {
    criterion(4, "two-colored-square counts match the frozen table (m = 11, long)", || {
        for &(m, s, q0, q1) in Q_TABLE_M11 {
            let g = gp(m, s);
            assert_eq!(q_pair(&g, true), (q0, q1), "m={m} s={s}");
        }
    });
}

#[test]
fn c05_zero_class_vanishes_iff_middle_exponent() {
    criterion(5, "Q = 0 on the zero class exactly when s = (m-1)/2", || {
        for m in [5usize, 7, 9] {
            for s in valid_exponents(m).into_iter().filter(|&s| s <= (m - 1) / 2) {
                let g = gp(m, s);
                let (x0, _) = canonical_reps(&g);
                let q0 = count_two_color_squares(&x0, &g, 0, false).unwrap();
                assert_eq!(q0 == 0, s == (m - 1) / 2, "m={m} s={s} gave q0={q0}");
            }
        }
    });
}

#[test]
fn c06_pair_census_closed_form() {
    criterion(6, "same-color pair census matches (n-1)(n/2-1)(n/4), histogram flat", || {
        for m in [3usize, 5, 7] {
            let g = gp(m, 1);
            let expected = expected_same_color_pairs(m);
            let (x0, x1) = canonical_reps(&g);
            for x in [&x0, &x1] {
                assert_eq!(count_same_color_pairs(x, &g).unwrap(), expected, "m={m}");
                let table = build_color_table(x, &g).unwrap();
                let hist = table.histogram();
                for (color, &count) in hist.iter().enumerate() {
                    let want = if color as FieldElement == table.base_color() {
                        0 // cells have minimum distance 4; no pair flip stays home
                    } else {
                        1 << (m - 1)
                    };
                    assert_eq!(count, want, "m={m} color={color}");
                }
            }
        }
    });
}

#[test]
fn c07_octahedron_recurrence() {
    criterion(7, "no monochromatic-diagonal squares; each square seen twice", || {
        for m in [3usize, 5, 7] {
            let g = gp(m, 1);
            let (x0, x1) = canonical_reps(&g);
            for x in [&x0, &x1] {
                let report = octahedron_check(x, &g).unwrap();
                assert_eq!(report.violation_count, 0, "m={m}: {:?}", report.violations);
                let q = count_two_color_squares(x, &g, 0, false).unwrap();
                assert_eq!(report.squares_seen, 2 * q, "m={m}");
            }
        }
    });
}

#[test]
fn c08_isometry_lemmas_sampled() {
    criterion(8, "translate/scale/Frobenius/coset-translate lemmas at 200+ samples", || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (m, s) in [(3usize, 1usize), (5, 1), (5, 2), (7, 1), (9, 1)] {
            let g = gp(m, s);
            for check in check_lemmas(&g, 200, &mut rng) {
                assert!(check.samples >= 200, "{} ran only {}", check.name, check.samples);
                assert!(check.pass(), "m={m} s={s} {}: {:?}", check.name, check.failures);
            }
        }
    });
}

#[test]
fn c09_color_formula_consistency() {
    criterion(9, "closed-form color = unique vanishing translate; exponent mirror", || {
        // Exhaustive at m = 3 against the element-by-element oracle.
        let g3 = gp(3, 1);
        for mask in 0..1u32 << 8 {
            let x = subset_from_mask(8, mask);
            if x.parity() == 0 {
                continue;
            }
            let color = g3.color(&x).unwrap();
            for alpha in 0..8 {
                assert_eq!(
                    direct_translated_sum(&x, alpha, &g3) == 0,
                    alpha == color,
                    "mask {mask:#x}"
                );
            }
        }

        // Sampled at the larger degrees: membership through the explicit row
        // system, uniqueness through the expanded power-sum identity.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (m, s) in [(5usize, 2usize), (7, 1), (9, 4), (11, 3), (13, 1)] {
            let g = gp(m, s);
            let n = g.field_size();
            for _ in 0..1000 {
                let x = random_odd(n, &mut rng);
                let color = g.color(&x).unwrap();
                let (sum, gold_sum) = g.sums(&x);
                assert!(
                    build_h_alpha_p(color, true, &g).contains(&x),
                    "m={m}: not in claimed cell"
                );
                assert_eq!(expanded_translated_sum(sum, gold_sum, color, &g), 0);
                if m <= 9 {
                    for alpha in 0..n as FieldElement {
                        if alpha != color {
                            assert_ne!(
                                expanded_translated_sum(sum, gold_sum, alpha, &g),
                                0,
                                "m={m}: second vanishing translate {alpha}"
                            );
                        }
                    }
                } else {
                    for _ in 0..8 {
                        let alpha = rng.gen_range(0..n) as FieldElement;
                        if alpha != color {
                            assert_ne!(expanded_translated_sum(sum, gold_sum, alpha, &g), 0);
                        }
                    }
                }
                // Singletons are their own color.
                let a = rng.gen_range(0..n) as FieldElement;
                assert_eq!(g.color(&SubsetVec::singleton(n, a).unwrap()).unwrap(), a);
            }
        }

        // The exponents s and m - s give the same partition.
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for (m, s, samples) in [(3usize, 1usize, 0usize), (5, 1, 500), (7, 2, 500)] {
            let check = coincidence_check(&gp(m, s), samples.max(128), &mut rng).unwrap();
            assert!(check.pass(), "m={m} s={s}: {:?}", check.failures);
        }
    });
}

#[test]
fn c10_crookedness_classification() {
    criterion(10, "power maps crooked; identity affine-only; random maps neither", || {
        for m in [3usize, 5, 7, 9, 11] {
            for s in valid_exponents(m) {
                let report = check_crooked(&PermTable::gold(&gp(m, s))).unwrap();
                assert!(report.crooked && report.affine_condition, "m={m} s={s}");
                assert_eq!(report.directions_checked, (1 << m) - 1);
            }
        }

        let identity = check_crooked(&PermTable::identity(5).unwrap()).unwrap();
        assert!(identity.affine_condition, "identity difference sets are singletons");
        assert!(!identity.crooked, "singleton difference sets are not half-sized");

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut crooked_hits = 0;
        for _ in 0..100 {
            let mut images: Vec<FieldElement> = (0..32).collect();
            images.shuffle(&mut rng);
            let report = check_crooked(&PermTable::new(images).unwrap()).unwrap();
            if report.crooked {
                crooked_hits += 1;
            }
        }
        assert_eq!(crooked_hits, 0, "random permutations of GF(32) are never crooked");
    });
}

#[test]
fn c11_modulus_independence() {
    criterion(11, "square counts agree across field representations (m = 5)", || {
        // x^5 + x^2 + 1 and x^5 + x^3 + 1 are both irreducible; the counts
        // are isomorphism invariants so they cannot depend on the choice.
        for poly in [0x25u32, 0x29] {
            let md = Modulus::new(5, poly).unwrap();
            let g = GoldParams::new(5, 1, Some(md)).unwrap();
            assert_eq!(q_pair(&g, false), (155, 115), "modulus {poly:#x}");
            let (x0, x1) = canonical_reps(&g);
            assert_eq!(x0.elements(), vec![0]);
            assert_eq!(x1.elements(), vec![0, 1, 2]);
        }
    });
}

#[test]
fn c12_reports_are_deterministic() {
    criterion(12, "byte-identical reports across reruns of the binary", || {
        let bin = env!("CARGO_BIN_EXE_goldpart");
        let verify = ["verify", "--m", "5", "--samples", "50", "--seed", "7", "--json"];
        let run = |args: &[&str]| {
            let out = Command::new(bin).args(args).output().expect("spawn goldpart");
            assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
            out
        };

        let first = run(&verify);
        let second = run(&verify);
        assert_eq!(first.stdout, second.stdout, "verify reports must not drift");
        let parsed: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
        assert_eq!(parsed["pass"], serde_json::Value::Bool(true));
        assert!(parsed["checks"].as_array().is_some_and(|c| !c.is_empty()));
        let text = String::from_utf8(first.stdout).unwrap();
        assert!(!text.contains("runtime_ms"), "timing belongs on stderr");
        assert!(String::from_utf8_lossy(&first.stderr).contains("runtime_ms"));

        let t1 = run(&["table", "--m", "5"]);
        let t2 = run(&["table", "--m", "5"]);
        assert_eq!(t1.stdout, t2.stdout);
        assert_eq!(
            String::from_utf8_lossy(&t1.stdout),
            "n,sigma_plus_1,Q_zero_class,Q_nonzero_class\n32,3,155,115\n32,5,0,120\n"
        );

        // --out writes exactly the canonical bytes.
        let path = std::env::temp_dir().join(format!("goldpart-acc-{}.csv", std::process::id()));
        let path_str = path.to_str().unwrap();
        let t3 = run(&["table", "--m", "5", "--json", "--out", path_str]);
        let written = std::fs::read(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(written, t3.stdout);
    });
}
