//! Property suites for the two signature constructions: the discrete
//! iterated-sums map (dynamic program against brute force, concatenation
//! identity, warping invariance, moment laws) and the piecewise-linear
//! iterated-integral map (segment-integral oracle, Chen product rule,
//! exp/log inversion, loop characterizations).

use std::sync::Arc;

use dlfm::barcode::{Bar, Barcode};
use dlfm::chen::{
    loop_diagnostics, pwl_signature, tensor_exp, tensor_exp_series, tensor_log, tensor_mul,
    wedge, PWLPath, TensorSeries,
};
use dlfm::features::embed;
use dlfm::isig::{isig, isig_bruteforce, isig_concat_check, isig_with_basis, WordBasis};
use dlfm::rng;
use dlfm::timeseries::{TimeSeries, WarpOp};
use rand::Rng;

fn random_series(r: &mut impl Rng, dim: usize, len: usize) -> TimeSeries {
    let points = (0..len)
        .map(|_| (0..dim).map(|_| r.gen_range(-2.0..2.0)).collect())
        .collect();
    TimeSeries::new(points).expect("generated points are valid")
}

/// Series on the 1/16 grid: degree-3 monomials of differences and the short
/// sums these tests take stay exactly representable, so invariance checks
/// can demand exact equality.
fn random_dyadic_series(r: &mut impl Rng, dim: usize, len: usize) -> TimeSeries {
    let points = (0..len)
        .map(|_| {
            (0..dim)
                .map(|_| f64::from(r.gen_range(-32i32..=32)) / 16.0)
                .collect()
        })
        .collect();
    TimeSeries::new(points).expect("generated points are valid")
}

fn random_path(r: &mut impl Rng, dim: usize, segments: usize) -> PWLPath {
    let segs = (0..segments)
        .map(|_| (0..dim).map(|_| r.gen_range(-2.0..2.0)).collect())
        .collect();
    PWLPath::new(segs).expect("random segments never cancel entirely")
}

fn assert_series_close(a: &TensorSeries, b: &TensorSeries, tol: f64, context: &str) {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    for k in 0..=a.order() {
        for (x, y) in a.level(k).iter().zip(b.level(k)) {
            assert!(
                (x - y).abs() <= tol * scale,
                "{context}: level {k}, {x} vs {y}"
            );
        }
    }
}

#[test]
fn dynamic_programming_matches_bruteforce_enumeration() {
    let mut worst = 0.0f64;
    for case in 0..200 {
        let mut r = rng::stream(801, case);
        let dim = r.gen_range(1..=3);
        let len = r.gen_range(1..=8);
        let weight = r.gen_range(1..=4);
        let x = random_series(&mut r, dim, len);
        let fast = isig(&x, weight).unwrap();
        let slow = isig_bruteforce(&x, weight).unwrap();
        for (a, b) in fast.coefficients().iter().zip(slow.coefficients()) {
            let scale = a.abs().max(b.abs()).max(1.0);
            worst = worst.max((a - b).abs() / scale);
        }
    }
    assert!(worst <= 1e-9, "max relative error {worst}");
}

#[test]
fn concatenation_factorizes_the_signature() {
    for case in 0..100 {
        let mut r = rng::stream(802, case);
        let dim = r.gen_range(1..=3);
        let weight = r.gen_range(1..=3);
        let (n, m) = (r.gen_range(1..=6), r.gen_range(1..=6));
        let x = random_series(&mut r, dim, n);
        let y = random_series(&mut r, dim, m);
        assert!(
            isig_concat_check(&x, &y, weight).unwrap(),
            "case {case}: splitting identity failed"
        );
    }
}

#[test]
fn warping_and_translation_leave_coefficients_unchanged() {
    for case in 0..100 {
        let mut r = rng::stream(803, case);
        let dim = r.gen_range(1..=3);
        let weight = r.gen_range(1..=3);
        let len = r.gen_range(2..=10);
        let x = random_dyadic_series(&mut r, dim, len);
        let basis = Arc::new(WordBasis::new(dim, weight));
        let reference = isig_with_basis(&x, &basis).unwrap();

        let mut warped = x.twr_reduce();
        for _ in 0..3 {
            let at = r.gen_range(0..warped.len());
            warped = warped.apply(WarpOp::Extend { at }).unwrap();
        }
        let offset: Vec<f64> = (0..dim)
            .map(|_| f64::from(r.gen_range(-8i32..=8)) / 4.0)
            .collect();
        let warped = warped.translated(&offset).unwrap();

        let transformed = isig_with_basis(&warped, &basis).unwrap();
        for (a, b) in reference
            .coefficients()
            .iter()
            .zip(transformed.coefficients())
        {
            assert!(a == b, "case {case}: {a} vs {b} after warping");
        }
    }
}

#[test]
fn path_concatenation_multiplies_signatures() {
    for case in 0..100 {
        let mut r = rng::stream(804, case);
        let dim = r.gen_range(2..=3);
        let (n, m) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let first = random_path(&mut r, dim, n);
        let second = random_path(&mut r, dim, m);
        let combined =
            PWLPath::new([first.segments(), second.segments()].concat()).unwrap();
        let product =
            tensor_mul(&pwl_signature(&first, 3), &pwl_signature(&second, 3)).unwrap();
        let direct = pwl_signature(&combined, 3);
        assert_series_close(&direct, &product, 1e-9, &format!("case {case}"));
    }
}

#[test]
fn level_two_matches_exact_segment_integrals() {
    for case in 0..100 {
        let mut r = rng::stream(805, case);
        let dim = r.gen_range(2..=4);
        let segments = r.gen_range(1..=6);
        let path = random_path(&mut r, dim, segments);
        let sig = pwl_signature(&path, 2);
        let segs = path.segments();

        let mut expected = vec![0.0; dim * dim];
        for (s, a) in segs.iter().enumerate() {
            for (t, b) in segs.iter().enumerate() {
                for i in 0..dim {
                    for j in 0..dim {
                        if s < t {
                            expected[i * dim + j] += a[i] * b[j];
                        } else if s == t {
                            expected[i * dim + j] += a[i] * b[j] / 2.0;
                        }
                    }
                }
            }
        }
        let scale = sig.max_abs().max(1.0);
        for (x, y) in sig.level(2).iter().zip(&expected) {
            assert!(
                (x - y).abs() <= 1e-12 * scale,
                "case {case}: {x} vs {y}"
            );
        }
    }
}

#[test]
fn exponential_and_logarithm_invert() {
    for case in 0..100 {
        let mut r = rng::stream(806, case);
        let dim = r.gen_range(1..=4);

        // log after exp on a single segment recovers the segment.
        let a: Vec<f64> = (0..dim).map(|_| r.gen_range(-2.0..2.0)).collect();
        let log = tensor_log(&tensor_exp(&a, 3)).unwrap();
        for (x, y) in log.level(1).iter().zip(&a) {
            assert!((x - y).abs() <= 1e-9, "case {case}: level 1 {x} vs {y}");
        }
        for k in 2..=3 {
            for &v in log.level(k) {
                assert!(v.abs() <= 1e-9, "case {case}: level {k} residue {v}");
            }
        }

        // exp after log reproduces a full path signature.
        let segments = r.gen_range(1..=5);
        let path = random_path(&mut r, dim, segments);
        let sig = pwl_signature(&path, 3);
        let back = tensor_exp_series(&tensor_log(&sig).unwrap()).unwrap();
        assert_series_close(&back, &sig, 1e-9, &format!("case {case}"));
    }
}

#[test]
fn closed_paths_satisfy_all_loop_conditions() {
    for case in 0..100 {
        let mut r = rng::stream(807, case);
        let dim = r.gen_range(2..=3);
        let mut segments: Vec<Vec<f64>> = (0..r.gen_range(2..=5))
            .map(|_| (0..dim).map(|_| r.gen_range(-2.0..2.0)).collect())
            .collect();
        let closing: Vec<f64> = (0..dim)
            .map(|i| -segments.iter().map(|s| s[i]).sum::<f64>())
            .collect();
        segments.push(closing);
        let path = PWLPath::new(segments).unwrap();

        let report = loop_diagnostics(&path, 1e-9);
        assert!(report.is_loop, "case {case}: {report:?}");
        assert!(
            report.conditions.iter().all(|&c| c),
            "case {case}: {report:?}"
        );
        assert!(report.consistent, "case {case}");

        // The order-2 level is exactly half the pairwise wedge sum.
        let sig = pwl_signature(&path, 2);
        let segs = path.segments();
        let mut wedge_sum = vec![0.0; dim * dim];
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                for (w, v) in wedge_sum.iter_mut().zip(wedge(&segs[i], &segs[j])) {
                    *w += v;
                }
            }
        }
        let scale = sig.max_abs().max(1.0);
        for (x, y) in sig.level(2).iter().zip(&wedge_sum) {
            assert!(
                (x - y / 2.0).abs() <= 1e-9 * scale,
                "case {case}: area form {x} vs {}",
                y / 2.0
            );
        }
    }
}

#[test]
fn open_paths_fail_every_loop_condition() {
    for case in 0..100 {
        let mut r = rng::stream(808, case);
        let dim = r.gen_range(2..=3);
        let path = loop {
            let segments = r.gen_range(1..=5);
            let candidate = random_path(&mut r, dim, segments);
            let gap = candidate
                .displacement()
                .iter()
                .fold(0.0f64, |acc, v| acc.max(v.abs()));
            if gap >= 0.1 {
                break candidate;
            }
        };
        let report = loop_diagnostics(&path, 1e-9);
        assert!(!report.is_loop, "case {case}: {report:?}");
        assert!(
            report.conditions.iter().all(|&c| !c),
            "case {case}: the four characterizations must agree, {report:?}"
        );
        assert!(report.consistent, "case {case}");
    }
}

fn disjoint_bar_barcode(r: &mut impl Rng, count: usize) -> Barcode {
    let mut edge = r.gen_range(0.0..0.5);
    let mut bars = Vec::with_capacity(count);
    for _ in 0..count {
        let birth = edge + r.gen_range(0.05..0.5);
        let persistence = r.gen_range(0.1..1.5);
        bars.push(Bar::new(birth, birth + persistence));
        edge = birth + persistence;
    }
    Barcode::new(bars).expect("generated bars are valid")
}

#[test]
fn single_level_moments_depend_only_on_persistence() {
    for case in 0..50 {
        let mut r = rng::stream(809, case);
        let count = r.gen_range(1..=5);
        let b = disjoint_bar_barcode(&mut r, count);
        let series = embed(&b, 1);
        let sig = isig(&series, 5).unwrap();

        for label in ["Z1", "Z1|Z1|Z1", "Z1|Z1|Z1|Z1|Z1"] {
            let value = sig.coefficient_by_label(label).unwrap();
            assert!(
                value.abs() <= 1e-9,
                "case {case}: odd moment {label} = {value}"
            );
        }
        for n in [2u32, 4] {
            let expected: f64 = b
                .bars()
                .iter()
                .map(|bar| bar.persistence().powi(n as i32) / f64::from(2u32.pow(n - 1)))
                .sum();
            let value = sig.coefficient_by_label(&format!("Z1^{n}")).unwrap();
            assert!(
                (value - expected).abs() <= 1e-9 * expected.max(1.0),
                "case {case}: even moment {n}, {value} vs {expected}"
            );
        }
    }
}

#[test]
fn repeated_letter_words_are_elementary_symmetric_polynomials() {
    // Long dyadic series put the dynamic program far beyond brute-force
    // reach; the repeated-letter coefficients must equal the elementary
    // symmetric polynomials of the increments, computed by truncated
    // polynomial expansion. Both sides are exact on this grid.
    for case in 0..20 {
        let mut r = rng::stream(810, case);
        let x = random_dyadic_series(&mut r, 1, 30);
        let deltas: Vec<f64> = x.differences().unwrap().points().iter().map(|p| p[0]).collect();

        let mut poly = [0.0; 5];
        poly[0] = 1.0;
        for &d in &deltas {
            for h in (1..5).rev() {
                poly[h] += d * poly[h - 1];
            }
        }

        let sig = isig(&x, 4).unwrap();
        for (h, expected) in poly.iter().enumerate().skip(1) {
            let label = vec!["Z1"; h].join("|");
            let value = sig.coefficient_by_label(&label).unwrap();
            assert!(
                value == *expected,
                "case {case}: e_{h} is {expected} but the coefficient is {value}"
            );
        }
    }
}
