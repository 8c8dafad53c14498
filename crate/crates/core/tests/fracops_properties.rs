mod common;

use cfgm::fracops::{cfa, cfd, foa, foa_coefficients, fod};
use common::{cfa_recursive, cfd_direct, max_abs, wu_direct, WORKED_EXAMPLE};
use proptest::prelude::*;

fn positive_series() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..1000.0, 1..=20)
}

fn conformable_order() -> impl Strategy<Value = f64> {
    (0usize..=200).prop_map(|i| i as f64 / 100.0)
}

fn wu_order() -> impl Strategy<Value = f64> {
    (0usize..=400).prop_map(|i| (i as f64 - 200.0) / 100.0)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

proptest! {
    #[test]
    fn cfd_inverts_cfa(x in positive_series(), alpha in conformable_order()) {
        let back = cfd(&cfa(&x, alpha).unwrap(), alpha).unwrap();
        prop_assert!(max_diff(&back, &x) <= 1e-9 * max_abs(&x));
    }

    #[test]
    fn fod_inverts_foa(x in positive_series(), alpha in wu_order()) {
        let back = fod(&foa(&x, alpha).unwrap(), alpha).unwrap();
        prop_assert!(max_diff(&back, &x) <= 1e-9 * max_abs(&x));
    }

    #[test]
    fn cfa_matches_order_reduction(x in positive_series(), alpha in conformable_order()) {
        let got = cfa(&x, alpha).unwrap();
        let want = cfa_recursive(&x, alpha);
        prop_assert!(max_diff(&got, &want) <= 1e-12 * max_abs(&want));
    }

    #[test]
    fn cfd_matches_explicit_differences(x in positive_series(), alpha in conformable_order()) {
        let got = cfd(&x, alpha).unwrap();
        let want = cfd_direct(&x, alpha);
        prop_assert!(max_diff(&got, &want) <= 1e-12 * max_abs(&x) * 4.0 * (x.len() as f64).powi(2));
    }

    #[test]
    fn wu_matches_product_binomials(x in positive_series(), alpha in wu_order()) {
        let got = foa(&x, alpha).unwrap();
        let want = wu_direct(&x, alpha);
        prop_assert!(max_diff(&got, &want) <= 1e-12 * max_abs(&want).max(1.0));
        let got = fod(&x, alpha).unwrap();
        let want = wu_direct(&x, -alpha);
        prop_assert!(max_diff(&got, &want) <= 1e-12 * max_abs(&want).max(max_abs(&x)));
    }

    #[test]
    fn operators_are_linear(
        pair in (1usize..=20).prop_flat_map(|n| (
            prop::collection::vec(-100.0f64..100.0, n),
            prop::collection::vec(-100.0f64..100.0, n),
        )),
        c1 in -5.0f64..5.0,
        c2 in -5.0f64..5.0,
        alpha in conformable_order(),
        wu_alpha in wu_order(),
    ) {
        let (x, y) = pair;
        let mix: Vec<f64> = x.iter().zip(&y).map(|(a, b)| c1 * a + c2 * b).collect();
        type Op = fn(&[f64], f64) -> cfgm::Result<Vec<f64>>;
        let ops: [(Op, f64); 4] = [(cfa, alpha), (cfd, alpha), (foa, wu_alpha), (fod, wu_alpha)];
        for (op, order) in ops {
            let lhs = op(&mix, order).unwrap();
            let ox = op(&x, order).unwrap();
            let oy = op(&y, order).unwrap();
            let rhs: Vec<f64> = ox.iter().zip(&oy).map(|(a, b)| c1 * a + c2 * b).collect();
            let scale: f64 = ox.iter().zip(&oy).map(|(a, b)| (c1 * a).abs() + (c2 * b).abs()).fold(0.0, f64::max);
            prop_assert!(max_diff(&lhs, &rhs) <= 1e-12 * scale.max(1.0));
        }
    }

    // with max/min ≤ 2 the jump at integer orders cannot reverse the growth
    #[test]
    fn cfa_grows_with_order(x in prop::collection::vec(1.0f64..2.0, 2..=20)) {
        let grid: Vec<Vec<f64>> = (10..=200).map(|i| cfa(&x, i as f64 / 100.0).unwrap()).collect();
        for w in grid.windows(2) {
            for (hi, lo) in w[1].iter().zip(&w[0]).skip(1) {
                prop_assert!(hi >= lo);
            }
        }
    }
}

#[test]
fn integer_orders_degenerate_exactly() {
    let x = [3.0, 1.5, 4.25, 7.0, 2.5, 9.75];
    let cumsum: Vec<f64> = x
        .iter()
        .scan(0.0, |s, v| {
            *s += v;
            Some(*s)
        })
        .collect();
    let double: Vec<f64> = cumsum
        .iter()
        .scan(0.0, |s, v| {
            *s += v;
            Some(*s)
        })
        .collect();
    assert_eq!(cfa(&x, 1.0).unwrap(), cumsum);
    assert_eq!(foa(&x, 1.0).unwrap(), cumsum);
    assert_eq!(cfa(&x, 2.0).unwrap(), double);
    assert_eq!(foa(&x, 2.0).unwrap(), double);
}

#[test]
fn worked_example_growth_in_order() {
    for i in 10..200 {
        let lo = cfa(&WORKED_EXAMPLE, i as f64 / 100.0).unwrap();
        let hi = cfa(&WORKED_EXAMPLE, (i + 1) as f64 / 100.0).unwrap();
        for k in 1..5 {
            assert!(hi[k] >= lo[k], "k={} α={}", k + 1, i as f64 / 100.0);
        }
    }
}

#[test]
fn coefficients_match_product_form() {
    for r in [-2.0, -1.3, -0.5, 0.0, 0.25, 1.0, 1.7, 2.0] {
        let got = foa_coefficients(r, 15);
        for (m, c) in got.iter().enumerate() {
            let want = common::rising_binomial(r, m);
            assert!(
                (c - want).abs() <= 1e-13 * want.abs().max(1.0),
                "r={r} m={m}"
            );
        }
    }
}
