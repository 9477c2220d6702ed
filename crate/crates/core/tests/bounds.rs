use latsf::bounds::{alpha, alpha_beta_compare, beta_sq, bound_pair, bounds_table, theta, Comparison, Smaller, REFERENCE_M, REFERENCE_N};
use latsf::exact_geometry::{rat, ratio};
use latsf::ErrorKind;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Expected floors for n ∈ {2,3,4,8,12,16}, m ∈ {1..5}; `*` marks the
/// strictly smaller floor.
const REFERENCE_GRID: [[&str; 5]; 6] = [
    ["0 0", "1 1", "1 1", "1 1", "1 1"],
    ["0 0", "1 1", "2 1*", "2 1*", "2 1*"],
    ["0* 1", "1 1", "2 1*", "3 2*", "3 2*"],
    ["0* 1", "1* 2", "2 2", "3 2*", "4 3*"],
    ["0* 1", "1* 2", "2* 3", "3 3", "4 3*"],
    ["0* 2", "1* 2", "2* 3", "3* 4", "4 4"],
];

#[test]
fn reference_grid_matches() {
    let table = bounds_table(&REFERENCE_N, &REFERENCE_M).unwrap();
    for (row, expected) in table.iter().zip(REFERENCE_GRID) {
        for (cell, e) in row.iter().zip(expected) {
            let mark = |on: bool| if on { "*" } else { "" };
            let got = format!(
                "{}{} {}{}",
                cell.floor_alpha,
                mark(cell.smaller == Some(Smaller::Alpha)),
                cell.floor_beta,
                mark(cell.smaller == Some(Smaller::Beta))
            );
            assert_eq!(got, e, "n = {}, m = {}", cell.n, cell.m);
        }
    }
}

#[test]
fn bound_pair_examples() {
    let b = bound_pair(2, 2).unwrap();
    assert_eq!((b.alpha, b.beta_sq), (rat(1), rat(1)));
    let b = bound_pair(8, 5).unwrap();
    assert_eq!((b.floor_alpha, b.floor_beta), (4, 3));
    assert_eq!(bound_pair(0, 3).unwrap_err().kind(), ErrorKind::Usage);
    assert_eq!(theta(1).unwrap_err().kind(), ErrorKind::Usage);
    assert_eq!(alpha_beta_compare(1, 1).unwrap_err().kind(), ErrorKind::Usage);
}

#[test]
fn comparator_trichotomy() {
    for n in 2..=200u64 {
        for m in 1..=200u64 {
            let got = alpha_beta_compare(n, m).unwrap();
            let expected = if n == 2 && m >= 2 {
                Comparison::Equal
            } else if m == 1 || n >= 4 * m - 2 {
                Comparison::AlphaSmaller
            } else {
                assert!(3 <= n && n <= 4 * m - 3);
                Comparison::BetaSmaller
            };
            assert_eq!(got, expected, "n = {n}, m = {m}");
        }
    }
}

#[test]
fn theta_values_and_sandwich() {
    assert_eq!(theta(3).unwrap(), ratio(27, 16));
    assert_eq!(theta(4).unwrap(), ratio(16, 9));
    // Independent big-integer evaluation of n³ / (4 (n−1)²) at n = 5.
    let five = BigInt::from(5);
    let num = &five * &five * &five;
    let den = BigInt::from(4) * (&five - 1u32) * (&five - 1u32);
    assert_eq!(theta(5).unwrap(), latsf::Rational::new(num, den));
    for n in 3..=10_000u64 {
        let t = theta(n).unwrap();
        assert!(!t.is_integer(), "n = {n}");
        if n >= 5 {
            let k = n as i64;
            assert!(ratio(k + 2, 4) < t && t < ratio(k + 3, 4), "n = {n}");
        }
    }
}

proptest! {
    #[test]
    fn threshold_decides_the_comparison(n in 3u64..400, m in 2u64..400) {
        let t = theta(n).unwrap();
        let got = alpha_beta_compare(n, m).unwrap();
        let mm = rat(m as i64);
        prop_assert_eq!(got == Comparison::AlphaSmaller, mm < t);
        prop_assert_eq!(got == Comparison::BetaSmaller, mm > t);
    }

    #[test]
    fn floors_bracket_exact_values(n in 1u64..500, m in 1u64..500) {
        let b = bound_pair(n, m).unwrap();
        prop_assert_eq!(&b.alpha, &alpha(n, m));
        prop_assert_eq!(&b.beta_sq, &beta_sq(n, m));
        let fa = rat(b.floor_alpha as i64);
        prop_assert!(fa <= b.alpha && b.alpha < fa + rat(1));
        let fb = b.floor_beta as i64;
        prop_assert!(rat(fb * fb) <= b.beta_sq && b.beta_sq < rat((fb + 1) * (fb + 1)));
    }
}
