//! Closed-form rounding bounds.
//!
//! `α(n,m) = (1 − 1/n)·min(n,m)` bounds the ℓ∞ rounding distance and
//! `β(n,m) = √(n·min(n,m))/2` the ℓ2 distance. `β` is irrational in general,
//! so it is carried as `β²` and every comparison goes through squares.

use std::cmp::Ordering;
use std::fmt::Write;

use num_integer::Roots;

use crate::error::{Error, Result};
use crate::exact_geometry::{format_rational, rat, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundPair {
    pub n: u64,
    pub m: u64,
    pub alpha: Rational,
    pub beta_sq: Rational,
    pub floor_alpha: u64,
    pub floor_beta: u64,
}

/// `⌊√(num/den)⌋` for nonnegative integers, by integer comparison.
fn floor_sqrt_ratio(num: u128, den: u128) -> u64 {
    // k² ≤ num/den  ⟺  k²·den ≤ num
    let mut k = (num / den).sqrt();
    while k * k * den > num {
        k -= 1;
    }
    while (k + 1) * (k + 1) * den <= num {
        k += 1;
    }
    k as u64
}

pub fn alpha(n: u64, m: u64) -> Rational {
    ratio(n as i64 - 1, n as i64) * rat(n.min(m) as i64)
}

pub fn beta_sq(n: u64, m: u64) -> Rational {
    ratio((n * n.min(m)) as i64, 4)
}

pub fn bound_pair(n: u64, m: u64) -> Result<BoundPair> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!("bounds need n, m ≥ 1 (got n = {n}, m = {m})")));
    }
    let k = n.min(m);
    let floor_beta = floor_sqrt_ratio((n * k) as u128, 4);
    debug_assert!(4 * (floor_beta as u128).pow(2) <= (n * k) as u128);
    debug_assert!(4 * (floor_beta as u128 + 1).pow(2) > (n * k) as u128);
    Ok(BoundPair {
        n,
        m,
        alpha: alpha(n, m),
        beta_sq: beta_sq(n, m),
        // (n−1)·k/n, floored; equals k − 1 whenever n ≥ 2
        floor_alpha: (n - 1) * k / n,
        floor_beta,
    })
}

/// Squared radius bound of any subset of a translated unit cube, `n/4`.
pub fn unit_cube_radius_sq(n: u64) -> Rational {
    ratio(n as i64, 4)
}

/// `θ(n) = n³ / (4 (n−1)²)`.
pub fn theta(n: u64) -> Result<Rational> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("θ(n) needs n ≥ 2 (got {n})")));
    }
    let n = n as i64;
    Ok(Rational::new((n * n * n).into(), (4 * (n - 1) * (n - 1)).into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AlphaSmaller,
    BetaSmaller,
    Equal,
}

pub fn alpha_beta_compare(n: u64, m: u64) -> Result<Comparison> {
    if n < 2 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "comparison needs n ≥ 2, m ≥ 1 (got n = {n}, m = {m})"
        )));
    }
    let a = alpha(n, m);
    Ok(match (&a * &a).cmp(&beta_sq(n, m)) {
        Ordering::Less => Comparison::AlphaSmaller,
        Ordering::Greater => Comparison::BetaSmaller,
        Ordering::Equal => Comparison::Equal,
    })
}

/// Which floor is strictly smaller; ties are unmarked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smaller {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableCell {
    pub n: u64,
    pub m: u64,
    pub floor_alpha: u64,
    pub floor_beta: u64,
    pub smaller: Option<Smaller>,
}

pub const REFERENCE_N: [u64; 6] = [2, 3, 4, 8, 12, 16];
pub const REFERENCE_M: [u64; 5] = [1, 2, 3, 4, 5];

/// One row per `n`, one cell per `m`.
pub fn bounds_table(n_values: &[u64], m_values: &[u64]) -> Result<Vec<Vec<TableCell>>> {
    n_values
        .iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::InvalidArgument(format!("table rows need n ≥ 2 (got {n})")));
            }
            m_values
                .iter()
                .map(|&m| {
                    let b = bound_pair(n, m)?;
                    let smaller = match b.floor_alpha.cmp(&b.floor_beta) {
                        Ordering::Less => Some(Smaller::Alpha),
                        Ordering::Greater => Some(Smaller::Beta),
                        Ordering::Equal => None,
                    };
                    Ok(TableCell { n, m, floor_alpha: b.floor_alpha, floor_beta: b.floor_beta, smaller })
                })
                .collect()
        })
        .collect()
}

/// Plain-text rendering; the strictly smaller floor of each pair is starred.
pub fn format_table(rows: &[Vec<TableCell>]) -> String {
    let mut out = String::new();
    let Some(first) = rows.first() else {
        return out;
    };
    let _ = write!(out, "{:<6}", "");
    for c in first {
        let _ = write!(out, "| {:^11}", format!("m={}", c.m));
    }
    out.push_str("|\n");
    let _ = write!(out, "{:<6}", "");
    for _ in first {
        let _ = write!(out, "| {:>4} {:>4}  ", "⌊α⌋", "⌊β⌋");
    }
    out.push_str("|\n");
    for row in rows {
        let _ = write!(out, "{:<6}", format!("n={}", row[0].n));
        for c in row {
            let mark = |v: u64, on: bool| if on { format!("{v}*") } else { format!("{v} ") };
            let _ = write!(
                out,
                "| {:>4} {:>4}  ",
                mark(c.floor_alpha, c.smaller == Some(Smaller::Alpha)),
                mark(c.floor_beta, c.smaller == Some(Smaller::Beta))
            );
        }
        out.push_str("|\n");
    }
    out
}

/// Long listing with exact values and a decimal approximation column.
pub fn format_pairs(n_values: &[u64], m_values: &[u64]) -> Result<String> {
    let mut out = String::from("n\tm\talpha\tbeta^2\tfloor_alpha\tfloor_beta\tsmaller\tapprox_alpha\tapprox_beta\n");
    for &n in n_values {
        for &m in m_values {
            let b = bound_pair(n, m)?;
            let smaller = if n >= 2 {
                match alpha_beta_compare(n, m)? {
                    Comparison::AlphaSmaller => "alpha",
                    Comparison::BetaSmaller => "beta",
                    Comparison::Equal => "equal",
                }
            } else {
                "-"
            };
            let approx = |r: &Rational| -> f64 {
                use num_traits::ToPrimitive;
                r.to_f64().unwrap_or(f64::NAN)
            };
            let _ = writeln!(
                out,
                "{n}\t{m}\t{}\t{}\t{}\t{}\t{smaller}\t{:.6}\t{:.6}",
                format_rational(&b.alpha),
                format_rational(&b.beta_sq),
                b.floor_alpha,
                b.floor_beta,
                approx(&b.alpha),
                approx(&b.beta_sq).sqrt()
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_pairs() {
        let b = bound_pair(2, 2).unwrap();
        assert_eq!((b.alpha, b.beta_sq), (rat(1), rat(1)));
        let b = bound_pair(8, 5).unwrap();
        assert_eq!((b.floor_alpha, b.floor_beta), (4, 3));
        for n in 2..20 {
            let b = bound_pair(n, 1).unwrap();
            assert_eq!(b.alpha, rat(1) - ratio(1, n as i64));
            assert_eq!(b.floor_alpha, 0);
        }
        assert!(bound_pair(0, 1).is_err());
        assert!(bound_pair(1, 0).is_err());
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(3).unwrap(), ratio(27, 16));
        assert_eq!(theta(4).unwrap(), ratio(16, 9));
        assert_eq!(theta(5).unwrap(), ratio(125, 64));
        assert!(theta(1).is_err());
    }

    #[test]
    fn comparator_cases() {
        for m in 2..10 {
            assert_eq!(alpha_beta_compare(2, m).unwrap(), Comparison::Equal);
        }
        for n in 2..30 {
            assert_eq!(alpha_beta_compare(n, 1).unwrap(), Comparison::AlphaSmaller);
        }
        assert_eq!(alpha_beta_compare(3, 2).unwrap(), Comparison::BetaSmaller);
        assert!(alpha_beta_compare(1, 1).is_err());
    }

    #[test]
    fn floor_sqrt_edges() {
        assert_eq!(floor_sqrt_ratio(16, 4), 2);
        assert_eq!(floor_sqrt_ratio(15, 4), 1);
        assert_eq!(floor_sqrt_ratio(0, 4), 0);
        assert_eq!(floor_sqrt_ratio(64, 4), 4);
    }

    #[test]
    fn table_cells() {
        let t = bounds_table(&[16, 12], &[1, 5]).unwrap();
        assert_eq!((t[0][0].floor_alpha, t[0][0].floor_beta, t[0][0].smaller), (0, 2, Some(Smaller::Alpha)));
        assert_eq!((t[1][1].floor_alpha, t[1][1].floor_beta, t[1][1].smaller), (4, 3, Some(Smaller::Beta)));
    }
}
