//! Brute-force reference implementations and seeded instance generators.
//!
//! The checks here deliberately share no solver code with the certified
//! paths: they carry their own Gaussian elimination and decide everything by
//! enumerating small affinely independent supports.

pub mod generate;
pub mod suites;

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::discrete_sets::{box_points, LatticePoint, LatticeSet};
use crate::error::{Error, Result};
use crate::exact_geometry::{rat, Rational, RationalPoint};
use crate::minkowski::{WitnessedSum, DEFAULT_BUDGET};

pub use generate::{
    enumerate_class_sets, rounding_instance, sample_class_set, stream_rng, ClassFilter, InstanceFamily,
    RoundingInstance, EXHAUSTIVE_CELL_LIMIT,
};

/// Largest set accepted by [`oracle_membership`].
pub const MEMBERSHIP_LIMIT: usize = 20;

/// Largest set accepted by [`oracle_integral_convexity`].
pub const INTEGRAL_CONVEXITY_LIMIT: usize = 32;

enum Solution {
    Unique(Vec<Rational>),
    Inconsistent,
    Underdetermined,
}

/// Plain Gauss–Jordan elimination on the augmented matrix `[a | b]`.
fn gauss(a: &[Vec<Rational>], b: &[Rational]) -> Solution {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, v)| row.iter().cloned().chain(std::iter::once(v.clone())).collect())
        .collect();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    if pivot_cols.len() < cols {
        return Solution::Underdetermined;
    }
    Solution::Unique((0..cols).map(|i| m[i][cols].clone()).collect())
}

/// Barycentric weights of `x` over an affinely independent `support`, when
/// `x` lies in its affine hull.
fn barycentric(support: &[&LatticePoint], x: &[Rational]) -> Option<Vec<Rational>> {
    let n = x.len();
    let mut a = vec![vec![rat(1); support.len()]];
    for d in 0..n {
        a.push(support.iter().map(|p| rat(p[d])).collect());
    }
    let mut b = vec![rat(1)];
    b.extend(x.iter().cloned());
    match gauss(&a, &b) {
        Solution::Unique(l) => Some(l),
        _ => None,
    }
}

fn in_bbox(s: &LatticeSet, x: &RationalPoint) -> bool {
    x.coords()
        .iter()
        .zip(s.lo().iter().zip(s.hi()))
        .all(|(c, (l, h))| *c >= rat(*l) && *c <= rat(*h))
}

/// Carathéodory enumeration: `x ∈ conv(S)` iff `x` is a nonnegative
/// combination of some affinely independent subset of at most `n + 1` points.
fn membership_unchecked(points: &[LatticePoint], x: &RationalPoint) -> bool {
    let n = x.dim();
    for k in 1..=(n + 1).min(points.len()) {
        for support in points.iter().combinations(k) {
            if let Some(l) = barycentric(&support, x.coords()) {
                if l.iter().all(|v| !v.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

/// Decides `x ∈ conv(S)` by enumerating supports. Needs `|S| ≤ 20`.
pub fn oracle_membership(s: &LatticeSet, x: &RationalPoint) -> Result<bool> {
    if s.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: x.dim() });
    }
    if s.len() > MEMBERSHIP_LIMIT {
        return Err(Error::SizeLimit { what: "oracle membership set size", actual: s.len(), limit: MEMBERSHIP_LIMIT });
    }
    if s.is_empty() || !in_bbox(s, x) {
        return Ok(false);
    }
    Ok(membership_unchecked(s.points(), x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleNorm {
    Linf,
    /// Distances are reported squared.
    L2Squared,
}

/// Global nearest point of `W` to `x`, lexicographically first among ties.
pub fn oracle_nearest(w: &WitnessedSum, x: &RationalPoint, norm: OracleNorm) -> Result<(LatticePoint, Rational)> {
    let set = w.result();
    if set.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), found: x.dim() });
    }
    if set.len() as u128 > DEFAULT_BUDGET {
        return Err(Error::BudgetExceeded { required: set.len() as u128, budget: DEFAULT_BUDGET });
    }
    let distance = |z: &LatticePoint| -> Rational {
        let diffs = x.coords().iter().zip(z).map(|(a, b)| (a - rat(*b)).abs());
        match norm {
            OracleNorm::Linf => diffs.fold(Rational::zero(), |m, d| if d > m { d } else { m }),
            OracleNorm::L2Squared => diffs.fold(Rational::zero(), |acc, d| acc + &d * &d),
        }
    };
    let mut best: Option<(LatticePoint, Rational)> = None;
    for z in set.iter() {
        let d = distance(z);
        if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
            best = Some((z.clone(), d));
        }
    }
    best.ok_or(Error::EmptySet)
}

/// Definitional integral-convexity check.
///
/// Every vertex of `conv(S) ∩ (a + [0,1]ⁿ)` lies on some face `F` of
/// `conv(S)` of dimension `k` with `k` coordinates pinned to integers, and in
/// a `k`-simplex on vertices of `F`. So the candidates are: every point of a
/// `k`-simplex on points of `S` with `k` integer-pinned coordinates, and every
/// integer point of the bounding box. `S` is integrally convex iff every
/// candidate in `conv(S)` lies in `conv(S ∩ N(x))`.
pub fn oracle_integral_convexity(s: &LatticeSet) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if s.len() > INTEGRAL_CONVEXITY_LIMIT {
        return Err(Error::SizeLimit {
            what: "oracle integral convexity set size",
            actual: s.len(),
            limit: INTEGRAL_CONVEXITY_LIMIT,
        });
    }
    let n = s.dim();
    for z in box_points(s.lo(), s.hi()) {
        if !s.contains(&z) && membership_unchecked(s.points(), &RationalPoint::from_lattice(&z)) {
            return Ok(false);
        }
    }
    let mut seen = BTreeSet::new();
    for k in 1..n {
        for simplex in s.points().iter().combinations(k + 1) {
            for pinned in (0..n).combinations(k) {
                let ranges: Vec<Vec<i64>> = pinned
                    .iter()
                    .map(|&d| {
                        let lo = simplex.iter().map(|p| p[d]).min().expect("nonempty");
                        let hi = simplex.iter().map(|p| p[d]).max().expect("nonempty");
                        (lo..=hi).collect()
                    })
                    .collect();
                for values in ranges.iter().multi_cartesian_product() {
                    let mut a = vec![vec![rat(1); k + 1]];
                    let mut b = vec![rat(1)];
                    for (&d, &v) in pinned.iter().zip(&values) {
                        a.push(simplex.iter().map(|p| rat(p[d])).collect());
                        b.push(rat(*v));
                    }
                    let Solution::Unique(l) = gauss(&a, &b) else {
                        continue;
                    };
                    if l.iter().any(Signed::is_negative) {
                        continue;
                    }
                    let x = RationalPoint::new(
                        (0..n)
                            .map(|d| simplex.iter().zip(&l).fold(Rational::zero(), |acc, (p, w)| acc + rat(p[d]) * w))
                            .collect(),
                    );
                    if x.is_integral() || !seen.insert(x.clone()) {
                        continue;
                    }
                    let local: Vec<LatticePoint> = s
                        .iter()
                        .filter(|p| {
                            p.iter().zip(x.coords()).all(|(&c, v)| {
                                let c = rat(c);
                                c >= v.floor() && c <= v.ceil()
                            })
                        })
                        .cloned()
                        .collect();
                    if !membership_unchecked(&local, &x) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
