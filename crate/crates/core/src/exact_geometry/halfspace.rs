//! Facet description of `conv(S)` for small lattice sets, and vertex
//! enumeration of `conv(S) ∩ (a + [0,1]ⁿ)`.
//!
//! Facets are found by brute force: every affinely independent `d`-subset of
//! `S` (with `d = dim aff(S)`) spans a candidate hyperplane inside `aff(S)`,
//! kept when all of `S` lies on one side. All normals are scaled to primitive
//! integer vectors, so the vertex solves below run in checked `i128`
//! arithmetic via Cramer's rule, falling back to exact rationals on overflow.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::linalg::{kernel_basis, rref, solve_unique};
use super::{rat, Rational, RationalPoint};
use crate::discrete_sets::LatticePoint;

/// `normal · x ≤ offset` (or `=` when used as an equality).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Halfspace {
    fn value(&self, p: &[i64]) -> i64 {
        self.normal.iter().zip(p).map(|(a, b)| a * b).sum()
    }

    fn value_rational(&self, x: &RationalPoint) -> Rational {
        self.normal
            .iter()
            .zip(x.coords())
            .fold(Rational::zero(), |acc, (&a, c)| acc + rat(a) * c)
    }
}

/// `conv(S) = { x : E x = e, F x ≤ f }`.
#[derive(Debug, Clone)]
pub struct HullRep {
    pub dim: usize,
    pub equalities: Vec<Halfspace>,
    pub facets: Vec<Halfspace>,
}

fn primitive(c: &[Rational]) -> Vec<i64> {
    let lcm = c.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = c.iter().map(|v| (v * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter()
        .map(|v| (v / &g).to_i64().expect("facet normal exceeds i64 range"))
        .collect()
}

fn sign_normalized(mut v: Vec<i64>, offset: i64) -> Halfspace {
    let mut offset = offset;
    if v.iter().find(|c| **c != 0).is_some_and(|c| *c < 0) {
        v.iter_mut().for_each(|c| *c = -*c);
        offset = -offset;
    }
    Halfspace { normal: v, offset }
}

/// Normal of the hyperplane through `q0` and `q0 + diffs[k]` in full
/// dimension: the vector of signed maximal minors. `Some(None)` when the
/// points are affinely dependent, `None` on overflow.
fn cofactor_normal(diffs: &[Vec<i128>]) -> Option<Option<Vec<i64>>> {
    let n = diffs.len() + 1;
    let mut c = Vec::with_capacity(n);
    for i in 0..n {
        let minor: Vec<Vec<i128>> = diffs
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect())
            .collect();
        let det = bareiss_det(minor)?;
        c.push(if i % 2 == 0 { det } else { -det });
    }
    let g = c.iter().fold(0i128, |acc, v| acc.gcd(v));
    if g == 0 {
        return Some(None);
    }
    c.into_iter().map(|v| i64::try_from(v / g).ok()).collect::<Option<Vec<i64>>>().map(Some)
}

/// Normal inside `aff(S)` of the hyperplane spanned by `subset`, computed in
/// the coordinates of `basis`. `None` when the subset is affinely dependent.
fn projected_normal(points: &[LatticePoint], subset: &[usize], basis: &[Vec<Rational>], n: usize) -> Option<Vec<i64>> {
    let d = basis.len();
    let q0 = &points[subset[0]];
    let m: Vec<Vec<Rational>> = subset[1..]
        .iter()
        .map(|&k| {
            let diff: Vec<Rational> = points[k].iter().zip(q0).map(|(a, b)| rat(a - b)).collect();
            basis
                .iter()
                .map(|v| v.iter().zip(&diff).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
                .collect()
        })
        .collect();
    let ker = kernel_basis(&m, d);
    if ker.len() != 1 {
        return None;
    }
    let c: Vec<Rational> = (0..n)
        .map(|i| {
            basis
                .iter()
                .zip(&ker[0])
                .fold(Rational::zero(), |acc, (v, mu)| acc + &v[i] * mu)
        })
        .collect();
    Some(primitive(&c))
}

impl HullRep {
    pub fn new(points: &[LatticePoint]) -> HullRep {
        assert!(!points.is_empty(), "hull of an empty set");
        let n = points[0].len();
        let p0 = &points[0];
        let dirs: Vec<Vec<Rational>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(p0).map(|(a, b)| rat(a - b)).collect())
            .collect();

        let equalities: Vec<Halfspace> = kernel_basis(&dirs, n)
            .iter()
            .map(|k| {
                let normal = primitive(k);
                let offset = normal.iter().zip(p0).map(|(a, b)| a * b).sum();
                sign_normalized(normal, offset)
            })
            .collect();

        let (reduced, pivots) = rref(dirs);
        let basis: Vec<Vec<Rational>> = reduced.into_iter().take(pivots.len()).collect();
        let d = basis.len();

        let mut facets = BTreeSet::new();
        if d > 0 {
            for subset in (0..points.len()).combinations(d) {
                let q0 = &points[subset[0]];
                let normal = if d == n {
                    let diffs: Vec<Vec<i128>> = subset[1..]
                        .iter()
                        .map(|&k| points[k].iter().zip(q0).map(|(a, b)| (a - b) as i128).collect())
                        .collect();
                    match cofactor_normal(&diffs) {
                        Some(c) => c,
                        None => projected_normal(points, &subset, &basis, n),
                    }
                } else {
                    projected_normal(points, &subset, &basis, n)
                };
                let Some(normal) = normal else {
                    continue;
                };
                let h = Halfspace { offset: 0, normal };
                let s = h.value(q0);
                let values: Vec<i64> = points.iter().map(|p| h.value(p)).collect();
                if values.iter().all(|&v| v <= s) {
                    facets.insert(Halfspace { offset: s, ..h });
                } else if values.iter().all(|&v| v >= s) {
                    facets.insert(Halfspace { offset: -s, normal: h.normal.iter().map(|c| -c).collect() });
                }
            }
        }

        HullRep { dim: n, equalities, facets: facets.into_iter().collect() }
    }

    pub fn contains(&self, x: &RationalPoint) -> bool {
        self.equalities.iter().all(|h| h.value_rational(x) == rat(h.offset))
            && self.facets.iter().all(|h| h.value_rational(x) <= rat(h.offset))
    }

    fn feasible_rational(&self, candidates: &[Halfspace], x: &RationalPoint) -> bool {
        self.equalities.iter().all(|h| h.value_rational(x) == rat(h.offset))
            && candidates.iter().all(|h| h.value_rational(x) <= rat(h.offset))
    }

    /// Vertices of `conv(S) ∩ (lo + [0,1]ⁿ)`, sorted and deduplicated.
    pub fn cell_vertices(&self, lo: &[i64]) -> Vec<RationalPoint> {
        let n = self.dim;
        let cell_max = |h: &Halfspace| -> i64 {
            h.value(lo) + h.normal.iter().map(|&a| a.max(0)).sum::<i64>()
        };
        let cell_min = |h: &Halfspace| -> i64 {
            h.value(lo) + h.normal.iter().map(|&a| a.min(0)).sum::<i64>()
        };

        for h in &self.equalities {
            if cell_min(h) > h.offset || cell_max(h) < h.offset {
                return Vec::new();
            }
        }
        let mut candidates: Vec<Halfspace> = Vec::new();
        for h in &self.facets {
            if cell_min(h) > h.offset {
                return Vec::new();
            }
            // Facets strictly satisfied on the whole cell are never active.
            if cell_max(h) >= h.offset {
                candidates.push(h.clone());
            }
        }
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            candidates.push(Halfspace { normal: e.clone(), offset: lo[i] + 1 });
            e[i] = -1;
            candidates.push(Halfspace { normal: e, offset: -lo[i] });
        }

        let r = self.equalities.len();
        if r > n {
            return Vec::new();
        }
        let mut out = BTreeSet::new();
        for chosen in (0..candidates.len()).combinations(n - r) {
            let rows: Vec<&Halfspace> = self.equalities.iter().chain(chosen.iter().map(|&k| &candidates[k])).collect();
            match solve_rows(&rows) {
                Solved::Singular => {}
                Solved::Integer(num, den) => {
                    let value = |h: &Halfspace| -> Option<i128> {
                        h.normal.iter().zip(&num).try_fold(0i128, |acc, (&a, &v)| acc.checked_add((a as i128).checked_mul(v)?))
                    };
                    let rhs = |h: &Halfspace| (h.offset as i128).checked_mul(den);
                    let feasible = self
                        .equalities
                        .iter()
                        .map(|h| Some(value(h)? == rhs(h)?))
                        .chain(candidates.iter().map(|h| Some(value(h)? <= rhs(h)?)))
                        .collect::<Option<Vec<bool>>>();
                    let x = || {
                        RationalPoint::new(
                            num.iter().map(|&v| Rational::new(BigInt::from(v), BigInt::from(den))).collect(),
                        )
                    };
                    match feasible {
                        Some(flags) => {
                            if flags.into_iter().all(|f| f) {
                                out.insert(x());
                            }
                        }
                        None => {
                            let x = x();
                            if self.feasible_rational(&candidates, &x) {
                                out.insert(x);
                            }
                        }
                    }
                }
                Solved::Rational(x) => {
                    if self.feasible_rational(&candidates, &x) {
                        out.insert(x);
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

enum Solved {
    Singular,
    /// `num / den` with `den > 0`.
    Integer(Vec<i128>, i128),
    Rational(RationalPoint),
}

/// Unique solution of the square system given by the rows.
fn solve_rows(rows: &[&Halfspace]) -> Solved {
    let a: Vec<Vec<i128>> = rows.iter().map(|h| h.normal.iter().map(|&v| v as i128).collect()).collect();
    let b: Vec<i128> = rows.iter().map(|h| h.offset as i128).collect();
    match cramer_i128(&a, &b) {
        Some(Some((num, den))) => Solved::Integer(num, den),
        Some(None) => Solved::Singular,
        None => {
            let ar: Vec<Vec<Rational>> = rows.iter().map(|h| h.normal.iter().map(|&v| rat(v)).collect()).collect();
            let br: Vec<Rational> = rows.iter().map(|h| rat(h.offset)).collect();
            match solve_unique(&ar, &br) {
                Some(x) => Solved::Rational(RationalPoint::new(x)),
                None => Solved::Singular,
            }
        }
    }
}

/// Outer `None`: overflow. Inner `None`: singular.
fn cramer_i128(a: &[Vec<i128>], b: &[i128]) -> Option<Option<(Vec<i128>, i128)>> {
    let n = a.len();
    let det = bareiss_det(a.to_vec())?;
    if det == 0 {
        return Some(None);
    }
    let mut num = Vec::with_capacity(n);
    for i in 0..n {
        let mut ai = a.to_vec();
        for (row, &bv) in ai.iter_mut().zip(b) {
            row[i] = bv;
        }
        num.push(bareiss_det(ai)?);
    }
    if det < 0 {
        Some(Some((num.into_iter().map(|v| -v).collect(), -det)))
    } else {
        Some(Some((num, det)))
    }
}

fn bareiss_det(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Some(0);
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = t / prev;
            }
        }
        prev = m[k][k];
    }
    m[n - 1][n - 1].checked_mul(sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::ratio;

    #[test]
    fn square_facets() {
        let rep = HullRep::new(&[vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2]]);
        assert!(rep.equalities.is_empty());
        assert_eq!(rep.facets.len(), 4);
        assert!(rep.contains(&RationalPoint::from_lattice(&[1, 1])));
        assert!(!rep.contains(&RationalPoint::from_lattice(&[3, 1])));
    }

    #[test]
    fn segment_in_plane() {
        let rep = HullRep::new(&[vec![0, 0], vec![2, 1]]);
        assert_eq!(rep.equalities.len(), 1);
        assert_eq!(rep.facets.len(), 2);
        let v = rep.cell_vertices(&[1, 0]);
        // The segment crosses the cell [1,2]x[0,1] from (1,1/2) to (2,1).
        assert_eq!(
            v,
            vec![
                RationalPoint::new(vec![rat(1), ratio(1, 2)]),
                RationalPoint::from_lattice(&[2, 1]),
            ]
        );
    }

    #[test]
    fn single_point() {
        let rep = HullRep::new(&[vec![1, 1, 1]]);
        assert_eq!(rep.equalities.len(), 3);
        assert_eq!(rep.cell_vertices(&[1, 1, 1]), vec![RationalPoint::from_lattice(&[1, 1, 1])]);
        assert_eq!(rep.cell_vertices(&[0, 0, 0]), vec![RationalPoint::from_lattice(&[1, 1, 1])]);
        assert!(rep.cell_vertices(&[2, 0, 0]).is_empty());
    }

    #[test]
    fn triangle_clipped_by_cell() {
        let rep = HullRep::new(&[vec![0, 0], vec![2, 0], vec![0, 2]]);
        let v = rep.cell_vertices(&[1, 0]);
        assert_eq!(
            v,
            vec![
                RationalPoint::from_lattice(&[1, 0]),
                RationalPoint::from_lattice(&[1, 1]),
                RationalPoint::from_lattice(&[2, 0]),
            ]
        );
    }

    #[test]
    fn det_matches_expansion() {
        let a = vec![vec![2, -1, 0], vec![1, 3, 4], vec![0, 5, -2]];
        // 2(3*-2 - 4*5) - (-1)(1*-2 - 0) + 0 = -52 - 2
        assert_eq!(bareiss_det(a), Some(-54));
    }
}
