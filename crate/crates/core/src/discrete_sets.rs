//! Finite lattice sets and the discrete-convexity predicates on them.
//!
//! Integral convexity is decided cell by cell: `S` is integrally convex iff
//! for every unit cell `C = a + [0,1]ⁿ` meeting the bounding box,
//! `conv(S) ∩ C ⊆ conv(S ∩ C)`. The right side is convex, so it suffices to
//! test the finitely many vertices of `conv(S) ∩ C`, each with an exact hull
//! certificate. A point of `conv(S ∩ C)` lying on a face of `C` is a
//! combination of the `S`-points on that face, which are exactly its
//! integral neighborhood, so this is the pointwise definition in disguise.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact_geometry::halfspace::HullRep;
use crate::exact_geometry::{format_lattice, hull_membership, hull_membership_points, RationalPoint};

pub type LatticePoint = Vec<i64>;

/// A finite subset of Zⁿ, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeSet {
    dim: usize,
    points: Vec<LatticePoint>,
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl LatticeSet {
    /// Builds a nonempty set. Duplicates are merged.
    pub fn new(dim: usize, points: impl IntoIterator<Item = LatticePoint>) -> Result<Self> {
        let s = Self::from_points_allow_empty(dim, points)?;
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(s)
    }

    pub fn empty(dim: usize) -> Self {
        LatticeSet { dim, points: Vec::new(), lo: Vec::new(), hi: Vec::new() }
    }

    pub fn from_points_allow_empty(dim: usize, points: impl IntoIterator<Item = LatticePoint>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let mut pts: Vec<LatticePoint> = points.into_iter().collect();
        if let Some(p) = pts.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        pts.sort();
        pts.dedup();
        let (lo, hi) = match pts.first() {
            None => (Vec::new(), Vec::new()),
            Some(first) => {
                let mut lo = first.clone();
                let mut hi = first.clone();
                for p in &pts {
                    for i in 0..dim {
                        lo[i] = lo[i].min(p[i]);
                        hi[i] = hi[i].max(p[i]);
                    }
                }
                (lo, hi)
            }
        };
        Ok(LatticeSet { dim, points: pts, lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &LatticePoint> {
        self.points.iter()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }

    /// Componentwise minimum corner of the bounding box (empty for the empty set).
    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    /// Points `p` with `lo ≤ p ≤ hi` componentwise.
    pub fn restrict_to_box(&self, lo: &[i64], hi: &[i64]) -> LatticeSet {
        let kept = self
            .points
            .iter()
            .filter(|p| p.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| l <= v && v <= h))
            .cloned();
        LatticeSet::from_points_allow_empty(self.dim, kept).expect("subset keeps dimension")
    }

    /// `S ∩ N(x)`.
    pub fn intersect_neighborhood(&self, x: &RationalPoint) -> LatticeSet {
        self.restrict_to_box(&x.floor(), &x.ceil())
    }

    /// True when `S ⊆ a + {0,1}ⁿ` for `a` the lower bounding-box corner.
    pub fn fits_unit_cube(&self) -> bool {
        self.lo.iter().zip(&self.hi).all(|(l, h)| h - l <= 1)
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptySet)
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for LatticeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|p| format_lattice(p)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Integer points of the box `[lo, hi]` in lexicographic order.
pub fn box_points(lo: &[i64], hi: &[i64]) -> impl Iterator<Item = LatticePoint> {
    let lo = lo.to_vec();
    let hi = hi.to_vec();
    let mut next = if lo.iter().zip(&hi).all(|(l, h)| l <= h) { Some(lo.clone()) } else { None };
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        for i in (0..succ.len()).rev() {
            if succ[i] < hi[i] {
                succ[i] += 1;
                next = Some(succ);
                break;
            }
            succ[i] = lo[i];
        }
        Some(cur)
    })
}

/// `N(x)`: the integer points between `⌊x⌋` and `⌈x⌉`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralNeighborhood {
    pub anchor: RationalPoint,
    pub members: Vec<LatticePoint>,
}

pub fn integral_neighborhood(x: &RationalPoint) -> IntegralNeighborhood {
    IntegralNeighborhood {
        anchor: x.clone(),
        members: box_points(&x.floor(), &x.ceil()).collect(),
    }
}

/// Returns a point `x ∈ conv(S)` with `x ∉ conv(S ∩ N(x))`, or `None` when
/// `S` is integrally convex.
pub fn integral_convexity_violation(s: &LatticeSet) -> Result<Option<RationalPoint>> {
    s.require_nonempty()?;
    if s.fits_unit_cube() {
        return Ok(None);
    }
    let n = s.dim();
    let full_cell = u32::try_from(n).ok().and_then(|k| 1usize.checked_shl(k));
    let rep = HullRep::new(s.points());
    let cell_hi: Vec<i64> = s.lo().iter().zip(s.hi()).map(|(l, h)| (*l).max(h - 1)).collect();
    for a in box_points(s.lo(), &cell_hi) {
        let upper: Vec<i64> = a.iter().map(|v| v + 1).collect();
        let local = s.restrict_to_box(&a, &upper);
        if Some(local.len()) == full_cell {
            continue;
        }
        for v in rep.cell_vertices(&a) {
            if v.to_lattice().is_some_and(|z| s.contains(&z)) {
                continue;
            }
            if hull_membership_points(local.points(), &v)?.is_none() {
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}

pub fn is_integrally_convex(s: &LatticeSet) -> Result<bool> {
    Ok(integral_convexity_violation(s)?.is_none())
}

/// Cross-check only: for all `x, y ∈ S`, the midpoint `(x+y)/2` lies in
/// `conv(S ∩ N((x+y)/2))`. Never used as the certified answer.
pub fn satisfies_midpoint_criterion(s: &LatticeSet) -> Result<bool> {
    s.require_nonempty()?;
    let half = crate::exact_geometry::ratio(1, 2);
    for (k, x) in s.iter().enumerate() {
        for y in &s.points()[k + 1..] {
            if x.iter().zip(y).all(|(a, b)| (a - b).abs() <= 1) {
                continue;
            }
            let mut mid = RationalPoint::from_lattice(x);
            mid.add_scaled_lattice(&crate::exact_geometry::rat(1), y);
            let mid = mid.scale(&half);
            let local = s.intersect_neighborhood(&mid);
            if hull_membership_points(local.points(), &mid)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// First integer point of the bounding box that lies in `conv(S)` but not in `S`.
pub fn find_hole(s: &LatticeSet) -> Result<Option<LatticePoint>> {
    s.require_nonempty()?;
    for z in box_points(s.lo(), s.hi()) {
        if !s.contains(&z) && hull_membership(s, &RationalPoint::from_lattice(&z))?.is_some() {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

pub fn is_hole_free(s: &LatticeSet) -> Result<bool> {
    Ok(find_hole(s)?.is_none())
}

/// A pair `x, y ∈ S` and coordinate `i` (0-based) with `x_i > y_i` for
/// which neither exchange alternative holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MnatViolation {
    pub x: LatticePoint,
    pub y: LatticePoint,
    pub i: usize,
}

impl fmt::Display for MnatViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "exchange fails for x = {}, y = {}, i = {}",
            format_lattice(&self.x),
            format_lattice(&self.y),
            self.i + 1
        )
    }
}

pub fn mnat_violation(s: &LatticeSet) -> Result<Option<MnatViolation>> {
    s.require_nonempty()?;
    let n = s.dim();
    for x in s.iter() {
        for y in s.iter() {
            for i in 0..n {
                if x[i] <= y[i] {
                    continue;
                }
                let mut xi = x.clone();
                xi[i] -= 1;
                let mut yi = y.clone();
                yi[i] += 1;
                if s.contains(&xi) && s.contains(&yi) {
                    continue;
                }
                let exchanged = (0..n).filter(|&j| x[j] < y[j]).any(|j| {
                    let mut xij = xi.clone();
                    xij[j] += 1;
                    let mut yij = yi.clone();
                    yij[j] -= 1;
                    s.contains(&xij) && s.contains(&yij)
                });
                if !exchanged {
                    return Ok(Some(MnatViolation { x: x.clone(), y: y.clone(), i }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_mnat_convex(s: &LatticeSet) -> Result<bool> {
    Ok(mnat_violation(s)?.is_none())
}

/// A pair `x, y ∈ S` whose rounded midpoint is missing from `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LnatViolation {
    pub x: LatticePoint,
    pub y: LatticePoint,
    pub missing: LatticePoint,
}

impl fmt::Display for LnatViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rounded midpoint {} of x = {}, y = {} is missing",
            format_lattice(&self.missing),
            format_lattice(&self.x),
            format_lattice(&self.y)
        )
    }
}

pub fn lnat_violation(s: &LatticeSet) -> Result<Option<LnatViolation>> {
    s.require_nonempty()?;
    for (k, x) in s.iter().enumerate() {
        for y in &s.points()[k..] {
            let up: LatticePoint = x.iter().zip(y).map(|(a, b)| Integer::div_ceil(&(a + b), &2)).collect();
            let down: LatticePoint = x.iter().zip(y).map(|(a, b)| Integer::div_floor(&(a + b), &2)).collect();
            for m in [up, down] {
                if !s.contains(&m) {
                    return Ok(Some(LnatViolation { x: x.clone(), y: y.clone(), missing: m }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_lnat_convex(s: &LatticeSet) -> Result<bool> {
    Ok(lnat_violation(s)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::ratio;

    fn set(dim: usize, pts: &[&[i64]]) -> LatticeSet {
        LatticeSet::new(dim, pts.iter().map(|p| p.to_vec())).unwrap()
    }

    fn q(coords: &[(i64, i64)]) -> RationalPoint {
        RationalPoint::new(coords.iter().map(|&(a, b)| ratio(a, b)).collect())
    }

    #[test]
    fn neighborhoods() {
        let n = integral_neighborhood(&q(&[(1, 2), (3, 4)]));
        assert_eq!(n.members, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let n = integral_neighborhood(&q(&[(1, 1), (1, 2)]));
        assert_eq!(n.members, vec![vec![1, 0], vec![1, 1]]);
        let n = integral_neighborhood(&q(&[(2, 1), (3, 1)]));
        assert_eq!(n.members, vec![vec![2, 3]]);
        let n = integral_neighborhood(&q(&[(-1, 2)]));
        assert_eq!(n.members, vec![vec![-1], vec![0]]);
    }

    #[test]
    fn set_construction() {
        let s = set(2, &[&[1, 2], &[0, 5], &[1, 2]]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.lo(), &[0, 2]);
        assert_eq!(s.hi(), &[1, 5]);
        assert!(matches!(LatticeSet::new(2, Vec::new()), Err(Error::EmptySet)));
        assert!(matches!(
            LatticeSet::new(2, vec![vec![1, 2, 3]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn box_enumeration() {
        let pts: Vec<_> = box_points(&[0, 1], &[1, 2]).collect();
        assert_eq!(pts, vec![vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2]]);
        assert_eq!(box_points(&[1], &[0]).count(), 0);
    }

    #[test]
    fn example_sum_with_hole() {
        let s = set(2, &[&[1, 0], &[0, 1], &[2, 1], &[1, 2]]);
        assert!(!is_integrally_convex(&s).unwrap());
        assert_eq!(find_hole(&s).unwrap(), Some(vec![1, 1]));
        assert!(!satisfies_midpoint_criterion(&s).unwrap());
    }

    #[test]
    fn skew_segment_not_integrally_convex() {
        let s = set(2, &[&[0, 0], &[2, 1]]);
        let w = integral_convexity_violation(&s).unwrap().unwrap();
        assert!(hull_membership(&s, &w).unwrap().is_some());
        let local = s.intersect_neighborhood(&w);
        assert!(hull_membership_points(local.points(), &w).unwrap().is_none());
        // The line hole-free check passes: no integer point between the ends.
        assert!(is_hole_free(&s).unwrap());
    }

    #[test]
    fn cube_subsets_are_integrally_convex() {
        let s = set(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(is_integrally_convex(&s).unwrap());
    }

    #[test]
    fn interval_is_hole_free() {
        let s = set(2, &[&[0, 0], &[1, 0], &[2, 0]]);
        assert!(is_hole_free(&s).unwrap());
        assert!(is_integrally_convex(&s).unwrap());
    }

    #[test]
    fn mnat_examples() {
        assert!(is_mnat_convex(&set(2, &[&[5, 7]])).unwrap());
        let v = mnat_violation(&set(2, &[&[0, 0], &[1, 1]])).unwrap().unwrap();
        assert_eq!((v.x, v.y), (vec![1, 1], vec![0, 0]));
        assert!(is_mnat_convex(&set(2, &[&[0, 0], &[1, 0], &[0, 1]])).unwrap());
    }

    #[test]
    fn lnat_examples() {
        assert!(is_lnat_convex(&set(3, &[&[0, 0, 0], &[1, 1, 0]])).unwrap());
        assert!(!is_lnat_convex(&set(2, &[&[1, 0], &[0, 1]])).unwrap());
        assert!(is_lnat_convex(&set(2, &[&[0, 0], &[1, 1]])).unwrap());
    }

    #[test]
    fn predicates_reject_empty() {
        let e = LatticeSet::empty(2);
        assert!(matches!(is_integrally_convex(&e), Err(Error::EmptySet)));
        assert!(matches!(is_hole_free(&e), Err(Error::EmptySet)));
        assert!(matches!(is_mnat_convex(&e), Err(Error::EmptySet)));
        assert!(matches!(is_lnat_convex(&e), Err(Error::EmptySet)));
    }
}
