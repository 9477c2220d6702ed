//! Exact rational geometry: points, convex-combination certificates, hull
//! membership, and Carathéodory support reduction.
//!
//! Nothing in here touches floating point. Every [`ConvexCombination`] that
//! leaves this module has been re-verified against its target.

pub mod halfspace;
pub mod linalg;

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::discrete_sets::{LatticePoint, LatticeSet};
use crate::error::{Error, Result};

pub use linalg::solve_linear_feasibility;

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer().to_i64().expect("coordinate exceeds i64 range")
}

pub(crate) fn ceil_i64(r: &Rational) -> i64 {
    r.ceil().to_integer().to_i64().expect("coordinate exceeds i64 range")
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or an integer literal. Decimal and exponent forms are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("`{s}` is not an exact rational (expected `p/q` or an integer)"));
    let int = |t: &str| -> Result<BigInt> {
        let t = t.trim();
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(int(s)?)),
        Some((p, q)) => {
            let q = int(q)?;
            if q.is_zero() {
                return Err(Error::InvalidArgument(format!("`{s}` has a zero denominator")));
            }
            Ok(Rational::new(int(p)?, q))
        }
    }
}

/// A point of Qⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(Vec<Rational>);

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint(coords)
    }

    pub fn zero(dim: usize) -> Self {
        RationalPoint(vec![Rational::zero(); dim])
    }

    pub fn from_lattice(p: &[i64]) -> Self {
        RationalPoint(p.iter().map(|&v| rat(v)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn to_lattice(&self) -> Option<LatticePoint> {
        self.is_integral().then(|| self.0.iter().map(floor_i64).collect())
    }

    pub fn floor(&self) -> LatticePoint {
        self.0.iter().map(floor_i64).collect()
    }

    pub fn ceil(&self) -> LatticePoint {
        self.0.iter().map(ceil_i64).collect()
    }

    pub fn scale(&self, k: &Rational) -> RationalPoint {
        RationalPoint(self.0.iter().map(|c| c * k).collect())
    }

    /// `self += k * p` for a lattice point `p`.
    pub fn add_scaled_lattice(&mut self, k: &Rational, p: &[i64]) {
        for (c, &v) in self.0.iter_mut().zip(p) {
            *c += k * rat(v);
        }
    }

    pub fn linf_distance(&self, z: &[i64]) -> Rational {
        self.0
            .iter()
            .zip(z)
            .map(|(c, &v)| (c - rat(v)).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Squared Euclidean distance, kept rational.
    pub fn l2_sq_distance(&self, z: &[i64]) -> Rational {
        self.0.iter().zip(z).fold(Rational::zero(), |acc, (c, &v)| {
            let d = c - rat(v);
            acc + &d * &d
        })
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

impl Add for &RationalPoint {
    type Output = RationalPoint;
    fn add(self, rhs: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalPoint {
    type Output = RationalPoint;
    fn sub(self, rhs: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Formats a lattice point as `(a, b, c)`.
pub fn format_lattice(p: &[i64]) -> String {
    let parts: Vec<String> = p.iter().map(i64::to_string).collect();
    format!("({})", parts.join(", "))
}

/// A certificate that some point lies in the convex hull of lattice points:
/// strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexCombination {
    support: Vec<(LatticePoint, Rational)>,
}

impl ConvexCombination {
    /// Builds a combination from `(point, weight)` pairs, merging repeated
    /// points and dropping zero weights. Rejects negative weights, mixed
    /// dimensions, and weights that do not sum to one.
    pub fn new(pairs: impl IntoIterator<Item = (LatticePoint, Rational)>) -> Result<Self> {
        let mut support: Vec<(LatticePoint, Rational)> = Vec::new();
        for (p, w) in pairs {
            if w.is_negative() {
                return Err(Error::InvalidCertificate(format!(
                    "negative weight {} on {}",
                    format_rational(&w),
                    format_lattice(&p)
                )));
            }
            if w.is_zero() {
                continue;
            }
            match support.iter_mut().find(|(q, _)| *q == p) {
                Some((_, acc)) => *acc += w,
                None => support.push((p, w)),
            }
        }
        let c = ConvexCombination { support };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let Some(dim) = self.support.first().map(|(p, _)| p.len()) else {
            return Err(Error::InvalidCertificate("empty support".into()));
        };
        if let Some((p, _)) = self.support.iter().find(|(p, _)| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        if self.support.iter().any(|(_, w)| !w.is_positive()) {
            return Err(Error::InvalidCertificate("nonpositive weight in support".into()));
        }
        let total: Rational = self.support.iter().map(|(_, w)| w).sum();
        if !total.is_one() {
            return Err(Error::InvalidCertificate(format!(
                "weights sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(())
    }

    pub fn support(&self) -> &[(LatticePoint, Rational)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.support[0].0.len()
    }

    pub fn points(&self) -> impl Iterator<Item = &LatticePoint> {
        self.support.iter().map(|(p, _)| p)
    }

    /// The point this combination certifies.
    pub fn target(&self) -> RationalPoint {
        let mut t = RationalPoint::zero(self.dim());
        for (p, w) in &self.support {
            t.add_scaled_lattice(w, p);
        }
        t
    }

    pub fn certifies(&self, x: &RationalPoint) -> bool {
        self.dim() == x.dim() && self.target() == *x
    }

    pub fn verify(&self, x: &RationalPoint) -> Result<()> {
        self.validate()?;
        if self.dim() != x.dim() {
            return Err(Error::DimensionMismatch { expected: x.dim(), found: self.dim() });
        }
        let t = self.target();
        if t != *x {
            return Err(Error::InvalidCertificate(format!("combination yields {t}, not {x}")));
        }
        Ok(())
    }
}

impl fmt::Display for ConvexCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .support
            .iter()
            .map(|(p, w)| format!("{}*{}", format_rational(w), format_lattice(p)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The `(n+1) × k` system `[1; p_1 … p_k]` used for convex-combination feasibility.
fn combination_system(points: &[&LatticePoint], dim: usize) -> Vec<Vec<Rational>> {
    let mut a = Vec::with_capacity(dim + 1);
    a.push(vec![Rational::one(); points.len()]);
    for i in 0..dim {
        a.push(points.iter().map(|p| rat(p[i])).collect());
    }
    a
}

/// Decides `x ∈ conv(points)`, returning a verified certificate with
/// affinely independent support when it holds.
pub fn hull_membership_points(points: &[LatticePoint], x: &RationalPoint) -> Result<Option<ConvexCombination>> {
    let dim = x.dim();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: p.len(), found: dim });
    }
    if points.is_empty() {
        return Ok(None);
    }
    if let Some(z) = x.to_lattice() {
        if points.contains(&z) {
            return Ok(Some(ConvexCombination { support: vec![(z, Rational::one())] }));
        }
    }
    let refs: Vec<&LatticePoint> = points.iter().collect();
    let a = combination_system(&refs, dim);
    let mut b = vec![Rational::one()];
    b.extend(x.coords().iter().cloned());
    let Some(lambda) = solve_linear_feasibility(&a, &b)? else {
        return Ok(None);
    };
    let c = ConvexCombination::new(points.iter().cloned().zip(lambda))?;
    c.verify(x).expect("hull certificate failed re-verification");
    Ok(Some(c))
}

/// Decides `x ∈ conv(S)` with an exact certificate.
pub fn hull_membership(s: &LatticeSet, x: &RationalPoint) -> Result<Option<ConvexCombination>> {
    if s.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: x.dim() });
    }
    hull_membership_points(s.points(), x)
}

/// Shrinks a combination to at most `n + 1` affinely independent support
/// points with the same target, by null-space pivoting.
pub fn caratheodory_reduce(c: &ConvexCombination, n: usize) -> Result<ConvexCombination> {
    c.validate()?;
    if c.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: c.dim() });
    }
    if c.len() == 1 {
        return Ok(c.clone());
    }
    let target = c.target();
    let pts: Vec<&LatticePoint> = c.points().collect();
    let a = combination_system(&pts, n);
    let weights: Vec<Rational> = c.support.iter().map(|(_, w)| w.clone()).collect();
    let reduced = linalg::reduce_to_basic(&a, &weights);
    let out = ConvexCombination::new(pts.into_iter().cloned().zip(reduced))?;
    out.verify(&target).expect("Carathéodory reduction changed the target");
    assert!(out.len() <= n + 1, "reduced support exceeds n+1");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(dim: usize, pts: &[&[i64]]) -> LatticeSet {
        LatticeSet::new(dim, pts.iter().map(|p| p.to_vec())).unwrap()
    }

    fn q(coords: &[(i64, i64)]) -> RationalPoint {
        RationalPoint::new(coords.iter().map(|&(a, b)| ratio(a, b)).collect())
    }

    #[test]
    fn midpoint_of_segment() {
        let s = set(2, &[&[0, 0], &[1, 1]]);
        let c = hull_membership(&s, &q(&[(1, 2), (1, 2)])).unwrap().unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.support().iter().all(|(_, w)| *w == ratio(1, 2)));
    }

    #[test]
    fn hole_lies_in_hull() {
        let s = set(2, &[&[1, 0], &[0, 1], &[2, 1], &[1, 2]]);
        let x = q(&[(1, 1), (1, 1)]);
        let c = hull_membership(&s, &x).unwrap().unwrap();
        c.verify(&x).unwrap();
        assert!(hull_membership(&s, &q(&[(2, 1), (0, 1)])).unwrap().is_none());
    }

    #[test]
    fn dimension_mismatch() {
        let s = set(2, &[&[0, 0]]);
        assert!(matches!(
            hull_membership(&s, &q(&[(0, 1)])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn caratheodory_collinear() {
        let third = ratio(1, 3);
        let c = ConvexCombination::new(vec![
            (vec![0, 0], third.clone()),
            (vec![1, 0], third.clone()),
            (vec![2, 0], third),
        ])
        .unwrap();
        let r = caratheodory_reduce(&c, 2).unwrap();
        // Collinear support: the affine hull is a line, so at most two survive.
        assert!(r.len() <= 2);
        r.verify(&q(&[(1, 1), (0, 1)])).unwrap();
    }

    #[test]
    fn caratheodory_singleton_unchanged() {
        let c = ConvexCombination::new(vec![(vec![3, 4], rat(1))]).unwrap();
        assert_eq!(caratheodory_reduce(&c, 2).unwrap(), c);
    }

    #[test]
    fn caratheodory_square_in_plane() {
        let w = ratio(1, 4);
        let c = ConvexCombination::new(vec![
            (vec![0, 0], w.clone()),
            (vec![1, 1], w.clone()),
            (vec![2, 2], w.clone()),
            (vec![0, 2], w),
        ])
        .unwrap();
        let r = caratheodory_reduce(&c, 2).unwrap();
        assert!(r.len() <= 3);
        r.verify(&q(&[(3, 4), (5, 4)])).unwrap();
        assert!(r.points().all(|p| c.points().any(|o| o == p)));
    }

    #[test]
    fn invalid_certificate_rejected() {
        assert!(ConvexCombination::new(vec![(vec![0], ratio(1, 2))]).is_err());
        assert!(ConvexCombination::new(vec![(vec![0], rat(2)), (vec![1], rat(-1))]).is_err());
    }

    #[test]
    fn parse_exact_rationals() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), rat(-4));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }
}
