//! Deterministic instance families.
//!
//! Every random draw comes from a ChaCha stream selected by `(seed, index)`,
//! so any instance can be regenerated from those two numbers alone.

use std::sync::OnceLock;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discrete_sets::{box_points, is_integrally_convex, is_lnat_convex, is_mnat_convex, satisfies_midpoint_criterion, LatticePoint, LatticeSet};
use crate::error::{Error, Result};
use crate::exact_geometry::{hull_membership, Rational, RationalPoint};
use crate::minkowski::{find_holes, minkowski_sum, WitnessedSum};

/// Largest box enumerated exhaustively by [`enumerate_class_sets`].
pub const EXHAUSTIVE_CELL_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassFilter {
    Any,
    IntegrallyConvex,
    Mnat,
    Lnat,
}

impl ClassFilter {
    pub fn accepts(self, s: &LatticeSet) -> Result<bool> {
        match self {
            ClassFilter::Any => Ok(true),
            ClassFilter::IntegrallyConvex => is_integrally_convex(s),
            ClassFilter::Mnat => is_mnat_convex(s),
            ClassFilter::Lnat => is_lnat_convex(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFamily {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub class_filter: ClassFilter,
    pub seed: u64,
}

impl InstanceFamily {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>, class_filter: ClassFilter, seed: u64) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::Shape(format!("box corners of lengths {} and {}", lo.len(), hi.len())));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::InvalidArgument("box lower corner exceeds upper corner".into()));
        }
        Ok(InstanceFamily { lo, hi, class_filter, seed })
    }

    /// The box `{0, …, side−1}ⁿ`.
    pub fn cube(dim: usize, side: i64, class_filter: ClassFilter, seed: u64) -> Result<Self> {
        InstanceFamily::new(vec![0; dim], vec![side - 1; dim], class_filter, seed)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn cells(&self) -> Vec<LatticePoint> {
        box_points(&self.lo, &self.hi).collect()
    }
}

pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Every nonempty subset of the box passing the filter, ordered by the
/// bitmask over the lexicographically sorted cells.
pub fn enumerate_class_sets(family: &InstanceFamily) -> Result<impl Iterator<Item = LatticeSet>> {
    let cells = family.cells();
    if cells.len() > EXHAUSTIVE_CELL_LIMIT {
        return Err(Error::SizeLimit { what: "exhaustive box cell count", actual: cells.len(), limit: EXHAUSTIVE_CELL_LIMIT });
    }
    let dim = family.dim();
    let filter = family.class_filter;
    Ok((1u32..1 << cells.len()).filter_map(move |mask| {
        let pts = cells.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| p.clone());
        let s = LatticeSet::new(dim, pts).expect("nonempty subset");
        filter.accepts(&s).expect("nonempty subset").then_some(s)
    }))
}

/// A uniformly random nonempty subset of the box passing the filter, drawn
/// from stream `index`; `None` if 64 draws all fail the filter.
pub fn sample_class_set(family: &InstanceFamily, index: u64) -> Option<LatticeSet> {
    let cells = family.cells();
    let mut rng = stream_rng(family.seed, index);
    for _ in 0..64 {
        let pts: Vec<LatticePoint> = cells.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if pts.is_empty() {
            continue;
        }
        let s = LatticeSet::new(family.dim(), pts).expect("nonempty subset");
        if family.class_filter.accepts(&s).expect("nonempty subset") {
            return Some(s);
        }
    }
    None
}

fn plane_pool() -> &'static [LatticeSet] {
    static POOL: OnceLock<Vec<LatticeSet>> = OnceLock::new();
    POOL.get_or_init(|| {
        let family = InstanceFamily::cube(2, 3, ClassFilter::IntegrallyConvex, 0).expect("valid box");
        enumerate_class_sets(&family).expect("9 cells").collect()
    })
}

fn slab_pool() -> &'static [LatticeSet] {
    static POOL: OnceLock<Vec<LatticeSet>> = OnceLock::new();
    POOL.get_or_init(|| {
        let family = InstanceFamily::new(vec![0, 0, 0], vec![2, 1, 1], ClassFilter::IntegrallyConvex, 0).expect("valid box");
        enumerate_class_sets(&family).expect("12 cells").collect()
    })
}

fn permute_axes(s: &LatticeSet, perm: &[usize]) -> LatticeSet {
    LatticeSet::new(s.dim(), s.iter().map(|p| perm.iter().map(|&k| p[k]).collect())).expect("nonempty")
}

/// An integrally convex summand in `{0,1,2}³`: an exhaustively enumerated
/// integrally convex subset of a `3×2×2` slab under a random axis order, or a
/// filtered random subset of the whole cube falling back to a random sub-box.
fn space_summand(rng: &mut ChaCha8Rng) -> LatticeSet {
    if rng.gen_bool(0.75) {
        let pool = slab_pool();
        let s = &pool[rng.gen_range(0..pool.len())];
        let mut perm = [0usize, 1, 2];
        let k = rng.gen_range(0..3);
        perm.swap(0, k);
        return permute_axes(s, &perm);
    }
    let cells: Vec<LatticePoint> = box_points(&[0, 0, 0], &[2, 2, 2]).collect();
    for _ in 0..8 {
        let density = rng.gen_range(0.5..1.0);
        let pts: Vec<LatticePoint> = cells.iter().filter(|_| rng.gen_bool(density)).cloned().collect();
        if pts.is_empty() {
            continue;
        }
        let s = LatticeSet::new(3, pts).expect("nonempty");
        if satisfies_midpoint_criterion(&s).expect("nonempty") && is_integrally_convex(&s).expect("nonempty") {
            return s;
        }
    }
    let lo: Vec<i64> = (0..3).map(|_| rng.gen_range(0..=2)).collect();
    let hi: Vec<i64> = lo.iter().map(|&l| rng.gen_range(l..=2)).collect();
    LatticeSet::new(3, box_points(&lo, &hi)).expect("nonempty box")
}

/// A rounding problem: summands, their sum, and a query point in `conv(W)`.
#[derive(Debug, Clone)]
pub struct RoundingInstance {
    pub seed: u64,
    pub index: u64,
    pub sets: Vec<LatticeSet>,
    pub sum: WitnessedSum,
    pub x: RationalPoint,
}

impl RoundingInstance {
    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn summand_count(&self) -> usize {
        self.sets.len()
    }
}

/// Instance `index` of the seeded rounding family: `n ∈ {2, 3}`,
/// `m ∈ {1, 2, 3}`, integrally convex summands in `{0,1,2}ⁿ`, and `x` either
/// a random rational combination of points of `W` or (one time in four) an
/// integral point of `conv(W)`, preferring holes.
pub fn rounding_instance(seed: u64, index: u64) -> Result<RoundingInstance> {
    let mut rng = stream_rng(seed, index);
    let n = rng.gen_range(2..=3usize);
    let m = rng.gen_range(1..=3usize);
    let sets: Vec<LatticeSet> = (0..m)
        .map(|_| {
            if n == 2 {
                let pool = plane_pool();
                pool[rng.gen_range(0..pool.len())].clone()
            } else {
                space_summand(&mut rng)
            }
        })
        .collect();
    let sum = minkowski_sum(&sets)?;
    let w = sum.result();

    let x = if rng.gen_bool(0.25) {
        integral_query(&sum, &mut rng)?
    } else {
        let k = rng.gen_range(1..=(n + 2).min(w.len()));
        let picks = sample(&mut rng, w.len(), k);
        let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=6)).collect();
        let total: i64 = weights.iter().sum();
        let mut x = RationalPoint::zero(n);
        for (i, wt) in picks.iter().zip(&weights) {
            x.add_scaled_lattice(&Rational::new((*wt).into(), total.into()), &w.points()[i]);
        }
        x
    };
    Ok(RoundingInstance { seed, index, sets, sum, x })
}

fn integral_query(sum: &WitnessedSum, rng: &mut ChaCha8Rng) -> Result<RationalPoint> {
    let w = sum.result();
    if w.dim() == 2 {
        let holes = find_holes(sum)?;
        if !holes.is_empty() {
            return Ok(RationalPoint::from_lattice(&holes.points()[rng.gen_range(0..holes.len())]));
        }
    } else {
        for _ in 0..6 {
            let z: LatticePoint = w.lo().iter().zip(w.hi()).map(|(&l, &h)| rng.gen_range(l..=h)).collect();
            let x = RationalPoint::from_lattice(&z);
            if !w.contains(&z) && hull_membership(w, &x)?.is_some() {
                return Ok(x);
            }
        }
    }
    Ok(RationalPoint::from_lattice(&w.points()[rng.gen_range(0..w.len())]))
}

/// A rational in `[lo, hi]` with denominator at most 4.
fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let den = rng.gen_range(1..=4i64);
    Rational::new(rng.gen_range(lo * den..=hi * den).into(), den.into())
}

/// Membership instance `index`: `n ≤ 3`, `1 ≤ |S| ≤ 10` in `{0,…,3}ⁿ`, and a
/// query point that is a combination of `S` half the time and a random
/// rational point of the slightly larger box otherwise.
pub fn membership_instance(seed: u64, index: u64) -> (LatticeSet, RationalPoint) {
    let mut rng = stream_rng(seed, index);
    let n = rng.gen_range(1..=3usize);
    let size = rng.gen_range(1..=10usize);
    let pts: Vec<LatticePoint> = (0..size).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect();
    let s = LatticeSet::new(n, pts).expect("nonempty");
    let x = if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=s.len());
        let picks = sample(&mut rng, s.len(), k);
        let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=5)).collect();
        let total: i64 = weights.iter().sum();
        let mut x = RationalPoint::zero(n);
        for (i, wt) in picks.iter().zip(&weights) {
            x.add_scaled_lattice(&Rational::new((*wt).into(), total.into()), &s.points()[i]);
        }
        x
    } else {
        RationalPoint::new((0..n).map(|_| random_rational(&mut rng, -1, 4)).collect())
    };
    (s, x)
}
