//! Minkowski sums of lattice sets with one stored decomposition per sum point.

use std::collections::BTreeMap;

use crate::discrete_sets::{box_points, LatticePoint, LatticeSet};
use crate::error::{Error, Result};
use crate::exact_geometry::{hull_membership, RationalPoint};

/// Default cap on the number of summand tuples enumerated by one sum.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Environment variable that overrides [`DEFAULT_BUDGET`] in [`budget_from_env`].
pub const BUDGET_ENV: &str = "LATSF_ENUM_BUDGET";

pub fn budget_from_env() -> Result<u128> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("{BUDGET_ENV}={v} is not a nonnegative integer"))
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// `W = S₁ + … + S_m` together with, for every `w ∈ W`, the lexicographically
/// least tuple `(s¹, …, sᵐ)` (in summand order) that sums to `w`.
#[derive(Debug, Clone)]
pub struct WitnessedSum {
    result: LatticeSet,
    witnesses: BTreeMap<LatticePoint, Vec<LatticePoint>>,
    summands: Vec<LatticeSet>,
}

impl WitnessedSum {
    pub fn result(&self) -> &LatticeSet {
        &self.result
    }

    pub fn summands(&self) -> &[LatticeSet] {
        &self.summands
    }

    pub fn dim(&self) -> usize {
        self.result.dim()
    }

    pub fn witness(&self, w: &[i64]) -> Option<&[LatticePoint]> {
        self.witnesses.get(w).map(Vec::as_slice)
    }

    pub fn witnesses(&self) -> impl Iterator<Item = (&LatticePoint, &[LatticePoint])> {
        self.witnesses.iter().map(|(k, v)| (k, v.as_slice()))
    }
}

/// Number of summand tuples, saturating at `u128::MAX`.
pub fn tuple_count(sets: &[LatticeSet]) -> u128 {
    sets.iter().fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
}

pub fn minkowski_sum(sets: &[LatticeSet]) -> Result<WitnessedSum> {
    minkowski_sum_with_budget(sets, DEFAULT_BUDGET)
}

pub fn minkowski_sum_with_budget(sets: &[LatticeSet], budget: u128) -> Result<WitnessedSum> {
    let Some(first) = sets.first() else {
        return Err(Error::InvalidArgument("Minkowski sum of zero sets".into()));
    };
    let dim = first.dim();
    for s in sets {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: s.dim() });
        }
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    let required = tuple_count(sets);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }

    let mut witnesses: BTreeMap<LatticePoint, Vec<LatticePoint>> = BTreeMap::new();
    // Odometer over indices, last summand fastest: lexicographic tuple order.
    let mut idx = vec![0usize; sets.len()];
    'outer: loop {
        let mut w = vec![0i64; dim];
        for (s, &k) in sets.iter().zip(&idx) {
            for (wi, pi) in w.iter_mut().zip(&s.points()[k]) {
                *wi += pi;
            }
        }
        witnesses
            .entry(w)
            .or_insert_with(|| sets.iter().zip(&idx).map(|(s, &k)| s.points()[k].clone()).collect());
        for pos in (0..sets.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < sets[pos].len() {
                continue 'outer;
            }
            idx[pos] = 0;
        }
        break;
    }

    let result = LatticeSet::new(dim, witnesses.keys().cloned())?;
    Ok(WitnessedSum { result, witnesses, summands: sets.to_vec() })
}

/// `(conv(W) ∩ Zⁿ) \ W`, scanned over the bounding box of `W`.
pub fn find_holes(w: &WitnessedSum) -> Result<LatticeSet> {
    let set = w.result();
    let mut holes = Vec::new();
    for z in box_points(set.lo(), set.hi()) {
        if !set.contains(&z) && hull_membership(set, &RationalPoint::from_lattice(&z))?.is_some() {
            holes.push(z);
        }
    }
    LatticeSet::from_points_allow_empty(set.dim(), holes)
}
