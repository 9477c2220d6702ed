//! Property suites run by `latsf verify` and the acceptance tests.
//!
//! Each suite tallies pass/fail counts per invariant and keeps the first
//! failure of each, tagged with the `(seed, index)` that reproduces it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;

use super::generate::{enumerate_class_sets, membership_instance, rounding_instance, ClassFilter, InstanceFamily, RoundingInstance};
use super::{oracle_integral_convexity, oracle_membership, oracle_nearest, OracleNorm};
use crate::bounds::{alpha, alpha_beta_compare, beta_sq, bound_pair, theta, Comparison};
use crate::discrete_sets::{is_hole_free, is_integrally_convex, is_lnat_convex, is_mnat_convex, satisfies_midpoint_criterion, LatticePoint, LatticeSet};
use crate::error::Result;
use crate::exact_geometry::{hull_membership, rat, ratio, ConvexCombination};
use crate::minkowski::{find_holes, minkowski_sum};
use crate::shapley_folkman::{
    decompose_into_summand_hulls, local_restrictions, sf_decompose, sf_round_l2, sf_round_linf, Bound, RoundOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Predicates,
    Rounding,
    Bounds,
    Closure,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantTally {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub tallies: Vec<InvariantTally>,
}

impl SuiteReport {
    fn new(suite: &'static str) -> Self {
        SuiteReport { suite, tallies: Vec::new() }
    }

    fn record(&mut self, name: &'static str, ok: bool, context: impl FnOnce() -> String) {
        let pos = match self.tallies.iter().position(|t| t.name == name) {
            Some(p) => p,
            None => {
                self.tallies.push(InvariantTally { name, passed: 0, failed: 0, first_failure: None });
                self.tallies.len() - 1
            }
        };
        let t = &mut self.tallies[pos];
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            if t.first_failure.is_none() {
                t.first_failure = Some(context());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.tallies.iter().all(|t| t.failed == 0)
    }

    pub fn tally(&self, name: &str) -> Option<&InvariantTally> {
        self.tallies.iter().find(|t| t.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}: {}", self.suite, if self.passed() { "pass" } else { "FAIL" })?;
        for t in &self.tallies {
            writeln!(f, "  {:<52} {}/{} passed", t.name, t.passed, t.passed + t.failed)?;
            if let Some(msg) = &t.first_failure {
                writeln!(f, "    first failure: {msg}")?;
            }
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite, seed: u64, instances: u64) -> Result<Vec<SuiteReport>> {
    Ok(match suite {
        Suite::Predicates => vec![run_predicates(seed, instances)?],
        Suite::Rounding => vec![run_rounding(seed, instances)?],
        Suite::Bounds => vec![run_bounds()?],
        Suite::Closure => vec![run_closure()?],
        Suite::All => vec![
            run_predicates(seed, instances)?,
            run_closure()?,
            run_rounding(seed, instances)?,
            run_bounds()?,
        ],
    })
}

/// Every nonempty subset of `{0,1,2}²`, in bitmask order.
pub fn plane_subsets() -> Vec<LatticeSet> {
    let family = InstanceFamily::cube(2, 3, ClassFilter::Any, 0).expect("valid box");
    enumerate_class_sets(&family).expect("9 cells").collect()
}

/// Class implications and cross-checks on every subset of `{0,1,2}²`, and
/// `instances` seeded membership comparisons against the oracle.
pub fn run_predicates(seed: u64, instances: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("predicates");
    let rows: Vec<_> = plane_subsets()
        .into_par_iter()
        .map(|s| -> Result<_> {
            let ic = is_integrally_convex(&s)?;
            Ok((
                ic,
                is_mnat_convex(&s)?,
                is_lnat_convex(&s)?,
                is_hole_free(&s)?,
                satisfies_midpoint_criterion(&s)?,
                oracle_integral_convexity(&s)?,
                s,
            ))
        })
        .collect::<Result<_>>()?;
    for (ic, mnat, lnat, hole_free, midpoint, oracle_ic, s) in rows {
        let ctx = || format!("set {s}");
        report.record("M-natural implies integrally convex", !mnat || ic, ctx);
        report.record("L-natural implies integrally convex", !lnat || ic, ctx);
        report.record("integrally convex implies hole-free", !ic || hole_free, ctx);
        report.record("midpoint criterion agrees with integral convexity", midpoint == ic, ctx);
        report.record("oracle integral convexity agrees", oracle_ic == ic, ctx);
    }

    let outcomes: Vec<_> = (0..instances)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let (s, x) = membership_instance(seed, i);
            let certified = hull_membership(&s, &x)?;
            let certificate_ok = certified.as_ref().is_none_or(|c| c.certifies(&x));
            Ok((i, certified.is_some() && certificate_ok, oracle_membership(&s, &x)?, s, x))
        })
        .collect::<Result<_>>()?;
    for (i, certified, oracle, s, x) in outcomes {
        report.record("hull membership agrees with oracle", certified == oracle, || {
            format!("seed {seed}, index {i}: S = {s}, x = {x}, certified {certified}, oracle {oracle}")
        });
    }
    Ok(report)
}

/// Minkowski-sum closure on exhaustive class families: sums of M♮-convex
/// subsets of `{0,1,2}²` stay M♮-convex and hole-free, and sums of two
/// L♮-convex subsets of `{0,1}³` are integrally convex.
pub fn run_closure() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("closure");
    let mnat: Vec<LatticeSet> =
        enumerate_class_sets(&InstanceFamily::cube(2, 3, ClassFilter::Mnat, 0)?)?.collect();
    let pairs: Vec<(usize, usize)> = (0..mnat.len()).flat_map(|i| (i..mnat.len()).map(move |j| (i, j))).collect();
    let rows: Vec<_> = pairs
        .par_iter()
        .map(|&(i, j)| -> Result<_> {
            let w = minkowski_sum(&[mnat[i].clone(), mnat[j].clone()])?;
            Ok((i, j, is_mnat_convex(w.result())?, find_holes(&w)?.is_empty()))
        })
        .collect::<Result<_>>()?;
    for (i, j, closed, hole_free) in rows {
        let ctx = || format!("{} + {}", mnat[i], mnat[j]);
        report.record("M-natural sums are M-natural", closed, ctx);
        report.record("M-natural sums are hole-free", hole_free, ctx);
    }

    let lnat: Vec<LatticeSet> =
        enumerate_class_sets(&InstanceFamily::cube(3, 2, ClassFilter::Lnat, 0)?)?.collect();
    // Many pairs share a sum; each distinct sum is certified once.
    let mut pair_sums = Vec::new();
    let mut distinct = BTreeSet::new();
    for i in 0..lnat.len() {
        for j in i..lnat.len() {
            let w = minkowski_sum(&[lnat[i].clone(), lnat[j].clone()])?.result().clone();
            distinct.insert(w.points().to_vec());
            pair_sums.push((i, j, w.points().to_vec()));
        }
    }
    let verdicts: BTreeMap<Vec<LatticePoint>, bool> = distinct
        .into_par_iter()
        .map(|pts| -> Result<_> {
            let ic = is_integrally_convex(&LatticeSet::new(3, pts.clone())?)?;
            Ok((pts, ic))
        })
        .collect::<Result<_>>()?;
    report.record("L-natural family is nonempty", !lnat.is_empty(), || "no L-natural subsets".into());
    for (i, j, pts) in pair_sums {
        report.record("L-natural pair sums are integrally convex", verdicts[&pts], || {
            format!("{} + {}", lnat[i], lnat[j])
        });
    }
    Ok(report)
}

/// Outcome of every rounding invariant on one instance.
pub fn check_rounding_instance(inst: &RoundingInstance) -> Vec<(&'static str, std::result::Result<(), String>)> {
    let n = inst.dim() as u64;
    let m = inst.summand_count() as u64;
    let pair = bound_pair(n, m).expect("n, m ≥ 1");
    let opts = RoundOptions { verify_class: false, ..RoundOptions::default() };
    let x = &inst.x;
    let guard = |f: &mut dyn FnMut() -> std::result::Result<(), String>| -> std::result::Result<(), String> {
        catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        })
    };
    let mut out = Vec::new();

    let mut linf = None;
    out.push((
        "linf rounding within alpha",
        guard(&mut || {
            let r = sf_round_linf(&inst.sets, x, &opts).map_err(|e| e.to_string())?;
            let ok = r.distance_linf <= pair.alpha && inst.sum.result().contains(&r.z);
            linf = Some(r.clone());
            ok.then_some(()).ok_or_else(|| format!("z = {:?}, distance {}", r.z, r.distance_linf))
        }),
    ));
    if x.is_integral() {
        out.push((
            "integral x within floor of alpha",
            match &linf {
                Some(r) if r.distance_linf <= rat(pair.floor_alpha as i64) => Ok(()),
                Some(r) => Err(format!("distance {} > {}", r.distance_linf, pair.floor_alpha)),
                None => Err("linf pipeline failed".into()),
            },
        ));
    }

    let mut l2 = None;
    out.push((
        "l2 rounding within beta",
        guard(&mut || {
            let r = sf_round_l2(&inst.sets, x, &opts).map_err(|e| e.to_string())?;
            let mut ok = r.distance_l2_sq <= pair.beta_sq && inst.sum.result().contains(&r.z);
            if x.is_integral() {
                ok &= r.distance_linf <= rat(pair.floor_beta as i64);
            }
            l2 = Some(r.clone());
            ok.then_some(()).ok_or_else(|| format!("z = {:?}, squared distance {}", r.z, r.distance_l2_sq))
        }),
    ));

    out.push((
        "better of both within min(alpha, beta)",
        match (&linf, &l2) {
            (Some(a), Some(b)) => {
                let best = a.distance_linf.clone().min(b.distance_linf.clone());
                let bound = Bound::LinfMin { alpha: alpha(n, m), beta_sq: beta_sq(n, m) };
                bound.admits(&best, &rat(0)).then_some(()).ok_or_else(|| format!("distance {best}"))
            }
            _ => Err("a pipeline failed".into()),
        },
    ));

    out.push((
        "decomposition size and reconstruction",
        guard(&mut || {
            let ys = decompose_into_summand_hulls(&inst.sum, x).map_err(|e| e.to_string())?;
            let points: Vec<_> = ys.iter().map(|y| y.point.clone()).collect();
            let locals = local_restrictions(&inst.sets, &points).map_err(|e| e.to_string())?;
            let ts: Vec<LatticeSet> = locals.iter().map(|l| l.set.clone()).collect();
            let certs: Vec<ConvexCombination> = locals.into_iter().map(|l| l.certificate).collect();
            let dec = sf_decompose(&ts, x, &certs).map_err(|e| e.to_string())?;
            let fractional = dec.fractional_count() as u64;
            let certified = dec.hull_points.iter().all(|(_, h)| h.certificate.certifies(&h.point))
                && dec.lattice_points.iter().all(|(j, z)| ts[*j].contains(z));
            if fractional <= n.min(m) && dec.reconstruct(x.dim()) == *x && certified {
                Ok(())
            } else {
                Err(format!("|I| = {fractional}, certified {certified}"))
            }
        }),
    ));

    out.push((
        "oracle nearest point confirms bounds",
        guard(&mut || {
            let (_, d_inf) = oracle_nearest(&inst.sum, x, OracleNorm::Linf).map_err(|e| e.to_string())?;
            let (_, d_two) = oracle_nearest(&inst.sum, x, OracleNorm::L2Squared).map_err(|e| e.to_string())?;
            let mut ok = d_inf <= pair.alpha && d_two <= pair.beta_sq;
            if let Some(r) = &linf {
                ok &= d_inf <= r.distance_linf;
            }
            if let Some(r) = &l2 {
                ok &= d_two <= r.distance_l2_sq;
            }
            ok.then_some(()).ok_or_else(|| format!("oracle linf {d_inf}, oracle l2^2 {d_two}"))
        }),
    ));
    out
}

/// `instances` seeded rounding instances, checked by [`check_rounding_instance`].
pub fn run_rounding(seed: u64, instances: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("rounding");
    let results: Vec<_> = (0..instances)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let inst = rounding_instance(seed, i)?;
            let checks = check_rounding_instance(&inst);
            Ok((i, inst, checks))
        })
        .collect::<Result<_>>()?;
    for (i, inst, checks) in results {
        for (name, outcome) in checks {
            let ok = outcome.is_ok();
            report.record(name, ok, || {
                let why = outcome.err().unwrap_or_default();
                let sets: Vec<String> = inst.sets.iter().map(|s| s.to_string()).collect();
                format!("seed {seed}, index {i}: sets [{}], x = {}: {why}", sets.join(", "), inst.x)
            });
        }
    }
    Ok(report)
}

/// Exact sweeps over the bound formulas.
pub fn run_bounds() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("bounds");
    for n in 2..=200u64 {
        for m in 1..=200u64 {
            let expected = if n == 2 && m >= 2 {
                Comparison::Equal
            } else if m == 1 || n + 2 >= 4 * m {
                Comparison::AlphaSmaller
            } else {
                Comparison::BetaSmaller
            };
            let got = alpha_beta_compare(n, m)?;
            report.record("comparator matches case analysis", got == expected, || {
                format!("n = {n}, m = {m}: got {got:?}, expected {expected:?}")
            });
            if n >= 3 && m >= 2 {
                let t = theta(n)?;
                let m_r = rat(m as i64);
                let consistent = match got {
                    Comparison::AlphaSmaller => m_r < t,
                    Comparison::BetaSmaller => m_r > t,
                    Comparison::Equal => false,
                };
                report.record("comparison matches threshold theta", consistent, || format!("n = {n}, m = {m}"));
            }
            let b = bound_pair(n, m)?;
            let k = n.min(m);
            let fb = b.floor_beta as i64;
            let floors_ok = b.floor_alpha == k - 1 && rat(fb * fb) <= b.beta_sq && b.beta_sq < rat((fb + 1) * (fb + 1));
            report.record("floors are exact", floors_ok, || format!("n = {n}, m = {m}"));
        }
    }
    for n in 3..=10_000u64 {
        let t = theta(n)?;
        report.record("theta is never an integer", !t.is_integer(), || format!("n = {n}"));
        if n >= 5 {
            let nn = n as i64;
            let inside = ratio(nn + 2, 4) < t && t < ratio(nn + 3, 4);
            report.record("theta sandwich", inside, || format!("n = {n}, theta = {t}"));
        }
    }
    report.record("theta exact values", theta(3)? == ratio(27, 16) && theta(4)? == ratio(16, 9), || {
        "theta(3) or theta(4) differs".into()
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_suite_passes() {
        let r = run_bounds().unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.tally("comparator matches case analysis").unwrap().passed, 199 * 200);
    }

    #[test]
    fn small_rounding_run() {
        let r = run_rounding(3, 12).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn failures_keep_first_context() {
        let mut r = SuiteReport::new("t");
        r.record("a", true, || unreachable!());
        r.record("a", false, || "first".into());
        r.record("a", false, || "second".into());
        let t = r.tally("a").unwrap();
        assert_eq!((t.passed, t.failed, t.first_failure.as_deref()), (1, 2, Some("first")));
        assert!(!r.passed());
    }
}
