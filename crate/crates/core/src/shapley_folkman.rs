//! Rounding a point of `conv(S₁ + … + S_m)` to a nearby point of the sum.
//!
//! The ℓ∞ pipeline for integrally convex summands:
//!
//! 1. write `x = Σ yⁱ` with `yⁱ ∈ conv(Sᵢ)` by pushing a Carathéodory-reduced
//!    combination of `x` over `W` through the stored witnesses;
//! 2. restrict `Tᵢ = Sᵢ ∩ N(yⁱ)`, a subset of a translated unit cube, and
//!    certify `yⁱ ∈ conv(Tᵢ)` (this is where integral convexity is used);
//! 3. move the stacked weights to a basic feasible solution, so all but at
//!    most `min(n, m)` summands take a single lattice point;
//! 4. round each remaining fractional `xⁱ` inside its cube to the ℓ∞-nearest
//!    point of `Tᵢ`, which is within `1 − 1/n`.
//!
//! The ℓ2 pipeline stops after step 2 and searches `T₁ + … + T_m`
//! exhaustively for the nearest point; its distance is guaranteed to be at
//! most `β(n,m)`, but the point is found by search rather than constructed.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed};

use crate::bounds::{alpha, beta_sq, bound_pair};
use crate::discrete_sets::{integral_convexity_violation, lnat_violation, mnat_violation, LatticePoint, LatticeSet};
use crate::error::{Error, Result};
use crate::exact_geometry::linalg::reduce_to_basic;
use crate::exact_geometry::{
    caratheodory_reduce, format_rational, hull_membership, rat, ratio, ConvexCombination, Rational, RationalPoint,
};
use crate::minkowski::{minkowski_sum_with_budget, WitnessedSum, DEFAULT_BUDGET};

/// `yⁱ` with its certificate over points of `Sᵢ`.
#[derive(Debug, Clone)]
pub struct SummandHullPoint {
    pub point: RationalPoint,
    pub certificate: ConvexCombination,
}

pub fn decompose_into_summand_hulls(w: &WitnessedSum, x: &RationalPoint) -> Result<Vec<SummandHullPoint>> {
    let n = w.dim();
    let Some(comb) = hull_membership(w.result(), x)? else {
        return Err(Error::OutsideHull { point: x.clone() });
    };
    let comb = caratheodory_reduce(&comb, n)?;
    let m = w.summands().len();
    let mut parts: Vec<Vec<(LatticePoint, Rational)>> = vec![Vec::new(); m];
    for (p, lam) in comb.support() {
        let wit = w.witness(p).expect("every sum point carries a witness");
        for (i, s) in wit.iter().enumerate() {
            parts[i].push((s.clone(), lam.clone()));
        }
    }
    let out: Vec<SummandHullPoint> = parts
        .into_iter()
        .map(|pairs| {
            let certificate = ConvexCombination::new(pairs).expect("witness weights form a convex combination");
            SummandHullPoint { point: certificate.target(), certificate }
        })
        .collect();
    let total = out.iter().fold(RationalPoint::zero(n), |acc, y| &acc + &y.point);
    assert_eq!(&total, x, "summand hull points do not add up to x");
    Ok(out)
}

/// `Tᵢ = Sᵢ ∩ N(yⁱ)` with a certificate of `yⁱ ∈ conv(Tᵢ)`.
#[derive(Debug, Clone)]
pub struct LocalRestriction {
    pub set: LatticeSet,
    pub certificate: ConvexCombination,
}

pub fn local_restrictions(sets: &[LatticeSet], ys: &[RationalPoint]) -> Result<Vec<LocalRestriction>> {
    if sets.len() != ys.len() {
        return Err(Error::Shape(format!("{} sets but {} hull points", sets.len(), ys.len())));
    }
    sets.iter()
        .zip(ys)
        .enumerate()
        .map(|(index, (s, y))| {
            if s.dim() != y.dim() {
                return Err(Error::DimensionMismatch { expected: s.dim(), found: y.dim() });
            }
            let t = s.intersect_neighborhood(y);
            match hull_membership(&t, y)? {
                Some(certificate) if !t.is_empty() => {
                    debug_assert!(t.fits_unit_cube());
                    Ok(LocalRestriction { set: t, certificate })
                }
                _ => Err(Error::NotIntegrallyConvex { index, witness: y.clone() }),
            }
        })
        .collect()
}

/// `x = Σ_{i∈I} xⁱ + Σ_{j∈J} zʲ` with `xⁱ ∈ conv(Tᵢ)` and `zʲ ∈ Tⱼ`.
/// Indices are 0-based.
#[derive(Debug, Clone)]
pub struct SfDecomposition {
    pub hull_points: Vec<(usize, SummandHullPoint)>,
    pub lattice_points: Vec<(usize, LatticePoint)>,
}

impl SfDecomposition {
    pub fn index_sets(&self) -> (Vec<usize>, Vec<usize>) {
        (
            self.hull_points.iter().map(|(i, _)| *i).collect(),
            self.lattice_points.iter().map(|(j, _)| *j).collect(),
        )
    }

    pub fn fractional_count(&self) -> usize {
        self.hull_points.len()
    }

    pub fn reconstruct(&self, dim: usize) -> RationalPoint {
        let mut x = RationalPoint::zero(dim);
        for (_, h) in &self.hull_points {
            x = &x + &h.point;
        }
        for (_, z) in &self.lattice_points {
            x.add_scaled_lattice(&Rational::one(), z);
        }
        x
    }
}

/// Splits the summands so at most `min(n, m)` contribute fractional points.
///
/// The certificates are stacked into one system with a convexity row per
/// summand and a coordinate row per dimension, and the joint weights are
/// pivoted to a basic solution. Its support has at most `n + m` columns, and
/// every summand keeps at least one, so at most `n` summands keep two or more.
pub fn sf_decompose(ts: &[LatticeSet], x: &RationalPoint, certs: &[ConvexCombination]) -> Result<SfDecomposition> {
    let m = ts.len();
    let n = x.dim();
    if certs.len() != m {
        return Err(Error::Shape(format!("{m} sets but {} certificates", certs.len())));
    }
    let mut total = RationalPoint::zero(n);
    for (i, (t, c)) in ts.iter().zip(certs).enumerate() {
        if c.dim() != n || t.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.dim().max(t.dim()) });
        }
        if let Some(p) = c.points().find(|p| !t.contains(p)) {
            return Err(Error::InvalidCertificate(format!(
                "certificate {i} uses {p:?}, which is not in its set"
            )));
        }
        total = &total + &c.target();
    }
    if total != *x {
        return Err(Error::InvalidCertificate(format!("certificates sum to {total}, not {x}")));
    }

    let columns: Vec<(usize, &LatticePoint)> = certs
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.points().map(move |p| (i, p)))
        .collect();
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(m + n);
    for i in 0..m {
        a.push(columns.iter().map(|(k, _)| if *k == i { rat(1) } else { rat(0) }).collect());
    }
    for d in 0..n {
        a.push(columns.iter().map(|(_, p)| rat(p[d])).collect());
    }
    let weights: Vec<Rational> = certs.iter().flat_map(|c| c.support().iter().map(|(_, w)| w.clone())).collect();
    let basic = reduce_to_basic(&a, &weights);

    let mut per_set: Vec<Vec<(LatticePoint, Rational)>> = vec![Vec::new(); m];
    for ((i, p), w) in columns.iter().zip(basic) {
        if w.is_positive() {
            per_set[*i].push(((*p).clone(), w));
        }
    }
    let mut hull_points = Vec::new();
    let mut lattice_points = Vec::new();
    for (i, pairs) in per_set.into_iter().enumerate() {
        if pairs.len() == 1 {
            lattice_points.push((i, pairs[0].0.clone()));
        } else {
            let certificate = ConvexCombination::new(pairs)?;
            hull_points.push((i, SummandHullPoint { point: certificate.target(), certificate }));
        }
    }
    let dec = SfDecomposition { hull_points, lattice_points };
    assert!(dec.fractional_count() <= n.min(m), "basic solution left too many fractional summands");
    assert_eq!(&dec.reconstruct(n), x, "decomposition does not reconstruct x");
    Ok(dec)
}

/// ℓ∞-nearest point of a unit-cube set `S` to a certified `x ∈ conv(S)`,
/// lexicographically first among ties. The distance is at most `1 − 1/n`.
pub fn cube_round(s: &LatticeSet, x: &RationalPoint, cert: &ConvexCombination) -> Result<LatticePoint> {
    let n = x.dim();
    if n < 2 {
        return Err(Error::InvalidArgument("cube rounding needs n ≥ 2".into()));
    }
    if s.dim() != n {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: n });
    }
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if !s.fits_unit_cube() {
        return Err(Error::InvalidArgument(format!("{s} is not contained in a translated unit cube")));
    }
    cert.verify(x)?;
    if let Some(p) = cert.points().find(|p| !s.contains(p)) {
        return Err(Error::InvalidCertificate(format!("certificate point {p:?} is not in the set")));
    }
    let mut best: Option<(Rational, &LatticePoint)> = None;
    for p in s.iter() {
        let d = x.linf_distance(p);
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, p));
        }
    }
    let (d, p) = best.expect("nonempty set");
    let bound = rat(1) - ratio(1, n as i64);
    assert!(d <= bound, "cube rounding distance {} exceeds 1 - 1/n", format_rational(&d));
    Ok(p.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    Linf,
    L2,
    /// Run both pipelines and keep the smaller ℓ∞ distance.
    Best,
}

/// Which guarantee a rounding result is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    /// Integrally convex summands, `‖x − z‖∞ ≤ α(n,m)`.
    IntegrallyConvexLinf,
    /// Integrally convex summands, `‖x − z‖₂ ≤ β(n,m)`.
    IntegrallyConvexL2,
    /// Integrally convex summands, `‖x − z‖∞ ≤ min(α, β)`.
    IntegrallyConvexBest,
    /// M♮-convex summands, `‖x − z‖∞ ≤ 1 − 1/n`.
    MnatLinf,
    /// L♮-convex summands, pairwise sums, `‖x − z‖∞ ≤ α(n,⌈m/2⌉)`.
    LnatLinf,
    /// L♮-convex summands, pairwise sums, `‖x − z‖₂ ≤ β(n,⌈m/2⌉)`.
    LnatL2,
    /// L♮-convex summands, pairwise sums, `‖x − z‖∞ ≤ min(α, β)` at `⌈m/2⌉`.
    LnatBest,
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Guarantee::IntegrallyConvexLinf => "integrally-convex-linf",
            Guarantee::IntegrallyConvexL2 => "integrally-convex-l2",
            Guarantee::IntegrallyConvexBest => "integrally-convex-min",
            Guarantee::MnatLinf => "mnat-linf",
            Guarantee::LnatLinf => "lnat-linf",
            Guarantee::LnatL2 => "lnat-l2",
            Guarantee::LnatBest => "lnat-min",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Linf(Rational),
    L2Squared(Rational),
    /// `‖x − z‖∞ ≤ min(alpha, √beta_sq)`.
    LinfMin { alpha: Rational, beta_sq: Rational },
}

impl Bound {
    pub fn admits(&self, distance_linf: &Rational, distance_l2_sq: &Rational) -> bool {
        match self {
            Bound::Linf(b) => distance_linf <= b,
            Bound::L2Squared(b) => distance_l2_sq <= b,
            Bound::LinfMin { alpha, beta_sq } => {
                distance_linf <= alpha || (distance_linf * distance_linf) <= *beta_sq
            }
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Linf(b) => write!(f, "linf <= {}", format_rational(b)),
            Bound::L2Squared(b) => write!(f, "l2^2 <= {}", format_rational(b)),
            Bound::LinfMin { alpha, beta_sq } => write!(
                f,
                "linf <= min({}, sqrt({}))",
                format_rational(alpha),
                format_rational(beta_sq)
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RoundingResult {
    pub z: LatticePoint,
    pub distance_linf: Rational,
    pub distance_l2_sq: Rational,
    pub bound: Bound,
    /// For integral `x`: the integer ℓ∞ bound that applies.
    pub integral_bound: Option<u64>,
    pub guarantee: Guarantee,
    /// Number of summands the bound was evaluated at (`⌈m/2⌉` for L♮ pairing).
    pub effective_summands: usize,
    /// Present when the ℓ∞ pipeline ran to completion.
    pub decomposition: Option<SfDecomposition>,
}

#[derive(Debug, Clone)]
pub struct RoundOptions {
    /// Verify the summands' class before rounding. When false the caller
    /// vouches for it; a non-integrally-convex summand can still be caught
    /// while certifying the local restrictions.
    pub verify_class: bool,
    pub budget: u128,
}

impl Default for RoundOptions {
    fn default() -> Self {
        RoundOptions { verify_class: true, budget: DEFAULT_BUDGET }
    }
}

fn check_inputs(sets: &[LatticeSet], x: &RationalPoint, min_dim: usize) -> Result<()> {
    if sets.is_empty() {
        return Err(Error::InvalidArgument("at least one summand is required".into()));
    }
    for s in sets {
        if s.dim() != x.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), found: x.dim() });
        }
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
    }
    if x.dim() < min_dim {
        return Err(Error::InvalidArgument(format!("this bound needs n ≥ {min_dim} (got n = {})", x.dim())));
    }
    Ok(())
}

fn verify_integrally_convex(sets: &[LatticeSet]) -> Result<()> {
    for (index, s) in sets.iter().enumerate() {
        if let Some(witness) = integral_convexity_violation(s)? {
            return Err(Error::NotIntegrallyConvex { index, witness });
        }
    }
    Ok(())
}

fn finish(
    x: &RationalPoint,
    z: LatticePoint,
    w: &WitnessedSum,
    bound: Bound,
    integral_bound: Option<u64>,
    guarantee: Guarantee,
    decomposition: Option<SfDecomposition>,
) -> RoundingResult {
    assert!(w.result().contains(&z), "rounded point is not in the Minkowski sum");
    let distance_linf = x.linf_distance(&z);
    let distance_l2_sq = x.l2_sq_distance(&z);
    assert!(
        bound.admits(&distance_linf, &distance_l2_sq),
        "rounding distance violates {bound} ({guarantee})"
    );
    if let Some(k) = integral_bound {
        assert!(distance_linf <= rat(k as i64), "integral rounding distance exceeds {k}");
    }
    RoundingResult {
        z,
        distance_linf,
        distance_l2_sq,
        bound,
        integral_bound,
        guarantee,
        effective_summands: w.summands().len(),
        decomposition,
    }
}

fn short_circuit(w: &WitnessedSum, x: &RationalPoint) -> Option<LatticePoint> {
    x.to_lattice().filter(|z| w.result().contains(z))
}

fn linf_on_sum(w: &WitnessedSum, x: &RationalPoint, guarantee: Guarantee) -> Result<RoundingResult> {
    let n = x.dim();
    let m = w.summands().len();
    let pair = bound_pair(n as u64, m as u64)?;
    let integral_bound = x.is_integral().then_some(pair.floor_alpha);
    let bound = Bound::Linf(pair.alpha);
    if let Some(z) = short_circuit(w, x) {
        return Ok(finish(x, z, w, bound, integral_bound, guarantee, None));
    }
    let ys = decompose_into_summand_hulls(w, x)?;
    let points: Vec<RationalPoint> = ys.iter().map(|y| y.point.clone()).collect();
    let locals = local_restrictions(w.summands(), &points)?;
    let ts: Vec<LatticeSet> = locals.iter().map(|l| l.set.clone()).collect();
    let certs: Vec<ConvexCombination> = locals.into_iter().map(|l| l.certificate).collect();
    let dec = sf_decompose(&ts, x, &certs)?;

    let mut z = vec![0i64; n];
    for (i, h) in &dec.hull_points {
        let v = cube_round(&ts[*i], &h.point, &h.certificate)?;
        z.iter_mut().zip(&v).for_each(|(a, b)| *a += b);
    }
    for (_, p) in &dec.lattice_points {
        z.iter_mut().zip(p).for_each(|(a, b)| *a += b);
    }
    Ok(finish(x, z, w, bound, integral_bound, guarantee, Some(dec)))
}

fn l2_on_sum(w: &WitnessedSum, x: &RationalPoint, guarantee: Guarantee, budget: u128) -> Result<RoundingResult> {
    let n = x.dim();
    let m = w.summands().len();
    let pair = bound_pair(n as u64, m as u64)?;
    let integral_bound = x.is_integral().then_some(pair.floor_beta);
    let bound = Bound::L2Squared(pair.beta_sq);
    if let Some(z) = short_circuit(w, x) {
        return Ok(finish(x, z, w, bound, integral_bound, guarantee, None));
    }
    let ys = decompose_into_summand_hulls(w, x)?;
    let points: Vec<RationalPoint> = ys.iter().map(|y| y.point.clone()).collect();
    let locals = local_restrictions(w.summands(), &points)?;
    let ts: Vec<LatticeSet> = locals.into_iter().map(|l| l.set).collect();
    let local_sum = minkowski_sum_with_budget(&ts, budget)?;
    let z = nearest_l2(local_sum.result(), x);
    Ok(finish(x, z, w, bound, integral_bound, guarantee, None))
}

fn nearest_l2(s: &LatticeSet, x: &RationalPoint) -> LatticePoint {
    let mut best: Option<(Rational, &LatticePoint)> = None;
    for p in s.iter() {
        let d = x.l2_sq_distance(p);
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, p));
        }
    }
    best.expect("nonempty set").1.clone()
}

fn best_on_sum(w: &WitnessedSum, x: &RationalPoint, guarantee: Guarantee, budget: u128) -> Result<RoundingResult> {
    let n = x.dim() as u64;
    let m = w.summands().len() as u64;
    let pair = bound_pair(n, m)?;
    let linf = linf_on_sum(w, x, guarantee)?;
    let l2 = l2_on_sum(w, x, guarantee, budget)?;
    let chosen = match l2.distance_linf.cmp(&linf.distance_linf) {
        Ordering::Less => l2,
        _ => linf,
    };
    let bound = Bound::LinfMin { alpha: alpha(n, m), beta_sq: beta_sq(n, m) };
    let integral_bound = x.is_integral().then_some(pair.floor_alpha.min(pair.floor_beta));
    Ok(finish(x, chosen.z, w, bound, integral_bound, guarantee, chosen.decomposition))
}

/// Rounds `x ∈ conv(S₁ + … + S_m)` for integrally convex `Sᵢ` to `z ∈ W` with
/// `‖x − z‖∞ ≤ α(n,m)`, or `≤ min(n,m) − 1` when `x` is integral. Needs `n ≥ 2`.
pub fn sf_round_linf(sets: &[LatticeSet], x: &RationalPoint, opts: &RoundOptions) -> Result<RoundingResult> {
    check_inputs(sets, x, 2)?;
    if opts.verify_class {
        verify_integrally_convex(sets)?;
    }
    let w = minkowski_sum_with_budget(sets, opts.budget)?;
    linf_on_sum(&w, x, Guarantee::IntegrallyConvexLinf)
}

/// Like [`sf_round_linf`] but with `‖x − z‖₂ ≤ β(n,m)`; accepts `n = 1`.
pub fn sf_round_l2(sets: &[LatticeSet], x: &RationalPoint, opts: &RoundOptions) -> Result<RoundingResult> {
    check_inputs(sets, x, 1)?;
    if opts.verify_class {
        verify_integrally_convex(sets)?;
    }
    let w = minkowski_sum_with_budget(sets, opts.budget)?;
    l2_on_sum(&w, x, Guarantee::IntegrallyConvexL2, opts.budget)
}

/// Better of the two pipelines, checked against `min(α, β)`.
pub fn sf_round_best(sets: &[LatticeSet], x: &RationalPoint, opts: &RoundOptions) -> Result<RoundingResult> {
    check_inputs(sets, x, 2)?;
    if opts.verify_class {
        verify_integrally_convex(sets)?;
    }
    let w = minkowski_sum_with_budget(sets, opts.budget)?;
    best_on_sum(&w, x, Guarantee::IntegrallyConvexBest, opts.budget)
}

/// Rounds for M♮-convex summands within `1 − 1/n`: the sum is itself
/// M♮-convex, so it is rounded as a single integrally convex summand.
pub fn mnat_round(sets: &[LatticeSet], x: &RationalPoint, opts: &RoundOptions) -> Result<RoundingResult> {
    check_inputs(sets, x, 2)?;
    if opts.verify_class {
        for (index, s) in sets.iter().enumerate() {
            if let Some(violation) = mnat_violation(s)? {
                return Err(Error::NotMnatConvex { index, violation });
            }
        }
    }
    let w = minkowski_sum_with_budget(sets, opts.budget)?;
    let n = x.dim();
    let bound = Bound::Linf(alpha(n as u64, 1));
    let integral_bound = x.is_integral().then_some(0);
    if hull_membership(w.result(), x)?.is_none() {
        return Err(Error::OutsideHull { point: x.clone() });
    }
    let single = minkowski_sum_with_budget(std::slice::from_ref(w.result()), opts.budget)?;
    if let Some(z) = short_circuit(&w, x) {
        return Ok(finish(x, z, &single, bound, integral_bound, Guarantee::MnatLinf, None));
    }
    let local = local_restrictions(std::slice::from_ref(w.result()), std::slice::from_ref(x))?
        .pop()
        .expect("one restriction");
    let z = cube_round(&local.set, x, &local.certificate)?;
    Ok(finish(x, z, &single, bound, integral_bound, Guarantee::MnatLinf, None))
}

/// Rounds for L♮-convex summands by pairing consecutive summands, whose
/// sums are integrally convex, and rounding with `⌈m/2⌉` summands.
pub fn lnat_round(sets: &[LatticeSet], x: &RationalPoint, norm: Norm, opts: &RoundOptions) -> Result<RoundingResult> {
    check_inputs(sets, x, 2)?;
    if opts.verify_class {
        for (index, s) in sets.iter().enumerate() {
            if let Some(violation) = lnat_violation(s)? {
                return Err(Error::NotLnatConvex { index, violation });
            }
        }
    }
    let paired = pair_summands(sets, opts.budget)?;
    let w = minkowski_sum_with_budget(&paired, opts.budget)?;
    match norm {
        Norm::Linf => linf_on_sum(&w, x, Guarantee::LnatLinf),
        Norm::L2 => l2_on_sum(&w, x, Guarantee::LnatL2, opts.budget),
        Norm::Best => best_on_sum(&w, x, Guarantee::LnatBest, opts.budget),
    }
}

/// `S₁+S₂, S₃+S₄, …` with an odd leftover kept alone. Each pairwise sum of
/// L♮-convex sets is integrally convex; this is asserted.
pub fn pair_summands(sets: &[LatticeSet], budget: u128) -> Result<Vec<LatticeSet>> {
    sets.chunks(2)
        .map(|chunk| {
            if chunk.len() == 1 {
                return Ok(chunk[0].clone());
            }
            let sum = minkowski_sum_with_budget(chunk, budget)?.result().clone();
            if let Some(v) = integral_convexity_violation(&sum)? {
                panic!("sum of two L-natural-convex sets is not integrally convex at {v}");
            }
            Ok(sum)
        })
        .collect()
}

/// Applies the requested pipeline for integrally convex summands.
pub fn sf_round(sets: &[LatticeSet], x: &RationalPoint, norm: Norm, opts: &RoundOptions) -> Result<RoundingResult> {
    match norm {
        Norm::Linf => sf_round_linf(sets, x, opts),
        Norm::L2 => sf_round_l2(sets, x, opts),
        Norm::Best => sf_round_best(sets, x, opts),
    }
}
