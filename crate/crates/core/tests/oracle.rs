use latsf::discrete_sets::is_integrally_convex;
use latsf::exact_geometry::{hull_membership, rat, RationalPoint};
use latsf::minkowski::minkowski_sum;
use latsf::oracle::generate::membership_instance;
use latsf::oracle::suites::plane_subsets;
use latsf::oracle::{oracle_integral_convexity, oracle_membership, oracle_nearest, OracleNorm};
use latsf::LatticeSet;
use proptest::prelude::*;

fn set(dim: usize, pts: &[&[i64]]) -> LatticeSet {
    LatticeSet::new(dim, pts.iter().map(|p| p.to_vec())).unwrap()
}

#[test]
fn nearest_point_examples() {
    let w = minkowski_sum(&[set(2, &[&[0, 0], &[1, 1]]), set(2, &[&[1, 0], &[0, 1]])]).unwrap();
    let (_, d) = oracle_nearest(&w, &RationalPoint::from_lattice(&[1, 1]), OracleNorm::Linf).unwrap();
    assert_eq!(d, rat(1));
    let w = minkowski_sum(&[
        set(3, &[&[0, 0, 0], &[1, 1, 0]]),
        set(3, &[&[0, 0, 0], &[0, 1, 1]]),
        set(3, &[&[0, 0, 0], &[1, 0, 1]]),
    ])
    .unwrap();
    let (_, d) = oracle_nearest(&w, &RationalPoint::from_lattice(&[1, 1, 1]), OracleNorm::Linf).unwrap();
    assert_eq!(d, rat(1));
}

#[test]
fn integral_convexity_oracle_matches_on_every_plane_subset() {
    for s in plane_subsets() {
        assert_eq!(oracle_integral_convexity(&s).unwrap(), is_integrally_convex(&s).unwrap(), "{s}");
    }
}

#[test]
fn membership_oracle_matches_on_seeded_family() {
    for i in 0..1000 {
        let (s, x) = membership_instance(2024, i);
        let certified = hull_membership(&s, &x).unwrap().is_some();
        assert_eq!(oracle_membership(&s, &x).unwrap(), certified, "index {i}: {s}, {x}");
    }
}

proptest! {
    #[test]
    fn oracles_agree_on_random_plane_sets(pts in prop::collection::vec(prop::collection::vec(0i64..=3, 2), 1..=7)) {
        let s = LatticeSet::new(2, pts).unwrap();
        prop_assert_eq!(oracle_integral_convexity(&s).unwrap(), is_integrally_convex(&s).unwrap());
    }

    #[test]
    fn oracles_agree_on_random_space_sets(pts in prop::collection::vec(prop::collection::vec(0i64..=2, 3), 1..=6)) {
        let s = LatticeSet::new(3, pts).unwrap();
        prop_assert_eq!(oracle_integral_convexity(&s).unwrap(), is_integrally_convex(&s).unwrap());
    }
}
