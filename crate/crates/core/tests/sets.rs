use latsf::discrete_sets::{
    find_hole, integral_neighborhood, is_hole_free, is_integrally_convex, is_lnat_convex, is_mnat_convex,
    satisfies_midpoint_criterion,
};
use latsf::exact_geometry::{ratio, RationalPoint};
use latsf::oracle::suites::plane_subsets;
use latsf::LatticeSet;
use proptest::prelude::*;

fn set(dim: usize, pts: &[&[i64]]) -> LatticeSet {
    LatticeSet::new(dim, pts.iter().map(|p| p.to_vec())).unwrap()
}

#[test]
fn neighborhoods() {
    let n = integral_neighborhood(&RationalPoint::new(vec![ratio(1, 2), ratio(3, 4)]));
    assert_eq!(n.members, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    let n = integral_neighborhood(&RationalPoint::new(vec![ratio(1, 1), ratio(1, 2)]));
    assert_eq!(n.members, vec![vec![1, 0], vec![1, 1]]);
    let n = integral_neighborhood(&RationalPoint::from_lattice(&[2, 3]));
    assert_eq!(n.members, vec![vec![2, 3]]);
}

#[test]
fn predicate_examples() {
    let with_hole = set(2, &[&[1, 0], &[0, 1], &[2, 1], &[1, 2]]);
    assert!(!is_integrally_convex(&with_hole).unwrap());
    assert_eq!(find_hole(&with_hole).unwrap(), Some(vec![1, 1]));
    assert!(!is_integrally_convex(&set(2, &[&[0, 0], &[2, 1]])).unwrap());
    assert!(is_hole_free(&set(2, &[&[0, 0], &[1, 0], &[2, 0]])).unwrap());

    let sum3 = set(
        3,
        &[&[0, 0, 0], &[0, 1, 1], &[1, 1, 0], &[1, 0, 1], &[2, 1, 1], &[1, 1, 2], &[1, 2, 1], &[2, 2, 2]],
    );
    assert_eq!(find_hole(&sum3).unwrap(), Some(vec![1, 1, 1]));

    assert!(is_mnat_convex(&set(2, &[&[5, 7]])).unwrap());
    assert!(!is_mnat_convex(&set(2, &[&[0, 0], &[1, 1]])).unwrap());
    assert!(is_mnat_convex(&set(2, &[&[0, 0], &[1, 0], &[0, 1]])).unwrap());

    assert!(is_lnat_convex(&set(3, &[&[0, 0, 0], &[1, 1, 0]])).unwrap());
    assert!(!is_lnat_convex(&set(2, &[&[1, 0], &[0, 1]])).unwrap());
    assert!(is_lnat_convex(&set(2, &[&[0, 0], &[1, 1]])).unwrap());
}

#[test]
fn every_subset_of_unit_cube_is_integrally_convex() {
    let cube: Vec<Vec<i64>> = (0..8).map(|k| vec![k & 1, (k >> 1) & 1, (k >> 2) & 1]).collect();
    for mask in 1u32..256 {
        let s = LatticeSet::new(3, cube.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| p.clone()))
            .unwrap();
        assert!(is_integrally_convex(&s).unwrap(), "{s}");
    }
}

#[test]
fn class_implications_on_all_plane_subsets() {
    let subsets = plane_subsets();
    assert_eq!(subsets.len(), 511);
    for s in subsets {
        let ic = is_integrally_convex(&s).unwrap();
        if is_mnat_convex(&s).unwrap() || is_lnat_convex(&s).unwrap() {
            assert!(ic, "{s}");
        }
        if ic {
            assert!(is_hole_free(&s).unwrap(), "{s}");
        }
        assert_eq!(satisfies_midpoint_criterion(&s).unwrap(), ic, "{s}");
    }
}

proptest! {
    #[test]
    fn neighborhood_size_counts_fractional_coordinates(
        coords in prop::collection::vec((-5i64..5, 1i64..4), 1..=4)
    ) {
        let x = RationalPoint::new(coords.iter().map(|&(a, b)| ratio(a, b)).collect());
        let fractional = x.coords().iter().filter(|c| !c.is_integer()).count();
        let n = integral_neighborhood(&x);
        prop_assert_eq!(n.members.len(), 1 << fractional);
        for z in &n.members {
            prop_assert!(x.linf_distance(z) < ratio(1, 1));
        }
    }

    #[test]
    fn integrally_convex_sets_are_hole_free(pts in prop::collection::vec(prop::collection::vec(0i64..=3, 2), 1..=8)) {
        let s = LatticeSet::new(2, pts).unwrap();
        if is_integrally_convex(&s).unwrap() {
            prop_assert!(is_hole_free(&s).unwrap());
            prop_assert!(satisfies_midpoint_criterion(&s).unwrap());
        }
    }

    #[test]
    fn boxes_belong_to_every_class(lo in prop::collection::vec(-2i64..2, 1..=3), ext in prop::collection::vec(0i64..3, 3)) {
        let hi: Vec<i64> = lo.iter().zip(&ext).map(|(l, e)| l + e).collect();
        let s = LatticeSet::new(lo.len(), latsf::discrete_sets::box_points(&lo, &hi)).unwrap();
        prop_assert!(is_integrally_convex(&s).unwrap());
        prop_assert!(is_mnat_convex(&s).unwrap());
        prop_assert!(is_lnat_convex(&s).unwrap());
        prop_assert!(is_hole_free(&s).unwrap());
    }
}
