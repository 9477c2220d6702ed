use latsf::discrete_sets::{is_mnat_convex, LatticePoint};
use latsf::exact_geometry::{hull_membership, ratio, RationalPoint};
use latsf::minkowski::{find_holes, minkowski_sum, minkowski_sum_with_budget};
use latsf::oracle::{enumerate_class_sets, ClassFilter, InstanceFamily};
use latsf::{Error, ErrorKind, LatticeSet};
use proptest::prelude::*;

fn set(dim: usize, pts: &[&[i64]]) -> LatticeSet {
    LatticeSet::new(dim, pts.iter().map(|p| p.to_vec())).unwrap()
}

fn three_lnat_segments() -> Vec<LatticeSet> {
    vec![
        set(3, &[&[0, 0, 0], &[1, 1, 0]]),
        set(3, &[&[0, 0, 0], &[0, 1, 1]]),
        set(3, &[&[0, 0, 0], &[1, 0, 1]]),
    ]
}

#[test]
fn three_segment_sum_has_single_hole() {
    let w = minkowski_sum(&three_lnat_segments()).unwrap();
    let expected = set(
        3,
        &[&[0, 0, 0], &[0, 1, 1], &[1, 1, 0], &[1, 0, 1], &[2, 1, 1], &[1, 1, 2], &[1, 2, 1], &[2, 2, 2]],
    );
    assert_eq!(w.result(), &expected);
    assert_eq!(find_holes(&w).unwrap().points(), &[vec![1, 1, 1]]);
    for (p, wit) in w.witnesses() {
        let total: LatticePoint = (0..3).map(|d| wit.iter().map(|s| s[d]).sum()).collect();
        assert_eq!(&total, p);
    }
}

#[test]
fn budget_is_a_resource_error() {
    let s = LatticeSet::new(1, (0..10).map(|v| vec![v])).unwrap();
    let err = minkowski_sum_with_budget(&[s.clone(), s.clone(), s], 999).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Resource);
    assert!(matches!(err, Error::BudgetExceeded { required: 1000, budget: 999 }));
}

#[test]
fn mnat_sums_on_small_boxes_stay_mnat_and_hole_free() {
    let family = InstanceFamily::new(vec![0, 0], vec![2, 1], ClassFilter::Mnat, 0).unwrap();
    let sets: Vec<LatticeSet> = enumerate_class_sets(&family).unwrap().collect();
    for a in &sets {
        for b in &sets {
            let w = minkowski_sum(&[a.clone(), b.clone()]).unwrap();
            assert!(is_mnat_convex(w.result()).unwrap(), "{a} + {b}");
            assert!(find_holes(&w).unwrap().is_empty(), "{a} + {b}");
        }
    }
}

fn small_sets(dim: usize) -> impl Strategy<Value = LatticeSet> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, dim), 1..=4)
        .prop_map(move |pts| LatticeSet::new(dim, pts).unwrap())
}

proptest! {
    #[test]
    fn sum_is_commutative_and_associative(a in small_sets(2), b in small_sets(2), c in small_sets(2)) {
        let abc = minkowski_sum(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let cba = minkowski_sum(&[c.clone(), b.clone(), a.clone()]).unwrap();
        prop_assert_eq!(abc.result(), cba.result());
        let ab = minkowski_sum(&[a, b]).unwrap();
        let ab_c = minkowski_sum(&[ab.result().clone(), c]).unwrap();
        prop_assert_eq!(abc.result(), ab_c.result());
    }

    #[test]
    fn hull_of_sum_is_sum_of_hulls(
        a in small_sets(2),
        b in small_sets(2),
        wa in prop::collection::vec(1i64..5, 4),
        wb in prop::collection::vec(1i64..5, 4),
    ) {
        // A point of conv(A) + conv(B) built from per-summand combinations.
        let mut x = RationalPoint::zero(2);
        for (s, w) in [(&a, &wa), (&b, &wb)] {
            let total: i64 = w[..s.len()].iter().sum();
            for (p, k) in s.iter().zip(w) {
                x.add_scaled_lattice(&ratio(*k, total), p);
            }
        }
        let sum = minkowski_sum(&[a, b]).unwrap();
        let cert = hull_membership(sum.result(), &x).unwrap();
        prop_assert!(cert.is_some());
        // And back: push the combination through the witnesses.
        let ys = latsf::shapley_folkman::decompose_into_summand_hulls(&sum, &x).unwrap();
        let back = &ys[0].point + &ys[1].point;
        prop_assert_eq!(back, x);
    }
}
