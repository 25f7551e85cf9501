use coarse_geom::caps::ResourceCaps;
use coarse_geom::rational::{int, ratio};
use coarse_geom::rips::build_rips2;
use coarse_geom::spaces::{bridged_circles, build_window, circle_space, Elem, FiniteMetricSpace, GeneratingSet, GroupFamily};
use coarse_geom::Error;
use proptest::prelude::*;

fn window(family: GroupFamily, radius: usize) -> coarse_geom::spaces::GroupWindow {
    build_window(&family, &GeneratingSet::standard(&family), radius, &ResourceCaps::default()).unwrap()
}

#[test]
fn ball_sizes_match_growth_formulas() {
    // |B(n)| in Z² is 2n² + 2n + 1; in Free(2) it is 2·3ⁿ − 1.
    for n in 0..6 {
        assert_eq!(window(GroupFamily::FreeAbelian { rank: 2 }, n).len(), 2 * n * n + 2 * n + 1);
        assert_eq!(window(GroupFamily::Free { rank: 2 }, n).len(), 2 * 3usize.pow(n as u32) - 1);
    }
    assert_eq!(window(GroupFamily::line(), 7).len(), 15);
}

#[test]
fn window_distances_are_word_distances() {
    let w = window(GroupFamily::FreeAbelian { rank: 2 }, 4);
    let s = w.space();
    for i in 0..w.len() {
        for j in 0..w.len() {
            let (a, b) = (&w.element(i).0, &w.element(j).0);
            let l1 = (a[0] - b[0]).abs() + (a[1] - b[1]).abs();
            assert_eq!(s.distance(i, j), int(l1));
        }
    }
    s.check_metric_axioms().unwrap();
}

#[test]
fn heisenberg_commutator_is_central() {
    let h = GroupFamily::HeisenbergZ;
    let (x, y) = (Elem::new([1, 0, 0]), Elem::new([0, 1, 0]));
    let c = h.product([&x, &y, &h.inverse(&x), &h.inverse(&y)]);
    assert_eq!(c, Elem::new([0, 0, 2]));
    assert_eq!(h.multiply(&c, &x), h.multiply(&x, &c));
    assert_eq!(window(h, 2).word_length_of(&c), Some(4));
}

#[test]
fn ball_cap_is_enforced() {
    let caps = ResourceCaps { max_ball_size: 100, ..ResourceCaps::default() };
    let f2 = GroupFamily::Free { rank: 2 };
    let err = build_window(&f2, &GeneratingSet::standard(&f2), 6, &caps).unwrap_err();
    assert!(matches!(err, Error::ResourceCap { .. }));
}

#[test]
fn circle_distances_are_arc_lengths() {
    let c = circle_space(int(10), 5).unwrap();
    assert_eq!(c.space().distance(0, 1), int(2));
    assert_eq!(c.space().distance(0, 3), int(4));
    assert_eq!(c.space().diameter(), int(4));
    let half = circle_space(int(3), 6).unwrap();
    assert_eq!(half.space().distance(0, 1), ratio(1, 2));
}

#[test]
fn rips_of_the_circle() {
    let c = circle_space(int(9), 9).unwrap();
    let r1 = build_rips2(c.space(), int(1)).unwrap();
    assert_eq!(r1.edges().len(), 9);
    assert!(r1.triangles().is_empty());
    assert!(r1.is_edge_path(&c.full_loop(1)));
    let r3 = build_rips2(c.space(), int(3)).unwrap();
    assert!(r3.is_connected());
    assert!(!r3.triangles().is_empty());
}

#[test]
fn bridged_circles_are_metric() {
    let s = bridged_circles(&[6, 9, 12]).unwrap();
    s.check_metric_axioms().unwrap();
    assert_eq!(s.len(), 6 + 9 + 12 + 1);
}

#[test]
fn json_round_trip() {
    let s = window(GroupFamily::HeisenbergZ, 2).into_space();
    let back = FiniteMetricSpace::from_json(&s.to_json()).unwrap();
    assert_eq!(back.labels(), s.labels());
    for i in 0..s.len() {
        for j in 0..s.len() {
            assert_eq!(back.distance(i, j), s.distance(i, j));
        }
    }
}

#[test]
fn rejects_non_metrics() {
    let labels = vec!["a".to_string(), "b".to_string(), "c".to_string()];
    let d = |v: [[i64; 3]; 3]| v.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<Vec<_>>>();
    assert!(FiniteMetricSpace::new(labels.clone(), d([[0, 1, 5], [1, 0, 1], [5, 1, 0]]), 0).is_err());
    assert!(FiniteMetricSpace::new(labels.clone(), d([[0, 1, 1], [2, 0, 1], [1, 1, 0]]), 0).is_err());
    assert!(FiniteMetricSpace::new(labels, d([[0, 0, 1], [0, 0, 1], [1, 1, 0]]), 0).is_err());
}

proptest! {
    #[test]
    fn circles_satisfy_metric_axioms(num in 2i64..40, den in 1i64..5, n in 3usize..24) {
        let c = circle_space(ratio(num, den), n).unwrap();
        prop_assert!(c.space().check_metric_axioms().is_ok());
    }

    #[test]
    fn subspaces_inherit_distances(keep in proptest::collection::btree_set(0usize..25, 1..10)) {
        let w = window(GroupFamily::FreeAbelian { rank: 2 }, 3);
        let pts: Vec<usize> = keep.into_iter().collect();
        let sub = w.space().subspace(&pts, 0).unwrap();
        prop_assert!(sub.check_metric_axioms().is_ok());
        for (a, &i) in pts.iter().enumerate() {
            for (b, &j) in pts.iter().enumerate() {
                prop_assert_eq!(sub.distance(a, b), w.space().distance(i, j));
            }
        }
    }
}
