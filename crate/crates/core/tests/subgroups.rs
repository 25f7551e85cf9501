use coarse_geom::cli::random_subgroup_words;
use coarse_geom::spaces::{Elem, GeneratingSet, GroupFamily, Homomorphism};
use coarse_geom::subgroups::{ms_generators, ms_rewrite, t_ball, verify_rewrite, CosetData};

fn cosets(family: GroupFamily, target: GroupFamily, images: Vec<Elem>, transversal: &[&str]) -> CosetData {
    let phi = Homomorphism::new(family.clone(), target, images).unwrap();
    let t = transversal.iter().map(|s| family.parse_element(s).unwrap()).collect();
    CosetData::new(phi, t, GeneratingSet::standard(&family)).unwrap()
}

fn check_rewrites(data: &CosetData, seed: u64) {
    let t = ms_generators(data);
    assert!(t.verify(data));
    for w in random_subgroup_words(data, 100, 12, seed).unwrap() {
        let rw = ms_rewrite(data, &t, &w).unwrap();
        assert!(verify_rewrite(data, &t, &w, &rw), "word {w:?}");
    }
}

#[test]
fn index_two_in_free_group() {
    let data = cosets(GroupFamily::Free { rank: 2 }, GroupFamily::Cyclic { modulus: 2 }, vec![Elem::scalar(1); 2], &["e", "a"]);
    assert_eq!(data.index(), 2);
    assert_eq!(ms_generators(&data).up_to_inversion(data.family()).len(), 3);
    for seed in 1..4 {
        check_rewrites(&data, seed);
    }
}

#[test]
fn index_three_in_free_group() {
    // Schreier's formula: rank 1 + 3·(2 − 1) = 4.
    let data = cosets(
        GroupFamily::Free { rank: 2 },
        GroupFamily::Cyclic { modulus: 3 },
        vec![Elem::scalar(1), Elem::scalar(0)],
        &["e", "a", "aa"],
    );
    assert_eq!(ms_generators(&data).up_to_inversion(data.family()).len(), 4);
    check_rewrites(&data, 7);
}

#[test]
fn finite_index_in_free_abelian_group() {
    let z2 = GroupFamily::FreeAbelian { rank: 2 };
    let data = cosets(z2, GroupFamily::Cyclic { modulus: 4 }, vec![Elem::scalar(1), Elem::scalar(1)], &["(0,0)", "(1,0)", "(2,0)", "(3,0)"]);
    check_rewrites(&data, 3);
    let t = ms_generators(&data);
    let ball = t_ball(data.family(), &t, 2);
    assert!(ball.iter().all(|g| data.contains(g)));
    assert!(ball.contains(&Elem::new([1, -1])));
}

#[test]
fn seeded_words_are_reproducible() {
    let data = cosets(GroupFamily::Free { rank: 2 }, GroupFamily::Cyclic { modulus: 2 }, vec![Elem::scalar(1); 2], &["e", "a"]);
    assert_eq!(random_subgroup_words(&data, 20, 8, 5).unwrap(), random_subgroup_words(&data, 20, 8, 5).unwrap());
}
