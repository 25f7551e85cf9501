use coarse_geom::caps::ResourceCaps;
use coarse_geom::cli::{even_sublattice_certificate, line_over_cyclic};
use coarse_geom::coarse::{
    based_loops, coarse_sc_probe, filtration_probe, CoveringMap, LiftOutcome, LoopFamily, ScProbeConfig, ScVerdict,
};
use coarse_geom::homotopy::{contract_loop, SearchBudget};
use coarse_geom::rational::int;
use coarse_geom::spaces::{bridged_circles, build_window, circle_space, Elem, GeneratingSet, GroupFamily, Homomorphism};

#[test]
fn probe_verdict_is_monotone_in_the_filling_scale() {
    let space = bridged_circles(&[6, 9, 12, 15]).unwrap();
    let verdicts: Vec<ScVerdict> = (2..=7)
        .map(|rp| coarse_sc_probe(&space, &ScProbeConfig::new(int(2), int(rp), 16)).unwrap().verdict)
        .collect();
    let first_pass = verdicts.iter().position(|v| *v == ScVerdict::Pass).expect("passes eventually");
    assert!(verdicts[first_pass..].iter().all(|v| *v == ScVerdict::Pass), "{verdicts:?}");
    assert!(verdicts[..first_pass].iter().all(|v| *v == ScVerdict::Fail), "{verdicts:?}");
}

#[test]
fn irreducible_and_all_loop_families_agree() {
    let c = circle_space(int(10), 10).unwrap();
    for rp in [2, 3, 4] {
        let mut all = ScProbeConfig::new(int(1), int(rp), 11);
        all.family = LoopFamily::All;
        let irr = ScProbeConfig::new(int(1), int(rp), 11);
        assert_eq!(
            coarse_sc_probe(c.space(), &all).unwrap().verdict,
            coarse_sc_probe(c.space(), &irr).unwrap().verdict,
            "r' = {rp}"
        );
    }
}

#[test]
fn null_winding_contractions_lift() {
    let caps = ResourceCaps::default();
    let (up, down, map) = line_over_cyclic(10, 8, &caps).unwrap();
    let cov = CoveringMap::new(up.space(), down.space(), map).unwrap();
    assert!(cov.is_r_covering(&int(2)).is_covering);
    let zero = up.index_of(&Elem::scalar(0)).unwrap();
    let mut lifted = 0;
    for lp in based_loops(down.space(), &int(2), 6, LoopFamily::All) {
        let out = contract_loop(down.space(), &lp, int(2), SearchBudget::default()).unwrap();
        if let Some(moves) = out.moves() {
            let lift = cov.lift_homotopy(moves, zero).unwrap();
            assert!(matches!(lift, LiftOutcome::Lifted { .. }), "loop {lp:?}");
            lifted += 1;
        }
    }
    assert!(lifted > 100);
}

#[test]
fn even_sublattice_rejects_literal_gamma() {
    let caps = ResourceCaps::default();
    assert!(even_sublattice_certificate(4, int(2), &caps).unwrap().validate().valid);
    let literal = even_sublattice_certificate(4, int(0), &caps).unwrap().validate();
    assert!(!literal.valid);
    assert!(literal.violations.iter().all(|v| v.lhs > v.rhs));
    assert!(even_sublattice_certificate(3, int(2), &caps).is_err());
}

#[test]
fn filtration_of_a_free_abelian_axis() {
    let z2 = GroupFamily::FreeAbelian { rank: 2 };
    let w = build_window(&z2, &GeneratingSet::standard(&z2), 4, &ResourceCaps::default()).unwrap();
    let phi = Homomorphism::new(z2, GroupFamily::line(), vec![Elem::scalar(1), Elem::scalar(0)]).unwrap();
    let probe = filtration_probe(&w, &phi, 3).unwrap();
    assert_eq!(probe.least_n, Some(1));
    assert!(probe.monotone && probe.missing.is_empty());
}
