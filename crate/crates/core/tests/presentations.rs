use coarse_geom::caps::ResourceCaps;
use coarse_geom::presentations::*;
use coarse_geom::spaces::{build_window, Elem, GeneratingSet, GroupFamily};

fn line() -> GroupFamily {
    GroupFamily::line()
}

fn word(p: &Presentation, text: &str) -> Word {
    p.parse_word(text).unwrap()
}

#[test]
fn triangle_relators_on_the_line() {
    let s = GeneratingSet::line(&[1, 2]).unwrap();
    let p = triangle_presentation(&line(), &s).unwrap();
    assert_eq!(p.bound, 3);
    assert!(p.relators.contains(&word(&p, "1 1 2^-1")));

    let s = GeneratingSet::line(&[1, 2, 6, 24]).unwrap();
    let p = triangle_presentation(&line(), &s).unwrap();
    let six = p.generator_index("6").unwrap();
    let two = p.generator_index("2").unwrap();
    // No relator produces 6 from 2's.
    assert!(!p.relators.iter().any(|r| r.len() == 3
        && r[2] == Letter::neg(six)
        && r[0].generator == two
        && r[1].generator == two));
}

#[test]
fn cyclic_five_addition_table() {
    let fam = GroupFamily::Cyclic { modulus: 5 };
    let s = GeneratingSet::new(&fam, (1..5).map(Elem::scalar)).unwrap();
    let p = triangle_presentation(&fam, &s).unwrap();
    // Every pair g, h with g + h ≠ 0 yields a triangle relator, and every
    // inverse pair a relator of length 2.
    assert_eq!(p.relators.iter().filter(|r| r.len() == 3).count(), 12);
    assert_eq!(p.relators.iter().filter(|r| r.len() == 2).count(), 4);
    assert!(verify_finite_presentation(&p).unwrap().presents());
}

#[test]
fn power_sets() {
    let s = GeneratingSet::line(&[1]).unwrap();
    let s2 = power_generating_set(&line(), &s, 2).unwrap();
    assert_eq!(s2, GeneratingSet::line(&[1, 2]).unwrap());
    assert_eq!(power_generating_set(&line(), &s, 1).unwrap(), s);
    let z2 = GroupFamily::FreeAbelian { rank: 2 };
    assert_eq!(power_generating_set(&z2, &GeneratingSet::standard(&z2), 2).unwrap().len(), 12);
}

#[test]
fn probe_z2_squared_passes() {
    let z2 = GroupFamily::FreeAbelian { rank: 2 };
    let s = GeneratingSet::standard(&z2).power(&z2, 2).unwrap();
    let r = defining_subset_probe(&z2, &s, 10, &ResourceCaps::default()).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.loops_checked > 0);
}

#[test]
fn probe_z2_powers_pass() {
    let z2 = GroupFamily::FreeAbelian { rank: 2 };
    for n in 2..=4 {
        let s = GeneratingSet::standard(&z2).power(&z2, n).unwrap();
        let r = defining_subset_probe(&z2, &s, 6, &ResourceCaps::default()).unwrap();
        assert!(r.passed(), "n = {n}: {r:?}");
    }
}

#[test]
fn probe_line_with_gap_fails() {
    let s = GeneratingSet::line(&[1, 2, 6]).unwrap();
    let r = defining_subset_probe(&line(), &s, 6, &ResourceCaps::default()).unwrap();
    match &r.verdict {
        ProbeVerdict::Fail { loop_labels, certificate: FailCertificate::Cocycle(c), .. } => {
            assert_eq!(loop_labels, &["0", "-6", "-4", "-2", "0"]);
            assert!(c.verify(&line(), &s));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn probe_free_group_passes() {
    let f2 = GroupFamily::Free { rank: 2 };
    let r = defining_subset_probe(&f2, &GeneratingSet::standard(&f2), 10, &ResourceCaps::default()).unwrap();
    assert!(r.passed());
}

#[test]
fn chordless_loops_of_a_square() {
    // 4-cycle 0-1-2-3-0: one chordless loop through 0 up to reversal.
    let adj = vec![vec![1, 3], vec![0, 2], vec![1, 3], vec![2, 0]];
    assert_eq!(chordless_loops(&adj, 0, 4), vec![vec![0, 1, 2, 3, 0]]);
    assert!(chordless_loops(&adj, 0, 3).is_empty());
}

#[test]
fn factorial_obstructions() {
    assert!(!factorial_certificate(3, 4).unwrap().has_obstruction());
    assert!(!factorial_certificate(2, 3).unwrap().has_obstruction());
    let c = factorial_certificate(4, 4).unwrap();
    let w = c.witness.clone().unwrap();
    assert_eq!(w.iter().zip([1, 2, 6, 24]).map(|(a, b)| a * b).sum::<i64>(), 0);
    assert!(c.verify());
}

fn z2_presentation() -> Presentation {
    let z2 = GroupFamily::FreeAbelian { rank: 2 };
    let mut p = Presentation::from_text("generators: x y\nx y x^-1 y^-1\n").unwrap();
    p.evaluation = Some(Evaluation { family: z2, images: vec![Elem::new(vec![1, 0]), Elem::new(vec![0, 1])] });
    p.validate().unwrap();
    p
}

#[test]
fn quotients() {
    let p = z2_presentation();
    let y = word(&p, "y");
    let q = quotient_relators(&p, std::slice::from_ref(&y), 1, Some(Evaluation {
        family: line(),
        images: vec![Elem::scalar(1), Elem::scalar(0)],
    }))
    .unwrap();
    assert!(q.relators.contains(&y));
    assert_eq!(q.relators.len(), 2);
    assert_eq!(quotient_relators(&p, &[], 1, None).unwrap(), p.clone().with_bound(p.bound.max(1)).unwrap());

    let line_pres = Presentation::from_text("generators: 1 -1\n1 -1\n").unwrap();
    let five = word(&line_pres, "1 1 1 1 1");
    let c5 = GroupFamily::Cyclic { modulus: 5 };
    let q = quotient_relators(&line_pres, std::slice::from_ref(&five), 5, Some(Evaluation {
        family: c5,
        images: vec![Elem::scalar(1), Elem::scalar(4)],
    }))
    .unwrap();
    assert_eq!(q.bound, 5);
    assert!(verify_finite_presentation(&q).unwrap().presents());
    assert!(quotient_relators(&line_pres, &[five], 4, None).is_err());
}

fn heisenberg_data() -> ExtensionData {
    let h = GroupFamily::HeisenbergZ;
    let quotient = Presentation::from_text("generators: x y\nx y x^-1 y^-1\n").unwrap();
    let kernel = Presentation::from_text("generators: z\n").unwrap();
    let z = Elem::new(vec![0, 0, 2]);
    ExtensionData {
        family: h,
        quotient,
        kernel,
        kernel_images: vec![z.clone()],
        lifts: vec![Elem::new(vec![1, 0, 0]), Elem::new(vec![0, 1, 0])],
        expressions: vec![(z, vec![Letter::pos(0)])],
    }
}

#[test]
fn heisenberg_extension() {
    let p = extension_relators(&heisenberg_data()).unwrap();
    let n = p.normalized();
    let standard = Presentation::from_text("generators: z x y\nx y x^-1 y^-1 z^-1\nx z x^-1 z^-1\ny z y^-1 z^-1\n")
        .unwrap()
        .normalized();
    assert_eq!(n.relators, standard.relators);
    let h = GroupFamily::HeisenbergZ;
    let window = build_window(&h, &GeneratingSet::standard(&h), 6, &ResourceCaps::default()).unwrap();
    relators_hold_in_window(&p, &window).unwrap();
}

#[test]
fn missing_expression_is_reported() {
    let mut data = heisenberg_data();
    data.expressions.clear();
    let err = extension_relators(&data).unwrap_err();
    assert!(matches!(err, coarse_geom::Error::IncompleteData(ref m) if m.contains("(0,0,2)")), "{err}");
}

#[test]
fn cyclic_four_extension() {
    let c4 = GroupFamily::Cyclic { modulus: 4 };
    let data = ExtensionData {
        family: c4,
        quotient: Presentation::from_text("generators: x\nx x\n").unwrap(),
        kernel: Presentation::from_text("generators: u\nu u\n").unwrap(),
        kernel_images: vec![Elem::scalar(2)],
        lifts: vec![Elem::scalar(1)],
        expressions: vec![(Elem::scalar(2), vec![Letter::pos(0)])],
    };
    let p = extension_relators(&data).unwrap();
    let v = verify_finite_presentation(&p).unwrap();
    assert!(v.presents(), "{v:?}");
    assert_eq!(v.order, 4);
}

#[test]
fn direct_product_extension() {
    let fam = GroupFamily::direct_product(GroupFamily::Cyclic { modulus: 2 }, GroupFamily::Cyclic { modulus: 3 });
    let u = fam.parse_element("(0;1)").unwrap();
    let x = fam.parse_element("(1;0)").unwrap();
    let data = ExtensionData {
        family: fam,
        quotient: Presentation::from_text("generators: x\nx x\n").unwrap(),
        kernel: Presentation::from_text("generators: u\nu u u\n").unwrap(),
        kernel_images: vec![u.clone()],
        lifts: vec![x],
        expressions: vec![(u, vec![Letter::pos(0)])],
    };
    let p = extension_relators(&data).unwrap();
    // The lifted relator needs no correction; conjugation relators are commutators.
    assert!(p.relators.contains(&word(&p, "x x")));
    assert!(p.relators.contains(&word(&p, "x u x^-1 u^-1")));
    assert!(verify_finite_presentation(&p).unwrap().presents());
}

#[test]
fn incomplete_presentation_is_not_verified() {
    // Cyclic(4) on one generator without relators: the loop edge is never killed.
    let c4 = GroupFamily::Cyclic { modulus: 4 };
    let mut p = Presentation::from_text("generators: a\n").unwrap();
    p.evaluation = Some(Evaluation { family: c4, images: vec![Elem::scalar(1)] });
    let v = verify_finite_presentation(&p).unwrap();
    assert!(v.relators_hold && v.generates && !v.complete);
}
